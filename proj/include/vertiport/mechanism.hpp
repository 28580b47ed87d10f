#pragma once

// The reservation auction: welfare-maximising allocation plus externality
// payments priced with pseudo-bids.

#include <cstddef>
#include <vector>

#include "vertiport/model.hpp"
#include "vertiport/solver.hpp"

namespace vertiport {

// kUnzeroedOwnBids is a deliberately broken rule kept as a negative control:
// the inner maximisation keeps operator i's own bids, which turns the payment
// into pay-your-bid.
enum class PaymentRule { kPseudoBids, kUnzeroedOwnBids };

// Copy of `bids` with every entry of operator `ell` (stay entries included)
// set to zero.
BidProfile pseudo_bids(const Instance& instance, std::size_t ell, const BidProfile& bids);

// Weighted bids of every operator other than i on x, minus the full
// congestion term (operator i's aircraft still occupy parking).
Rational remaining_welfare(const Instance& instance, const Allocation& x, const BidProfile& bids,
                           std::size_t i);

// p_i = (max_x' W_-i(x'; pseudo_bids(i, B)) - W_-i(x_bar; B)) / rho_i.
// `cleared` must be the solve result under `bids`.
Rational payment(const Instance& instance, const BidProfile& bids, std::size_t i,
                 const SolveResult& cleared, const SolveOptions& options = {},
                 PaymentRule rule = PaymentRule::kPseudoBids);

struct AuctionOptions {
  SolveOptions solve;
  PaymentRule rule = PaymentRule::kPseudoBids;
  // > 1 computes payments concurrently; each inner solve then runs serially.
  int payment_threads = 1;
};

MechanismOutcome run_auction(const Instance& instance, const BidProfile& bids,
                             const AuctionOptions& options = {});

}  // namespace vertiport
