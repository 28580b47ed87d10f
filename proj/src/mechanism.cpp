#include "vertiport/mechanism.hpp"

#include <exception>
#include <mutex>
#include <stdexcept>

namespace vertiport {

BidProfile pseudo_bids(const Instance& instance, std::size_t ell, const BidProfile& bids) {
  if (ell >= instance.operators.size()) throw std::out_of_range("unknown operator");
  BidProfile out = bids;
  for (auto& aircraft : out.values.at(ell)) {
    for (auto& value : aircraft) value = 0;
  }
  return out;
}

Rational remaining_welfare(const Instance& instance, const Allocation& x, const BidProfile& bids,
                           std::size_t i) {
  if (i >= instance.operators.size()) throw std::out_of_range("unknown operator");
  Rational total = 0;
  for (std::size_t l = 0; l < instance.operators.size(); ++l) {
    if (l == i) continue;
    Rational own = 0;
    for (std::size_t j = 0; j < instance.operators[l].fleet.size(); ++j) {
      own += bids.at(l, j, x.at(l, j));
    }
    total += instance.operators[l].weight * own;
  }
  return total - congestion_total(instance, x);
}

Rational payment(const Instance& instance, const BidProfile& bids, std::size_t i,
                 const SolveResult& cleared, const SolveOptions& options, PaymentRule rule) {
  const BidProfile inner_bids =
      rule == PaymentRule::kPseudoBids ? pseudo_bids(instance, i, bids) : bids;
  const Rational best_without = solve(build_graph(instance, inner_bids), options).objective;
  const Rational at_cleared = remaining_welfare(instance, cleared.allocation, bids, i);
  return (best_without - at_cleared) / instance.operators.at(i).weight;
}

MechanismOutcome run_auction(const Instance& instance, const BidProfile& bids,
                             const AuctionOptions& options) {
  const SolveResult cleared = solve(build_graph(instance, bids), options.solve);
  MechanismOutcome outcome;
  outcome.allocation = cleared.allocation;
  outcome.cleared_welfare = social_welfare(instance, cleared.allocation, bids);
  outcome.payments.assign(instance.operators.size(), 0);

  const auto count = static_cast<std::int64_t>(instance.operators.size());
  if (options.payment_threads <= 1) {
    for (std::int64_t i = 0; i < count; ++i) {
      outcome.payments[i] = payment(instance, bids, i, cleared, options.solve, options.rule);
    }
    return outcome;
  }
  SolveOptions inner = options.solve;
  inner.threads = 1;
  std::exception_ptr failure;
  std::mutex mutex;
#pragma omp parallel for schedule(dynamic, 1) num_threads(options.payment_threads)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      outcome.payments[i] = payment(instance, bids, i, cleared, inner, options.rule);
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outcome;
}

}  // namespace vertiport
