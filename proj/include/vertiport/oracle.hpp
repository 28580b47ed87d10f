#pragma once

// Brute-force reference. Enumerates every canonical allocation, keeps the
// feasible ones and maximises welfare by exhaustion. Uses nothing beyond the
// core model, so it can referee the flow solver.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vertiport/model.hpp"

namespace vertiport {

struct EnumerationBudget {
  std::uint64_t max_allocations = 2'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// prod over aircraft of the menu size; saturates at UINT64_MAX.
std::uint64_t candidate_count(const Instance& instance);

// Feasible allocations in lexicographic order of the flat key vector.
std::vector<Allocation> enumerate_feasible(const Instance& instance,
                                           const EnumerationBudget& budget = {});
void for_each_feasible(const Instance& instance, const EnumerationBudget& budget,
                       const std::function<void(const Allocation&)>& fn);

struct OracleOptimum {
  Allocation allocation;
  Rational welfare = 0;
};

// Welfare maximum; among ties, the lexicographically smallest allocation.
OracleOptimum oracle_optimal(const Instance& instance, const BidProfile& bids,
                             const EnumerationBudget& budget = {});
// Same result, enumeration split across threads with a deterministic reduce.
OracleOptimum oracle_optimal_parallel(const Instance& instance, const BidProfile& bids,
                                      int threads, const EnumerationBudget& budget = {});

Rational oracle_payment(const Instance& instance, const BidProfile& bids, std::size_t i,
                        const EnumerationBudget& budget = {});

MechanismOutcome oracle_auction(const Instance& instance, const BidProfile& bids,
                                const EnumerationBudget& budget = {});

}  // namespace vertiport
