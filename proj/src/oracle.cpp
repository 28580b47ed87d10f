#include "vertiport/oracle.hpp"

#include <limits>
#include <mutex>
#include <optional>

namespace vertiport {

namespace {

struct Candidates {
  std::vector<AircraftRef> refs;
  std::vector<std::uint64_t> radix;
  std::uint64_t size = 1;
};

Candidates candidates(const Instance& instance, const EnumerationBudget& budget) {
  Candidates c;
  c.refs = flatten_aircraft(instance);
  for (const auto& ref : c.refs) c.radix.push_back(instance.aircraft(ref.op, ref.ac).menu.size());
  c.size = candidate_count(instance);
  if (c.size > budget.max_allocations) {
    throw BudgetExceeded("candidate space of " + std::to_string(c.size) +
                         " allocations exceeds the budget of " +
                         std::to_string(budget.max_allocations));
  }
  return c;
}

// Last aircraft varies fastest, so index order is lexicographic order.
Allocation decode(const Instance& instance, const Candidates& c, std::uint64_t index) {
  Allocation x = Allocation::all_stay(instance);
  for (std::size_t f = c.refs.size(); f-- > 0;) {
    x.at(c.refs[f].op, c.refs[f].ac) = static_cast<int>(index % c.radix[f]);
    index /= c.radix[f];
  }
  return x;
}

BidProfile zero_operator(BidProfile bids, std::size_t i) {
  for (auto& aircraft : bids.values.at(i)) {
    for (auto& v : aircraft) v = 0;
  }
  return bids;
}

Rational others_welfare(const Instance& instance, const Allocation& x, const BidProfile& bids,
                        std::size_t i) {
  return social_welfare(instance, x, zero_operator(bids, i));
}

}  // namespace

std::uint64_t candidate_count(const Instance& instance) {
  std::uint64_t size = 1;
  for (const auto& op : instance.operators) {
    for (const auto& ac : op.fleet) {
      const std::uint64_t m = ac.menu.size();
      if (m == 0) return 0;
      if (size > std::numeric_limits<std::uint64_t>::max() / m) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      size *= m;
    }
  }
  return size;
}

void for_each_feasible(const Instance& instance, const EnumerationBudget& budget,
                       const std::function<void(const Allocation&)>& fn) {
  require_valid(instance);
  const Candidates c = candidates(instance, budget);
  for (std::uint64_t n = 0; n < c.size; ++n) {
    const Allocation x = decode(instance, c, n);
    if (is_feasible(instance, x)) fn(x);
  }
}

std::vector<Allocation> enumerate_feasible(const Instance& instance,
                                           const EnumerationBudget& budget) {
  std::vector<Allocation> out;
  for_each_feasible(instance, budget, [&out](const Allocation& x) { out.push_back(x); });
  return out;
}

OracleOptimum oracle_optimal(const Instance& instance, const BidProfile& bids,
                             const EnumerationBudget& budget) {
  require_valid(instance, bids);
  std::optional<OracleOptimum> best;
  for_each_feasible(instance, budget, [&](const Allocation& x) {
    Rational w = social_welfare(instance, x, bids);
    if (!best || w > best->welfare) best = OracleOptimum{x, std::move(w)};
  });
  return *best;
}

OracleOptimum oracle_optimal_parallel(const Instance& instance, const BidProfile& bids,
                                      int threads, const EnumerationBudget& budget) {
  require_valid(instance, bids);
  const Candidates c = candidates(instance, budget);
  struct Best {
    bool found = false;
    std::uint64_t index = 0;
    Rational welfare = 0;
  };
  Best best;
  std::mutex mutex;
  const auto count = static_cast<std::int64_t>(c.size);
#pragma omp parallel num_threads(threads < 1 ? 1 : threads)
  {
    Best local;
#pragma omp for schedule(static)
    for (std::int64_t n = 0; n < count; ++n) {
      const Allocation x = decode(instance, c, static_cast<std::uint64_t>(n));
      if (!is_feasible(instance, x)) continue;
      Rational w = social_welfare(instance, x, bids);
      if (!local.found || w > local.welfare) local = {true, static_cast<std::uint64_t>(n), std::move(w)};
    }
    std::lock_guard lock(mutex);
    if (local.found &&
        (!best.found || local.welfare > best.welfare ||
         (local.welfare == best.welfare && local.index < best.index))) {
      best = local;
    }
  }
  return {decode(instance, c, best.index), best.welfare};
}

Rational oracle_payment(const Instance& instance, const BidProfile& bids, std::size_t i,
                        const EnumerationBudget& budget) {
  if (i >= instance.operators.size()) throw std::out_of_range("unknown operator");
  const Allocation cleared = oracle_optimal(instance, bids, budget).allocation;
  const BidProfile zeroed = zero_operator(bids, i);
  std::optional<Rational> inner;
  for_each_feasible(instance, budget, [&](const Allocation& x) {
    Rational w = social_welfare(instance, x, zeroed);
    if (!inner || w > *inner) inner = std::move(w);
  });
  return (*inner - others_welfare(instance, cleared, bids, i)) / instance.operators[i].weight;
}

MechanismOutcome oracle_auction(const Instance& instance, const BidProfile& bids,
                                const EnumerationBudget& budget) {
  MechanismOutcome out;
  const OracleOptimum opt = oracle_optimal(instance, bids, budget);
  out.allocation = opt.allocation;
  out.cleared_welfare = opt.welfare;
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    out.payments.push_back(oracle_payment(instance, bids, i, budget));
  }
  return out;
}

}  // namespace vertiport
