#pragma once

// Welfare-maximising allocation over the auxiliary flow network.
//
// Each choice of departure times (one per aircraft) turns the mixed binary
// program into a max-weight circulation, which is solved exactly as a
// min-cost circulation with integer bounds. Two outer strategies search the
// departure-time space: plain enumeration (the reference path) and
// branch-and-bound with a relaxed circulation as the node bound.
//
// Ties in welfare are broken towards the lexicographically smallest
// allocation (menu keys in canonical aircraft order). The rule is enforced
// through an exact secondary cost, so every strategy and thread count returns
// the same allocation and flow.

#include <cstdint>
#include <optional>
#include <vector>

#include "vertiport/flow_graph.hpp"

namespace vertiport {

// Chosen departure slot per aircraft, in AuxGraph::aircraft order.
using DeltaAssignment = std::vector<int>;

// Binary vector over AuxGraph slots with exactly one 1 per aircraft.
std::vector<int> delta_vector(const AuxGraph& graph, const DeltaAssignment& delta);

enum class Strategy { kEnumerate, kBranchAndBound };

struct SolveOptions {
  Strategy strategy = Strategy::kBranchAndBound;
  int threads = 1;               // > 1 uses the OpenMP kernels
  std::uint64_t node_limit = 0;  // 0: unlimited
  double time_limit_seconds = 0; // 0: unlimited
};

struct SolveStats {
  std::uint64_t nodes_explored = 0;
  std::uint64_t fixed_delta_solves = 0;
  std::uint64_t relaxation_solves = 0;
  double wall_seconds = 0;
  bool limit_reached = false;  // result is the incumbent, not a proven optimum
};

struct SolveResult {
  FlowSolution flow;
  Rational objective = 0;
  Allocation allocation;
  DeltaAssignment delta;
  SolveStats stats;
};

// Exact optimal integral flow with every departure selector fixed, or
// nullopt when the fixed bounds admit no balanced flow. Throws
// std::invalid_argument on a malformed assignment.
std::optional<FlowSolution> solve_fixed_delta(const AuxGraph& graph, const DeltaAssignment& delta);

// Mixed-radix space of departure-time combinations, lexicographic order
// (last aircraft varies fastest).
class DeltaSpace {
 public:
  explicit DeltaSpace(std::vector<std::vector<int>> departure_times);

  std::uint64_t size() const { return size_; }
  DeltaAssignment at(std::uint64_t index) const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < size_; ++i) fn(at(i));
  }

 private:
  std::vector<std::vector<int>> times_;
  std::uint64_t size_ = 1;
};

DeltaSpace enumerate_deltas(const Instance& instance);
DeltaSpace enumerate_deltas(const AuxGraph& graph);

SolveResult solve(const AuxGraph& graph, const SolveOptions& options = {});

// The explicit kernels behind solve(); serial variants are the reference.
SolveResult solve_enumerate_serial(const AuxGraph& graph, const SolveOptions& options = {});
SolveResult solve_enumerate_parallel(const AuxGraph& graph, const SolveOptions& options);
SolveResult solve_branch_and_bound_serial(const AuxGraph& graph, const SolveOptions& options = {});
SolveResult solve_branch_and_bound_parallel(const AuxGraph& graph, const SolveOptions& options);

Allocation optimal_allocation(const Instance& instance, const BidProfile& bids,
                              const SolveOptions& options = {});

}  // namespace vertiport
