#pragma once

// Time-expanded auxiliary flow network for the reservation problem.
//
// For every vertiport r and slot t there are three vertices: parking
// Park(r,t), arrival Arr(r,t) and departure Dep(r,t). Each aircraft gets one
// vertex per distinct departure time of its menu (0 stands for staying),
// plus a global source and sink. Edges come in nine classes:
//
//   E1  Arr(r,t) -> Park(r,t)          [0, A(r,t)]
//   E2  Park(r,t') -> Dep(r,t)         [0, D(r,t)]   t' = t, except t' = 2 for t = 1
//   E3  Park(r,t) -> Park(r,t+1)       C(r,t) unit edges, q-th weighs -lambda * dg(q)
//   E4  Dep(o,tau) -> AcDep(a,tau)     [delta(a,tau), delta(a,tau)]
//   E5  AcDep(a,d_k) -> Arr(f_k,a_k)   [0, 1], weight rho * b_k, one per transit entry
//   E6  Source -> Park(r,1)            fixed at S(r) - #stayers originating at r
//   E7  Source -> AcDep(a,0)           [delta(a,0), delta(a,0)], weight rho * b_stay
//   E8  Park(r,H) -> Sink              C(r,H) unit edges, q-th weighs -lambda * dg(q)
//   E9  AcDep(a,0) -> Park(o,1)        [delta(a,0), delta(a,0)]
//
// A slot-1 departure is fed from Park(r,2) so that the aircraft is still
// counted as parked during slot 1; this keeps the flow objective equal to the
// social welfare under the occupancy convention of model.hpp.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vertiport/model.hpp"

namespace vertiport {

inline constexpr std::size_t kNoEdge = std::numeric_limits<std::size_t>::max();

enum class VertexKind { kPark, kArr, kDep, kAircraftDep, kSource, kSink };

struct AuxVertex {
  VertexKind kind = VertexKind::kSource;
  std::size_t port = 0;  // Park/Arr/Dep
  int t = 0;             // Park/Arr/Dep
  std::size_t flat = 0;  // AircraftDep: index into AuxGraph::aircraft
  int tau = 0;           // AircraftDep
};

enum class EdgeClass { kE1 = 1, kE2, kE3, kE4, kE5, kE6, kE7, kE8, kE9 };

// constant + sum(coeff * delta[slot]) over departure binaries.
struct AffineBound {
  int constant = 0;
  std::vector<std::pair<std::size_t, int>> terms;

  static AffineBound fixed(int value) { return {value, {}}; }
  static AffineBound of(std::size_t slot) { return {0, {{slot, 1}}}; }

  bool is_constant() const { return terms.empty(); }
  std::int64_t evaluate(const std::vector<int>& delta) const;
  // Extremes when each delta[slot] ranges independently over [lo[slot], hi[slot]].
  std::int64_t minimum(const std::vector<int>& lo, const std::vector<int>& hi) const;
  std::int64_t maximum(const std::vector<int>& lo, const std::vector<int>& hi) const;
};

struct AuxEdge {
  EdgeClass cls = EdgeClass::kE1;
  std::size_t tail = 0;
  std::size_t head = 0;
  AffineBound lower;
  AffineBound upper;
  Rational weight = 0;
  // Secondary (minimised) cost implementing the lexicographic tie-break on
  // allocations; non-zero on E5 and E7 only.
  Rational tie_cost = 0;
  int q = 0;  // 1-based position in an E3/E8 bundle
  // Identity: (port, t) for E1/E2/E3/E6/E8, (flat, key or tau) for E4/E5/E7/E9.
  std::size_t port = 0;
  int t = 0;
  std::size_t flat = 0;
  int key = -1;
  int tau = 0;
  bool pruned = false;  // upper bound zeroed for a dangling endpoint
};

struct AuxGraph {
  Instance instance;
  std::vector<AuxVertex> vertices;
  std::vector<AuxEdge> edges;

  std::vector<AircraftRef> aircraft;              // canonical flat order
  std::vector<std::vector<int>> departure_times;  // per aircraft, ascending, starts with 0
  std::vector<std::size_t> delta_offset;          // first binary slot per aircraft
  std::size_t delta_count = 0;

  std::size_t source = 0;
  std::size_t sink = 0;

  // Edge lookup tables.
  std::vector<std::vector<std::size_t>> e4;  // [flat][tau index]; kNoEdge for tau = 0
  std::vector<std::vector<std::size_t>> e5;  // [flat][key]; kNoEdge for the stay key
  std::vector<std::size_t> e7;               // [flat]
  std::vector<std::size_t> e9;               // [flat]
  std::vector<std::size_t> e6;               // [port]
  // Bundle holding S(r,t): first edge and size, [port][t - 1].
  std::vector<std::vector<std::pair<std::size_t, int>>> bundle;

  std::size_t park(std::size_t r, int t) const { return 3 * (r * instance.horizon + (t - 1)); }
  std::size_t arr(std::size_t r, int t) const { return park(r, t) + 1; }
  std::size_t dep(std::size_t r, int t) const { return park(r, t) + 2; }
  std::size_t aircraft_dep(std::size_t flat, std::size_t tau_index) const;

  // Binary slot of delta(flat, tau); throws when tau is not a departure time.
  std::size_t delta_slot(std::size_t flat, int tau) const;

  std::string vertex_label(std::size_t v) const;
};

struct FlowSolution {
  std::vector<std::int64_t> flow;  // per edge
  std::vector<int> delta;          // per binary slot, 0/1
  bool operator==(const FlowSolution&) const = default;
};

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AuxGraph build_graph(const Instance& instance, const BidProfile& bids);

// W-bar^T A, exact.
Rational flow_objective(const AuxGraph& graph, const FlowSolution& sol);

// Secondary tie-break cost of a flow (lower is preferred).
Rational flow_tie_cost(const AuxGraph& graph, const FlowSolution& sol);

// Verifies bounds under sol.delta, balance at every vertex except source and
// sink, and exactly one departure time per aircraft. Returns an empty string
// when the flow is feasible, else a description of the first violation.
std::string check_flow(const AuxGraph& graph, const FlowSolution& sol);

// Dense signed incidence matrix, row-major, |V| x |E|.
struct SignedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int8_t> data;
  int at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

SignedMatrix incidence(const AuxGraph& graph);
// Incidence without the source and sink rows.
SignedMatrix truncated_incidence(const AuxGraph& graph);

// Prefix-form bundle flows from occupancy, E5 flows from x, then completion.
// Throws FlowError when x is infeasible.
FlowSolution allocation_to_flow(const AuxGraph& graph, const Allocation& x);
FlowSolution allocation_to_flow(const Instance& instance, const BidProfile& bids,
                                const Allocation& x);

enum class EliminationOrder { kForward, kReverse };

// Unique completion of a partial assignment given on E3, E5 and E8 (other
// entries of `partial.flow` are ignored). Throws FlowError naming the first
// violated balance or bound.
FlowSolution complete_flow(const AuxGraph& graph, const FlowSolution& partial,
                           EliminationOrder order = EliminationOrder::kForward);

// Reads the allocation off E5/E9; throws FlowError on non-binary or ambiguous
// selections.
Allocation flow_to_allocation(const AuxGraph& graph, const FlowSolution& sol);

// Rewrites every E3/E8 bundle into prefix form (lowest q first).
void canonicalize_bundles(const AuxGraph& graph, FlowSolution& sol);

// Graphviz rendering for inspection.
std::string to_dot(const AuxGraph& graph, const FlowSolution* sol = nullptr);

}  // namespace vertiport
