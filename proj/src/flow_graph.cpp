#include "vertiport/flow_graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace vertiport {

std::int64_t AffineBound::evaluate(const std::vector<int>& delta) const {
  std::int64_t value = constant;
  for (const auto& [slot, coeff] : terms) value += static_cast<std::int64_t>(coeff) * delta.at(slot);
  return value;
}

std::int64_t AffineBound::minimum(const std::vector<int>& lo, const std::vector<int>& hi) const {
  std::int64_t value = constant;
  for (const auto& [slot, coeff] : terms) value += static_cast<std::int64_t>(coeff) * (coeff > 0 ? lo[slot] : hi[slot]);
  return value;
}

std::int64_t AffineBound::maximum(const std::vector<int>& lo, const std::vector<int>& hi) const {
  std::int64_t value = constant;
  for (const auto& [slot, coeff] : terms) value += static_cast<std::int64_t>(coeff) * (coeff > 0 ? hi[slot] : lo[slot]);
  return value;
}

std::size_t AuxGraph::aircraft_dep(std::size_t flat, std::size_t tau_index) const {
  const std::size_t base = 3 * instance.vertiports.size() * instance.horizon;
  return base + delta_offset.at(flat) + tau_index;
}

std::size_t AuxGraph::delta_slot(std::size_t flat, int tau) const {
  const auto& times = departure_times.at(flat);
  const auto it = std::lower_bound(times.begin(), times.end(), tau);
  if (it == times.end() || *it != tau) {
    throw std::invalid_argument("no departure at slot " + std::to_string(tau) + " for aircraft " +
                                std::to_string(flat));
  }
  return delta_offset[flat] + static_cast<std::size_t>(it - times.begin());
}

std::string AuxGraph::vertex_label(std::size_t v) const {
  const auto& vx = vertices.at(v);
  auto port_id = [&](std::size_t r) { return instance.vertiports[r].id; };
  switch (vx.kind) {
    case VertexKind::kPark:
      return "Park(" + port_id(vx.port) + "," + std::to_string(vx.t) + ")";
    case VertexKind::kArr:
      return "Arr(" + port_id(vx.port) + "," + std::to_string(vx.t) + ")";
    case VertexKind::kDep:
      return "Dep(" + port_id(vx.port) + "," + std::to_string(vx.t) + ")";
    case VertexKind::kAircraftDep: {
      const auto ref = aircraft[vx.flat];
      return "AcDep(" + instance.operators[ref.op].id + "/" +
             instance.operators[ref.op].fleet[ref.ac].id + "," + std::to_string(vx.tau) + ")";
    }
    case VertexKind::kSource:
      return "Source";
    case VertexKind::kSink:
      return "Sink";
  }
  return "?";
}

AuxGraph build_graph(const Instance& instance, const BidProfile& bids) {
  require_valid(instance, bids);

  AuxGraph g;
  g.instance = instance;
  const int horizon = instance.horizon;
  const std::size_t ports = instance.vertiports.size();
  g.aircraft = flatten_aircraft(instance);
  const std::size_t n = g.aircraft.size();

  // Departure-time sets and binary slots.
  g.departure_times.resize(n);
  g.delta_offset.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& menu = instance.aircraft(g.aircraft[a].op, g.aircraft[a].ac).menu;
    auto& times = g.departure_times[a];
    for (const auto& route : menu) times.push_back(route.depart_time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    g.delta_offset[a] = g.delta_count;
    g.delta_count += times.size();
  }

  // Vertices: V1 replicas, V2 aircraft-departure vertices, V3 source/sink.
  for (std::size_t r = 0; r < ports; ++r) {
    for (int t = 1; t <= horizon; ++t) {
      g.vertices.push_back({VertexKind::kPark, r, t, 0, 0});
      g.vertices.push_back({VertexKind::kArr, r, t, 0, 0});
      g.vertices.push_back({VertexKind::kDep, r, t, 0, 0});
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (int tau : g.departure_times[a]) g.vertices.push_back({VertexKind::kAircraftDep, 0, 0, a, tau});
  }
  g.source = g.vertices.size();
  g.vertices.push_back({VertexKind::kSource, 0, 0, 0, 0});
  g.sink = g.vertices.size();
  g.vertices.push_back({VertexKind::kSink, 0, 0, 0, 0});

  // Tie-break encoding: aircraft at flat position p choosing key k costs
  // k * base^(n - 1 - p), so minimising the sum picks the lexicographically
  // smallest key vector.
  std::size_t base = 1;
  for (const auto& ref : g.aircraft) {
    base = std::max(base, instance.aircraft(ref.op, ref.ac).menu.size());
  }
  std::vector<Rational> place(n, 1);
  for (std::size_t p = n; p-- > 1;) place[p - 1] = place[p] * static_cast<long>(base);

  auto add = [&g](AuxEdge e) {
    g.edges.push_back(std::move(e));
    return g.edges.size() - 1;
  };
  auto marginal = [&](std::size_t r, int t, int q) {
    const auto& table = instance.vertiports[r].congestion_cost[t - 1];
    return -instance.lambda * (table[q] - table[q - 1]);
  };

  g.bundle.assign(ports, std::vector<std::pair<std::size_t, int>>(horizon, {kNoEdge, 0}));
  g.e4.resize(n);
  g.e5.resize(n);
  g.e7.assign(n, kNoEdge);
  g.e9.assign(n, kNoEdge);
  g.e6.assign(ports, kNoEdge);

  for (std::size_t r = 0; r < ports; ++r) {  // E1
    for (int t = 1; t <= horizon; ++t) {
      AuxEdge e;
      e.cls = EdgeClass::kE1;
      e.tail = g.arr(r, t);
      e.head = g.park(r, t);
      e.upper = AffineBound::fixed(instance.vertiports[r].arrival_cap[t - 1]);
      e.port = r;
      e.t = t;
      add(std::move(e));
    }
  }
  for (std::size_t r = 0; r < ports; ++r) {  // E2
    for (int t = 1; t <= horizon; ++t) {
      AuxEdge e;
      e.cls = EdgeClass::kE2;
      e.tail = g.park(r, (t == 1 && horizon >= 2) ? 2 : t);
      e.head = g.dep(r, t);
      e.upper = AffineBound::fixed(instance.vertiports[r].departure_cap[t - 1]);
      e.port = r;
      e.t = t;
      add(std::move(e));
    }
  }
  for (std::size_t r = 0; r < ports; ++r) {  // E3
    for (int t = 1; t < horizon; ++t) {
      const int cap = instance.vertiports[r].parking_cap[t - 1];
      g.bundle[r][t - 1] = {g.edges.size(), cap};
      for (int q = 1; q <= cap; ++q) {
        AuxEdge e;
        e.cls = EdgeClass::kE3;
        e.tail = g.park(r, t);
        e.head = g.park(r, t + 1);
        e.upper = AffineBound::fixed(1);
        e.weight = marginal(r, t, q);
        e.q = q;
        e.port = r;
        e.t = t;
        add(std::move(e));
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {  // E4
    const auto origin = instance.aircraft(g.aircraft[a].op, g.aircraft[a].ac).origin;
    const auto& times = g.departure_times[a];
    g.e4[a].assign(times.size(), kNoEdge);
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
      if (times[idx] == 0) continue;
      AuxEdge e;
      e.cls = EdgeClass::kE4;
      e.tail = g.dep(origin, times[idx]);
      e.head = g.aircraft_dep(a, idx);
      e.lower = AffineBound::of(g.delta_offset[a] + idx);
      e.upper = e.lower;
      e.flat = a;
      e.tau = times[idx];
      g.e4[a][idx] = add(std::move(e));
    }
  }
  for (std::size_t a = 0; a < n; ++a) {  // E5
    const auto ref = g.aircraft[a];
    const auto& menu = instance.aircraft(ref.op, ref.ac).menu;
    const Rational& rho = instance.operators[ref.op].weight;
    g.e5[a].assign(menu.size(), kNoEdge);
    for (const auto& route : menu) {
      if (route.is_stay()) continue;
      const auto idx = g.delta_slot(a, route.depart_time) - g.delta_offset[a];
      AuxEdge e;
      e.cls = EdgeClass::kE5;
      e.tail = g.aircraft_dep(a, idx);
      e.head = g.arr(route.destination, route.arrive_time);
      e.upper = AffineBound::fixed(1);
      e.weight = rho * bids.at(ref.op, ref.ac, route.key);
      e.tie_cost = place[a] * route.key;
      e.flat = a;
      e.key = route.key;
      e.tau = route.depart_time;
      g.e5[a][route.key] = add(std::move(e));
    }
  }
  for (std::size_t r = 0; r < ports; ++r) {  // E6
    AuxEdge e;
    e.cls = EdgeClass::kE6;
    e.tail = g.source;
    e.head = g.park(r, 1);
    AffineBound bound = AffineBound::fixed(initial_occupancy(instance, r));
    for (std::size_t a = 0; a < n; ++a) {
      if (instance.aircraft(g.aircraft[a].op, g.aircraft[a].ac).origin == r) {
        bound.terms.emplace_back(g.delta_slot(a, 0), -1);
      }
    }
    e.lower = bound;
    e.upper = bound;
    e.port = r;
    e.t = 1;
    g.e6[r] = add(std::move(e));
  }
  for (std::size_t a = 0; a < n; ++a) {  // E7
    const auto ref = g.aircraft[a];
    const auto& aircraft = instance.aircraft(ref.op, ref.ac);
    const int stay = aircraft.stay_key();
    AuxEdge e;
    e.cls = EdgeClass::kE7;
    e.tail = g.source;
    e.head = g.aircraft_dep(a, 0);
    e.lower = AffineBound::of(g.delta_slot(a, 0));
    e.upper = e.lower;
    e.weight = instance.operators[ref.op].weight * bids.at(ref.op, ref.ac, stay);
    e.tie_cost = place[a] * stay;
    e.flat = a;
    e.key = stay;
    g.e7[a] = add(std::move(e));
  }
  for (std::size_t r = 0; r < ports; ++r) {  // E8
    const int cap = instance.vertiports[r].parking_cap[horizon - 1];
    g.bundle[r][horizon - 1] = {g.edges.size(), cap};
    for (int q = 1; q <= cap; ++q) {
      AuxEdge e;
      e.cls = EdgeClass::kE8;
      e.tail = g.park(r, horizon);
      e.head = g.sink;
      e.upper = AffineBound::fixed(1);
      e.weight = marginal(r, horizon, q);
      e.q = q;
      e.port = r;
      e.t = horizon;
      add(std::move(e));
    }
  }
  for (std::size_t a = 0; a < n; ++a) {  // E9
    const auto origin = instance.aircraft(g.aircraft[a].op, g.aircraft[a].ac).origin;
    AuxEdge e;
    e.cls = EdgeClass::kE9;
    e.tail = g.aircraft_dep(a, 0);
    e.head = g.park(origin, 1);
    e.lower = AffineBound::of(g.delta_slot(a, 0));
    e.upper = e.lower;
    e.flat = a;
    g.e9[a] = add(std::move(e));
  }

  // Dangling-vertex rule: edges leaving a vertex without incoming edges, or
  // entering a vertex without outgoing edges, get capacity 0.
  std::vector<int> in_degree(g.vertices.size(), 0), out_degree(g.vertices.size(), 0);
  for (const auto& e : g.edges) {
    ++out_degree[e.tail];
    ++in_degree[e.head];
  }
  for (auto& e : g.edges) {
    const bool dead_tail = e.tail != g.source && in_degree[e.tail] == 0;
    const bool dead_head = e.head != g.sink && out_degree[e.head] == 0;
    if ((dead_tail || dead_head) && e.lower.is_constant() && e.lower.constant == 0) {
      e.upper = AffineBound::fixed(0);
      e.pruned = true;
    }
  }
  return g;
}

Rational flow_objective(const AuxGraph& graph, const FlowSolution& sol) {
  Rational total = 0;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (sol.flow[e] != 0 && graph.edges[e].weight != 0) total += graph.edges[e].weight * sol.flow[e];
  }
  return total;
}

Rational flow_tie_cost(const AuxGraph& graph, const FlowSolution& sol) {
  Rational total = 0;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (sol.flow[e] != 0 && graph.edges[e].tie_cost != 0) {
      total += graph.edges[e].tie_cost * sol.flow[e];
    }
  }
  return total;
}

std::string check_flow(const AuxGraph& graph, const FlowSolution& sol) {
  if (sol.flow.size() != graph.edges.size()) return "flow vector has the wrong size";
  if (sol.delta.size() != graph.delta_count) return "delta vector has the wrong size";
  for (std::size_t a = 0; a < graph.aircraft.size(); ++a) {
    int sum = 0;
    for (std::size_t idx = 0; idx < graph.departure_times[a].size(); ++idx) {
      const int d = sol.delta[graph.delta_offset[a] + idx];
      if (d != 0 && d != 1) return "non-binary departure selector";
      sum += d;
    }
    if (sum != 1) return "aircraft " + std::to_string(a) + " needs exactly one departure time";
  }
  std::vector<std::int64_t> net(graph.vertices.size(), 0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    const auto lo = edge.lower.evaluate(sol.delta);
    const auto hi = edge.upper.evaluate(sol.delta);
    if (sol.flow[e] < lo || sol.flow[e] > hi) {
      return "edge " + std::to_string(e) + " (" + graph.vertex_label(edge.tail) + " -> " +
             graph.vertex_label(edge.head) + ") outside its bounds";
    }
    net[edge.tail] -= sol.flow[e];
    net[edge.head] += sol.flow[e];
  }
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    if (v == graph.source || v == graph.sink) continue;
    if (net[v] != 0) return "flow balance violated at " + graph.vertex_label(v);
  }
  return {};
}

namespace {

SignedMatrix incidence_rows(const AuxGraph& graph, bool truncated) {
  std::vector<std::size_t> row_of(graph.vertices.size(), kNoEdge);
  std::size_t rows = 0;
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    if (truncated && (v == graph.source || v == graph.sink)) continue;
    row_of[v] = rows++;
  }
  SignedMatrix m;
  m.rows = rows;
  m.cols = graph.edges.size();
  m.data.assign(m.rows * m.cols, 0);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    if (row_of[edge.tail] != kNoEdge) m.data[row_of[edge.tail] * m.cols + e] = -1;
    if (row_of[edge.head] != kNoEdge) m.data[row_of[edge.head] * m.cols + e] = 1;
  }
  return m;
}

}  // namespace

SignedMatrix incidence(const AuxGraph& graph) { return incidence_rows(graph, false); }

SignedMatrix truncated_incidence(const AuxGraph& graph) { return incidence_rows(graph, true); }

FlowSolution allocation_to_flow(const AuxGraph& graph, const Allocation& x) {
  const auto& instance = graph.instance;
  const auto report = check_feasibility(instance, x);
  if (!report.feasible) {
    throw FlowError("allocation is infeasible: " + report.violations.front().message);
  }
  FlowSolution partial;
  partial.flow.assign(graph.edges.size(), 0);
  for (std::size_t a = 0; a < graph.aircraft.size(); ++a) {
    const int key = x.at(graph.aircraft[a].op, graph.aircraft[a].ac);
    if (graph.e5[a][key] != kNoEdge) partial.flow[graph.e5[a][key]] = 1;
  }
  const auto table = occupancy_table(instance, x);
  for (std::size_t r = 0; r < instance.vertiports.size(); ++r) {
    for (int t = 1; t <= instance.horizon; ++t) {
      const auto [first, size] = graph.bundle[r][t - 1];
      for (int q = 1; q <= size; ++q) partial.flow[first + q - 1] = q <= table[r][t - 1] ? 1 : 0;
    }
  }
  return complete_flow(graph, partial);
}

FlowSolution allocation_to_flow(const Instance& instance, const BidProfile& bids,
                                const Allocation& x) {
  return allocation_to_flow(build_graph(instance, bids), x);
}

FlowSolution complete_flow(const AuxGraph& graph, const FlowSolution& partial,
                           EliminationOrder order) {
  if (partial.flow.size() != graph.edges.size()) throw FlowError("partial flow has the wrong size");
  FlowSolution sol;
  sol.flow.assign(graph.edges.size(), 0);
  sol.delta.assign(graph.delta_count, 0);

  std::vector<std::size_t> edge_order(graph.edges.size());
  std::iota(edge_order.begin(), edge_order.end(), 0);
  if (order == EliminationOrder::kReverse) std::reverse(edge_order.begin(), edge_order.end());

  // Given values.
  std::vector<std::int64_t> into(graph.vertices.size(), 0), out_of(graph.vertices.size(), 0);
  for (std::size_t e : edge_order) {
    const auto cls = graph.edges[e].cls;
    if (cls != EdgeClass::kE3 && cls != EdgeClass::kE5 && cls != EdgeClass::kE8) continue;
    const auto value = partial.flow[e];
    if (value < 0 || value > graph.edges[e].upper.constant) {
      throw FlowError("partial flow on edge " + std::to_string(e) + " outside its bounds");
    }
    sol.flow[e] = value;
    out_of[graph.edges[e].tail] += value;
    into[graph.edges[e].head] += value;
  }
  auto bounds_check = [&](std::size_t e) {
    const auto& edge = graph.edges[e];
    const auto lo = edge.lower.evaluate(sol.delta);
    const auto hi = edge.upper.evaluate(sol.delta);
    if (sol.flow[e] < lo || sol.flow[e] > hi) {
      throw FlowError("no feasible completion: edge " + graph.vertex_label(edge.tail) + " -> " +
                      graph.vertex_label(edge.head) + " outside its bounds");
    }
  };

  // Arr(r,t) balance fixes E1; AcDep(a,tau) balance fixes E4 and thereby delta.
  for (std::size_t e : edge_order) {
    const auto& edge = graph.edges[e];
    if (edge.cls == EdgeClass::kE1) {
      sol.flow[e] = into[edge.tail];
      out_of[edge.tail] += sol.flow[e];
      into[edge.head] += sol.flow[e];
    } else if (edge.cls == EdgeClass::kE4) {
      const auto value = out_of[edge.head];
      if (value != 0 && value != 1) {
        throw FlowError("flow balance violated at " + graph.vertex_label(edge.head) +
                        ": more than one route selected");
      }
      sol.flow[e] = value;
      sol.delta[graph.delta_slot(edge.flat, edge.tau)] = static_cast<int>(value);
      out_of[edge.tail] += value;
      into[edge.head] += value;
    }
  }
  // Exactly one departure time: the stay selector takes the remainder.
  for (std::size_t a = 0; a < graph.aircraft.size(); ++a) {
    int moving = 0;
    for (std::size_t idx = 1; idx < graph.departure_times[a].size(); ++idx) {
      moving += sol.delta[graph.delta_offset[a] + idx];
    }
    if (moving > 1) {
      throw FlowError("aircraft " + std::to_string(a) + " departs at more than one time");
    }
    sol.delta[graph.delta_slot(a, 0)] = 1 - moving;
  }
  // Fixed edges (E6, E7, E9) and Dep(r,t) balance for E2.
  for (std::size_t e : edge_order) {
    const auto& edge = graph.edges[e];
    if (edge.cls == EdgeClass::kE6 || edge.cls == EdgeClass::kE7 || edge.cls == EdgeClass::kE9) {
      sol.flow[e] = edge.lower.evaluate(sol.delta);
      out_of[edge.tail] += sol.flow[e];
      into[edge.head] += sol.flow[e];
    } else if (edge.cls == EdgeClass::kE2) {
      sol.flow[e] = out_of[edge.head];
      out_of[edge.tail] += sol.flow[e];
      into[edge.head] += sol.flow[e];
    }
  }
  for (std::size_t e : edge_order) bounds_check(e);
  // Park(r,t) balance is now fully determined; it must hold.
  std::vector<std::size_t> vertex_order(graph.vertices.size());
  std::iota(vertex_order.begin(), vertex_order.end(), 0);
  if (order == EliminationOrder::kReverse) std::reverse(vertex_order.begin(), vertex_order.end());
  for (std::size_t v : vertex_order) {
    if (v == graph.source || v == graph.sink) continue;
    if (into[v] != out_of[v]) {
      throw FlowError("no feasible completion: flow balance violated at " + graph.vertex_label(v));
    }
  }
  return sol;
}

Allocation flow_to_allocation(const AuxGraph& graph, const FlowSolution& sol) {
  const auto& instance = graph.instance;
  Allocation x = Allocation::all_stay(instance);
  for (std::size_t a = 0; a < graph.aircraft.size(); ++a) {
    const auto ref = graph.aircraft[a];
    int chosen = -1;
    int count = 0;
    auto take = [&](std::size_t e, int key) {
      const auto value = sol.flow.at(e);
      if (value != 0 && value != 1) throw FlowError("non-binary route flow");
      if (value == 1) {
        chosen = key;
        ++count;
      }
    };
    take(graph.e9[a], instance.aircraft(ref.op, ref.ac).stay_key());
    for (std::size_t k = 0; k < graph.e5[a].size(); ++k) {
      if (graph.e5[a][k] != kNoEdge) take(graph.e5[a][k], static_cast<int>(k));
    }
    if (count != 1) {
      throw FlowError("aircraft " + std::to_string(a) + " selects " + std::to_string(count) +
                      " routes");
    }
    x.at(ref.op, ref.ac) = chosen;
  }
  return x;
}

void canonicalize_bundles(const AuxGraph& graph, FlowSolution& sol) {
  for (const auto& per_port : graph.bundle) {
    for (const auto& [first, size] : per_port) {
      std::int64_t units = 0;
      for (int q = 0; q < size; ++q) units += sol.flow[first + q];
      for (int q = 0; q < size; ++q) sol.flow[first + q] = q < units ? 1 : 0;
    }
  }
}

std::string to_dot(const AuxGraph& graph, const FlowSolution* sol) {
  auto bound = [](const AffineBound& b) {
    if (b.is_constant()) return std::to_string(b.constant);
    std::string s = b.constant != 0 ? std::to_string(b.constant) : "";
    for (const auto& [slot, coeff] : b.terms) {
      s += (coeff < 0 ? "-" : (s.empty() ? "" : "+"));
      s += "d" + std::to_string(slot);
    }
    return s;
  };
  std::ostringstream out;
  out << "digraph aux {\n  rankdir=LR;\n";
  for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
    out << "  n" << v << " [label=\"" << graph.vertex_label(v) << "\"];\n";
  }
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    out << "  n" << edge.tail << " -> n" << edge.head << " [label=\"E"
        << static_cast<int>(edge.cls);
    if (edge.q) out << "." << edge.q;
    out << " [" << bound(edge.lower) << "," << bound(edge.upper) << "] w=" << to_string(edge.weight);
    if (sol) out << " f=" << sol->flow[e];
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace vertiport
