#include "vertiport/solver.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>

#include "vertiport/min_cost_flow.hpp"

namespace vertiport {

std::vector<int> delta_vector(const AuxGraph& graph, const DeltaAssignment& delta) {
  if (delta.size() != graph.aircraft.size()) {
    throw std::invalid_argument("departure assignment needs one slot per aircraft");
  }
  std::vector<int> binary(graph.delta_count, 0);
  for (std::size_t a = 0; a < delta.size(); ++a) binary[graph.delta_slot(a, delta[a])] = 1;
  return binary;
}

DeltaSpace::DeltaSpace(std::vector<std::vector<int>> departure_times)
    : times_(std::move(departure_times)) {
  for (const auto& t : times_) {
    if (t.empty()) throw std::invalid_argument("aircraft without departure times");
    size_ *= t.size();
  }
}

DeltaAssignment DeltaSpace::at(std::uint64_t index) const {
  DeltaAssignment out(times_.size());
  for (std::size_t a = times_.size(); a-- > 0;) {
    out[a] = times_[a][index % times_[a].size()];
    index /= times_[a].size();
  }
  return out;
}

DeltaSpace enumerate_deltas(const AuxGraph& graph) { return DeltaSpace(graph.departure_times); }

DeltaSpace enumerate_deltas(const Instance& instance) {
  std::vector<std::vector<int>> times;
  for (const auto& ref : flatten_aircraft(instance)) {
    std::vector<int> t;
    for (const auto& route : instance.aircraft(ref.op, ref.ac).menu) t.push_back(route.depart_time);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    times.push_back(std::move(t));
  }
  return DeltaSpace(std::move(times));
}

namespace {

using Clock = std::chrono::steady_clock;

// Welfare first (higher is better), then the tie-break cost (lower is better).
struct Score {
  Rational objective = 0;
  Rational tie = 0;
};

bool better(const Score& a, const Score& b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  return a.tie < b.tie;
}

// Solves the circulation on the auxiliary graph for a box of departure
// selectors. A collapsed box (lo == hi) is the fixed-delta problem; an open
// box is its relaxation.
class FlowKernel {
 public:
  explicit FlowKernel(const AuxGraph& graph) : graph_(graph) {
    std::vector<int> lo(graph.delta_count, 0), hi(graph.delta_count, 1);
    return_cap_ = 0;
    for (const auto& e : graph.edges) {
      if (e.head == graph.sink) return_cap_ += e.upper.maximum(lo, hi);
    }

    BigInt denominator = 1;
    for (const auto& e : graph.edges) {
      denominator = boost::multiprecision::lcm(denominator,
                                               BigInt(boost::multiprecision::denominator(e.weight)));
    }
    constexpr std::int64_t kLimit = std::int64_t{1} << 60;
    BigInt primary_budget = 0, secondary_budget = 0;
    exact_.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
      exact_.push_back({-e.weight, e.tie_cost});
      const BigInt cap = std::max<std::int64_t>(1, e.upper.maximum(lo, hi));
      const Rational scaled = -e.weight * Rational(denominator);
      primary_budget += boost::multiprecision::abs(boost::multiprecision::numerator(scaled)) * cap;
      secondary_budget += boost::multiprecision::numerator(e.tie_cost) * cap;
    }
    fast_ = primary_budget < kLimit && secondary_budget < kLimit;
    if (fast_) {
      for (const auto& c : exact_) {
        const Rational scaled = c.primary * Rational(denominator);
        fast_costs_.push_back({boost::multiprecision::numerator(scaled).convert_to<std::int64_t>(),
                               boost::multiprecision::numerator(c.secondary).convert_to<std::int64_t>()});
      }
    }
  }

  std::optional<FlowSolution> solve(const std::vector<int>& lo, const std::vector<int>& hi) const {
    return fast_ ? run(fast_costs_, lo, hi) : run(exact_, lo, hi);
  }

  bool uses_integer_costs() const { return fast_; }

 private:
  template <typename Cost>
  std::optional<FlowSolution> run(const std::vector<Cost>& costs, const std::vector<int>& lo,
                                  const std::vector<int>& hi) const {
    const auto& g = graph_;
    MinCostCirculation<Cost> circulation(g.vertices.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& edge = g.edges[e];
      circulation.add_arc(edge.tail, edge.head, edge.lower.minimum(lo, hi),
                          edge.upper.maximum(lo, hi), costs[e]);
    }
    circulation.add_arc(g.sink, g.source, 0, return_cap_, Cost{});
    if (!circulation.solve()) return std::nullopt;

    FlowSolution sol;
    sol.flow.resize(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) sol.flow[e] = circulation.flow(e);
    sol.delta.assign(g.delta_count, 0);
    for (std::size_t a = 0; a < g.aircraft.size(); ++a) {
      for (std::size_t idx = 0; idx < g.departure_times[a].size(); ++idx) {
        const std::size_t edge = idx == 0 ? g.e7[a] : g.e4[a][idx];
        sol.delta[g.delta_offset[a] + idx] = static_cast<int>(sol.flow[edge]);
      }
    }
    canonicalize_bundles(g, sol);
    return sol;
  }

  const AuxGraph& graph_;
  std::int64_t return_cap_ = 0;
  bool fast_ = false;
  std::vector<LexCost<Rational>> exact_;
  std::vector<LexCost<std::int64_t>> fast_costs_;
};

Score score_of(const AuxGraph& graph, const FlowSolution& sol) {
  return {flow_objective(graph, sol), flow_tie_cost(graph, sol)};
}

DeltaAssignment assignment_of(const AuxGraph& graph, const FlowSolution& sol) {
  DeltaAssignment out(graph.aircraft.size(), 0);
  for (std::size_t a = 0; a < graph.aircraft.size(); ++a) {
    for (std::size_t idx = 0; idx < graph.departure_times[a].size(); ++idx) {
      if (sol.delta[graph.delta_offset[a] + idx] == 1) out[a] = graph.departure_times[a][idx];
    }
  }
  return out;
}

struct Incumbent {
  bool found = false;
  Score score;
  FlowSolution flow;
};

class Limits {
 public:
  explicit Limits(const SolveOptions& options) : options_(options), start_(Clock::now()) {}

  // Counts one node; returns false once a limit is exhausted.
  bool admit() {
    const auto n = ++nodes_;
    if (options_.node_limit && n > options_.node_limit) return stop();
    if (options_.time_limit_seconds > 0 && (n & 15) == 0 && elapsed() > options_.time_limit_seconds) {
      return stop();
    }
    return !stopped_.load();
  }
  bool stopped() const { return stopped_.load(); }
  std::uint64_t nodes() const { return std::min<std::uint64_t>(nodes_.load(), options_.node_limit ? options_.node_limit : nodes_.load()); }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  bool stop() {
    stopped_ = true;
    return false;
  }
  const SolveOptions& options_;
  Clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stopped_{false};
};

SolveResult finish(const AuxGraph& graph, const Incumbent& best, SolveStats stats) {
  if (!best.found) throw std::runtime_error("no feasible departure assignment");
  SolveResult result;
  result.flow = best.flow;
  result.objective = best.score.objective;
  result.allocation = flow_to_allocation(graph, best.flow);
  result.delta = assignment_of(graph, best.flow);
  result.stats = stats;
  return result;
}

void offer(Incumbent& best, const AuxGraph& graph, FlowSolution sol) {
  Score s = score_of(graph, sol);
  if (!best.found || better(s, best.score)) {
    best.found = true;
    best.score = std::move(s);
    best.flow = std::move(sol);
  }
}

// Depth-first branch-and-bound over departure selectors.
class BranchAndBound {
 public:
  BranchAndBound(const AuxGraph& graph, const SolveOptions& options)
      : graph_(graph), kernel_(graph), limits_(options) {
    const std::size_t n = graph.aircraft.size();
    const auto& instance = graph.instance;
    std::vector<Rational> spread(n, 0);
    branch_taus_.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      // Best weighted bid per departure time, read off the graph weights.
      std::vector<Rational> best(graph.departure_times[a].size());
      std::vector<char> seen(best.size(), 0);
      auto note = [&](int tau, const Rational& w) {
        const auto idx = graph.delta_slot(a, tau) - graph.delta_offset[a];
        if (!seen[idx] || w > best[idx]) best[idx] = w;
        seen[idx] = 1;
      };
      note(0, graph.edges[graph.e7[a]].weight);
      for (std::size_t e : graph.e5[a]) {
        if (e != kNoEdge) note(graph.edges[e].tau, graph.edges[e].weight);
      }
      const auto [lo_it, hi_it] = std::minmax_element(best.begin(), best.end());
      spread[a] = *hi_it - *lo_it;
      std::vector<std::size_t> idx(best.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t x, std::size_t y) { return best[x] > best[y]; });
      branch_taus_[a] = std::move(idx);
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return spread[x] > spread[y]; });
    (void)instance;
  }

  SolveResult run_serial() {
    seed_incumbent();
    std::vector<int> lo(graph_.delta_count, 0), hi(graph_.delta_count, 1);
    explore(0, lo, hi);
    return result();
  }

  SolveResult run_parallel(int threads) {
    seed_incumbent();
    // Expand the first levels breadth-first into independent subtrees.
    struct Task {
      std::size_t depth;
      std::vector<int> lo, hi;
    };
    std::vector<Task> frontier{{0, std::vector<int>(graph_.delta_count, 0),
                                std::vector<int>(graph_.delta_count, 1)}};
    const std::size_t want = static_cast<std::size_t>(4 * threads);
    while (frontier.size() < want && frontier.front().depth < order_.size()) {
      std::vector<Task> next;
      for (const auto& task : frontier) {
        for (std::size_t idx : branch_taus_[order_[task.depth]]) {
          Task child = task;
          fix(order_[task.depth], idx, child.lo, child.hi);
          ++child.depth;
          next.push_back(std::move(child));
        }
      }
      frontier = std::move(next);
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<std::int64_t>(frontier.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        auto& task = frontier[static_cast<std::size_t>(i)];
        explore(task.depth, task.lo, task.hi);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    return result();
  }

 private:
  void fix(std::size_t a, std::size_t chosen, std::vector<int>& lo, std::vector<int>& hi) const {
    for (std::size_t idx = 0; idx < graph_.departure_times[a].size(); ++idx) {
      const std::size_t slot = graph_.delta_offset[a] + idx;
      lo[slot] = hi[slot] = idx == chosen ? 1 : 0;
    }
  }

  void seed_incumbent() {
    // Everyone staying is feasible on every valid instance.
    DeltaAssignment stay(graph_.aircraft.size(), 0);
    const auto binary = delta_vector(graph_, stay);
    ++fixed_solves_;
    if (auto sol = kernel_.solve(binary, binary)) {
      std::lock_guard lock(mutex_);
      offer(best_, graph_, std::move(*sol));
    }
  }

  bool beats_incumbent(const Score& bound) {
    std::lock_guard lock(mutex_);
    return !best_.found || better(bound, best_.score);
  }

  void explore(std::size_t depth, std::vector<int>& lo, std::vector<int>& hi) {
    if (!limits_.admit()) return;
    const bool leaf = depth == order_.size();
    ++(leaf ? fixed_solves_ : relaxation_solves_);
    auto sol = kernel_.solve(lo, hi);
    if (!sol) return;
    Score bound = score_of(graph_, *sol);
    if (!beats_incumbent(bound)) return;
    if (leaf || check_flow(graph_, *sol).empty()) {
      // The relaxation optimum is itself feasible, so it solves this subtree.
      std::lock_guard lock(mutex_);
      offer(best_, graph_, std::move(*sol));
      return;
    }
    const std::size_t a = order_[depth];
    const auto saved_lo = lo;
    const auto saved_hi = hi;
    for (std::size_t idx : branch_taus_[a]) {
      fix(a, idx, lo, hi);
      explore(depth + 1, lo, hi);
      lo = saved_lo;
      hi = saved_hi;
      if (limits_.stopped()) return;
    }
  }

  SolveResult result() {
    SolveStats stats;
    stats.nodes_explored = limits_.nodes();
    stats.fixed_delta_solves = fixed_solves_.load();
    stats.relaxation_solves = relaxation_solves_.load();
    stats.wall_seconds = limits_.elapsed();
    stats.limit_reached = limits_.stopped();
    return finish(graph_, best_, stats);
  }

  const AuxGraph& graph_;
  FlowKernel kernel_;
  Limits limits_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> branch_taus_;
  std::mutex mutex_;
  Incumbent best_;
  std::atomic<std::uint64_t> fixed_solves_{0};
  std::atomic<std::uint64_t> relaxation_solves_{0};
};

}  // namespace

std::optional<FlowSolution> solve_fixed_delta(const AuxGraph& graph, const DeltaAssignment& delta) {
  const auto binary = delta_vector(graph, delta);
  return FlowKernel(graph).solve(binary, binary);
}

SolveResult solve_enumerate_serial(const AuxGraph& graph, const SolveOptions& options) {
  const FlowKernel kernel(graph);
  const DeltaSpace space = enumerate_deltas(graph);
  Limits limits(options);
  Incumbent best;
  std::uint64_t solves = 0;
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    if (!limits.admit()) break;
    const auto binary = delta_vector(graph, space.at(i));
    ++solves;
    if (auto sol = kernel.solve(binary, binary)) offer(best, graph, std::move(*sol));
  }
  SolveStats stats;
  stats.nodes_explored = limits.nodes();
  stats.fixed_delta_solves = solves;
  stats.wall_seconds = limits.elapsed();
  stats.limit_reached = limits.stopped();
  return finish(graph, best, stats);
}

SolveResult solve_enumerate_parallel(const AuxGraph& graph, const SolveOptions& options) {
  const FlowKernel kernel(graph);
  const DeltaSpace space = enumerate_deltas(graph);
  Limits limits(options);
  Incumbent best;
  std::mutex mutex;
  std::atomic<std::uint64_t> solves{0};
  std::exception_ptr failure;
  const auto count = static_cast<std::int64_t>(space.size());
#pragma omp parallel num_threads(std::max(1, options.threads))
  {
    Incumbent local;
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < count; ++i) {
      if (!limits.admit()) continue;
      try {
        const auto binary = delta_vector(graph, space.at(static_cast<std::uint64_t>(i)));
        ++solves;
        if (auto sol = kernel.solve(binary, binary)) offer(local, graph, std::move(*sol));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    std::lock_guard lock(mutex);
    if (local.found) offer(best, graph, std::move(local.flow));
  }
  if (failure) std::rethrow_exception(failure);
  SolveStats stats;
  stats.nodes_explored = limits.nodes();
  stats.fixed_delta_solves = solves.load();
  stats.wall_seconds = limits.elapsed();
  stats.limit_reached = limits.stopped();
  return finish(graph, best, stats);
}

SolveResult solve_branch_and_bound_serial(const AuxGraph& graph, const SolveOptions& options) {
  return BranchAndBound(graph, options).run_serial();
}

SolveResult solve_branch_and_bound_parallel(const AuxGraph& graph, const SolveOptions& options) {
  return BranchAndBound(graph, options).run_parallel(std::max(1, options.threads));
}

SolveResult solve(const AuxGraph& graph, const SolveOptions& options) {
  const bool parallel = options.threads > 1;
  if (options.strategy == Strategy::kEnumerate) {
    return parallel ? solve_enumerate_parallel(graph, options)
                    : solve_enumerate_serial(graph, options);
  }
  return parallel ? solve_branch_and_bound_parallel(graph, options)
                  : solve_branch_and_bound_serial(graph, options);
}

Allocation optimal_allocation(const Instance& instance, const BidProfile& bids,
                              const SolveOptions& options) {
  return solve(build_graph(instance, bids), options).allocation;
}

}  // namespace vertiport
