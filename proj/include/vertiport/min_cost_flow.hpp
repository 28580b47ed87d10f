#pragma once

// Minimum-cost circulation with lower and upper arc bounds.
//
// Reduction: arcs with negative cost start saturated, all others at their
// lower bound, which leaves a residual network with non-negative costs. The
// resulting node imbalances are then repaired by successive shortest paths
// (Dijkstra with potentials) from a super source to a super sink. The
// circulation is feasible iff every imbalance can be repaired.
//
// Capacities are integers, so every returned flow is integral. `Cost` may be
// any totally ordered additive group (integers, exact rationals, LexCost).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vertiport {

// Lexicographically ordered pair; used to break ties on the primary cost
// exactly, without an epsilon.
template <typename T>
struct LexCost {
  T primary{};
  T secondary{};

  friend LexCost operator+(const LexCost& a, const LexCost& b) {
    return {a.primary + b.primary, a.secondary + b.secondary};
  }
  friend LexCost operator-(const LexCost& a, const LexCost& b) {
    return {a.primary - b.primary, a.secondary - b.secondary};
  }
  friend LexCost operator-(const LexCost& a) { return {-a.primary, -a.secondary}; }
  friend LexCost operator*(const LexCost& a, std::int64_t k) {
    return {a.primary * k, a.secondary * k};
  }
  friend bool operator==(const LexCost& a, const LexCost& b) {
    return a.primary == b.primary && a.secondary == b.secondary;
  }
  friend bool operator<(const LexCost& a, const LexCost& b) {
    if (a.primary != b.primary) return a.primary < b.primary;
    return a.secondary < b.secondary;
  }
  friend bool operator<=(const LexCost& a, const LexCost& b) { return !(b < a); }
};

template <typename Cost>
class MinCostCirculation {
 public:
  explicit MinCostCirculation(std::size_t num_nodes) : num_nodes_(num_nodes) {}

  std::size_t add_arc(std::size_t tail, std::size_t head, std::int64_t lower, std::int64_t upper,
                      Cost cost) {
    if (tail >= num_nodes_ || head >= num_nodes_) throw std::out_of_range("arc endpoint");
    arcs_.push_back({tail, head, lower, upper, std::move(cost)});
    return arcs_.size() - 1;
  }

  std::size_t num_arcs() const { return arcs_.size(); }

  // Returns false when no circulation satisfies the bounds.
  bool solve() {
    flow_.assign(arcs_.size(), 0);
    for (const auto& arc : arcs_) {
      if (arc.lower > arc.upper) return false;
    }
    const std::size_t super_source = num_nodes_;
    const std::size_t super_sink = num_nodes_ + 1;
    graph_.assign(num_nodes_ + 2, {});
    residual_.clear();

    std::vector<std::int64_t> excess(num_nodes_, 0);
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      const auto& arc = arcs_[a];
      const bool saturate = arc.cost < Cost{};
      const std::int64_t start = saturate ? arc.upper : arc.lower;
      flow_[a] = start;
      excess[arc.head] += start;
      excess[arc.tail] -= start;
      const std::size_t fwd = add_residual(arc.tail, arc.head, arc.upper - start, arc.cost);
      const std::size_t bwd = add_residual(arc.head, arc.tail, start - arc.lower, -arc.cost);
      residual_[fwd].pair = bwd;
      residual_[bwd].pair = fwd;
      residual_[fwd].arc = static_cast<std::int64_t>(a);
      residual_[bwd].arc = -static_cast<std::int64_t>(a) - 1;
    }
    std::int64_t required = 0;
    for (std::size_t v = 0; v < num_nodes_; ++v) {
      if (excess[v] > 0) {
        link(super_source, v, excess[v]);
        required += excess[v];
      } else if (excess[v] < 0) {
        link(v, super_sink, -excess[v]);
      }
    }
    const std::int64_t pushed = augment(super_source, super_sink);
    if (pushed != required) return false;

    for (const auto& r : residual_) {
      if (r.arc >= 0) {
        const auto a = static_cast<std::size_t>(r.arc);
        flow_[a] = arcs_[a].upper - r.cap;
      }
    }
    return true;
  }

  std::int64_t flow(std::size_t arc) const { return flow_.at(arc); }

  Cost total_cost() const {
    Cost total{};
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (flow_[a] != 0) total = total + arcs_[a].cost * flow_[a];
    }
    return total;
  }

 private:
  struct Arc {
    std::size_t tail;
    std::size_t head;
    std::int64_t lower;
    std::int64_t upper;
    Cost cost;
  };
  struct Residual {
    std::size_t to;
    std::int64_t cap;
    Cost cost;
    std::size_t pair = 0;
    std::int64_t arc = std::numeric_limits<std::int64_t>::min();  // >= 0 forward, < 0 backward
  };

  std::size_t add_residual(std::size_t from, std::size_t to, std::int64_t cap, Cost cost) {
    residual_.push_back({to, cap, std::move(cost)});
    graph_[from].push_back(residual_.size() - 1);
    return residual_.size() - 1;
  }

  void link(std::size_t from, std::size_t to, std::int64_t cap) {
    const std::size_t fwd = add_residual(from, to, cap, Cost{});
    const std::size_t bwd = add_residual(to, from, 0, Cost{});
    residual_[fwd].pair = bwd;
    residual_[bwd].pair = fwd;
  }

  // Successive shortest paths; all residual costs start non-negative, so zero
  // potentials are valid initially.
  std::int64_t augment(std::size_t s, std::size_t t) {
    const std::size_t n = graph_.size();
    std::vector<Cost> potential(n, Cost{});
    std::vector<Cost> dist(n);
    std::vector<char> reached(n), done(n);
    std::vector<std::size_t> via(n);
    std::int64_t pushed = 0;

    using Item = std::pair<Cost, std::size_t>;
    auto later = [](const Item& a, const Item& b) {
      if (a.first == b.first) return a.second > b.second;
      return b.first < a.first;
    };
    while (true) {
      std::fill(reached.begin(), reached.end(), 0);
      std::fill(done.begin(), done.end(), 0);
      std::priority_queue<Item, std::vector<Item>, decltype(later)> queue(later);
      dist[s] = Cost{};
      reached[s] = 1;
      queue.push({Cost{}, s});
      while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (done[u]) continue;
        done[u] = 1;
        for (std::size_t id : graph_[u]) {
          const auto& r = residual_[id];
          if (r.cap <= 0 || done[r.to]) continue;
          Cost candidate = d + r.cost + potential[u] - potential[r.to];
          if (!reached[r.to] || candidate < dist[r.to]) {
            dist[r.to] = std::move(candidate);
            reached[r.to] = 1;
            via[r.to] = id;
            queue.push({dist[r.to], r.to});
          }
        }
      }
      if (!reached[t]) break;
      for (std::size_t v = 0; v < n; ++v) {
        if (reached[v]) potential[v] = potential[v] + dist[v];
      }
      std::int64_t amount = std::numeric_limits<std::int64_t>::max();
      for (std::size_t v = t; v != s;) {
        const auto& r = residual_[via[v]];
        amount = std::min(amount, r.cap);
        v = residual_[r.pair].to;
      }
      for (std::size_t v = t; v != s;) {
        auto& r = residual_[via[v]];
        r.cap -= amount;
        residual_[r.pair].cap += amount;
        v = residual_[r.pair].to;
      }
      pushed += amount;
    }
    return pushed;
  }

  std::size_t num_nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::int64_t> flow_;
  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Residual> residual_;
};

}  // namespace vertiport
