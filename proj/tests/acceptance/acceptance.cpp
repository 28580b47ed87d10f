// Acceptance gate. One line per criterion; exit status 1 if any criterion
// fails. All comparisons are exact rational equalities or inequalities.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vertiport/flow_graph.hpp"
#include "vertiport/mechanism.hpp"
#include "vertiport/oracle.hpp"
#include "vertiport/properties.hpp"
#include "vertiport/solver.hpp"

namespace {

using namespace vertiport;
using Clock = std::chrono::steady_clock;

constexpr int kCorpusSize = 200;
constexpr std::uint64_t kCorpusSeed = 1;
constexpr int kIcInstances = 50;
constexpr int kMisreports = 20;
constexpr std::uint64_t kIcSeed = 2024;
constexpr double kRuntimeLimitSeconds = 60.0;
constexpr int kMinDeterminants = 1000;
constexpr int kSpecialCaseInstances = 50;
constexpr int kUnboundedCap = 1000;

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool within_corpus_limits(const Instance& inst) {
  if (inst.vertiports.size() > 3 || inst.aircraft_count() > 4 || inst.horizon > 4) return false;
  for (const auto& op : inst.operators)
    for (const auto& ac : op.fleet)
      if (ac.menu.size() > 3) return false;
  return candidate_count(inst) <= 81;
}

std::int64_t bareiss(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t n = m.size();
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

struct CorpusEntry {
  InstanceDocument doc;
  AuxGraph graph;
};

void criteria_1_to_3(const std::vector<CorpusEntry>& corpus) {
  int in_limits = 0, optimal = 0, paid = 0, rational = 0, payments_checked = 0;
  double runtime = 0;
  std::string first_mismatch;
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    const auto& [doc, graph] = corpus[n];
    const auto& inst = doc.instance;
    if (within_corpus_limits(inst)) ++in_limits;

    const auto start = Clock::now();
    const SolveResult solved = solve(graph);
    const OracleOptimum oracle = oracle_optimal(inst, *doc.bids);
    runtime += seconds_since(start);
    if (solved.objective == oracle.welfare) {
      ++optimal;
    } else if (first_mismatch.empty()) {
      first_mismatch = fmt("seed %llu: solver %s vs oracle %s",
                           static_cast<unsigned long long>(kCorpusSeed + n),
                           to_string(solved.objective).c_str(), to_string(oracle.welfare).c_str());
    }

    bool all_paid = true, all_rational = true;
    MechanismOutcome outcome;
    outcome.allocation = solved.allocation;
    for (std::size_t i = 0; i < inst.operators.size(); ++i) {
      outcome.payments.push_back(payment(inst, *doc.bids, i, solved));
      all_paid = all_paid && outcome.payments[i] == oracle_payment(inst, *doc.bids, i);
      ++payments_checked;
    }
    for (std::size_t i = 0; i < inst.operators.size(); ++i) {
      all_rational = all_rational && utility(inst, outcome, i, *doc.valuations) >= 0;
    }
    paid += all_paid;
    rational += all_rational;
  }
  const int total = static_cast<int>(corpus.size());
  report(1, optimal == total && in_limits == total && runtime < kRuntimeLimitSeconds,
         "solver objective equals oracle optimum",
         fmt("%d/%d exact, %d/%d within size limits, %.2f s (limit %.0f s)%s%s", optimal, total,
             in_limits, total, runtime, kRuntimeLimitSeconds, first_mismatch.empty() ? "" : "; ",
             first_mismatch.c_str()));
  report(2, paid == total, "payments equal oracle payments",
         fmt("%d/%d instances, %d operator payments compared exactly", paid, total,
             payments_checked));
  report(3, rational == total, "individual rationality under truthful bids",
         fmt("%d/%d instances with every utility >= 0", rational, total));
}

void criteria_4_and_10(const std::vector<CorpusEntry>& corpus) {
  auto run = [&](PaymentRule rule, std::uint64_t& checks, std::uint64_t& violations,
                 int& instances_with_violation) {
    for (int n = 0; n < kIcInstances; ++n) {
      const auto& doc = corpus[n].doc;
      PropertyConfig config;
      config.misreports = kMisreports;
      config.seed = kIcSeed + n;
      config.auction.rule = rule;
      const auto r = check_properties(doc.instance, *doc.valuations, config);
      checks += r.ic_checks;
      std::uint64_t ic = 0;
      for (const auto& v : r.violations) ic += v.kind == PropertyViolation::Kind::kIC;
      violations += ic;
      instances_with_violation += ic > 0;
    }
  };
  std::uint64_t checks = 0, violations = 0;
  int bad = 0;
  run(PaymentRule::kPseudoBids, checks, violations, bad);
  report(4, violations == 0 && checks > 0, "sampled incentive compatibility",
         fmt("%d instances x %d misreports per operator: %llu checks, %llu violations",
             kIcInstances, kMisreports, static_cast<unsigned long long>(checks),
             static_cast<unsigned long long>(violations)));

  std::uint64_t mchecks = 0, mviolations = 0;
  int mbad = 0;
  run(PaymentRule::kUnzeroedOwnBids, mchecks, mviolations, mbad);
  report(10, mviolations > 0, "negative control: unzeroed own bids break incentive compatibility",
         fmt("%llu violations in %d/%d instances (%llu checks)",
             static_cast<unsigned long long>(mviolations), mbad, kIcInstances,
             static_cast<unsigned long long>(mchecks)));
}

void criterion_5(const std::vector<CorpusEntry>& corpus) {
  std::uint64_t allocations = 0, ok = 0;
  for (const auto& [doc, graph] : corpus) {
    for_each_feasible(doc.instance, {}, [&](const Allocation& x) {
      ++allocations;
      try {
        const auto sol = allocation_to_flow(graph, x);
        if (check_flow(graph, sol).empty() && flow_to_allocation(graph, sol) == x &&
            flow_objective(graph, sol) == social_welfare(doc.instance, x, *doc.bids)) {
          ++ok;
        }
      } catch (const FlowError&) {
      }
    });
  }
  report(5, ok == allocations && allocations > 0, "allocation/flow bijection and objective identity",
         fmt("%llu/%llu feasible allocations round-trip with equal objective",
             static_cast<unsigned long long>(ok), static_cast<unsigned long long>(allocations)));
}

void criterion_6(const std::vector<CorpusEntry>& corpus) {
  std::uint64_t solves = 0, integral = 0;
  for (const auto& [doc, graph] : corpus) {
    enumerate_deltas(graph).for_each([&](const DeltaAssignment& delta) {
      const auto sol = solve_fixed_delta(graph, delta);
      if (!sol) return;
      ++solves;
      // Flows are stored as integers; feasibility under the fixed bounds is
      // what certifies the integral point.
      if (check_flow(graph, *sol).empty() && sol->delta == delta_vector(graph, delta)) ++integral;
    });
  }
  std::mt19937_64 rng(6);
  int sampled = 0, unimodular = 0;
  for (std::size_t n = 0; n < corpus.size() && sampled < 2 * kMinDeterminants; ++n) {
    const auto m = truncated_incidence(corpus[n].graph);
    const int max_k = static_cast<int>(std::min<std::size_t>(8, std::min(m.rows, m.cols)));
    for (int s = 0; s < 20; ++s) {
      const int k = draw(rng, 1, max_k);
      std::vector<std::size_t> rows(m.rows), cols(m.cols);
      std::iota(rows.begin(), rows.end(), 0);
      std::iota(cols.begin(), cols.end(), 0);
      std::shuffle(rows.begin(), rows.end(), rng);
      std::shuffle(cols.begin(), cols.end(), rng);
      std::vector<std::vector<std::int64_t>> sub(k, std::vector<std::int64_t>(k));
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub[r][c] = m.at(rows[r], cols[c]);
      const auto det = bareiss(sub);
      ++sampled;
      unimodular += det >= -1 && det <= 1;
    }
  }
  report(6, integral == solves && sampled >= kMinDeterminants && unimodular == sampled,
         "integral fixed-delta flows and unimodular submatrices",
         fmt("%llu/%llu fixed-delta solves integral and feasible; %d/%d sampled determinants in "
             "{-1,0,1}",
             static_cast<unsigned long long>(integral), static_cast<unsigned long long>(solves),
             unimodular, sampled));
}

void criterion_7(const std::vector<CorpusEntry>& corpus) {
  int same = 0;
  for (const auto& entry : corpus) {
    SolveOptions e, b;
    e.strategy = Strategy::kEnumerate;
    b.strategy = Strategy::kBranchAndBound;
    const auto re = solve(entry.graph, e);
    const auto rb = solve(entry.graph, b);
    same += re.objective == rb.objective && re.allocation == rb.allocation;
  }
  const int total = static_cast<int>(corpus.size());
  report(7, same == total, "branch-and-bound equals enumeration",
         fmt("%d/%d identical (objective, allocation)", same, total));
}

// Single-aircraft operators, arrival and departure caps far above any load.
GeneratorConfig special_case_config(std::uint64_t seed, int horizon) {
  GeneratorConfig c;
  c.seed = seed;
  c.horizon = {horizon, horizon};
  c.fleet = {1, 1};
  c.operators = {1, 4};
  c.arrival_cap = {kUnboundedCap, kUnboundedCap};
  c.departure_cap = {kUnboundedCap, kUnboundedCap};
  c.zero_cap_percent = 0;
  c.parking_cap = {1, 3};
  return c;
}

int special_case_matches(int horizon, int& transits) {
  int matches = 0;
  for (int n = 0; n < kSpecialCaseInstances; ++n) {
    const auto doc = generate(special_case_config(8000 + n, horizon));
    const auto solver = run_auction(doc.instance, *doc.bids);
    const auto oracle = oracle_auction(doc.instance, *doc.bids);
    matches += solver.allocation == oracle.allocation && solver.payments == oracle.payments &&
               solver.cleared_welfare == oracle.cleared_welfare;
    for (const auto& op : solver.allocation.keys)
      for (int k : op) transits += k != 0;
  }
  return matches;
}

void criterion_8() {
  int transits1 = 0, transits2 = 0;
  const int m1 = special_case_matches(1, transits1);
  const int m2 = special_case_matches(2, transits2);
  report(8, m1 == kSpecialCaseInstances && m2 == kSpecialCaseInstances,
         "single-slot special case matches oracle",
         fmt("H=1: %d/%d outcomes identical (%d routes granted); one-step H=2: %d/%d identical "
             "(%d routes granted)",
             m1, kSpecialCaseInstances, transits1, m2, kSpecialCaseInstances, transits2));
}

void criterion_9() {
  const auto doc = testing::load_fixture("exchange.json");
  const auto& inst = doc.instance;
  const auto result = solve(build_graph(inst, *doc.valuations));
  Allocation swap = Allocation::all_stay(inst);
  swap.at(0, 0) = 1;
  swap.at(1, 0) = 1;
  Allocation left = Allocation::all_stay(inst), right = Allocation::all_stay(inst);
  left.at(0, 0) = 1;
  right.at(1, 0) = 1;
  const auto feasible = enumerate_feasible(inst);
  const bool one_sided_blocked =
      std::find(feasible.begin(), feasible.end(), left) == feasible.end() &&
      std::find(feasible.begin(), feasible.end(), right) == feasible.end();
  const bool granted = result.allocation == swap && result.objective == 20;
  report(9, granted && one_sided_blocked && feasible.size() == 2,
         "exchange fixture grants the simultaneous swap",
         fmt("swap granted: %s, welfare %s; oracle feasible set size %zu, one-sided moves "
             "infeasible: %s",
             granted ? "yes" : "no", to_string(result.objective).c_str(), feasible.size(),
             one_sided_blocked ? "yes" : "no"));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  std::vector<CorpusEntry> corpus;
  for (int n = 0; n < kCorpusSize; ++n) {
    auto doc = generate(testing::corpus_config(kCorpusSeed + n));
    auto graph = build_graph(doc.instance, *doc.bids);
    corpus.push_back({std::move(doc), std::move(graph)});
  }
  criteria_1_to_3(corpus);
  criteria_4_and_10(corpus);
  criterion_5(corpus);
  criterion_6(corpus);
  criterion_7(corpus);
  criterion_8();
  criterion_9();
  std::printf("%d criteria failed, %.1f s total\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
