// Command-line driver.
//
// Exit codes: 0 success, 1 validation failure, 2 solver/oracle mismatch or
// property violation, 3 I/O error.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vertiport/document.hpp"
#include "vertiport/generator.hpp"
#include "vertiport/mechanism.hpp"
#include "vertiport/oracle.hpp"
#include "vertiport/properties.hpp"
#include "vertiport/solver.hpp"

namespace {

using namespace vertiport;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kMismatch = 2;
constexpr int kIo = 3;

// Exact value plus a 6-decimal rendering marked approximate.
std::string show(const Rational& v) {
  const std::string exact = to_string(v);
  const std::string approx = to_decimal(v);
  if (boost::multiprecision::denominator(v) == 1) return exact;
  return exact + "  (~" + approx + ")";
}

std::string describe_route(const Instance& instance, const Aircraft& ac, int key) {
  const auto& route = ac.menu.at(key);
  if (route.is_stay()) return "stay at " + instance.vertiports[ac.origin].id;
  return instance.vertiports[ac.origin].id + "@" + std::to_string(route.depart_time) + " -> " +
         instance.vertiports[route.destination].id + "@" + std::to_string(route.arrive_time);
}

Json allocation_json(const Instance& instance, const Allocation& x) {
  Json out = Json::object();
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    Json op = Json::object();
    for (std::size_t j = 0; j < instance.operators[i].fleet.size(); ++j) {
      op[instance.operators[i].fleet[j].id] = x.at(i, j);
    }
    out[instance.operators[i].id] = std::move(op);
  }
  return out;
}

void print_allocation(std::ostream& os, const Instance& instance, const Allocation& x) {
  os << "allocation:\n";
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& op = instance.operators[i];
    for (std::size_t j = 0; j < op.fleet.size(); ++j) {
      os << "  " << op.id << "/" << op.fleet[j].id << "  key " << x.at(i, j) << "  "
         << describe_route(instance, op.fleet[j], x.at(i, j)) << "\n";
    }
  }
}

int thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("VERTIPORT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertiport reservation auction"};
  app.require_subcommand(1);
  int threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "Worker threads (default 1, or VERTIPORT_THREADS when set)")
      ->check(CLI::NonNegativeNumber);

  std::string file;
  std::string strategy = "bnb";
  std::string out_format = "text";
  std::uint64_t node_limit = 0;
  double time_limit = 0;
  bool show_stats = false;
  const std::map<std::string, Strategy> strategies{{"enumerate", Strategy::kEnumerate},
                                                   {"bnb", Strategy::kBranchAndBound}};

  auto* validate_cmd = app.add_subcommand("validate", "Check a document against the schema and invariants");
  validate_cmd->add_option("file", file)->required();

  auto* solve_cmd = app.add_subcommand("solve", "Welfare-maximising allocation");
  solve_cmd->add_option("file", file)->required();
  solve_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"enumerate", "bnb"}));
  solve_cmd->add_option("--out", out_format)->check(CLI::IsMember({"json", "text"}));
  solve_cmd->add_option("--node-limit", node_limit, "Stop after this many nodes (0: none)");
  solve_cmd->add_option("--time-limit", time_limit, "Stop after this many seconds (0: none)");
  solve_cmd->add_flag("--stats", show_stats, "Print search statistics");

  auto* auction_cmd = app.add_subcommand("auction", "Allocation, payments and utilities");
  auction_cmd->add_option("file", file)->required();
  auction_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"enumerate", "bnb"}));
  auction_cmd->add_option("--out", out_format)->check(CLI::IsMember({"json", "text"}));

  std::uint64_t budget = EnumerationBudget{}.max_allocations;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare solver and brute force exactly");
  oracle_cmd->add_option("file", file)->required();
  oracle_cmd->add_option("--budget", budget, "Maximum candidate allocations");

  GeneratorConfig gen;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--out", gen_out)->required();
  gen_cmd->add_option("--horizon-max", gen.horizon.hi)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--vertiports-max", gen.vertiports.hi)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--operators-max", gen.operators.hi)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--aircraft-max", gen.max_aircraft)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--menu-max", gen.menu.hi)->check(CLI::PositiveNumber);

  int misreports = 20;
  std::uint64_t prop_seed = 0;
  std::string rule_name = "pseudo-bids";
  auto* prop_cmd = app.add_subcommand("properties", "Sampled IC and IR checks");
  prop_cmd->add_option("file", file)->required();
  prop_cmd->add_option("--misreports", misreports)->check(CLI::NonNegativeNumber);
  prop_cmd->add_option("--seed", prop_seed);
  prop_cmd->add_option("--payment-rule", rule_name, "pseudo-bids, or the broken control unzeroed")
      ->check(CLI::IsMember({"pseudo-bids", "unzeroed"}));

  bool with_flow = false;
  auto* graph_cmd = app.add_subcommand("graph", "Auxiliary graph in DOT format");
  graph_cmd->add_option("file", file)->required();
  graph_cmd->add_flag("--flow", with_flow, "Annotate edges with the optimal flow");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }
  const int threads = thread_count(threads_flag);

  try {
    if (*gen_cmd) {
      const InstanceDocument doc = generate(gen);
      save_document(gen_out, doc);
      return kOk;
    }

    const InstanceDocument doc = load_document(file);
    const Instance& instance = doc.instance;

    if (*validate_cmd) {
      if (doc.bids) require_valid(instance, *doc.bids);
      if (doc.valuations) require_valid(instance, *doc.valuations);
      std::cout << "valid: " << instance.vertiports.size() << " vertiports, "
                << instance.operators.size() << " operators, " << instance.aircraft_count()
                << " aircraft, horizon " << instance.horizon << "\n";
      return kOk;
    }

    SolveOptions solve_options;
    solve_options.strategy = strategies.at(strategy);
    solve_options.threads = threads;
    solve_options.node_limit = node_limit;
    solve_options.time_limit_seconds = time_limit;
    const BidProfile bids = effective_bids(doc);
    require_valid(instance, bids);

    if (*graph_cmd) {
      const AuxGraph graph = build_graph(instance, bids);
      if (with_flow) {
        const SolveResult result = solve(graph, solve_options);
        std::cout << to_dot(graph, &result.flow);
      } else {
        std::cout << to_dot(graph);
      }
      return kOk;
    }

    if (*solve_cmd) {
      const AuxGraph graph = build_graph(instance, bids);
      const SolveResult result = solve(graph, solve_options);
      if (out_format == "json") {
        Json j;
        j["objective"] = to_string(result.objective);
        j["allocation"] = allocation_json(instance, result.allocation);
        if (show_stats) {
          j["stats"] = {{"nodes_explored", result.stats.nodes_explored},
                        {"fixed_delta_solves", result.stats.fixed_delta_solves},
                        {"relaxation_solves", result.stats.relaxation_solves},
                        {"limit_reached", result.stats.limit_reached}};
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "objective: " << show(result.objective) << "\n";
        print_allocation(std::cout, instance, result.allocation);
        if (show_stats) {
          std::cout << "nodes explored: " << result.stats.nodes_explored
                    << "\nfixed-delta solves: " << result.stats.fixed_delta_solves
                    << "\nrelaxation solves: " << result.stats.relaxation_solves
                    << "\nwall seconds: " << result.stats.wall_seconds << "\n";
        }
      }
      if (result.stats.limit_reached) {
        std::cerr << "warning: limit reached, result is the best incumbent only\n";
      }
      return kOk;
    }

    if (*auction_cmd) {
      AuctionOptions options;
      options.solve = solve_options;
      options.payment_threads = threads;
      const MechanismOutcome outcome = run_auction(instance, bids, options);
      if (out_format == "json") {
        Json j;
        j["cleared_welfare"] = to_string(outcome.cleared_welfare);
        j["allocation"] = allocation_json(instance, outcome.allocation);
        Json pay = Json::object();
        for (std::size_t i = 0; i < instance.operators.size(); ++i) {
          pay[instance.operators[i].id] = to_string(outcome.payments[i]);
        }
        j["payments"] = std::move(pay);
        if (doc.valuations) {
          Json util = Json::object();
          for (std::size_t i = 0; i < instance.operators.size(); ++i) {
            util[instance.operators[i].id] =
                to_string(utility(instance, outcome, i, *doc.valuations));
          }
          j["utilities"] = std::move(util);
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "cleared welfare: " << show(outcome.cleared_welfare) << "\n";
        print_allocation(std::cout, instance, outcome.allocation);
        std::cout << "payments:\n";
        for (std::size_t i = 0; i < instance.operators.size(); ++i) {
          std::cout << "  " << instance.operators[i].id << "  " << show(outcome.payments[i])
                    << "\n";
        }
        if (doc.valuations) {
          std::cout << "utilities:\n";
          for (std::size_t i = 0; i < instance.operators.size(); ++i) {
            std::cout << "  " << instance.operators[i].id << "  "
                      << show(utility(instance, outcome, i, *doc.valuations)) << "\n";
          }
        }
      }
      return kOk;
    }

    if (*oracle_cmd) {
      const EnumerationBudget limit{budget};
      AuctionOptions options;
      options.solve = solve_options;
      options.payment_threads = threads;
      const MechanismOutcome solver = run_auction(instance, bids, options);
      const MechanismOutcome oracle = oracle_auction(instance, bids, limit);
      bool match = solver.cleared_welfare == oracle.cleared_welfare &&
                   solver.allocation == oracle.allocation;
      std::cout << "welfare   solver " << to_string(solver.cleared_welfare) << "  oracle "
                << to_string(oracle.cleared_welfare) << "\n";
      std::cout << "allocation " << (solver.allocation == oracle.allocation ? "identical" : "differs")
                << "\n";
      for (std::size_t i = 0; i < instance.operators.size(); ++i) {
        const bool same = solver.payments[i] == oracle.payments[i];
        match = match && same;
        std::cout << "payment " << instance.operators[i].id << "  solver "
                  << to_string(solver.payments[i]) << "  oracle " << to_string(oracle.payments[i])
                  << (same ? "" : "  MISMATCH") << "\n";
      }
      std::cout << (match ? "match\n" : "mismatch\n");
      return match ? kOk : kMismatch;
    }

    if (*prop_cmd) {
      PropertyConfig config;
      config.misreports = misreports;
      config.seed = prop_seed;
      config.auction.solve = solve_options;
      config.auction.rule =
          rule_name == "unzeroed" ? PaymentRule::kUnzeroedOwnBids : PaymentRule::kPseudoBids;
      const ValuationProfile values = doc.valuations ? *doc.valuations : bids;
      const PropertyReport report = check_properties(instance, values, config);
      for (const auto& v : report.violations) std::cout << v.describe(instance) << "\n";
      std::cout << report.ir_checks << " IR checks, " << report.ic_checks << " IC checks, "
                << report.violations.size() << " violations\n";
      return report.ok() ? kOk : kMismatch;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const DocumentError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const GeneratorError& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  }
  return kOk;
}
