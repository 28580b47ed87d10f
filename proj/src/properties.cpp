#include "vertiport/properties.hpp"

#include <algorithm>

#include "vertiport/generator.hpp"

namespace vertiport {

namespace {

Rational small_shift(std::mt19937_64& rng) {
  const int n = draw(rng, 1, 4);
  return draw(rng, 0, 1) ? Rational(n, 4) : Rational(-n, 4);
}

void clamp(OperatorBids& bids) {
  for (auto& ac : bids) {
    for (auto& v : ac) {
      if (v < 0) v = 0;
    }
  }
}

OperatorBids misreport(const OperatorBids& truth, int pattern, std::mt19937_64& rng) {
  static const Rational kFactors[] = {Rational(0), Rational(1, 2), Rational(2)};
  OperatorBids out = truth;
  switch (pattern) {
    case 0:
      for (auto& ac : out) std::fill(ac.begin(), ac.end(), Rational(0));
      break;
    case 1:
      for (auto& ac : out) {
        for (auto& v : ac) v *= kFactors[draw(rng, 0, 2)];
      }
      break;
    case 2:
      for (auto& ac : out) {
        for (auto& v : ac) v += small_shift(rng);
      }
      break;
    case 3:
      for (auto& ac : out) {
        if (ac.size() < 2) continue;
        const int a = draw(rng, 0, static_cast<int>(ac.size()) - 1);
        const int b = draw(rng, 0, static_cast<int>(ac.size()) - 1);
        std::swap(ac[a], ac[b]);
      }
      break;
    case 4:
      if (!out.empty()) {
        auto& ac = out[draw(rng, 0, static_cast<int>(out.size()) - 1)];
        auto& v = ac[draw(rng, 0, static_cast<int>(ac.size()) - 1)];
        v = v * 10 + draw(rng, 1, 20);
      }
      break;
    default:
      for (auto& ac : out) {
        for (auto& v : ac) {
          switch (draw(rng, 0, 3)) {
            case 0: v *= kFactors[draw(rng, 0, 2)]; break;
            case 1: v += small_shift(rng); break;
            case 2: v = 0; break;
            default: break;
          }
        }
      }
      break;
  }
  clamp(out);
  return out;
}

constexpr int kPatterns = 6;

}  // namespace

std::vector<OperatorBids> sample_misreports(const Instance& instance,
                                            const ValuationProfile& values, std::size_t op,
                                            int count, std::mt19937_64& rng) {
  if (op >= instance.operators.size()) throw std::out_of_range("unknown operator");
  std::vector<OperatorBids> out;
  for (int n = 0; n < count; ++n) out.push_back(misreport(values.values[op], n % kPatterns, rng));
  return out;
}

std::string PropertyViolation::describe(const Instance& instance) const {
  const std::string who = instance.operators.at(op).id;
  if (kind == Kind::kIR) {
    return "IR violated for " + who + ": truthful utility " + to_string(truthful_utility);
  }
  return "IC violated for " + who + " by misreport " + std::to_string(misreport) +
         ": truthful utility " + to_string(truthful_utility) + " < " +
         to_string(deviating_utility);
}

PropertyReport check_properties(const Instance& instance, const ValuationProfile& values,
                                const PropertyConfig& config) {
  require_valid(instance, values);
  PropertyReport report;
  const AuctionOptions& opts = config.auction;
  const MechanismOutcome truthful = run_auction(instance, values, opts);
  std::mt19937_64 rng(config.seed);

  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const Rational u_truth = utility(instance, truthful, i, values);
    ++report.ir_checks;
    if (u_truth < 0) {
      report.violations.push_back({PropertyViolation::Kind::kIR, i, -1, u_truth, u_truth});
    }
    const auto lies = sample_misreports(instance, values, i, config.misreports, rng);
    for (std::size_t n = 0; n < lies.size(); ++n) {
      BidProfile bids = values;
      bids.values[i] = lies[n];
      const SolveResult cleared = solve(build_graph(instance, bids), opts.solve);
      MechanismOutcome deviated;
      deviated.allocation = cleared.allocation;
      deviated.payments.assign(instance.operators.size(), 0);
      deviated.payments[i] = payment(instance, bids, i, cleared, opts.solve, opts.rule);
      const Rational u_lie = utility(instance, deviated, i, values);
      ++report.ic_checks;
      if (u_lie > u_truth) {
        report.violations.push_back(
            {PropertyViolation::Kind::kIC, i, static_cast<int>(n), u_truth, u_lie});
      }
    }
  }
  return report;
}

}  // namespace vertiport
