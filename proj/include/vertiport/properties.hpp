#pragma once

// Sampled incentive-compatibility and individual-rationality checks.
// Truthful bids are the valuations; each misreport replaces one operator's
// bids while everyone else stays truthful. Utilities are compared exactly.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vertiport/mechanism.hpp"

namespace vertiport {

// One operator's bids, [ac][key].
using OperatorBids = std::vector<std::vector<Rational>>;

// Deterministic in (rng state, inputs). Patterns cycle through: zeroing,
// per-entry factors {0, 1/2, 2}, small additive shifts, swapping two entries
// of a menu, inflating a single entry, and a mixed perturbation.
std::vector<OperatorBids> sample_misreports(const Instance& instance,
                                            const ValuationProfile& values, std::size_t op,
                                            int count, std::mt19937_64& rng);

struct PropertyConfig {
  int misreports = 20;  // per operator
  std::uint64_t seed = 0;
  AuctionOptions auction;
};

struct PropertyViolation {
  enum class Kind { kIR, kIC } kind = Kind::kIR;
  std::size_t op = 0;
  int misreport = -1;
  Rational truthful_utility = 0;
  Rational deviating_utility = 0;
  std::string describe(const Instance& instance) const;
};

struct PropertyReport {
  std::uint64_t ir_checks = 0;
  std::uint64_t ic_checks = 0;
  std::vector<PropertyViolation> violations;
  bool ok() const { return violations.empty(); }
};

PropertyReport check_properties(const Instance& instance, const ValuationProfile& values,
                                const PropertyConfig& config = {});

}  // namespace vertiport
