#pragma once

// Seeded random instances. Output depends only on the config, including
// across platforms (fixed engine, own bounded draws).

#include <cstdint>
#include <random>
#include <stdexcept>

#include "vertiport/document.hpp"

namespace vertiport {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

enum class CongestionShape { kLinear, kQuadratic, kMixed };

struct GeneratorConfig {
  std::uint64_t seed = 0;
  IntRange vertiports{1, 3};
  IntRange operators{1, 3};
  IntRange fleet{1, 2};
  IntRange menu{2, 3};  // entries per aircraft, stay included
  int max_aircraft = 4;
  IntRange horizon{2, 4};
  IntRange arrival_cap{1, 3};
  IntRange departure_cap{1, 3};
  int zero_cap_percent = 10;  // chance that an arrival or departure cap is 0
  IntRange parking_cap{1, 4};
  // Values are numerator / value_denominator; transit entries draw from
  // `value`, stay entries from `stay_value`.
  IntRange value{0, 30};
  IntRange stay_value{0, 6};
  int value_denominator = 2;
  // Marginal congestion step c: linear g(q) = c q, quadratic g(q) = c q^2.
  CongestionShape congestion = CongestionShape::kMixed;
  IntRange congestion_step{0, 1};
  IntRange lambda{0, 2};  // numerator over lambda_denominator
  int lambda_denominator = 4;
  IntRange weight{1, 3};  // numerator over weight_denominator
  int weight_denominator = 2;
  int max_attempts = 1000;
};

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws GeneratorError on an invalid config or when no attempt satisfies
// the slack condition.
InstanceDocument generate(const GeneratorConfig& config);

// Uniform integer in [lo, hi] from the raw engine output; unlike
// std::uniform_int_distribution this is identical on every standard library.
int draw(std::mt19937_64& rng, int lo, int hi);

}  // namespace vertiport
