#include "vertiport/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace vertiport {

int draw(std::mt19937_64& rng, int lo, int hi) {
  if (hi < lo) throw GeneratorError("empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<int>(v % span);
}

namespace {

std::string make_id(const char* prefix, int n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, n);
  return buf;
}

void check_range(const IntRange& r, int min, const char* name) {
  if (r.lo > r.hi || r.lo < min) throw GeneratorError(std::string("invalid range for ") + name);
}

void check_config(const GeneratorConfig& c) {
  check_range(c.vertiports, 1, "vertiports");
  check_range(c.operators, 0, "operators");
  check_range(c.fleet, 0, "fleet");
  check_range(c.menu, 1, "menu");
  check_range(c.horizon, 1, "horizon");
  check_range(c.arrival_cap, 0, "arrival_cap");
  check_range(c.departure_cap, 0, "departure_cap");
  check_range(c.parking_cap, 0, "parking_cap");
  check_range(c.value, 0, "value");
  check_range(c.stay_value, 0, "stay_value");
  check_range(c.congestion_step, 0, "congestion_step");
  check_range(c.lambda, 0, "lambda");
  check_range(c.weight, 1, "weight");
  if (c.value_denominator < 1 || c.lambda_denominator < 1 || c.weight_denominator < 1) {
    throw GeneratorError("denominators must be positive");
  }
  if (c.max_aircraft < 0 || c.max_attempts < 1) throw GeneratorError("invalid limits");
  if (c.zero_cap_percent < 0 || c.zero_cap_percent > 100) {
    throw GeneratorError("zero_cap_percent must lie in 0..100");
  }
}

std::vector<Rational> congestion_table(std::mt19937_64& rng, const GeneratorConfig& c, int cap) {
  bool quadratic = c.congestion == CongestionShape::kQuadratic;
  if (c.congestion == CongestionShape::kMixed) quadratic = draw(rng, 0, 1) == 1;
  const int step = draw(rng, c.congestion_step.lo, c.congestion_step.hi);
  std::vector<Rational> g;
  for (int q = 0; q <= cap; ++q) g.emplace_back(quadratic ? step * q * q : step * q);
  return g;
}

int flow_cap(std::mt19937_64& rng, const GeneratorConfig& c, const IntRange& range) {
  if (draw(rng, 1, 100) <= c.zero_cap_percent) return 0;
  return draw(rng, range.lo, range.hi);
}

Instance attempt(std::mt19937_64& rng, const GeneratorConfig& c) {
  Instance instance;
  instance.horizon = draw(rng, c.horizon.lo, c.horizon.hi);
  instance.lambda = Rational(draw(rng, c.lambda.lo, c.lambda.hi), c.lambda_denominator);
  const int ports = draw(rng, c.vertiports.lo, c.vertiports.hi);
  const int H = instance.horizon;
  for (int r = 0; r < ports; ++r) {
    Vertiport port;
    port.id = make_id("v", r + 1);
    for (int t = 1; t <= H; ++t) {
      port.arrival_cap.push_back(flow_cap(rng, c, c.arrival_cap));
      port.departure_cap.push_back(flow_cap(rng, c, c.departure_cap));
      const int cap = draw(rng, c.parking_cap.lo, c.parking_cap.hi);
      port.parking_cap.push_back(cap);
      port.congestion_cost.push_back(congestion_table(rng, c, cap));
    }
    instance.vertiports.push_back(std::move(port));
  }

  const int ops = draw(rng, c.operators.lo, c.operators.hi);
  int aircraft = 0;
  for (int i = 0; i < ops; ++i) {
    Operator op;
    op.id = make_id("op", i + 1);
    op.weight = Rational(draw(rng, c.weight.lo, c.weight.hi), c.weight_denominator);
    const int fleet = std::min(draw(rng, c.fleet.lo, c.fleet.hi), c.max_aircraft - aircraft);
    for (int j = 0; j < fleet; ++j, ++aircraft) {
      Aircraft ac;
      ac.id = make_id("a", j + 1);
      ac.origin = static_cast<std::size_t>(draw(rng, 0, ports - 1));
      ac.menu.push_back({0, RouteKind::kStay, 0, ac.origin, 0});
      const int entries = H >= 2 ? draw(rng, c.menu.lo, c.menu.hi) : 1;
      for (int k = 1; k < entries; ++k) {
        RouteOption route;
        route.key = k;
        route.kind = RouteKind::kTransit;
        route.depart_time = draw(rng, 1, H - 1);
        route.arrive_time = draw(rng, route.depart_time + 1, H);
        route.destination = static_cast<std::size_t>(draw(rng, 0, ports - 1));
        ac.menu.push_back(route);
      }
      op.fleet.push_back(std::move(ac));
    }
    instance.operators.push_back(std::move(op));
  }
  return instance;
}

}  // namespace

InstanceDocument generate(const GeneratorConfig& config) {
  check_config(config);
  std::mt19937_64 rng(config.seed);
  for (int n = 0; n < config.max_attempts; ++n) {
    Instance instance = attempt(rng, config);
    if (!validate_instance(instance).ok()) continue;
    ValuationProfile values = ValueProfile::zeros(instance);
    for (std::size_t i = 0; i < instance.operators.size(); ++i) {
      for (std::size_t j = 0; j < instance.operators[i].fleet.size(); ++j) {
        const auto& menu = instance.operators[i].fleet[j].menu;
        for (std::size_t k = 0; k < menu.size(); ++k) {
          const IntRange& range = menu[k].is_stay() ? config.stay_value : config.value;
          values.values[i][j][k] =
              Rational(draw(rng, range.lo, range.hi), config.value_denominator);
        }
      }
    }
    InstanceDocument doc;
    doc.instance = std::move(instance);
    doc.bids = values;
    doc.valuations = std::move(values);
    return doc;
  }
  throw GeneratorError("no instance satisfied the slack condition within " +
                       std::to_string(config.max_attempts) + " attempts");
}

}  // namespace vertiport
