#include "vertiport/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vertiport {

int Aircraft::stay_key() const {
  for (const auto& route : menu) {
    if (route.is_stay()) return route.key;
  }
  return -1;
}

std::size_t Instance::aircraft_count() const {
  std::size_t n = 0;
  for (const auto& op : operators) n += op.fleet.size();
  return n;
}

std::vector<AircraftRef> flatten_aircraft(const Instance& instance) {
  std::vector<AircraftRef> out;
  out.reserve(instance.aircraft_count());
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    for (std::size_t j = 0; j < instance.operators[i].fleet.size(); ++j) out.push_back({i, j});
  }
  return out;
}

ValueProfile ValueProfile::zeros(const Instance& instance) {
  ValueProfile p;
  p.values.resize(instance.operators.size());
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& fleet = instance.operators[i].fleet;
    p.values[i].resize(fleet.size());
    for (std::size_t j = 0; j < fleet.size(); ++j) p.values[i][j].assign(fleet[j].menu.size(), 0);
  }
  return p;
}

Allocation Allocation::all_stay(const Instance& instance) {
  Allocation x;
  x.keys.resize(instance.operators.size());
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    for (const auto& aircraft : instance.operators[i].fleet) x.keys[i].push_back(aircraft.stay_key());
  }
  return x;
}

std::string to_string(const Allocation& allocation) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < allocation.keys.size(); ++i) {
    if (i) out << " | ";
    for (std::size_t j = 0; j < allocation.keys[i].size(); ++j) {
      if (j) out << ",";
      out << allocation.keys[i][j];
    }
  }
  out << "]";
  return out.str();
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.where << ": " << v.message << "\n";
  return out.str();
}

namespace {

std::string port_path(std::size_t r) { return "vertiports[" + std::to_string(r) + "]"; }

std::string aircraft_path(std::size_t i, std::size_t j) {
  return "operators[" + std::to_string(i) + "].fleet[" + std::to_string(j) + "]";
}

void check_table(ValidationReport& report, const std::string& where, const char* name,
                 const std::vector<int>& table, int horizon) {
  if (static_cast<int>(table.size()) != horizon) {
    report.violations.push_back({where + "." + name, "length " + std::to_string(table.size()) +
                                                         " does not match horizon " +
                                                         std::to_string(horizon)});
    return;
  }
  for (std::size_t t = 0; t < table.size(); ++t) {
    if (table[t] < 0) {
      report.violations.push_back(
          {where + "." + name + "[" + std::to_string(t) + "]", "capacity is negative"});
    }
  }
}

void check_congestion(ValidationReport& report, const std::string& where, const Vertiport& port,
                      int horizon) {
  const auto& tables = port.congestion_cost;
  if (static_cast<int>(tables.size()) != horizon) {
    report.violations.push_back({where + ".congestion_cost", "length does not match horizon"});
    return;
  }
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const std::string slot = where + ".congestion_cost[" + std::to_string(t) + "]";
    const auto& g = tables[t];
    if (t < port.parking_cap.size() &&
        static_cast<int>(g.size()) != port.parking_cap[t] + 1) {
      report.violations.push_back(
          {slot, "needs parking_cap + 1 = " + std::to_string(port.parking_cap[t] + 1) +
                     " entries, has " + std::to_string(g.size())});
      continue;
    }
    if (g.empty()) continue;
    if (g[0] != 0) report.violations.push_back({slot, "g(0) must be 0"});
    for (std::size_t q = 0; q < g.size(); ++q) {
      if (g[q] < 0) report.violations.push_back({slot, "congestion_cost is negative"});
    }
    for (std::size_t q = 1; q + 1 < g.size(); ++q) {
      if (g[q + 1] - g[q] < g[q] - g[q - 1]) {
        report.violations.push_back({slot, "congestion_cost not discrete convex at q=" +
                                               std::to_string(q)});
        break;
      }
    }
  }
}

void check_menu(ValidationReport& report, const Instance& instance, std::size_t i, std::size_t j) {
  const auto& aircraft = instance.operators[i].fleet[j];
  const std::string where = aircraft_path(i, j);
  const std::size_t ports = instance.vertiports.size();
  if (aircraft.origin >= ports) {
    report.violations.push_back({where + ".origin", "unknown vertiport"});
  }
  int stays = 0;
  for (std::size_t k = 0; k < aircraft.menu.size(); ++k) {
    const auto& route = aircraft.menu[k];
    const std::string at = where + ".menu[" + std::to_string(k) + "]";
    if (route.key != static_cast<int>(k)) {
      report.violations.push_back({at, "menu keys must be unique and contiguous from 0"});
    }
    if (route.is_stay()) {
      ++stays;
      if (route.depart_time != 0) report.violations.push_back({at, "stay entry departs at 0"});
      if (route.destination != aircraft.origin) {
        report.violations.push_back({at, "stay entry must remain at the origin"});
      }
      continue;
    }
    if (route.destination >= ports) {
      report.violations.push_back({at + ".destination", "unknown vertiport"});
    }
    if (!(1 <= route.depart_time && route.depart_time < route.arrive_time &&
          route.arrive_time <= instance.horizon)) {
      report.violations.push_back(
          {at, "transit route needs 1 <= depart_time < arrive_time <= horizon"});
    }
  }
  if (stays != 1) {
    report.violations.push_back(
        {where + ".menu", "menu must contain exactly one stay entry (aircraft " + aircraft.id + ")"});
  }
}

template <typename Range, typename Id>
void check_ids(ValidationReport& report, const std::string& where, const Range& items, Id id) {
  for (std::size_t n = 1; n < items.size(); ++n) {
    if (!(id(items[n - 1]) < id(items[n]))) {
      report.violations.push_back(
          {where + "[" + std::to_string(n) + "]", "ids must be unique and in sorted order"});
    }
  }
}

}  // namespace

ValidationReport validate_instance(const Instance& instance) {
  ValidationReport report;
  if (instance.horizon < 1) report.violations.push_back({"horizon", "horizon must be >= 1"});
  if (instance.lambda < 0) report.violations.push_back({"lambda", "lambda must be >= 0"});

  check_ids(report, "vertiports", instance.vertiports, [](const auto& v) { return v.id; });
  check_ids(report, "operators", instance.operators, [](const auto& o) { return o.id; });

  for (std::size_t r = 0; r < instance.vertiports.size(); ++r) {
    const auto& port = instance.vertiports[r];
    const std::string where = port_path(r);
    check_table(report, where, "arrival_cap", port.arrival_cap, instance.horizon);
    check_table(report, where, "departure_cap", port.departure_cap, instance.horizon);
    check_table(report, where, "parking_cap", port.parking_cap, instance.horizon);
    check_congestion(report, where, port, instance.horizon);
  }

  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& op = instance.operators[i];
    const std::string where = "operators[" + std::to_string(i) + "]";
    if (op.weight <= 0) report.violations.push_back({where + ".weight", "weight must be > 0"});
    check_ids(report, where + ".fleet", op.fleet, [](const auto& a) { return a.id; });
    for (std::size_t j = 0; j < op.fleet.size(); ++j) check_menu(report, instance, i, j);
  }

  if (report.ok()) {
    for (std::size_t r = 0; r < instance.vertiports.size(); ++r) {
      const int initial = initial_occupancy(instance, r);
      const auto& cap = instance.vertiports[r].parking_cap;
      for (std::size_t t = 0; t < cap.size(); ++t) {
        if (cap[t] - initial < 0) {
          report.violations.push_back(
              {port_path(r) + ".parking_cap[" + std::to_string(t) + "]",
               "slack condition violated: parking_cap " + std::to_string(cap[t]) +
                   " < initial occupancy " + std::to_string(initial)});
        }
      }
    }
  }
  return report;
}

ValidationReport validate_profile(const Instance& instance, const ValueProfile& profile) {
  ValidationReport report;
  if (profile.values.size() != instance.operators.size()) {
    report.violations.push_back({"profile", "one entry per operator required"});
    return report;
  }
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& fleet = instance.operators[i].fleet;
    if (profile.values[i].size() != fleet.size()) {
      report.violations.push_back(
          {"profile[" + std::to_string(i) + "]", "one entry per aircraft required"});
      continue;
    }
    for (std::size_t j = 0; j < fleet.size(); ++j) {
      const auto& row = profile.values[i][j];
      const std::string where = "profile" + aircraft_path(i, j).substr(9);
      if (row.size() != fleet[j].menu.size()) {
        report.violations.push_back({where, "one value per menu entry required"});
        continue;
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] < 0) {
          report.violations.push_back({where + "[" + std::to_string(k) + "]", "value is negative"});
        }
      }
    }
  }
  return report;
}

void require_valid(const Instance& instance) {
  const auto report = validate_instance(instance);
  if (!report.ok()) throw std::invalid_argument("invalid instance:\n" + report.to_string());
}

void require_valid(const Instance& instance, const ValueProfile& profile) {
  require_valid(instance);
  const auto report = validate_profile(instance, profile);
  if (!report.ok()) throw std::invalid_argument("invalid profile:\n" + report.to_string());
}

int initial_occupancy(const Instance& instance, std::size_t r) {
  if (r >= instance.vertiports.size()) throw std::out_of_range("unknown vertiport index");
  int count = 0;
  for (const auto& op : instance.operators) {
    for (const auto& aircraft : op.fleet) count += aircraft.origin == r ? 1 : 0;
  }
  return count;
}

namespace {

const RouteOption& selected_route(const Instance& instance, const Allocation& x, std::size_t i,
                                  std::size_t j) {
  const auto& menu = instance.operators[i].fleet[j].menu;
  const int key = x.at(i, j);
  if (key < 0 || key >= static_cast<int>(menu.size())) {
    throw std::invalid_argument("allocation key out of range for " + aircraft_path(i, j));
  }
  return menu[key];
}

void check_allocation_shape(const Instance& instance, const Allocation& x) {
  if (x.keys.size() != instance.operators.size()) {
    throw std::invalid_argument("allocation does not match the operator count");
  }
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    if (x.keys[i].size() != instance.operators[i].fleet.size()) {
      throw std::invalid_argument("allocation does not match the fleet size of operator " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

std::vector<std::vector<int>> occupancy_table(const Instance& instance, const Allocation& x) {
  check_allocation_shape(instance, x);
  const int horizon = instance.horizon;
  const std::size_t ports = instance.vertiports.size();
  // delta[r][t] is the change applied when stepping from slot t - 1 to t (1-based t).
  std::vector<std::vector<int>> delta(ports, std::vector<int>(horizon + 1, 0));
  std::vector<std::vector<int>> table(ports, std::vector<int>(horizon, 0));
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& fleet = instance.operators[i].fleet;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
      table[fleet[j].origin][0] += 1;
      const auto& route = selected_route(instance, x, i, j);
      if (route.is_stay()) continue;
      const int leave = std::max(route.depart_time, 2);
      if (leave <= horizon) delta[fleet[j].origin][leave] -= 1;
      if (route.arrive_time <= horizon) delta[route.destination][route.arrive_time] += 1;
    }
  }
  for (std::size_t r = 0; r < ports; ++r) {
    for (int t = 2; t <= horizon; ++t) table[r][t - 1] = table[r][t - 2] + delta[r][t];
  }
  return table;
}

int occupancy(const Instance& instance, const Allocation& x, std::size_t r, int t) {
  if (r >= instance.vertiports.size()) throw std::out_of_range("unknown vertiport index");
  if (t < 1 || t > instance.horizon) throw std::out_of_range("time slot out of range");
  return occupancy_table(instance, x)[r][t - 1];
}

int residual_capacity(const Instance& instance, const Allocation& x, std::size_t r, int t) {
  const int s = occupancy(instance, x, r, t);
  return instance.vertiports[r].parking_cap[t - 1] - s;
}

FeasibilityReport check_feasibility(const Instance& instance, const Allocation& x) {
  FeasibilityReport report;
  auto fail = [&report](std::string where, std::string message) {
    report.feasible = false;
    report.violations.push_back({std::move(where), std::move(message)});
  };

  check_allocation_shape(instance, x);
  const std::size_t ports = instance.vertiports.size();
  const int horizon = instance.horizon;
  std::vector<std::vector<int>> arrivals(ports, std::vector<int>(horizon + 1, 0));
  std::vector<std::vector<int>> departures(ports, std::vector<int>(horizon + 1, 0));
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    const auto& fleet = instance.operators[i].fleet;
    for (std::size_t j = 0; j < fleet.size(); ++j) {
      const int key = x.at(i, j);
      if (key < 0 || key >= static_cast<int>(fleet[j].menu.size())) {
        fail(aircraft_path(i, j), "(C1) no valid menu entry selected");
        continue;
      }
      const auto& route = fleet[j].menu[key];
      if (route.is_stay()) continue;
      arrivals[route.destination][route.arrive_time] += 1;
      departures[fleet[j].origin][route.depart_time] += 1;
    }
  }
  if (!report.feasible) return report;

  const auto table = occupancy_table(instance, x);
  for (std::size_t r = 0; r < ports; ++r) {
    const auto& port = instance.vertiports[r];
    for (int t = 1; t <= horizon; ++t) {
      const std::string at = "(" + port.id + "," + std::to_string(t) + ")";
      if (arrivals[r][t] > port.arrival_cap[t - 1]) fail(at, "(C2) arrival at " + at);
      if (departures[r][t] > port.departure_cap[t - 1]) fail(at, "(C2) departure at " + at);
      if (port.parking_cap[t - 1] - table[r][t - 1] < 0) fail(at, "(C3) parking at " + at);
    }
  }
  return report;
}

Rational congestion_cost(const Vertiport& port, int t, int q) {
  const auto& g = port.congestion_cost.at(t - 1);
  const int last = static_cast<int>(g.size()) - 1;
  if (q <= last) return g[q];
  const Rational step = last >= 1 ? g[last] - g[last - 1] : Rational(0);
  return g[last] + step * (q - last);
}

Rational congestion_total(const Instance& instance, const Allocation& x) {
  const auto table = occupancy_table(instance, x);
  Rational total = 0;
  for (std::size_t r = 0; r < instance.vertiports.size(); ++r) {
    for (int t = 1; t <= instance.horizon; ++t) {
      total += congestion_cost(instance.vertiports[r], t, table[r][t - 1]);
    }
  }
  return instance.lambda * total;
}

Rational social_welfare(const Instance& instance, const Allocation& x,
                        const ValueProfile& values) {
  Rational weighted = 0;
  for (std::size_t i = 0; i < instance.operators.size(); ++i) {
    Rational own = 0;
    for (std::size_t j = 0; j < instance.operators[i].fleet.size(); ++j) {
      own += values.at(i, j, x.at(i, j));
    }
    weighted += instance.operators[i].weight * own;
  }
  return weighted - congestion_total(instance, x);
}

Rational utility(const Instance& instance, const MechanismOutcome& outcome, std::size_t op,
                 const ValuationProfile& values) {
  if (op >= instance.operators.size() || op >= outcome.payments.size()) {
    throw std::out_of_range("unknown operator index");
  }
  Rational gained = 0;
  for (std::size_t j = 0; j < instance.operators[op].fleet.size(); ++j) {
    gained += values.at(op, j, outcome.allocation.at(op, j));
  }
  return gained - outcome.payments[op];
}

}  // namespace vertiport
