#pragma once

// Domain types of the vertiport reservation auction and the functionals
// defined on them: occupancy, feasibility, social welfare and utility.
//
// Time slots are 1-based throughout the public API (t in 1..H). Per-slot
// tables are stored 0-based, so slot t lives at index t - 1.

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "vertiport/rational.hpp"

namespace vertiport {

struct Vertiport {
  std::string id;
  std::vector<int> arrival_cap;    // A(r, t)
  std::vector<int> departure_cap;  // D(r, t)
  std::vector<int> parking_cap;    // C(r, t)
  // congestion_cost[t - 1][q] for q in 0..parking_cap[t - 1]; entry 0 is 0.
  std::vector<std::vector<Rational>> congestion_cost;
};

enum class RouteKind { kStay, kTransit };

struct RouteOption {
  int key = 0;
  RouteKind kind = RouteKind::kStay;
  int depart_time = 0;          // 0 for the stay entry
  std::size_t destination = 0;  // vertiport index; equals the origin for stay
  int arrive_time = 0;          // ignored for stay

  bool is_stay() const { return kind == RouteKind::kStay; }
};

struct Aircraft {
  std::string id;
  std::size_t origin = 0;  // vertiport index
  std::vector<RouteOption> menu;  // menu[k].key == k

  // Menu key of the (single) stay entry, or -1 when the menu has none.
  int stay_key() const;
};

struct Operator {
  std::string id;
  Rational weight = 1;  // fairness weight, strictly positive
  std::vector<Aircraft> fleet;
};

// Vertiports, operators and fleets are held in canonical (id-sorted) order;
// every index-based API below relies on that order being stable.
struct Instance {
  int horizon = 1;
  Rational lambda = 0;
  std::vector<Vertiport> vertiports;
  std::vector<Operator> operators;

  std::size_t aircraft_count() const;
  const Aircraft& aircraft(std::size_t op, std::size_t ac) const {
    return operators.at(op).fleet.at(ac);
  }
};

// Position of one aircraft in canonical (operator, fleet) order.
struct AircraftRef {
  std::size_t op = 0;
  std::size_t ac = 0;
  auto operator<=>(const AircraftRef&) const = default;
};

std::vector<AircraftRef> flatten_aircraft(const Instance& instance);

// Dense per-menu-entry values; used for both bids and true valuations.
struct ValueProfile {
  std::vector<std::vector<std::vector<Rational>>> values;  // [op][ac][key]

  static ValueProfile zeros(const Instance& instance);

  Rational& at(std::size_t op, std::size_t ac, int key) { return values.at(op).at(ac).at(key); }
  const Rational& at(std::size_t op, std::size_t ac, int key) const {
    return values.at(op).at(ac).at(key);
  }
  bool operator==(const ValueProfile&) const = default;
};

using BidProfile = ValueProfile;
using ValuationProfile = ValueProfile;

// Canonical allocation: exactly one menu key per aircraft. "No route granted"
// is represented by the stay key.
struct Allocation {
  std::vector<std::vector<int>> keys;  // [op][ac]

  static Allocation all_stay(const Instance& instance);

  int at(std::size_t op, std::size_t ac) const { return keys.at(op).at(ac); }
  int& at(std::size_t op, std::size_t ac) { return keys.at(op).at(ac); }
  auto operator<=>(const Allocation&) const = default;
};

std::string to_string(const Allocation& allocation);

struct MechanismOutcome {
  Allocation allocation;
  std::vector<Rational> payments;  // per operator
  Rational cleared_welfare = 0;
};

struct Violation {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_instance(const Instance& instance);

// Density (a value for every menu entry) and non-negativity.
ValidationReport validate_profile(const Instance& instance, const ValueProfile& profile);

// Throws std::invalid_argument carrying the report text when not ok.
void require_valid(const Instance& instance);
void require_valid(const Instance& instance, const ValueProfile& profile);

// S-bar(r): aircraft whose origin is r.
int initial_occupancy(const Instance& instance, std::size_t r);

// Occupancy S(r, t, x). S(r, 1, x) is the initial occupancy; an arrival at
// slot a counts from a onward; a departure at slot d vacates the origin from
// slot max(d, 2) onward.
int occupancy(const Instance& instance, const Allocation& x, std::size_t r, int t);

// Whole table, occupancy_table(...)[r][t - 1].
std::vector<std::vector<int>> occupancy_table(const Instance& instance, const Allocation& x);

int residual_capacity(const Instance& instance, const Allocation& x, std::size_t r, int t);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

FeasibilityReport check_feasibility(const Instance& instance, const Allocation& x);
inline bool is_feasible(const Instance& instance, const Allocation& x) {
  return check_feasibility(instance, x).feasible;
}

// g_{r,t}(q); beyond the parking capacity the table continues linearly with
// its last increment.
Rational congestion_cost(const Vertiport& port, int t, int q);

// lambda * sum_{r,t} g_{r,t}(S(r, t, x)).
Rational congestion_total(const Instance& instance, const Allocation& x);

// sum_i rho_i sum_{j,k} v_{ijk} x_{ijk} - lambda sum_{r,t} g_{r,t}(S(r, t, x)).
Rational social_welfare(const Instance& instance, const Allocation& x,
                        const ValueProfile& values);

// Unweighted value of operator i's granted entries minus its payment.
Rational utility(const Instance& instance, const MechanismOutcome& outcome, std::size_t op,
                 const ValuationProfile& values);

}  // namespace vertiport
