#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vertiport/model.hpp"
#include "vertiport/oracle.hpp"

namespace vertiport {
namespace {

using testing::Builder;

bool has_message(const ValidationReport& report, const std::string& needle) {
  for (const auto& v : report.violations) {
    if (v.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

Instance one_port_congestion(std::vector<Rational> g) {
  Builder b(1, 1);
  b.port("v1", 1, 1, static_cast<int>(g.size()) - 1);
  b.instance().vertiports[0].congestion_cost[0] = std::move(g);
  return b.build();
}

TEST(Validate, ConvexTableAccepted) {
  EXPECT_TRUE(validate_instance(one_port_congestion({0, 1, 3})).ok());
}

TEST(Validate, NonConvexTableRejected) {
  const auto report =
      validate_instance(one_port_congestion({0, 2, 3, Rational(7, 2)}));
  EXPECT_TRUE(has_message(report, "congestion_cost not discrete convex"));
}

TEST(Validate, SlackConditionChecked) {
  Builder b(2);
  const auto r = b.port("v1", 1, 1, 2);
  b.instance().vertiports[r].parking_cap[1] = 1;
  b.instance().vertiports[r].congestion_cost[1] = {0, 0};
  b.aircraft(b.op("op1"), "a1", r);
  b.aircraft(b.op("op2"), "a1", r);
  EXPECT_TRUE(has_message(validate_instance(b.build()), "slack condition"));
}

TEST(Validate, MenuRules) {
  Builder b(3);
  const auto r = b.port("v1", 1, 1, 2);
  const auto i = b.op("op1");
  const auto j = b.aircraft(i, "a1", r);
  b.route(i, j, 2, r, 2);  // not strictly later
  EXPECT_FALSE(validate_instance(b.build()).ok());

  Builder c(3);
  const auto r2 = c.port("v1", 1, 1, 2);
  const auto i2 = c.op("op1");
  const auto j2 = c.aircraft(i2, "a1", r2);
  c.instance().operators[i2].fleet[j2].menu.push_back({1, RouteKind::kStay, 0, r2, 0});
  EXPECT_TRUE(has_message(validate_instance(c.build()), "exactly one stay"));
}

TEST(Validate, WeightAndLambda) {
  Builder b(1, -1);
  b.port("v1", 1, 1, 1);
  b.op("op1", 0);
  const auto report = validate_instance(b.build());
  EXPECT_TRUE(has_message(report, "lambda"));
  EXPECT_TRUE(has_message(report, "weight"));
}

TEST(Validate, ProfileDensityAndSign) {
  Builder b(2);
  const auto r = b.port("v1", 1, 1, 1);
  b.aircraft(b.op("op1"), "a1", r);
  ValueProfile p = ValueProfile::zeros(b.build());
  EXPECT_TRUE(validate_profile(b.build(), p).ok());
  p.values[0][0][0] = -1;
  EXPECT_FALSE(validate_profile(b.build(), p).ok());
  p.values[0][0].push_back(1);
  EXPECT_FALSE(validate_profile(b.build(), p).ok());
}

TEST(InitialOccupancy, Counts) {
  Builder b(3);
  const auto v1 = b.port("v1", 1, 1, 2);
  const auto v2 = b.port("v2", 1, 1, 2);
  EXPECT_EQ(initial_occupancy(b.build(), v1), 0);
  b.aircraft(b.op("op1"), "a1", v1);
  EXPECT_EQ(initial_occupancy(b.build(), v1), 1);
  EXPECT_EQ(initial_occupancy(b.build(), v2), 0);
  b.aircraft(b.op("op2"), "a1", v1);
  EXPECT_EQ(initial_occupancy(b.build(), v1), 2);
  EXPECT_THROW(initial_occupancy(b.build(), 5), std::out_of_range);
}

TEST(Occupancy, AllStayKeepsInitial) {
  Builder b(3);
  const auto v1 = b.port("v1", 1, 1, 2);
  const auto v2 = b.port("v2", 1, 1, 2);
  b.aircraft(b.op("op1"), "a1", v1);
  const auto x = Allocation::all_stay(b.build());
  for (int t = 1; t <= 3; ++t) {
    EXPECT_EQ(occupancy(b.build(), x, v1, t), 1);
    EXPECT_EQ(occupancy(b.build(), x, v2, t), 0);
  }
}

TEST(Occupancy, SlotOneDepartureVacatesFromSlotTwo) {
  Builder b(3);
  const auto v1 = b.port("v1", 1, 1, 1);
  const auto v2 = b.port("v2", 1, 1, 1);
  const auto i = b.op("op1");
  const auto j = b.aircraft(i, "a1", v1);
  const int key = b.route(i, j, 1, v2, 2);
  Allocation x = Allocation::all_stay(b.build());
  x.at(i, j) = key;
  EXPECT_EQ(occupancy_table(b.build(), x),
            (std::vector<std::vector<int>>{{1, 0, 0}, {0, 1, 1}}));
}

TEST(Occupancy, SimultaneousSwap) {
  const auto doc = testing::load_fixture("exchange.json");
  Allocation x = Allocation::all_stay(doc.instance);
  x.at(0, 0) = 1;
  x.at(1, 0) = 1;
  EXPECT_EQ(occupancy_table(doc.instance, x),
            (std::vector<std::vector<int>>{{1, 0, 1}, {1, 0, 1}}));
  EXPECT_THROW(occupancy(doc.instance, x, 0, 4), std::out_of_range);
  EXPECT_THROW(occupancy(doc.instance, x, 0, 0), std::out_of_range);
}

TEST(ResidualCapacity, Subtraction) {
  Builder b(2);
  const auto v1 = b.port("v1", 2, 2, 3);
  const auto v2 = b.port("v2", 2, 2, 1);
  const auto i = b.op("op1");
  b.aircraft(i, "a1", v1);
  b.aircraft(i, "a2", v2);
  const auto stay = Allocation::all_stay(b.build());
  EXPECT_EQ(residual_capacity(b.build(), stay, v1, 1), 2);
  EXPECT_EQ(residual_capacity(b.build(), stay, v2, 2), 0);

  const auto j = b.aircraft(i, "a3", v1);
  const int key = b.route(i, j, 1, v2, 2);
  Allocation x = Allocation::all_stay(b.build());
  x.at(i, j) = key;
  EXPECT_EQ(residual_capacity(b.build(), x, v2, 2), -1);
  EXPECT_FALSE(is_feasible(b.build(), x));
}

TEST(Feasibility, AllStayFeasible) {
  const auto doc = testing::load_fixture("second_price.json");
  EXPECT_TRUE(is_feasible(doc.instance, Allocation::all_stay(doc.instance)));
}

TEST(Feasibility, ArrivalCapNamed) {
  const auto doc = testing::load_fixture("second_price.json");
  Allocation x = Allocation::all_stay(doc.instance);
  x.at(0, 0) = 1;
  x.at(1, 0) = 1;
  const auto report = check_feasibility(doc.instance, x);
  ASSERT_FALSE(report.feasible);
  bool named = false;
  for (const auto& v : report.violations) {
    if (v.message.find("(C2) arrival at (v2,2)") != std::string::npos) named = true;
  }
  EXPECT_TRUE(named);
}

TEST(Feasibility, ExchangeFeasibleOneSidedNot) {
  const auto doc = testing::load_fixture("exchange.json");
  Allocation swap = Allocation::all_stay(doc.instance);
  swap.at(0, 0) = 1;
  swap.at(1, 0) = 1;
  EXPECT_TRUE(is_feasible(doc.instance, swap));
  Allocation one = Allocation::all_stay(doc.instance);
  one.at(0, 0) = 1;
  EXPECT_FALSE(is_feasible(doc.instance, one));
}

TEST(Welfare, EmptyInstance) {
  Builder b(2);
  b.port("v1", 1, 1, 1);
  EXPECT_EQ(social_welfare(b.build(), Allocation::all_stay(b.build()),
                           ValueProfile::zeros(b.build())),
            0);
}

TEST(Welfare, WeightedBid) {
  Builder b(2);
  const auto v1 = b.port("v1", 1, 1, 1);
  const auto v2 = b.port("v2", 1, 1, 1);
  const auto i = b.op("op1", 2);
  const auto j = b.aircraft(i, "a1", v1);
  const int key = b.route(i, j, 1, v2, 2);
  ValueProfile v = ValueProfile::zeros(b.build());
  v.at(i, j, key) = 5;
  Allocation x = Allocation::all_stay(b.build());
  x.at(i, j) = key;
  EXPECT_EQ(social_welfare(b.build(), x, v), 10);
}

TEST(Welfare, StayCongestion) {
  Builder b(2, 1);
  const auto r = b.port("v1", 1, 1, 1);
  b.linear_congestion(r, 1);
  b.aircraft(b.op("op1"), "a1", r);
  EXPECT_EQ(social_welfare(b.build(), Allocation::all_stay(b.build()),
                           ValueProfile::zeros(b.build())),
            -2);
}

TEST(Welfare, CongestionExtendsLinearly) {
  Vertiport v;
  v.parking_cap = {2};
  v.congestion_cost = {{0, 1, 3}};
  EXPECT_EQ(congestion_cost(v, 1, 2), 3);
  EXPECT_EQ(congestion_cost(v, 1, 3), 5);
  EXPECT_EQ(congestion_cost(v, 1, 5), 9);
}

TEST(Utility, Examples) {
  const auto doc = testing::second_price();
  const auto& inst = doc.instance;
  MechanismOutcome out;
  out.allocation = Allocation::all_stay(inst);
  out.payments = {0, 0};
  EXPECT_EQ(utility(inst, out, 1, *doc.valuations), 0);

  ValuationProfile v = *doc.valuations;
  v.at(0, 0, 1) = 7;
  out.allocation.at(0, 0) = 1;
  out.payments = {3, 0};
  EXPECT_EQ(utility(inst, out, 0, v), 4);
  EXPECT_THROW(utility(inst, out, 2, v), std::out_of_range);
}

TEST(Utility, UnweightedByOperatorWeight) {
  auto doc = testing::second_price();
  doc.instance.operators[0].weight = 3;
  MechanismOutcome out;
  out.allocation = Allocation::all_stay(doc.instance);
  out.allocation.at(0, 0) = 1;
  out.payments = {0, 0};
  EXPECT_EQ(utility(doc.instance, out, 0, *doc.valuations), 10);
}

// Aircraft airborne at t: departed (vacated origin) but not yet arrived.
int airborne(const Instance& inst, const Allocation& x, int t) {
  int n = 0;
  for (const auto& ref : flatten_aircraft(inst)) {
    const auto& route = inst.aircraft(ref.op, ref.ac).menu[x.at(ref.op, ref.ac)];
    if (!route.is_stay() && t >= std::max(route.depart_time, 2) && t < route.arrive_time) ++n;
  }
  return n;
}

TEST(ModelProperties, ConservationAffinityAndStay) {
  for (const auto& doc : testing::corpus(40)) {
    const auto& inst = doc.instance;
    ASSERT_TRUE(validate_instance(inst).ok());
    EXPECT_TRUE(is_feasible(inst, Allocation::all_stay(inst)));
    const int total = static_cast<int>(inst.aircraft_count());
    const auto& v1 = *doc.valuations;
    ValueProfile v2 = v1;
    for (auto& op : v2.values)
      for (auto& ac : op)
        for (auto& v : ac) v = v * 3 + 1;
    ValueProfile sum = v1;
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      for (std::size_t j = 0; j < sum.values[i].size(); ++j)
        for (std::size_t k = 0; k < sum.values[i][j].size(); ++k)
          sum.values[i][j][k] += v2.values[i][j][k];

    for_each_feasible(inst, {}, [&](const Allocation& x) {
      const auto table = occupancy_table(inst, x);
      for (int t = 1; t <= inst.horizon; ++t) {
        int parked = 0;
        for (const auto& row : table) {
          EXPECT_GE(row[t - 1], 0);
          parked += row[t - 1];
        }
        EXPECT_EQ(parked + airborne(inst, x, t), total);
      }
      EXPECT_EQ(social_welfare(inst, x, sum) - social_welfare(inst, x, v1) -
                    social_welfare(inst, x, v2),
                congestion_total(inst, x));
    });
  }
}

}  // namespace
}  // namespace vertiport
