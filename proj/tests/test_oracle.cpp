#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vertiport/oracle.hpp"

namespace vertiport {
namespace {

using testing::Builder;

TEST(EnumerateFeasible, BlockedRouteLeavesStay) {
  Builder b(3);
  const auto v1 = b.port("v1", 1, 1, 1);
  const auto v2 = b.port("v2", 0, 1, 1);
  const auto i = b.op("op1");
  b.route(i, b.aircraft(i, "a1", v1), 1, v2, 2);
  const auto all = enumerate_feasible(b.build());
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], Allocation::all_stay(b.build()));
}

TEST(EnumerateFeasible, SwapOrNothing) {
  const auto doc = testing::load_fixture("exchange.json");
  const auto all = enumerate_feasible(doc.instance);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0], Allocation::all_stay(doc.instance));
  EXPECT_EQ(all[1].keys, (std::vector<std::vector<int>>{{1}, {1}}));
}

TEST(EnumerateFeasible, EmptyInstance) {
  Builder b(1);
  b.port("v1", 1, 1, 1);
  EXPECT_EQ(enumerate_feasible(b.build()).size(), 1u);
}

TEST(EnumerateFeasible, BudgetEnforced) {
  const auto doc = testing::load_fixture("exchange.json");
  EXPECT_EQ(candidate_count(doc.instance), 4u);
  EXPECT_THROW(enumerate_feasible(doc.instance, {3}), BudgetExceeded);
  EXPECT_NO_THROW(enumerate_feasible(doc.instance, {4}));
}

TEST(EnumerateFeasible, ContainsAllStayAndIsSorted) {
  for (const auto& doc : testing::corpus(30)) {
    const auto all = enumerate_feasible(doc.instance);
    ASSERT_FALSE(all.empty());
    EXPECT_EQ(all.front(), Allocation::all_stay(doc.instance));
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  }
}

TEST(OracleOptimal, ZeroBids) {
  const auto doc = testing::load_fixture("exchange.json");
  const auto opt = oracle_optimal(doc.instance, ValueProfile::zeros(doc.instance));
  EXPECT_EQ(opt.welfare, 0);
  EXPECT_EQ(opt.allocation, Allocation::all_stay(doc.instance));
}

TEST(OracleOptimal, SecondPrice) {
  const auto doc = testing::second_price();
  const auto opt = oracle_optimal(doc.instance, *doc.bids);
  EXPECT_EQ(opt.welfare, 10);
  EXPECT_EQ(opt.allocation.keys, (std::vector<std::vector<int>>{{1}, {0}}));
  const auto auction = oracle_auction(doc.instance, *doc.bids);
  EXPECT_EQ(auction.payments, (std::vector<Rational>{6, 0}));
}

TEST(OracleOptimal, SingleOperatorPaysNothing) {
  Builder b(3);
  const auto v1 = b.port("v1", 2, 2, 2);
  const auto v2 = b.port("v2", 2, 2, 2);
  const auto i = b.op("op1");
  b.route(i, b.aircraft(i, "a1", v1), 1, v2, 3);
  b.route(i, b.aircraft(i, "a2", v2), 2, v1, 3);
  ValueProfile bids = ValueProfile::zeros(b.build());
  bids.at(0, 0, 1) = 4;
  bids.at(0, 1, 0) = 1;
  EXPECT_EQ(oracle_payment(b.build(), bids, 0), 0);
}

TEST(OracleOptimal, ParallelReduceMatchesSerial) {
  for (const auto& doc : testing::corpus(30, 200)) {
    const auto serial = oracle_optimal(doc.instance, *doc.bids);
    for (int threads : {2, 3, 8}) {
      const auto parallel = oracle_optimal_parallel(doc.instance, *doc.bids, threads);
      EXPECT_EQ(parallel.allocation, serial.allocation);
      EXPECT_EQ(parallel.welfare, serial.welfare);
    }
  }
}

}  // namespace
}  // namespace vertiport
