#include <gtest/gtest.h>

#include "support/oracles.hpp"

// Hand-checked cases for the test oracles themselves.

namespace {

using sfmkit::StructuralPattern;
using sfmkit::StructuralSystem;

TEST(Oracle, ClosureOfPath) {
  const oracle::BoolMatrix adj = {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  const auto r = oracle::closure(adj);
  EXPECT_TRUE(r[0][2]);
  EXPECT_FALSE(r[2][0]);
  EXPECT_TRUE(r[1][1]);
}

TEST(Oracle, ConditionsOnScalarLoop) {
  const auto sys = StructuralSystem::with_identity_io(StructuralPattern(1, 1));
  EXPECT_TRUE(oracle::feasible(sys, StructuralPattern::full(1, 1)));
  EXPECT_FALSE(oracle::feasible(sys, StructuralPattern(1, 1)));
  EXPECT_TRUE(oracle::condition_b(oracle::closed_loop(StructuralSystem::with_identity_io(StructuralPattern::full(1, 1)),
                                                       StructuralPattern(1, 1))));
}

TEST(Oracle, CrossLinkCannotCoverBothStates) {
  const auto sys = StructuralSystem::with_identity_io(StructuralPattern(2, 2));
  const auto g = oracle::closed_loop(sys, StructuralPattern(2, 2, {{0, 1}}));
  EXPECT_FALSE(oracle::condition_b(g));
  EXPECT_TRUE(oracle::condition_b(oracle::closed_loop(sys, StructuralPattern(2, 2, {{0, 1}, {1, 0}}))));
}

TEST(Oracle, MatchingSizes) {
  EXPECT_EQ(oracle::max_matching_size({{1, 1}, {1, 0}}), 2U);
  EXPECT_EQ(oracle::max_matching_size({{1, 0}, {1, 0}}), 1U);
  EXPECT_EQ(oracle::max_matching_size({}), 0U);
}

TEST(Oracle, PartitionExistence) {
  sfmkit::Digraph two_edges(4);
  two_edges.add_edge(0, 1);
  two_edges.add_edge(2, 3);
  EXPECT_TRUE(oracle::partition_exists(two_edges));
  sfmkit::Digraph isolated(2);
  EXPECT_TRUE(oracle::partition_exists(isolated));
  sfmkit::Digraph edge(2);
  edge.add_edge(0, 1);
  EXPECT_FALSE(oracle::partition_exists(edge));
}

TEST(Oracle, MinimalFeasible) {
  const auto sys = StructuralSystem::with_identity_io(StructuralPattern(2, 2));
  EXPECT_TRUE(oracle::minimal_feasible(sys, StructuralPattern::identity(2)));
  EXPECT_FALSE(oracle::minimal_feasible(sys, StructuralPattern::full(2, 2)));
}

}  // namespace
