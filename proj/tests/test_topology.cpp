#include <gtest/gtest.h>

#include <algorithm>

#include "fogsim/topology.hpp"

namespace fogsim {
namespace {

TEST(BuildHierarchy, NodeAndLinkCounts) {
  const auto t = build_hierarchy({.num_tier1 = 4, .sensors_per_tier1 = 3});
  EXPECT_EQ(t.size(), 22u);  // cloud + tier2 + 4 tier1 + 12 sensors + 4 displays
  EXPECT_EQ(t.links().size(), 21u);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(BuildHierarchy, LargestSweepPoint) {
  const auto t = build_hierarchy({.num_tier1 = 4, .sensors_per_tier1 = 21});
  EXPECT_EQ(t.size(), 94u);
  EXPECT_EQ(t.node(t.id_of("tier2")).capacity_mips, 8192.0);
  EXPECT_EQ(t.node(t.id_of("cloud")).capacity_mips, 40960.0);
  EXPECT_EQ(t.node(t.id_of("tier1-3")).capacity_mips, 6144.0);
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(BuildHierarchy, MinimalInstance) {
  const auto t = build_hierarchy({.num_tier1 = 1, .sensors_per_tier1 = 1});
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.route("sensor-0-0", "cloud"), (std::vector<std::string>{"sensor-0-0", "tier1-0", "tier2", "cloud"}));
  EXPECT_EQ(t.route("display-0", "tier1-0"), (std::vector<std::string>{"display-0", "tier1-0"}));
  EXPECT_TRUE(validate_topology(t).empty());
}

TEST(BuildHierarchy, ZeroCountsRejected) {
  EXPECT_THROW(build_hierarchy({.num_tier1 = 0}), ParameterError);
  EXPECT_THROW(build_hierarchy({.sensors_per_tier1 = 0}), ParameterError);
}

TEST(BuildHierarchy, LinkParametersPerTier) {
  HierarchyParams p;
  p.tier2_link = {150.0, 1e6};
  const auto t = build_hierarchy(p);
  const auto* l = t.link_between(t.id_of("tier2"), t.id_of("cloud"));
  ASSERT_NE(l, nullptr);
  EXPECT_EQ(l->params.latency_ms, 150.0);
  EXPECT_EQ(*l->params.bandwidth_bps, 1e6);
  EXPECT_EQ(t.link_between(t.id_of("sensor-2-1"), t.id_of("tier1-2"))->params.latency_ms, 2.0);
  EXPECT_EQ(t.link_between(t.id_of("display-2"), t.id_of("tier1-2"))->params.latency_ms, 2.0);
  EXPECT_EQ(t.link_between(t.id_of("tier1-2"), t.id_of("tier2"))->params.latency_ms, 4.0);
}

TEST(Route, Cases) {
  const auto t = build_hierarchy();
  EXPECT_EQ(t.route("sensor-1-0", "cloud"), (std::vector<std::string>{"sensor-1-0", "tier1-1", "tier2", "cloud"}));
  EXPECT_EQ(t.route("tier2", "tier2"), (std::vector<std::string>{"tier2"}));
  EXPECT_EQ(t.route("tier1-0", "display-0"), (std::vector<std::string>{"tier1-0", "display-0"}));
  EXPECT_EQ(t.route("sensor-0-0", "display-3"),
            (std::vector<std::string>{"sensor-0-0", "tier1-0", "tier2", "tier1-3", "display-3"}));
  EXPECT_THROW(t.route("sensor-0-0", "nowhere"), LookupError);
  EXPECT_THROW(t.route(NodeId{0}, NodeId{999}), LookupError);
}

TEST(Route, SymmetricAndUniqueForAllPairs) {
  const auto t = build_hierarchy({.num_tier1 = 3, .sensors_per_tier1 = 2});
  for (std::size_t a = 0; a < t.size(); ++a) {
    for (std::size_t b = 0; b < t.size(); ++b) {
      auto ab = t.route(NodeId{a}, NodeId{b});
      auto ba = t.route(NodeId{b}, NodeId{a});
      std::reverse(ba.begin(), ba.end());
      EXPECT_EQ(ab, ba);
      EXPECT_EQ(ab.front(), NodeId{a});
      EXPECT_EQ(ab.back(), NodeId{b});
      for (std::size_t i = 1; i < ab.size(); ++i) EXPECT_NE(t.link_between(ab[i - 1], ab[i]), nullptr);
    }
  }
}

TEST(Route, HopCountsFromSensors) {
  const auto t = build_hierarchy({.num_tier1 = 2, .sensors_per_tier1 = 4});
  for (auto s : t.nodes_of_kind(NodeKind::kSensor)) {
    EXPECT_EQ(t.route(s, t.id_of("cloud")).size() - 1, 3u);
    auto branch = *branch_of(t, s);
    EXPECT_EQ(t.route(s, *display_of(t, branch)).size() - 1, 2u);
  }
}

TEST(ValidateTopology, ExtraSensorToTier2LinkIsACycle) {
  auto t = build_hierarchy();
  t.add_link(t.id_of("sensor-0-0"), t.id_of("tier2"), {1.0, std::nullopt});
  const auto r = validate_topology(t);
  EXPECT_TRUE(has_violation(r, TopologyViolation::kCycle));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kLinkCount));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kAttachment));
}

TEST(ValidateTopology, CapacityOrdering) {
  auto t = build_hierarchy();
  t.set_capacity(t.id_of("tier1-1"), 9000.0);
  const auto r = validate_topology(t);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, TopologyViolation::kCapacityOrder);
  EXPECT_NE(r[0].message.find("tier1-1"), std::string::npos);

  auto t2 = build_hierarchy();
  t2.set_capacity(t2.id_of("cloud"), 8192.0);
  EXPECT_TRUE(has_violation(validate_topology(t2), TopologyViolation::kCapacityOrder));
}

TEST(ValidateTopology, StructuralViolations) {
  Topology t;
  auto c = t.add_node("c", NodeKind::kCloud, 100);
  auto c2 = t.add_node("c2", NodeKind::kCloud, 100);
  auto s = t.add_node("s", NodeKind::kSensor, 5);
  t.add_link(c, c, {});
  t.add_link(c, c2, {});
  t.add_link(c2, c, {});
  const auto r = validate_topology(t);
  EXPECT_TRUE(has_violation(r, TopologyViolation::kSelfLink));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kDuplicateLink));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kDisconnected));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kNodeCount));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kCapacity));
  EXPECT_TRUE(has_violation(r, TopologyViolation::kAttachment));
  (void)s;
}

TEST(Topology, RejectsBadConstruction) {
  Topology t;
  auto a = t.add_node("a", NodeKind::kCloud, 1);
  EXPECT_THROW(t.add_node("a", NodeKind::kSensor), ParameterError);
  EXPECT_THROW(t.add_link(a, NodeId{5}, {}), LookupError);
  auto b = t.add_node("b", NodeKind::kFogTier2, 1);
  EXPECT_THROW(t.add_link(a, b, {-1.0, std::nullopt}), ParameterError);
  EXPECT_THROW(t.add_link(a, b, {1.0, 0.0}), ParameterError);
  EXPECT_THROW(t.id_of("zzz"), LookupError);
}

}  // namespace
}  // namespace fogsim
