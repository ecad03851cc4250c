#include <gtest/gtest.h>

#include "fogsim/placement.hpp"

namespace fogsim {
namespace {

bool mentions(const PlacementReport& r, PlacementViolation kind, const std::string& needle) {
  for (const auto& v : r) {
    if (v.kind == kind && v.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

TEST(CloudPlacement, AllModulesOnCloud) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy();
  const auto p = cloud_placement(g, t);
  const auto cloud = t.id_of("cloud");
  ASSERT_EQ(p.assignment.size(), 5u);
  for (const auto& [m, hosts] : p.assignment) EXPECT_EQ(hosts, std::vector<NodeId>{cloud}) << m;
  EXPECT_EQ(host_loads(p, g).at(cloud), 4000.0);
  EXPECT_TRUE(validate_placement(p, g, t).empty());
}

TEST(CloudPlacement, InfeasibleWhenCloudTooSmall) {
  HierarchyParams hp;
  hp.capacity.cloud_mips = 3000.0;
  EXPECT_THROW(cloud_placement(build_soil_app(), build_hierarchy(hp)), FeasibilityError);
}

TEST(FogPlacement, SplitsAcrossTiers) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy();
  const auto p = fog_placement(g, t);
  const auto tier1 = t.nodes_of_kind(NodeKind::kFogTier1);
  EXPECT_EQ(*p.hosts_of("Sense"), tier1);
  EXPECT_EQ(*p.hosts_of("DataAggregation"), tier1);
  for (const char* m : {"StatusGeneration", "EventDetection", "SoilAnalytics"})
    EXPECT_EQ(*p.hosts_of(m), std::vector<NodeId>{t.id_of("tier2")});
  const auto loads = host_loads(p, g);
  for (auto n : tier1) EXPECT_EQ(loads.at(n), 1100.0);
  EXPECT_EQ(loads.at(t.id_of("tier2")), 2900.0);
  EXPECT_TRUE(validate_placement(p, g, t).empty());
  for (const auto& [m, hosts] : p.assignment) {
    for (auto h : hosts) EXPECT_TRUE(hosts_modules(t.node(h).kind)) << m;
  }
}

TEST(FogPlacement, InfeasibleWhenTier1TooSmall) {
  HierarchyParams hp;
  hp.capacity.tier1_mips = 1000.0;
  EXPECT_THROW(fog_placement(build_soil_app(), build_hierarchy(hp)), FeasibilityError);
}

TEST(FogPlacement, Deterministic) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy({.num_tier1 = 3, .sensors_per_tier1 = 5});
  EXPECT_EQ(fog_placement(g, t), fog_placement(g, t));
  EXPECT_EQ(cloud_placement(g, t), cloud_placement(g, t));
}

TEST(ValidatePlacement, OverloadAmountReported) {
  const auto g = build_soil_app();
  HierarchyParams hp;
  hp.capacity.tier1_mips = 3500.0;
  const auto t = build_hierarchy(hp);
  Placement p{"manual", {}};
  for (const auto& m : g.modules) p.assignment[m.name] = {t.id_of("tier1-0")};
  const auto r = validate_placement(p, g, t);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].kind, PlacementViolation::kOverload);
  // 4000 MIPS of modules on a 3500 MIPS node.
  EXPECT_NE(r[0].message.find("load 4000"), std::string::npos) << r[0].message;
  EXPECT_NE(r[0].message.find("by 500"), std::string::npos) << r[0].message;
}

TEST(ValidatePlacement, AllOnOneDefaultTier1IsFeasible) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy();
  Placement p{"manual", {}};
  for (const auto& m : g.modules) p.assignment[m.name] = {t.id_of("tier1-0")};
  EXPECT_TRUE(validate_placement(p, g, t).empty());
}

TEST(ValidatePlacement, MissingModuleAndIllegalHosts) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy();
  auto p = fog_placement(g, t);
  p.assignment.erase("SoilAnalytics");
  p.assignment["Sense"] = {t.id_of("sensor-0-0"), t.id_of("tier1-0"), t.id_of("tier1-0")};
  p.assignment["Nope"] = {t.id_of("cloud")};
  const auto r = validate_placement(p, g, t);
  EXPECT_TRUE(mentions(r, PlacementViolation::kUnassigned, "SoilAnalytics"));
  EXPECT_TRUE(mentions(r, PlacementViolation::kIllegalHost, "sensor-0-0"));
  EXPECT_TRUE(mentions(r, PlacementViolation::kDuplicateHost, "tier1-0"));
  EXPECT_TRUE(mentions(r, PlacementViolation::kUnknownModule, "Nope"));
}

// Removing any module from a feasible placement keeps it feasible.
TEST(ValidatePlacement, FeasibilityIsMonotone) {
  const auto g = build_soil_app();
  HierarchyParams hp;
  hp.capacity.tier1_mips = 1100.0;
  hp.capacity.tier2_mips = 2900.0;
  const auto t = build_hierarchy(hp);
  const auto p = fog_placement(g, t);
  ASSERT_FALSE(has_violation(validate_placement(p, g, t), PlacementViolation::kOverload));
  for (const auto& m : g.modules) {
    auto q = p;
    q.assignment.erase(m.name);
    EXPECT_FALSE(has_violation(validate_placement(q, g, t), PlacementViolation::kOverload)) << m.name;
  }
}

TEST(ExplicitPlacement, KeywordsAndNodes) {
  const auto g = build_soil_app();
  const auto t = build_hierarchy({.num_tier1 = 2, .sensors_per_tier1 = 1});
  const auto p = explicit_placement(g, t,
                                    {{"Sense", "tier1"},
                                     {"DataAggregation", "tier2"},
                                     {"StatusGeneration", "cloud"},
                                     {"EventDetection", "tier1-1"},
                                     {"SoilAnalytics", "tier2"}});
  EXPECT_EQ(p.hosts_of("Sense")->size(), 2u);
  EXPECT_EQ(*p.hosts_of("EventDetection"), std::vector<NodeId>{t.id_of("tier1-1")});
  EXPECT_THROW(explicit_placement(g, t, {{"Sense", "sensor-0-0"}}), ConfigurationError);
  EXPECT_THROW(explicit_placement(g, t, {{"Sense", "mars"}}), LookupError);
  EXPECT_THROW(explicit_placement(g, t, {{"Ghost", "cloud"}}), LookupError);
}

}  // namespace
}  // namespace fogsim
