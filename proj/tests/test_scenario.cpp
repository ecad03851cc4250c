#include <gtest/gtest.h>

#include <random>

#include "fogsim/scenario.hpp"
#include "generators.hpp"

namespace fogsim {
namespace {

TEST(ParseScenario, MinimalFogDocumentTakesDefaults) {
  const auto s = parse_scenario(R"({"strategy": "fog"})");
  Scenario expected;
  expected.strategies = {{"fog", {}, {}}};
  EXPECT_EQ(s, expected);
  EXPECT_EQ(s.topology.num_tier1, 4u);
  EXPECT_EQ(s.topology.tier2_link.latency_ms, 100.0);
  EXPECT_EQ(s.simulation.emission_interval_ms, 1000.0);
  EXPECT_EQ(s.sweep, default_sweep());
}

TEST(ParseScenario, EmptyDocumentIsTheDefaultScenario) { EXPECT_EQ(parse_scenario("{}"), Scenario{}); }

TEST(ParseScenario, NegativeLatencyNamesTheField) {
  try {
    parse_scenario(R"({"topology": {"links": {"tier1": {"latency_ms": -1}}}})");
    FAIL() << "expected SemanticError";
  } catch (const SemanticError& e) {
    EXPECT_EQ(e.field(), "topology.links.tier1.latency_ms");
  }
}

TEST(ParseScenario, ExplicitSweepRange) {
  const auto s = parse_scenario(R"({"sweep": [3, 6, 9, 12, 15, 18, 21]})");
  EXPECT_EQ(s.sweep, (std::vector<std::size_t>{3, 6, 9, 12, 15, 18, 21}));
}

TEST(ParseScenario, SyntaxErrorReportsLineAndColumn) {
  try {
    parse_scenario("{\n  \"strategy\": \"fog\",\n  \"sweep\": [3, 6,, 9]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(ParseScenario, StrictKeys) {
  EXPECT_THROW(parse_scenario(R"({"strategi": "fog"})"), SemanticError);
  EXPECT_THROW(parse_scenario(R"({"topology": {"tier1s": 3}})"), SemanticError);
  EXPECT_THROW(parse_scenario(R"({"simulation": {"horizon": 3}})"), SemanticError);
}

TEST(ParseScenario, SemanticErrors) {
  auto field_of = [](const char* doc) {
    try {
      parse_scenario(doc);
    } catch (const SemanticError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"strategy": {"assign": {"Sensing": "cloud"}}})"), "strategy.assign.Sensing");
  EXPECT_EQ(field_of(R"({"strategy": {"assign": {"Sense": "sensor-0-0"}}})"), "strategy.assign.Sense");
  EXPECT_EQ(field_of(R"({"strategy": "edge"})"), "strategy");
  EXPECT_EQ(field_of(R"({"sweep": [3, 0]})"), "sweep");
  EXPECT_EQ(field_of(R"({"sweep": []})"), "sweep");
  EXPECT_EQ(field_of(R"({"sweep": [3, -2]})"), "sweep[1]");
  EXPECT_EQ(field_of(R"({"topology": {"num_tier1": 0}})"), "topology.num_tier1");
  EXPECT_EQ(field_of(R"({"topology": {"links": {"sensor": {"bandwidth_bps": 0}}}})"),
            "topology.links.sensor.bandwidth_bps");
  EXPECT_EQ(field_of(R"({"application": {"tuples": {"t1": {"size_bytes": 0}}}})"), "application.tuples.t1.size_bytes");
  EXPECT_EQ(field_of(R"({"application": {"tuples": {"t42": {"size_bytes": 5}}}})"), "application");
  EXPECT_EQ(field_of(R"({"application": {"emission_ratios": {"t3": 0}}})"), "application.emission_ratios.t3");
  EXPECT_EQ(field_of(R"({"simulation": {"duration_ms": 0}})"), "simulation");
  EXPECT_EQ(field_of(R"({"simulation": {"emission_phase": "random"}})"), "simulation.emission_phase");
  EXPECT_EQ(field_of(R"({"simulation": {"seed": "x"}})"), "simulation.seed");
  EXPECT_EQ(field_of(R"({"topology": {"capacity_mips": {"cloud": -1}}})"), "topology.capacity_mips.cloud");
  EXPECT_EQ(field_of(R"([1, 2])"), "<root>");
}

TEST(ParseScenario, FullDocument) {
  const auto s = parse_scenario(R"({
    "application": {"tuples": {"t1": {"size_bytes": 512, "cpu_length_mi": 2.5}}, "emission_ratios": {"t4": 3}},
    "topology": {"num_tier1": 2, "sensors_per_tier1": 5,
                 "links": {"tier2": {"latency_ms": 80, "bandwidth_bps": 1e6}},
                 "capacity_mips": {"tier1": 4000}},
    "strategy": ["cloud", {"name": "split", "assign": {"Sense": "tier1", "DataAggregation": "tier1-1"}}],
    "simulation": {"duration_ms": 5000, "emission_interval_ms": 250, "emission_stop_ms": null,
                   "emission_phase": "staggered", "jitter_ms": 10, "seed": 7},
    "sweep": [1, 2]
  })");
  EXPECT_EQ(*s.application.tuples.at("t1").size_bytes, 512u);
  EXPECT_EQ(s.application.emission_ratios.at("t4"), 3u);
  EXPECT_EQ(s.topology.tier2_link, (LinkParams{80.0, 1e6}));
  EXPECT_EQ(s.topology.capacity.tier1_mips, 4000.0);
  ASSERT_EQ(s.strategies.size(), 2u);
  EXPECT_EQ(s.strategies[1].label(), "split");
  EXPECT_EQ(s.strategies[1].assignment.at("DataAggregation"), "tier1-1");
  EXPECT_FALSE(s.simulation.emission_stop_ms.has_value());
  EXPECT_EQ(s.simulation.phase, EmissionPhase::kStaggered);
  EXPECT_EQ(s.simulation.seed, 7u);
}

// parse(serialize(s)) == s over randomized valid scenarios.
TEST(SerializeScenario, RoundTrip) {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    Scenario s = gen::small_scenario(rng);
    s.sweep = {1, static_cast<std::size_t>(i % 7 + 1)};
    const auto text = serialize_scenario(s);
    EXPECT_EQ(parse_scenario(text), s) << text;
    EXPECT_EQ(serialize_scenario(parse_scenario(text)), text);
  }
  EXPECT_EQ(parse_scenario(serialize_scenario(Scenario{})), Scenario{});
}

}  // namespace
}  // namespace fogsim
