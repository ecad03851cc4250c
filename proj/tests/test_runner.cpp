#include <gtest/gtest.h>

#include <sstream>

#include "fogsim/output.hpp"
#include "fogsim/runner.hpp"

namespace fogsim {
namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(RunSweep, DefaultScenarioHasFourteenRows) {
  const auto table = run_sweep(Scenario{}, 2);
  ASSERT_EQ(table.rows.size(), 14u);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    EXPECT_EQ(table.rows[i].sensors, default_sweep()[i / 2]);
    EXPECT_EQ(table.rows[i].strategy, i % 2 == 0 ? "cloud" : "fog");
    EXPECT_TRUE(table.rows[i].error.empty()) << table.rows[i].error;
  }
}

TEST(RunSweep, FogBeatsCloudAtEveryPoint) {
  const auto table = run_sweep(Scenario{}, 4);
  for (std::size_t i = 0; i + 1 < table.rows.size(); i += 2) {
    const auto& cloud = *table.rows[i].report;
    const auto& fog = *table.rows[i + 1].report;
    EXPECT_LT(*fog.overall_mean_ms, *cloud.overall_mean_ms) << "sensors " << table.rows[i].sensors;
  }
}

TEST(RunSweep, SingleSensorSingleBranchMatchesHandTrace) {
  Scenario s;
  s.topology.num_tier1 = 1;
  s.sweep = {1};
  const auto table = run_sweep(s);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_NEAR(*table.rows[0].report->overall_mean_ms, 242.0, 1e-9);
  EXPECT_NEAR(*table.rows[1].report->overall_mean_ms, 42.0, 1e-9);
}

TEST(RunSweep, ParallelAndSerialAgree) {
  Scenario s;
  s.sweep = {1, 4, 7};
  EXPECT_EQ(run_sweep(s, 1), run_sweep(s, 3));
}

TEST(RunSweep, FailedRowsDoNotAbortOthers) {
  Scenario s;
  s.topology.capacity.tier1_mips = 1000.0;  // fog needs 1100 per tier-1 node
  s.sweep = {1, 2};
  const auto table = run_sweep(s);
  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_TRUE(table.rows[0].report.has_value());
  EXPECT_FALSE(table.rows[1].report.has_value());
  EXPECT_NE(table.rows[1].error.find("feasibility"), std::string::npos);
  const auto csv = emit_results(table, OutputFormat::kCsv);
  EXPECT_NE(csv.find("feasibility"), std::string::npos);
}

TEST(EmitResults, EmptyTableIsHeaderOnly) {
  ResultTable t;
  const auto csv = emit_results(t, OutputFormat::kCsv);
  EXPECT_EQ(csv,
            "sensors,strategy,mean_latency_ms,network_usage_bytes,network_usage_bytes_per_s,mean_wait_ms,"
            "emitted,delivered,in_flight,error\n");
  EXPECT_EQ(emit_results(t, OutputFormat::kJson), "[]\n");
}

TEST(EmitResults, OneRowInColumnOrder) {
  ResultTable t;
  MetricsReport r;
  r.overall_mean_ms = 42.0;
  r.network_usage_bytes = 9000;
  r.horizon_ms = 1000.0;
  t.rows.push_back({3, "fog", r, {}});
  const auto csv = emit_results(t, OutputFormat::kCsv);
  ASSERT_EQ(line_count(csv), 2u);
  EXPECT_EQ(csv.substr(csv.find('\n') + 1), "3,fog,42.000,9000,9000.000,,0,0,0,\n");

  const auto json = nlohmann::ordered_json::parse(emit_results(t, OutputFormat::kJson));
  ASSERT_EQ(json.size(), 1u);
  EXPECT_EQ(json[0]["sensors"], 3);
  EXPECT_EQ(json[0]["strategy"], "fog");
  EXPECT_EQ(json[0]["mean_latency_ms"], 42.0);
  EXPECT_EQ(json[0]["network_usage_bytes"], 9000);
  EXPECT_TRUE(json[0]["mean_wait_ms"].is_null());
  EXPECT_EQ(json[0].begin().key(), "sensors");
}

TEST(EmitResults, PerLoopColumnsAndEscaping) {
  ResultTable t;
  t.loop_names = {"status"};
  MetricsReport r;
  r.per_loop.push_back({"status", 2, 41.23456, 50.0, {}, {}, {}});
  t.rows.push_back({1, "x,y", r, "oops \"quoted\""});
  const auto csv = emit_results(t, OutputFormat::kCsv);
  EXPECT_NE(csv.find("status_count,status_mean_ms,status_max_ms,error"), std::string::npos);
  EXPECT_NE(csv.find("\"x,y\""), std::string::npos);
  EXPECT_NE(csv.find(",2,41.235,50.000,\"oops \"\"quoted\"\"\""), std::string::npos) << csv;
}

TEST(EmitResults, ByteIdenticalAcrossCalls) {
  Scenario s;
  s.sweep = {2, 3};
  const auto table = run_sweep(s);
  for (auto f : {OutputFormat::kCsv, OutputFormat::kJson}) {
    EXPECT_EQ(emit_results(table, f), emit_results(table, f));
    EXPECT_EQ(emit_results(table, f), emit_results(run_sweep(s, 2), f));
  }
}

TEST(EmitResults, FormatNames) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::kCsv);
  EXPECT_EQ(parse_format("json"), OutputFormat::kJson);
  EXPECT_THROW(parse_format("xml"), ParameterError);
}

}  // namespace
}  // namespace fogsim
