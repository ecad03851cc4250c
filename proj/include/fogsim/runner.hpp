#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fogsim/app_model.hpp"
#include "fogsim/engine.hpp"
#include "fogsim/error.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/placement.hpp"
#include "fogsim/scenario.hpp"
#include "fogsim/topology.hpp"

namespace fogsim {

struct ResultRow {
  std::size_t sensors = 0;
  std::string strategy;
  std::optional<MetricsReport> report;
  std::string error;  // set when the row failed

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::vector<std::string> loop_names;
  std::vector<ResultRow> rows;

  bool operator==(const ResultTable&) const = default;
};

/// One simulation of the scenario with `sensors_per_tier1` overridden.
inline MetricsReport run_point(const Scenario& s, const StrategySpec& strategy, std::size_t sensors_per_tier1) {
  const ApplicationGraph graph = build_soil_app(s.application);
  HierarchyParams hp = s.topology;
  hp.sensors_per_tier1 = sensors_per_tier1;
  const Topology topo = build_hierarchy(hp);
  const Placement placement = make_placement(strategy, graph, topo);
  return simulate(graph, topo, placement, s.simulation);
}

/// Runs every (sensor count, strategy) pair of the sweep. Rows come back in
/// sweep order, strategies in declaration order, whatever `jobs` is. A row
/// that fails records its error and the others still run.
inline ResultTable run_sweep(const Scenario& s, unsigned jobs = 1) {
  ResultTable table;
  for (const auto& l : build_soil_app(s.application).loops) table.loop_names.push_back(l.name);
  for (auto n : s.sweep) {
    for (const auto& st : s.strategies) table.rows.push_back({n, st.label(), std::nullopt, {}});
  }

  const std::size_t per_point = s.strategies.size();
  auto run_row = [&](std::size_t i) {
    auto& row = table.rows[i];
    try {
      row.report = run_point(s, s.strategies[i % per_point], row.sensors);
    } catch (const Error& e) {
      row.error = e.kind() + ": " + e.what();
    }
  };

  jobs = std::max(1u, jobs);
  if (jobs == 1 || table.rows.size() < 2) {
    for (std::size_t i = 0; i < table.rows.size(); ++i) run_row(i);
    return table;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < std::min<std::size_t>(jobs, table.rows.size()); ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < table.rows.size(); i = next++) run_row(i);
    });
  }
  for (auto& w : workers) w.join();
  return table;
}

}  // namespace fogsim
