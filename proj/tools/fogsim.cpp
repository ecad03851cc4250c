// fogsim: run the soil-management application on the cloud/fog hierarchy.
//
//   fogsim simulate [scenario.json] [--strategy fog] [--sensors 3]
//   fogsim sweep    [scenario.json] [--sensors 3,6,9] [--format csv|json]
//   fogsim validate [scenario.json]
//   fogsim scenario [scenario.json]      # print the effective scenario

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fogsim/fogsim.hpp"

namespace {

struct Options {
  std::string scenario_file;
  std::string strategy;
  std::string sensors;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fogsim::ParameterError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v == 0 || s.front() == '-')
    throw fogsim::ParameterError("--sensors expects positive integers, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

// Flags win over the file, the file over the defaults.
fogsim::Scenario load_scenario(const Options& o, bool sensors_is_list) {
  fogsim::Scenario s = o.scenario_file.empty() ? fogsim::Scenario{} : fogsim::parse_scenario(read_file(o.scenario_file));
  if (!o.strategy.empty()) {
    s.strategies.clear();
    for (const auto& name : split(o.strategy, ',')) {
      if (name == "both") {
        s.strategies.push_back({"cloud", {}, {}});
        s.strategies.push_back({"fog", {}, {}});
      } else if (name == "cloud" || name == "fog") {
        s.strategies.push_back({name, {}, {}});
      } else {
        throw fogsim::ParameterError("--strategy expects cloud, fog or both, got '" + name + "'");
      }
    }
  }
  if (!o.sensors.empty()) {
    auto parts = split(o.sensors, ',');
    if (parts.empty()) throw fogsim::ParameterError("--sensors is empty");
    if (sensors_is_list) {
      s.sweep.clear();
      for (const auto& p : parts) s.sweep.push_back(parse_count(p));
    } else {
      if (parts.size() != 1) throw fogsim::ParameterError("simulate takes a single --sensors value");
      s.topology.sensors_per_tier1 = parse_count(parts.front());
    }
  }
  if (o.seed) s.simulation.seed = *o.seed;
  // Re-run the document checks so flag values are validated too.
  return fogsim::parse_scenario(fogsim::serialize_scenario(s));
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw fogsim::ParameterError("cannot write '" + o.out + "'");
  f << text;
}

int cmd_simulate(const Options& o) {
  const auto s = load_scenario(o, false);
  const auto format = fogsim::parse_format(o.format.empty() ? "json" : o.format);
  fogsim::ResultTable table;
  for (const auto& l : fogsim::build_soil_app(s.application).loops) table.loop_names.push_back(l.name);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& st : s.strategies) {
    auto report = fogsim::run_point(s, st, s.topology.sensors_per_tier1);
    runs.push_back({{"strategy", st.label()},
                    {"sensors_per_tier1", s.topology.sensors_per_tier1},
                    {"report", fogsim::report_to_json(report)}});
    table.rows.push_back({s.topology.sensors_per_tier1, st.label(), std::move(report), {}});
  }
  if (format == fogsim::OutputFormat::kCsv) {
    write_output(o, fogsim::emit_results(table, format));
  } else {
    write_output(o, runs.dump(2) + "\n");
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const auto s = load_scenario(o, true);
  const auto format = fogsim::parse_format(o.format.empty() ? "csv" : o.format);
  unsigned jobs = o.jobs ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto table = fogsim::run_sweep(s, jobs);
  write_output(o, fogsim::emit_results(table, format));
  bool failed = false;
  for (const auto& r : table.rows) failed = failed || !r.error.empty();
  return failed ? 1 : 0;
}

int cmd_validate(const Options& o) {
  const auto s = load_scenario(o, false);
  const auto graph = fogsim::build_soil_app(s.application);
  const auto topo = fogsim::build_hierarchy(s.topology);
  nlohmann::ordered_json out;
  std::size_t problems = 0;
  auto list = [&](const auto& report) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : report) arr.push_back({{"kind", std::string(fogsim::to_string(v.kind))}, {"message", v.message}});
    problems += report.size();
    return arr;
  };
  out["application"] = list(fogsim::validate_dag(graph));
  out["topology"] = list(fogsim::validate_topology(topo));
  nlohmann::ordered_json placements = nlohmann::ordered_json::object();
  for (const auto& st : s.strategies) {
    try {
      placements[st.label()] = list(fogsim::validate_placement(fogsim::make_placement(st, graph, topo), graph, topo));
    } catch (const fogsim::Error& e) {
      ++problems;
      placements[st.label()] = nlohmann::ordered_json::array({{{"kind", e.kind()}, {"message", e.what()}}});
    }
  }
  out["placement"] = placements;
  out["valid"] = problems == 0;
  write_output(o, out.dump(2) + "\n");
  return problems == 0 ? 0 : 1;
}

int cmd_scenario(const Options& o) {
  write_output(o, fogsim::serialize_scenario(load_scenario(o, true)));
  return 0;
}

void add_common(CLI::App* sub, Options& o, const std::string& sensors_help) {
  sub->add_option("scenario", o.scenario_file, "Scenario JSON file (defaults when omitted)");
  sub->add_option("--strategy", o.strategy, "cloud, fog, both, or a comma list");
  sub->add_option("--sensors", o.sensors, sensors_help);
  sub->add_option("--seed", o.seed, "RNG seed (used by emission jitter)");
  sub->add_option("--out", o.out, "Output file (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fog/cloud data-flow simulator for the soil-management IoT application"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation per strategy and print the full report");
  add_common(simulate, o, "Sensors per tier-1 node");
  simulate->add_option("--format", o.format, "json (default) or csv");

  auto* sweep = app.add_subcommand("sweep", "Run the sensor-count sweep");
  add_common(sweep, o, "Comma-separated sensor counts per tier-1 node");
  sweep->add_option("--format", o.format, "csv (default) or json");
  sweep->add_option("--jobs", o.jobs, "Worker threads (default: hardware concurrency)");

  auto* validate = app.add_subcommand("validate", "Check application, topology and placements only");
  add_common(validate, o, "Sensors per tier-1 node");

  auto* scenario = app.add_subcommand("scenario", "Print the effective scenario with all defaults");
  add_common(scenario, o, "Comma-separated sensor counts per tier-1 node");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (validate->parsed()) return cmd_validate(o);
    if (scenario->parsed()) return cmd_scenario(o);
  } catch (const fogsim::Error& e) {
    nlohmann::ordered_json err{{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json err{{"error", {{"kind", "io"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 2;
}
