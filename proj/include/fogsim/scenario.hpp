#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fogsim/app_model.hpp"
#include "fogsim/engine.hpp"
#include "fogsim/error.hpp"
#include "fogsim/placement.hpp"
#include "fogsim/topology.hpp"

namespace fogsim {

/// A deployment strategy: "cloud", "fog", or an explicit module -> target
/// map (see explicit_placement for the accepted targets).
struct StrategySpec {
  std::string kind = "fog";
  std::string name;  // label for explicit strategies
  std::map<std::string, std::string> assignment;

  std::string label() const { return kind == "explicit" ? (name.empty() ? "explicit" : name) : kind; }

  bool operator==(const StrategySpec&) const = default;
};

inline std::vector<std::size_t> default_sweep() { return {3, 6, 9, 12, 15, 18, 21}; }

/// Everything needed for a run or a sweep. Default-constructed it is the
/// stock experiment: soil app, 4 tier-1 branches, both strategies.
struct Scenario {
  SoilAppParams application;
  HierarchyParams topology;
  std::vector<StrategySpec> strategies{{"cloud", {}, {}}, {"fog", {}, {}}};
  SimConfig simulation;
  std::vector<std::size_t> sweep = default_sweep();

  bool operator==(const Scenario&) const = default;
};

/// Builds the placement a strategy describes.
inline Placement make_placement(const StrategySpec& s, const ApplicationGraph& g, const Topology& t) {
  if (s.kind == "cloud") return cloud_placement(g, t);
  if (s.kind == "fog") return fog_placement(g, t);
  if (s.kind == "explicit") {
    auto p = explicit_placement(g, t, s.assignment);
    p.strategy = s.label();
    return p;
  }
  throw ParameterError("unknown strategy '" + s.kind + "'");
}

namespace detail {

using nlohmann::json;

// Line and column (1-based) of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  static void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw SemanticError(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, v] : j.items()) {
      (void)v;
      bool known = false;
      for (auto allowed : keys) known = known || k == allowed;
      if (!known) throw SemanticError(join_path(path, k), "unknown key");
    }
  }

  static std::string join_path(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  static double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SemanticError(path, "expected a number");
    return j.get<double>();
  }

  static std::uint64_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
      throw SemanticError(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
  }

  static std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SemanticError(path, "expected a string");
    return j.get<std::string>();
  }
};

inline LinkParams parse_link(const json& j, const std::string& path, LinkParams link) {
  Reader::expect_object(j, path, {"latency_ms", "bandwidth_bps"});
  if (j.contains("latency_ms")) {
    link.latency_ms = Reader::number(j["latency_ms"], path + ".latency_ms");
    if (!(link.latency_ms >= 0.0)) throw SemanticError(path + ".latency_ms", "latency must be >= 0");
  }
  if (j.contains("bandwidth_bps")) {
    if (j["bandwidth_bps"].is_null()) {
      link.bandwidth_bps.reset();
    } else {
      link.bandwidth_bps = Reader::number(j["bandwidth_bps"], path + ".bandwidth_bps");
      if (!(*link.bandwidth_bps > 0.0))
        throw SemanticError(path + ".bandwidth_bps", "bandwidth must be > 0 (null for unbounded)");
    }
  }
  return link;
}

inline StrategySpec parse_strategy(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s != "cloud" && s != "fog") throw SemanticError(path, "unknown strategy '" + s + "' (cloud | fog | {assign})");
    return {s, {}, {}};
  }
  Reader::expect_object(j, path, {"name", "assign"});
  StrategySpec spec{"explicit", {}, {}};
  if (j.contains("name")) spec.name = Reader::string(j["name"], path + ".name");
  if (!j.contains("assign")) throw SemanticError(path + ".assign", "explicit strategy needs an assignment map");
  if (!j["assign"].is_object()) throw SemanticError(path + ".assign", "expected an object");
  for (const auto& [module, target] : j["assign"].items()) {
    spec.assignment[module] = Reader::string(target, path + ".assign." + module);
  }
  return spec;
}

// Cross-field checks that need the built application and topology.
inline void check_semantics(const Scenario& s) {
  ApplicationGraph g;
  try {
    g = build_soil_app(s.application);
  } catch (const ParameterError& e) {
    throw SemanticError("application", e.what());
  }
  if (s.topology.num_tier1 == 0) throw SemanticError("topology.num_tier1", "must be >= 1");
  if (s.topology.sensors_per_tier1 == 0) throw SemanticError("topology.sensors_per_tier1", "must be >= 1");
  const auto& cap = s.topology.capacity;
  for (auto [name, v] : {std::pair{"cloud", cap.cloud_mips}, {"tier2", cap.tier2_mips}, {"tier1", cap.tier1_mips}}) {
    if (!(v > 0.0)) throw SemanticError(std::string("topology.capacity_mips.") + name, "must be > 0");
  }
  try {
    validate_config(s.simulation);
  } catch (const ParameterError& e) {
    throw SemanticError("simulation", e.what());
  }
  if (s.sweep.empty()) throw SemanticError("sweep", "needs at least one sensor count");
  for (auto n : s.sweep) {
    if (n < 1) throw SemanticError("sweep", "sensor counts must be >= 1");
  }
  if (s.strategies.empty()) throw SemanticError("strategy", "needs at least one strategy");
  const Topology t = build_hierarchy(s.topology);
  for (std::size_t i = 0; i < s.strategies.size(); ++i) {
    const auto& st = s.strategies[i];
    if (st.kind != "explicit") continue;
    for (const auto& [module, target] : st.assignment) {
      const auto field = "strategy.assign." + module;
      if (!g.find_module(module)) throw SemanticError(field, "unknown module '" + module + "'");
      if (target == "cloud" || target == "tier1" || target == "tier2") continue;
      auto id = t.find(target);
      if (!id) throw SemanticError(field, "unknown node '" + target + "'");
      if (!hosts_modules(t.node(*id).kind)) throw SemanticError(field, "node '" + target + "' cannot host modules");
    }
  }
}

}  // namespace detail

/// Parses a scenario document. Absent fields take their defaults; unknown
/// keys are rejected. Throws ParseError for malformed JSON and
/// SemanticError (naming the offending field) for invalid content.
inline Scenario parse_scenario(std::string_view text) {
  using detail::Reader;
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    throw ParseError("malformed scenario: " + msg, line, col);
  }

  Scenario s;
  Reader::expect_object(doc, "", {"application", "topology", "strategy", "simulation", "sweep"});

  if (doc.contains("application")) {
    const auto& a = doc["application"];
    Reader::expect_object(a, "application", {"tuples", "emission_ratios"});
    if (a.contains("tuples")) {
      if (!a["tuples"].is_object()) throw SemanticError("application.tuples", "expected an object");
      for (const auto& [name, spec] : a["tuples"].items()) {
        const std::string path = "application.tuples." + name;
        Reader::expect_object(spec, path, {"size_bytes", "cpu_length_mi"});
        TupleOverride ov;
        if (spec.contains("size_bytes")) {
          ov.size_bytes = Reader::count(spec["size_bytes"], path + ".size_bytes");
          if (*ov.size_bytes == 0) throw SemanticError(path + ".size_bytes", "must be > 0");
        }
        if (spec.contains("cpu_length_mi")) {
          ov.cpu_length_mi = Reader::number(spec["cpu_length_mi"], path + ".cpu_length_mi");
          if (!(*ov.cpu_length_mi >= 0.0)) throw SemanticError(path + ".cpu_length_mi", "must be >= 0");
        }
        s.application.tuples[name] = ov;
      }
    }
    if (a.contains("emission_ratios")) {
      if (!a["emission_ratios"].is_object()) throw SemanticError("application.emission_ratios", "expected an object");
      for (const auto& [name, ratio] : a["emission_ratios"].items()) {
        const std::string path = "application.emission_ratios." + name;
        auto r = Reader::count(ratio, path);
        if (r < 1 || r > 0xffffffffULL) throw SemanticError(path, "ratio must be >= 1");
        s.application.emission_ratios[name] = static_cast<std::uint32_t>(r);
      }
    }
  }

  if (doc.contains("topology")) {
    const auto& t = doc["topology"];
    Reader::expect_object(t, "topology", {"num_tier1", "sensors_per_tier1", "links", "capacity_mips"});
    if (t.contains("num_tier1")) s.topology.num_tier1 = Reader::count(t["num_tier1"], "topology.num_tier1");
    if (t.contains("sensors_per_tier1"))
      s.topology.sensors_per_tier1 = Reader::count(t["sensors_per_tier1"], "topology.sensors_per_tier1");
    if (t.contains("links")) {
      const auto& l = t["links"];
      Reader::expect_object(l, "topology.links", {"sensor", "display", "tier1", "tier2"});
      if (l.contains("sensor")) s.topology.sensor_link = detail::parse_link(l["sensor"], "topology.links.sensor", s.topology.sensor_link);
      if (l.contains("display"))
        s.topology.display_link = detail::parse_link(l["display"], "topology.links.display", s.topology.display_link);
      if (l.contains("tier1")) s.topology.tier1_link = detail::parse_link(l["tier1"], "topology.links.tier1", s.topology.tier1_link);
      if (l.contains("tier2")) s.topology.tier2_link = detail::parse_link(l["tier2"], "topology.links.tier2", s.topology.tier2_link);
    }
    if (t.contains("capacity_mips")) {
      const auto& c = t["capacity_mips"];
      Reader::expect_object(c, "topology.capacity_mips", {"cloud", "tier2", "tier1"});
      if (c.contains("cloud")) s.topology.capacity.cloud_mips = Reader::number(c["cloud"], "topology.capacity_mips.cloud");
      if (c.contains("tier2")) s.topology.capacity.tier2_mips = Reader::number(c["tier2"], "topology.capacity_mips.tier2");
      if (c.contains("tier1")) s.topology.capacity.tier1_mips = Reader::number(c["tier1"], "topology.capacity_mips.tier1");
    }
  }

  if (doc.contains("strategy")) {
    const auto& st = doc["strategy"];
    s.strategies.clear();
    if (st.is_array()) {
      for (std::size_t i = 0; i < st.size(); ++i) {
        s.strategies.push_back(detail::parse_strategy(st[i], "strategy[" + std::to_string(i) + "]"));
      }
    } else {
      s.strategies.push_back(detail::parse_strategy(st, "strategy"));
    }
  }

  if (doc.contains("simulation")) {
    const auto& m = doc["simulation"];
    Reader::expect_object(m, "simulation",
                          {"duration_ms", "emission_interval_ms", "emission_stop_ms", "emission_phase", "jitter_ms", "seed"});
    if (m.contains("duration_ms")) s.simulation.duration_ms = Reader::number(m["duration_ms"], "simulation.duration_ms");
    if (m.contains("emission_interval_ms"))
      s.simulation.emission_interval_ms = Reader::number(m["emission_interval_ms"], "simulation.emission_interval_ms");
    if (m.contains("emission_stop_ms")) {
      if (m["emission_stop_ms"].is_null()) {
        s.simulation.emission_stop_ms.reset();
      } else {
        s.simulation.emission_stop_ms = Reader::number(m["emission_stop_ms"], "simulation.emission_stop_ms");
      }
    }
    if (m.contains("emission_phase")) {
      auto p = Reader::string(m["emission_phase"], "simulation.emission_phase");
      if (p == "in_phase") {
        s.simulation.phase = EmissionPhase::kInPhase;
      } else if (p == "staggered") {
        s.simulation.phase = EmissionPhase::kStaggered;
      } else {
        throw SemanticError("simulation.emission_phase", "expected \"in_phase\" or \"staggered\"");
      }
    }
    if (m.contains("jitter_ms")) s.simulation.jitter_ms = Reader::number(m["jitter_ms"], "simulation.jitter_ms");
    if (m.contains("seed")) s.simulation.seed = Reader::count(m["seed"], "simulation.seed");
  }

  if (doc.contains("sweep")) {
    const auto& sw = doc["sweep"];
    if (!sw.is_array()) throw SemanticError("sweep", "expected an array of sensor counts");
    s.sweep.clear();
    for (std::size_t i = 0; i < sw.size(); ++i) {
      s.sweep.push_back(Reader::count(sw[i], "sweep[" + std::to_string(i) + "]"));
    }
  }

  detail::check_semantics(s);
  return s;
}

namespace detail {
inline nlohmann::ordered_json link_json(const LinkParams& l) {
  nlohmann::ordered_json j;
  j["latency_ms"] = l.latency_ms;
  j["bandwidth_bps"] = l.bandwidth_bps ? nlohmann::ordered_json(*l.bandwidth_bps) : nlohmann::ordered_json(nullptr);
  return j;
}
}  // namespace detail

/// Full scenario document with every field spelled out.
inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  using oj = nlohmann::ordered_json;
  oj doc;
  oj tuples = oj::object();
  for (const auto& [name, ov] : s.application.tuples) {
    oj t = oj::object();
    if (ov.size_bytes) t["size_bytes"] = *ov.size_bytes;
    if (ov.cpu_length_mi) t["cpu_length_mi"] = *ov.cpu_length_mi;
    tuples[name] = t;
  }
  oj ratios = oj::object();
  for (const auto& [name, r] : s.application.emission_ratios) ratios[name] = r;
  doc["application"] = {{"tuples", tuples}, {"emission_ratios", ratios}};

  doc["topology"]["num_tier1"] = s.topology.num_tier1;
  doc["topology"]["sensors_per_tier1"] = s.topology.sensors_per_tier1;
  doc["topology"]["links"]["sensor"] = detail::link_json(s.topology.sensor_link);
  doc["topology"]["links"]["display"] = detail::link_json(s.topology.display_link);
  doc["topology"]["links"]["tier1"] = detail::link_json(s.topology.tier1_link);
  doc["topology"]["links"]["tier2"] = detail::link_json(s.topology.tier2_link);
  doc["topology"]["capacity_mips"] = {{"cloud", s.topology.capacity.cloud_mips},
                                      {"tier2", s.topology.capacity.tier2_mips},
                                      {"tier1", s.topology.capacity.tier1_mips}};

  oj strategies = oj::array();
  for (const auto& st : s.strategies) {
    if (st.kind != "explicit") {
      strategies.push_back(st.kind);
      continue;
    }
    oj e;
    if (!st.name.empty()) e["name"] = st.name;
    e["assign"] = oj::object();
    for (const auto& [m, target] : st.assignment) e["assign"][m] = target;
    strategies.push_back(e);
  }
  doc["strategy"] = strategies;

  const auto& c = s.simulation;
  doc["simulation"]["duration_ms"] = c.duration_ms;
  doc["simulation"]["emission_interval_ms"] = c.emission_interval_ms;
  doc["simulation"]["emission_stop_ms"] = c.emission_stop_ms ? oj(*c.emission_stop_ms) : oj(nullptr);
  doc["simulation"]["emission_phase"] = std::string(to_string(c.phase));
  doc["simulation"]["jitter_ms"] = c.jitter_ms;
  doc["simulation"]["seed"] = c.seed;
  doc["sweep"] = s.sweep;
  return doc;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

}  // namespace fogsim
