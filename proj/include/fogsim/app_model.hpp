#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fogsim/error.hpp"

namespace fogsim {

/// Reserved endpoint names. They are not modules and never host work.
inline constexpr std::string_view kSensor = "SENSOR";
inline constexpr std::string_view kDisplay = "DISPLAY";

inline bool is_terminal_endpoint(std::string_view name) {
  return name == kSensor || name == kDisplay;
}

struct TupleType {
  std::string name;
  std::uint64_t size_bytes = 0;
  double cpu_length_mi = 0.0;

  bool operator==(const TupleType&) const = default;
};

/// One output produced per `ratio` inputs.
struct Emission {
  std::string output;
  std::uint32_t ratio = 1;

  bool operator==(const Emission&) const = default;
};

struct IoMapping {
  std::string input;
  std::vector<Emission> outputs;

  bool operator==(const IoMapping&) const = default;
};

struct AppModule {
  std::string name;
  double allocated_mips = 0.0;
  std::vector<IoMapping> io_map;

  bool operator==(const AppModule&) const = default;
};

struct AppEdge {
  std::string source;
  std::string destination;
  std::string tuple_type;

  bool operator==(const AppEdge&) const = default;
};

/// A declared sensor-to-display path, as a sequence of endpoint names.
struct AppLoop {
  std::string name;
  std::vector<std::string> endpoints;

  bool operator==(const AppLoop&) const = default;
};

/// The distributed data-flow graph. Plain data; use validate_dag() before
/// handing a hand-built graph to the simulator.
struct ApplicationGraph {
  std::string name;
  std::vector<TupleType> tuple_types;
  std::vector<AppModule> modules;
  std::vector<AppEdge> edges;
  std::vector<AppLoop> loops;

  const AppModule* find_module(std::string_view n) const {
    auto it = std::find_if(modules.begin(), modules.end(), [&](const auto& m) { return m.name == n; });
    return it == modules.end() ? nullptr : &*it;
  }

  const TupleType* find_tuple_type(std::string_view n) const {
    auto it = std::find_if(tuple_types.begin(), tuple_types.end(), [&](const auto& t) { return t.name == n; });
    return it == tuple_types.end() ? nullptr : &*it;
  }

  std::optional<std::size_t> module_index(std::string_view n) const {
    for (std::size_t i = 0; i < modules.size(); ++i) {
      if (modules[i].name == n) return i;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> tuple_index(std::string_view n) const {
    for (std::size_t i = 0; i < tuple_types.size(); ++i) {
      if (tuple_types[i].name == n) return i;
    }
    return std::nullopt;
  }

  /// The edge carrying tuple type `t`, if exactly one does.
  const AppEdge* edge_for(std::string_view t) const {
    const AppEdge* found = nullptr;
    for (const auto& e : edges) {
      if (e.tuple_type == t) {
        if (found != nullptr) return nullptr;
        found = &e;
      }
    }
    return found;
  }

  bool operator==(const ApplicationGraph&) const = default;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class DagViolation {
  kTupleType,      // bad size / MI / duplicate name
  kModule,         // bad MIPS / duplicate or reserved name / bad io_map
  kEdge,           // dangling endpoint or tuple type
  kEdgeTuple,      // tuple type not on exactly one edge
  kCycle,
  kUnreachable,    // module not reachable from SENSOR
  kDeadEnd,        // module cannot reach DISPLAY
  kLoop,           // loop is not a SENSOR..DISPLAY path in the edge set
};

inline std::string_view to_string(DagViolation v) {
  switch (v) {
    case DagViolation::kTupleType: return "tuple-type";
    case DagViolation::kModule: return "module";
    case DagViolation::kEdge: return "edge";
    case DagViolation::kEdgeTuple: return "edge-tuple";
    case DagViolation::kCycle: return "cycle";
    case DagViolation::kUnreachable: return "unreachable";
    case DagViolation::kDeadEnd: return "dead-end";
    case DagViolation::kLoop: return "loop";
  }
  return "unknown";
}

using DagReport = ValidationReport<DagViolation>;

namespace detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Strongly connected components of the module-to-module edge relation
// (Tarjan). Only components that contain a cycle are returned, each sorted.
inline std::vector<std::vector<std::string>> cyclic_components(const ApplicationGraph& g) {
  const std::size_t n = g.modules.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> self_loop(n, false);
  for (const auto& e : g.edges) {
    auto s = g.module_index(e.source);
    auto d = g.module_index(e.destination);
    if (!s || !d) continue;
    adj[*s].push_back(*d);
    if (*s == *d) self_loop[*s] = true;
  }

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::vector<std::vector<std::string>> result;

  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(g.modules[w].name);
      } while (w != v);
      if (comp.size() > 1 || self_loop[v]) {
        std::sort(comp.begin(), comp.end());
        result.push_back(std::move(comp));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strongconnect(v);
  }
  std::sort(result.begin(), result.end());
  return result;
}

inline std::set<std::string> reachable(const ApplicationGraph& g, std::string_view start, bool forward) {
  std::set<std::string> seen{std::string(start)};
  std::vector<std::string> frontier{std::string(start)};
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& e : g.edges) {
      const auto& from = forward ? e.source : e.destination;
      const auto& to = forward ? e.destination : e.source;
      if (from == cur && seen.insert(to).second) frontier.push_back(to);
    }
  }
  return seen;
}

inline bool is_endpoint(const ApplicationGraph& g, std::string_view n) {
  return is_terminal_endpoint(n) || g.find_module(n) != nullptr;
}

}  // namespace detail

/// Checks every structural invariant of the graph. Violations are returned,
/// never thrown; an empty report means the graph is valid.
inline DagReport validate_dag(const ApplicationGraph& g) {
  DagReport report;
  auto add = [&](DagViolation k, std::string msg) { report.push_back({k, std::move(msg)}); };

  std::set<std::string> names;
  for (const auto& t : g.tuple_types) {
    if (!names.insert(t.name).second) add(DagViolation::kTupleType, "duplicate tuple type '" + t.name + "'");
    if (t.size_bytes == 0) add(DagViolation::kTupleType, "tuple type '" + t.name + "' has size 0");
    if (!(t.cpu_length_mi >= 0.0)) add(DagViolation::kTupleType, "tuple type '" + t.name + "' has negative MI");
  }

  names.clear();
  for (const auto& m : g.modules) {
    if (is_terminal_endpoint(m.name)) add(DagViolation::kModule, "module uses reserved name '" + m.name + "'");
    if (!names.insert(m.name).second) add(DagViolation::kModule, "duplicate module '" + m.name + "'");
    if (!(m.allocated_mips > 0.0)) add(DagViolation::kModule, "module '" + m.name + "' has non-positive MIPS");
    for (const auto& io : m.io_map) {
      if (!g.find_tuple_type(io.input))
        add(DagViolation::kModule, "module '" + m.name + "' maps unknown input '" + io.input + "'");
      for (const auto& out : io.outputs) {
        if (!g.find_tuple_type(out.output))
          add(DagViolation::kModule, "module '" + m.name + "' maps unknown output '" + out.output + "'");
        if (out.ratio < 1)
          add(DagViolation::kModule, "module '" + m.name + "' has emission ratio 0 for '" + out.output + "'");
        const AppEdge* e = g.edge_for(out.output);
        if (e && e->source != m.name)
          add(DagViolation::kModule,
              "module '" + m.name + "' emits '" + out.output + "' but that edge leaves '" + e->source + "'");
      }
    }
  }

  for (const auto& e : g.edges) {
    if (!detail::is_endpoint(g, e.source)) add(DagViolation::kEdge, "edge source '" + e.source + "' does not exist");
    if (!detail::is_endpoint(g, e.destination))
      add(DagViolation::kEdge, "edge destination '" + e.destination + "' does not exist");
    if (e.source == kDisplay || e.destination == kSensor)
      add(DagViolation::kEdge, "edge " + e.source + "->" + e.destination + " runs against the data flow");
    if (!g.find_tuple_type(e.tuple_type))
      add(DagViolation::kEdge, "edge " + e.source + "->" + e.destination + " carries unknown tuple type '" +
                                   e.tuple_type + "'");
  }
  for (const auto& t : g.tuple_types) {
    auto n = std::count_if(g.edges.begin(), g.edges.end(), [&](const auto& e) { return e.tuple_type == t.name; });
    if (n != 1)
      add(DagViolation::kEdgeTuple, "tuple type '" + t.name + "' appears on " + std::to_string(n) + " edges");
  }

  for (const auto& comp : detail::cyclic_components(g)) {
    add(DagViolation::kCycle, "cycle among {" + detail::join(comp, ", ") + "}");
  }

  const auto from_sensor = detail::reachable(g, kSensor, true);
  const auto to_display = detail::reachable(g, kDisplay, false);
  for (const auto& m : g.modules) {
    if (!from_sensor.count(m.name)) add(DagViolation::kUnreachable, "module '" + m.name + "' is not reachable from SENSOR");
    if (!to_display.count(m.name)) add(DagViolation::kDeadEnd, "module '" + m.name + "' cannot reach DISPLAY");
  }

  for (const auto& loop : g.loops) {
    const auto& ep = loop.endpoints;
    if (ep.size() < 2 || ep.front() != kSensor || ep.back() != kDisplay) {
      add(DagViolation::kLoop, "loop '" + loop.name + "' must start at SENSOR and end at DISPLAY");
      continue;
    }
    for (std::size_t i = 0; i + 1 < ep.size(); ++i) {
      bool found = std::any_of(g.edges.begin(), g.edges.end(),
                               [&](const auto& e) { return e.source == ep[i] && e.destination == ep[i + 1]; });
      if (!found) add(DagViolation::kLoop, "loop '" + loop.name + "' uses missing edge " + ep[i] + "->" + ep[i + 1]);
    }
  }
  return report;
}

/// A declared loop together with the tuple types along its path.
struct ResolvedLoop {
  std::string name;
  std::vector<std::string> endpoints;
  std::vector<std::string> tuple_types;
};

/// Resolves each declared loop to its tuple-type sequence.
/// Throws InconsistencyError when a loop step has no (or no unique) edge.
inline std::vector<ResolvedLoop> loops_of(const ApplicationGraph& g) {
  std::vector<ResolvedLoop> out;
  for (const auto& loop : g.loops) {
    ResolvedLoop r{loop.name, loop.endpoints, {}};
    for (std::size_t i = 0; i + 1 < loop.endpoints.size(); ++i) {
      const AppEdge* hit = nullptr;
      for (const auto& e : g.edges) {
        if (e.source != loop.endpoints[i] || e.destination != loop.endpoints[i + 1]) continue;
        if (hit)
          throw InconsistencyError("loop '" + loop.name + "' step " + e.source + "->" + e.destination +
                                   " is ambiguous");
        hit = &e;
      }
      if (!hit)
        throw InconsistencyError("loop '" + loop.name + "' references missing edge " + loop.endpoints[i] + "->" +
                                 loop.endpoints[i + 1]);
      r.tuple_types.push_back(hit->tuple_type);
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Modules in a topological order of the module-to-module edges.
/// Throws InconsistencyError if the graph has a cycle.
inline std::vector<std::string> topological_order(const ApplicationGraph& g) {
  const std::size_t n = g.modules.size();
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    auto s = g.module_index(e.source);
    auto d = g.module_index(e.destination);
    if (s && d) {
      adj[*s].push_back(*d);
      ++indeg[*d];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = n; i-- > 0;) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  std::vector<std::string> order;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    order.push_back(g.modules[v].name);
    for (auto w : adj[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  if (order.size() != n) throw InconsistencyError("application graph '" + g.name + "' has a cycle");
  return order;
}

// ---------------------------------------------------------------------------
// Built-in soil management application
// ---------------------------------------------------------------------------

struct TupleOverride {
  std::optional<std::uint64_t> size_bytes;
  std::optional<double> cpu_length_mi;

  bool operator==(const TupleOverride&) const = default;
};

/// Overrides for the built-in application. Keys are tuple type names
/// (t1..t8); emission ratios are keyed by the produced tuple type.
struct SoilAppParams {
  std::map<std::string, TupleOverride> tuples;
  std::map<std::string, std::uint32_t> emission_ratios;

  bool operator==(const SoilAppParams&) const = default;
};

namespace soil {

inline constexpr std::string_view kSense = "Sense";
inline constexpr std::string_view kDataAggregation = "DataAggregation";
inline constexpr std::string_view kStatusGeneration = "StatusGeneration";
inline constexpr std::string_view kEventDetection = "EventDetection";
inline constexpr std::string_view kSoilAnalytics = "SoilAnalytics";

inline constexpr std::uint64_t kDefaultTupleBytes = 100;

// Tuple demands are sized so each processing step takes 10 ms at the
// module's MIPS allocation. Display-bound tuples are never executed.
struct TupleDefault {
  std::string_view name;
  double cpu_length_mi;
};
inline constexpr TupleDefault kTupleDefaults[] = {
    {"t1", 5.0}, {"t2", 6.0}, {"t3", 5.0}, {"t4", 12.0},
    {"t5", 12.0}, {"t6", 0.0}, {"t7", 0.0}, {"t8", 0.0},
};

}  // namespace soil

/// The soil-management application: Sense -> DataAggregation fanning out to
/// StatusGeneration, EventDetection and SoilAnalytics, each reporting to the
/// display. Three loops: status, alert, recommendation.
inline ApplicationGraph build_soil_app(const SoilAppParams& params = {}) {
  ApplicationGraph g;
  g.name = "soil-management";
  for (const auto& d : soil::kTupleDefaults) {
    g.tuple_types.push_back({std::string(d.name), soil::kDefaultTupleBytes, d.cpu_length_mi});
  }

  for (const auto& [name, ov] : params.tuples) {
    auto it = std::find_if(g.tuple_types.begin(), g.tuple_types.end(), [&](const auto& t) { return t.name == name; });
    if (it == g.tuple_types.end()) throw ParameterError("unknown tuple type '" + name + "'");
    if (ov.size_bytes) {
      if (*ov.size_bytes == 0) throw ParameterError("tuple type '" + name + "': size_bytes must be > 0");
      it->size_bytes = *ov.size_bytes;
    }
    if (ov.cpu_length_mi) {
      if (!(*ov.cpu_length_mi >= 0.0)) throw ParameterError("tuple type '" + name + "': cpu_length_mi must be >= 0");
      it->cpu_length_mi = *ov.cpu_length_mi;
    }
  }
  for (const auto& [name, ratio] : params.emission_ratios) {
    if (name == "t1" || !g.find_tuple_type(name))
      throw ParameterError("emission ratio names '" + name + "', which no module produces");
    if (ratio < 1) throw ParameterError("emission ratio for '" + name + "' must be >= 1");
  }
  auto ratio = [&](const char* out) -> std::uint32_t {
    auto it = params.emission_ratios.find(out);
    return it == params.emission_ratios.end() ? 1u : it->second;
  };

  const std::string sense(soil::kSense), agg(soil::kDataAggregation), status(soil::kStatusGeneration),
      event(soil::kEventDetection), analytics(soil::kSoilAnalytics);
  const std::string sensor(kSensor), display(kDisplay);

  g.modules = {
      {sense, 500.0, {{"t1", {{"t2", ratio("t2")}}}}},
      {agg, 600.0, {{"t2", {{"t3", ratio("t3")}, {"t4", ratio("t4")}, {"t5", ratio("t5")}}}}},
      {status, 500.0, {{"t3", {{"t6", ratio("t6")}}}}},
      {event, 1200.0, {{"t4", {{"t7", ratio("t7")}}}}},
      {analytics, 1200.0, {{"t5", {{"t8", ratio("t8")}}}}},
  };
  g.edges = {
      {sensor, sense, "t1"},  {sense, agg, "t2"},      {agg, status, "t3"},
      {agg, event, "t4"},     {agg, analytics, "t5"},  {status, display, "t6"},
      {event, display, "t7"}, {analytics, display, "t8"},
  };
  g.loops = {
      {"status", {sensor, sense, agg, status, display}},
      {"alert", {sensor, sense, agg, event, display}},
      {"recommendation", {sensor, sense, agg, analytics, display}},
  };
  return g;
}

}  // namespace fogsim
