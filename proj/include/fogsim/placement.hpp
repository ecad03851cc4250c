#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fogsim/app_model.hpp"
#include "fogsim/error.hpp"
#include "fogsim/topology.hpp"

namespace fogsim {

/// Module name -> hosting nodes. A module listed with several hosts is
/// instantiated once per host (the fog strategy replicates tier-1 modules).
struct Placement {
  std::string strategy;
  std::map<std::string, std::vector<NodeId>> assignment;

  const std::vector<NodeId>* hosts_of(const std::string& module) const {
    auto it = assignment.find(module);
    return it == assignment.end() ? nullptr : &it->second;
  }

  bool operator==(const Placement&) const = default;
};

/// Allocated MIPS per hosting node, summed over module instances.
inline std::map<NodeId, double> host_loads(const Placement& p, const ApplicationGraph& g) {
  std::map<NodeId, double> load;
  for (const auto& [module, hosts] : p.assignment) {
    const AppModule* m = g.find_module(module);
    if (!m) continue;
    for (auto h : hosts) load[h] += m->allocated_mips;
  }
  return load;
}

enum class PlacementViolation {
  kUnassigned,
  kUnknownModule,
  kIllegalHost,
  kDuplicateHost,
  kOverload,
};

inline std::string_view to_string(PlacementViolation v) {
  switch (v) {
    case PlacementViolation::kUnassigned: return "unassigned";
    case PlacementViolation::kUnknownModule: return "unknown-module";
    case PlacementViolation::kIllegalHost: return "illegal-host";
    case PlacementViolation::kDuplicateHost: return "duplicate-host";
    case PlacementViolation::kOverload: return "overload";
  }
  return "unknown";
}

using PlacementReport = ValidationReport<PlacementViolation>;

namespace detail {
inline std::string format_mips(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}
}  // namespace detail

inline PlacementReport validate_placement(const Placement& p, const ApplicationGraph& g, const Topology& t) {
  PlacementReport report;
  auto add = [&](PlacementViolation k, std::string msg) { report.push_back({k, std::move(msg)}); };

  for (const auto& m : g.modules) {
    const auto* hosts = p.hosts_of(m.name);
    if (!hosts || hosts->empty()) add(PlacementViolation::kUnassigned, "module '" + m.name + "' is not placed");
  }
  for (const auto& [module, hosts] : p.assignment) {
    if (!g.find_module(module)) add(PlacementViolation::kUnknownModule, "placement names unknown module '" + module + "'");
    std::set<NodeId> distinct;
    for (auto h : hosts) {
      if (h.value >= t.size()) {
        add(PlacementViolation::kIllegalHost, "module '" + module + "' placed on unknown node id " + std::to_string(h.value));
        continue;
      }
      const auto& node = t.node(h);
      if (!hosts_modules(node.kind))
        add(PlacementViolation::kIllegalHost, "module '" + module + "' placed on " + std::string(to_string(node.kind)) +
                                                  " node '" + node.name + "'");
      if (!distinct.insert(h).second)
        add(PlacementViolation::kDuplicateHost, "module '" + module + "' placed twice on '" + node.name + "'");
    }
  }
  for (const auto& [host, load] : host_loads(p, g)) {
    if (host.value >= t.size()) continue;
    const auto& node = t.node(host);
    if (load > node.capacity_mips) {
      add(PlacementViolation::kOverload, "node '" + node.name + "' load " + detail::format_mips(load) + " MIPS exceeds capacity " +
                                             detail::format_mips(node.capacity_mips) + " by " +
                                             detail::format_mips(load - node.capacity_mips));
    }
  }
  return report;
}

namespace detail {
inline void require_feasible(const Placement& p, const ApplicationGraph& g, const Topology& t) {
  for (const auto& v : validate_placement(p, g, t)) {
    if (v.kind == PlacementViolation::kOverload) throw FeasibilityError(p.strategy + " placement: " + v.message);
  }
}

inline NodeId single_node(const Topology& t, NodeKind kind) {
  auto ids = t.nodes_of_kind(kind);
  if (ids.size() != 1)
    throw ConfigurationError("topology has " + std::to_string(ids.size()) + " " + std::string(to_string(kind)) +
                             " nodes, expected 1");
  return ids.front();
}
}  // namespace detail

/// Every module on the cloud node, one instance each.
inline Placement cloud_placement(const ApplicationGraph& g, const Topology& t) {
  Placement p{"cloud", {}};
  const NodeId cloud = detail::single_node(t, NodeKind::kCloud);
  for (const auto& m : g.modules) p.assignment[m.name] = {cloud};
  detail::require_feasible(p, g, t);
  return p;
}

/// The default tier-1 module set of the fog strategy.
inline std::vector<std::string> default_tier1_modules() {
  return {std::string(soil::kSense), std::string(soil::kDataAggregation)};
}

/// Modules in `tier1_modules` get one instance per tier-1 node; all other
/// modules get a single instance on the tier-2 node.
inline Placement fog_placement(const ApplicationGraph& g, const Topology& t,
                               const std::vector<std::string>& tier1_modules = default_tier1_modules()) {
  Placement p{"fog", {}};
  const NodeId tier2 = detail::single_node(t, NodeKind::kFogTier2);
  const auto tier1 = t.nodes_of_kind(NodeKind::kFogTier1);
  if (tier1.empty()) throw ConfigurationError("topology has no FOG_T1 nodes");
  for (const auto& name : tier1_modules) {
    if (!g.find_module(name)) throw LookupError("fog placement names unknown module '" + name + "'");
  }
  const std::set<std::string> edge_set(tier1_modules.begin(), tier1_modules.end());
  for (const auto& m : g.modules) {
    if (edge_set.count(m.name)) {
      p.assignment[m.name] = tier1;
    } else {
      p.assignment[m.name] = {tier2};
    }
  }
  detail::require_feasible(p, g, t);
  return p;
}

/// Explicit assignment. Each value is a node name, or one of the tier
/// keywords "cloud", "tier2", "tier1" ("tier1" replicates the module on
/// every tier-1 node).
inline Placement explicit_placement(const ApplicationGraph& g, const Topology& t,
                                    const std::map<std::string, std::string>& assignment) {
  Placement p{"explicit", {}};
  for (const auto& [module, target] : assignment) {
    if (!g.find_module(module)) throw LookupError("placement names unknown module '" + module + "'");
    if (target == "tier1") {
      p.assignment[module] = t.nodes_of_kind(NodeKind::kFogTier1);
      if (p.assignment[module].empty()) throw ConfigurationError("topology has no FOG_T1 nodes");
    } else if (target == "tier2" && !t.find(target)) {
      p.assignment[module] = {detail::single_node(t, NodeKind::kFogTier2)};
    } else if (target == "cloud" && !t.find(target)) {
      p.assignment[module] = {detail::single_node(t, NodeKind::kCloud)};
    } else {
      p.assignment[module] = {t.id_of(target)};
    }
  }
  for (const auto& v : validate_placement(p, g, t)) {
    if (v.kind == PlacementViolation::kOverload) throw FeasibilityError("explicit placement: " + v.message);
    if (v.kind == PlacementViolation::kIllegalHost) throw ConfigurationError("explicit placement: " + v.message);
  }
  return p;
}

}  // namespace fogsim
