#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogsim/error.hpp"

namespace fogsim {

struct NodeId {
  std::size_t value = 0;

  auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind { kCloud, kFogTier2, kFogTier1, kSensor, kDisplay };

inline std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kCloud: return "CLOUD";
    case NodeKind::kFogTier2: return "FOG_T2";
    case NodeKind::kFogTier1: return "FOG_T1";
    case NodeKind::kSensor: return "SENSOR";
    case NodeKind::kDisplay: return "DISPLAY";
  }
  return "UNKNOWN";
}

inline bool hosts_modules(NodeKind k) {
  return k == NodeKind::kCloud || k == NodeKind::kFogTier2 || k == NodeKind::kFogTier1;
}

struct NetNode {
  std::string name;
  NodeKind kind = NodeKind::kSensor;
  double capacity_mips = 0.0;
};

/// Per-link network parameters. An empty bandwidth means unbounded.
struct LinkParams {
  double latency_ms = 0.0;
  std::optional<double> bandwidth_bps;

  bool operator==(const LinkParams&) const = default;
};

struct NetLink {
  NodeId a;
  NodeId b;
  LinkParams params;
};

/// Unordered node pair identifying a link.
struct LinkKey {
  NodeId lo;
  NodeId hi;

  static LinkKey of(NodeId x, NodeId y) { return x < y ? LinkKey{x, y} : LinkKey{y, x}; }
  auto operator<=>(const LinkKey&) const = default;
};

/// Nodes and links. Routing assumes the link graph is a tree; check with
/// validate_topology() when the topology is hand-built.
class Topology {
 public:
  NodeId add_node(std::string name, NodeKind kind, double capacity_mips = 0.0) {
    if (by_name_.count(name)) throw ParameterError("duplicate node '" + name + "'");
    NodeId id{nodes_.size()};
    by_name_.emplace(name, id);
    nodes_.push_back({std::move(name), kind, capacity_mips});
    adjacency_.emplace_back();
    return id;
  }

  /// Adds a link between existing nodes. Self-links and parallel links are
  /// accepted here and reported by validate_topology().
  void add_link(NodeId a, NodeId b, LinkParams params) {
    check(a);
    check(b);
    if (params.latency_ms < 0.0) throw ParameterError("link latency must be >= 0");
    if (params.bandwidth_bps && !(*params.bandwidth_bps > 0.0)) throw ParameterError("link bandwidth must be > 0");
    links_.push_back({a, b, params});
    adjacency_[a.value].push_back({b, links_.size() - 1});
    if (a != b) adjacency_[b.value].push_back({a, links_.size() - 1});
  }

  void set_capacity(NodeId id, double mips) {
    check(id);
    nodes_[id.value].capacity_mips = mips;
  }

  const std::vector<NetNode>& nodes() const { return nodes_; }
  const std::vector<NetLink>& links() const { return links_; }
  std::size_t size() const { return nodes_.size(); }

  const NetNode& node(NodeId id) const {
    check(id);
    return nodes_[id.value];
  }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  NodeId id_of(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw LookupError("unknown node '" + std::string(name) + "'");
  }

  std::vector<NodeId> nodes_of_kind(NodeKind kind) const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].kind == kind) out.push_back(NodeId{i});
    }
    return out;
  }

  /// The link joining a and b (first one if several).
  const NetLink* link_between(NodeId a, NodeId b) const {
    check(a);
    for (const auto& [peer, idx] : adjacency_[a.value]) {
      if (peer == b) return &links_[idx];
    }
    return nullptr;
  }

  std::vector<NodeId> neighbours(NodeId id) const {
    check(id);
    std::vector<NodeId> out;
    for (const auto& [peer, idx] : adjacency_[id.value]) {
      (void)idx;
      out.push_back(peer);
    }
    return out;
  }

  /// Path from src to dst, both included. On a tree the path is unique.
  std::vector<NodeId> route(NodeId src, NodeId dst) const {
    check(src);
    check(dst);
    if (src == dst) return {src};
    std::vector<std::optional<NodeId>> parent(nodes_.size());
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<NodeId> frontier{src};
    seen[src.value] = true;
    while (!frontier.empty() && !seen[dst.value]) {
      NodeId cur = frontier.front();
      frontier.pop_front();
      for (const auto& [peer, idx] : adjacency_[cur.value]) {
        (void)idx;
        if (seen[peer.value]) continue;
        seen[peer.value] = true;
        parent[peer.value] = cur;
        frontier.push_back(peer);
      }
    }
    if (!seen[dst.value])
      throw InconsistencyError("no route from '" + nodes_[src.value].name + "' to '" + nodes_[dst.value].name + "'");
    std::vector<NodeId> path{dst};
    while (path.back() != src) path.push_back(*parent[path.back().value]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  std::vector<std::string> route(std::string_view src, std::string_view dst) const {
    std::vector<std::string> out;
    for (auto id : route(id_of(src), id_of(dst))) out.push_back(nodes_[id.value].name);
    return out;
  }

 private:
  struct Adjacent {
    NodeId peer;
    std::size_t link;
  };

  void check(NodeId id) const {
    if (id.value >= nodes_.size()) throw LookupError("unknown node id " + std::to_string(id.value));
  }

  std::vector<NetNode> nodes_;
  std::vector<NetLink> links_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::map<std::string, NodeId, std::less<>> by_name_;
};

// ---------------------------------------------------------------------------
// The cloud / tier-2 / tier-1 hierarchy
// ---------------------------------------------------------------------------

struct CapacityParams {
  double cloud_mips = 40960.0;
  double tier2_mips = 8192.0;
  double tier1_mips = 6144.0;

  bool operator==(const CapacityParams&) const = default;
};

struct HierarchyParams {
  std::size_t num_tier1 = 4;
  std::size_t sensors_per_tier1 = 3;
  LinkParams sensor_link{2.0, std::nullopt};    // sensor - tier1
  LinkParams display_link{2.0, std::nullopt};   // display - tier1
  LinkParams tier1_link{4.0, std::nullopt};     // tier1 - tier2
  LinkParams tier2_link{100.0, std::nullopt};   // tier2 - cloud
  CapacityParams capacity;

  bool operator==(const HierarchyParams&) const = default;
};

namespace names {
inline constexpr std::string_view kCloud = "cloud";
inline constexpr std::string_view kTier2 = "tier2";
inline std::string tier1(std::size_t i) { return "tier1-" + std::to_string(i); }
inline std::string sensor(std::size_t branch, std::size_t j) {
  return "sensor-" + std::to_string(branch) + "-" + std::to_string(j);
}
inline std::string display(std::size_t branch) { return "display-" + std::to_string(branch); }
}  // namespace names

/// cloud - tier2 - {tier1-i} with sensors and one display under each tier1.
inline Topology build_hierarchy(const HierarchyParams& p = {}) {
  if (p.num_tier1 == 0) throw ParameterError("num_tier1 must be >= 1");
  if (p.sensors_per_tier1 == 0) throw ParameterError("sensors_per_tier1 must be >= 1");

  Topology t;
  auto cloud = t.add_node(std::string(names::kCloud), NodeKind::kCloud, p.capacity.cloud_mips);
  auto tier2 = t.add_node(std::string(names::kTier2), NodeKind::kFogTier2, p.capacity.tier2_mips);
  t.add_link(tier2, cloud, p.tier2_link);
  for (std::size_t i = 0; i < p.num_tier1; ++i) {
    auto t1 = t.add_node(names::tier1(i), NodeKind::kFogTier1, p.capacity.tier1_mips);
    t.add_link(t1, tier2, p.tier1_link);
  }
  for (std::size_t i = 0; i < p.num_tier1; ++i) {
    auto t1 = t.id_of(names::tier1(i));
    for (std::size_t j = 0; j < p.sensors_per_tier1; ++j) {
      t.add_link(t.add_node(names::sensor(i, j), NodeKind::kSensor), t1, p.sensor_link);
    }
    t.add_link(t.add_node(names::display(i), NodeKind::kDisplay), t1, p.display_link);
  }
  return t;
}

/// The tier-1 node a sensor or display hangs off (the node itself for a
/// tier-1 node).
inline std::optional<NodeId> branch_of(const Topology& t, NodeId id) {
  const auto& n = t.node(id);
  if (n.kind == NodeKind::kFogTier1) return id;
  if (n.kind != NodeKind::kSensor && n.kind != NodeKind::kDisplay) return std::nullopt;
  for (auto peer : t.neighbours(id)) {
    if (t.node(peer).kind == NodeKind::kFogTier1) return peer;
  }
  return std::nullopt;
}

/// The display attached to a tier-1 node, if any.
inline std::optional<NodeId> display_of(const Topology& t, NodeId tier1) {
  for (auto peer : t.neighbours(tier1)) {
    if (t.node(peer).kind == NodeKind::kDisplay) return peer;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class TopologyViolation {
  kSelfLink,
  kDuplicateLink,
  kCycle,
  kDisconnected,
  kLinkCount,
  kNodeCount,       // not exactly one CLOUD / FOG_T2
  kAttachment,      // tier-1 / sensor / display attached to the wrong tier
  kCapacityOrder,   // CLOUD > FOG_T2 > FOG_T1 violated
  kCapacity,        // SENSOR/DISPLAY with capacity, compute node without
};

inline std::string_view to_string(TopologyViolation v) {
  switch (v) {
    case TopologyViolation::kSelfLink: return "self-link";
    case TopologyViolation::kDuplicateLink: return "duplicate-link";
    case TopologyViolation::kCycle: return "cycle";
    case TopologyViolation::kDisconnected: return "disconnected";
    case TopologyViolation::kLinkCount: return "link-count";
    case TopologyViolation::kNodeCount: return "node-count";
    case TopologyViolation::kAttachment: return "attachment";
    case TopologyViolation::kCapacityOrder: return "capacity-order";
    case TopologyViolation::kCapacity: return "capacity";
  }
  return "unknown";
}

using TopologyReport = ValidationReport<TopologyViolation>;

inline TopologyReport validate_topology(const Topology& t) {
  TopologyReport report;
  auto add = [&](TopologyViolation k, std::string msg) { report.push_back({k, std::move(msg)}); };
  const auto& nodes = t.nodes();
  auto name = [&](NodeId id) { return nodes[id.value].name; };

  // Union-find over links: a link joining two already-connected nodes
  // closes a cycle.
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<LinkKey, int> seen_pairs;
  for (const auto& l : t.links()) {
    if (l.a == l.b) {
      add(TopologyViolation::kSelfLink, "self-link on '" + name(l.a) + "'");
      continue;
    }
    if (++seen_pairs[LinkKey::of(l.a, l.b)] > 1) {
      add(TopologyViolation::kDuplicateLink, "duplicate link " + name(l.a) + "--" + name(l.b));
      continue;
    }
    auto ra = root(l.a.value), rb = root(l.b.value);
    if (ra == rb) {
      add(TopologyViolation::kCycle, "link " + name(l.a) + "--" + name(l.b) + " closes a cycle");
    } else {
      parent[ra] = rb;
    }
  }
  if (!nodes.empty()) {
    auto r0 = root(0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      if (root(i) != r0) {
        add(TopologyViolation::kDisconnected, "node '" + nodes[i].name + "' is disconnected from '" + nodes[0].name + "'");
      }
    }
    if (t.links().size() != nodes.size() - 1) {
      add(TopologyViolation::kLinkCount, std::to_string(t.links().size()) + " links for " +
                                             std::to_string(nodes.size()) + " nodes (a tree needs " +
                                             std::to_string(nodes.size() - 1) + ")");
    }
  }

  auto clouds = t.nodes_of_kind(NodeKind::kCloud);
  auto tier2s = t.nodes_of_kind(NodeKind::kFogTier2);
  if (clouds.size() != 1) add(TopologyViolation::kNodeCount, std::to_string(clouds.size()) + " CLOUD nodes (need 1)");
  if (tier2s.size() != 1) add(TopologyViolation::kNodeCount, std::to_string(tier2s.size()) + " FOG_T2 nodes (need 1)");

  auto peers_of_kind = [&](NodeId id, NodeKind kind) {
    std::size_t n = 0;
    for (auto p : t.neighbours(id)) n += nodes[p.value].kind == kind;
    return n;
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeId id{i};
    const auto& n = nodes[i];
    switch (n.kind) {
      case NodeKind::kCloud:
      case NodeKind::kFogTier2:
        break;
      case NodeKind::kFogTier1:
        if (peers_of_kind(id, NodeKind::kFogTier2) != 1)
          add(TopologyViolation::kAttachment, "tier-1 node '" + n.name + "' must link to the FOG_T2 node");
        break;
      case NodeKind::kSensor:
      case NodeKind::kDisplay: {
        auto degree = t.neighbours(id).size();
        if (degree != 1 || peers_of_kind(id, NodeKind::kFogTier1) != 1)
          add(TopologyViolation::kAttachment, std::string(to_string(n.kind)) + " '" + n.name +
                                                  "' must link to exactly one FOG_T1 node and nothing else");
        break;
      }
    }
    if (hosts_modules(n.kind) && !(n.capacity_mips > 0.0))
      add(TopologyViolation::kCapacity, "compute node '" + n.name + "' has no capacity");
    if (!hosts_modules(n.kind) && n.capacity_mips != 0.0)
      add(TopologyViolation::kCapacity, std::string(to_string(n.kind)) + " '" + n.name + "' must have capacity 0");
  }

  auto cap = [&](NodeId id) { return nodes[id.value].capacity_mips; };
  for (auto c : clouds) {
    for (auto f : tier2s) {
      if (!(cap(c) > cap(f)))
        add(TopologyViolation::kCapacityOrder, "CLOUD '" + name(c) + "' capacity " + std::to_string(cap(c)) +
                                                   " is not above FOG_T2 '" + name(f) + "' capacity " +
                                                   std::to_string(cap(f)));
    }
  }
  for (auto f : tier2s) {
    for (auto t1 : t.nodes_of_kind(NodeKind::kFogTier1)) {
      if (!(cap(f) > cap(t1)))
        add(TopologyViolation::kCapacityOrder, "FOG_T2 '" + name(f) + "' capacity " + std::to_string(cap(f)) +
                                                   " is not above FOG_T1 '" + name(t1) + "' capacity " +
                                                   std::to_string(cap(t1)));
    }
  }
  return report;
}

}  // namespace fogsim
