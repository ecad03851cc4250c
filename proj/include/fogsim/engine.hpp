#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "fogsim/app_model.hpp"
#include "fogsim/error.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/placement.hpp"
#include "fogsim/topology.hpp"

namespace fogsim {

/// Simulated time in integer nanoseconds. Every delay is quantised once on
/// entry, so latency sums and decompositions are exact.
using SimTime = std::int64_t;

inline SimTime from_ms(double ms) { return static_cast<SimTime>(std::llround(ms * 1e6)); }
inline double to_ms(SimTime t) { return static_cast<double>(t) / 1e6; }

/// Link delay for a payload: latency plus serialisation at the link
/// bandwidth (zero when the bandwidth is unbounded).
inline double transmission_delay(const LinkParams& link, std::uint64_t size_bytes) {
  double d = link.latency_ms;
  if (link.bandwidth_bps) d += static_cast<double>(size_bytes) * 8.0 / *link.bandwidth_bps * 1000.0;
  return d;
}

inline double transmission_delay(const NetLink& link, std::uint64_t size_bytes) {
  return transmission_delay(link.params, size_bytes);
}

/// Time a module needs to process one tuple at its fixed MIPS allocation.
inline double execution_time(const AppModule& module, const TupleType& tuple) {
  return tuple.cpu_length_mi / module.allocated_mips * 1000.0;
}

enum class EmissionPhase { kInPhase, kStaggered };

inline std::string_view to_string(EmissionPhase p) {
  return p == EmissionPhase::kInPhase ? "in_phase" : "staggered";
}

struct SimConfig {
  double duration_ms = 12000.0;
  double emission_interval_ms = 1000.0;
  // Sensors emit at times < emission_stop_ms; unset means until the horizon.
  // The default leaves two intervals for the pipeline to drain.
  std::optional<double> emission_stop_ms = 10000.0;
  EmissionPhase phase = EmissionPhase::kInPhase;
  // Uniform random delay in [0, jitter_ms) added to each emission.
  double jitter_ms = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const SimConfig&) const = default;
};

inline void validate_config(const SimConfig& c) {
  if (!(c.duration_ms > 0.0)) throw ParameterError("duration_ms must be > 0");
  if (!(c.emission_interval_ms > 0.0)) throw ParameterError("emission_interval_ms must be > 0");
  if (c.emission_stop_ms && !(*c.emission_stop_ms >= 0.0)) throw ParameterError("emission_stop_ms must be >= 0");
  if (!(c.jitter_ms >= 0.0) || c.jitter_ms >= c.emission_interval_ms)
    throw ParameterError("jitter_ms must be in [0, emission_interval_ms)");
}

enum class EventKind { kEmit, kLinkArrival, kExecStart, kExecFinish, kDeliver };

inline std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kEmit: return "EMIT";
    case EventKind::kLinkArrival: return "LINK_ARRIVAL";
    case EventKind::kExecStart: return "EXEC_START";
    case EventKind::kExecFinish: return "EXEC_FINISH";
    case EventKind::kDeliver: return "DELIVER";
  }
  return "UNKNOWN";
}

/// A unit of data in flight. Lineage and the latency components are
/// inherited by the tuples a module derives from it.
struct TupleInstance {
  std::uint64_t seq = 0;
  std::size_t tuple_type = 0;
  SimTime origin_time = 0;
  NodeId origin_sensor;
  NodeId branch;
  std::vector<std::size_t> lineage;  // tuple types from the sensor tuple to this one
  SimTime network = 0;
  SimTime execution = 0;
  SimTime wait = 0;
  SimTime link_latency = 0;  // pure propagation latency along the realised path
};

/// One processed event. `link` is set for a real hop; `instance` is set
/// when the event concerns a module instance (arrival into its queue,
/// execution start or finish).
struct TraceRecord {
  SimTime time = 0;
  std::uint64_t event_seq = 0;
  EventKind kind = EventKind::kEmit;
  std::uint64_t tuple = 0;
  std::size_t tuple_type = 0;
  NodeId node;
  std::optional<LinkKey> link;
  std::optional<std::size_t> instance;
  SimTime wait = 0;
};

struct Delivery {
  TupleInstance tuple;
  NodeId display;
  SimTime delivered_at = 0;
  std::optional<std::size_t> loop;

  SimTime latency() const { return delivered_at - tuple.origin_time; }
};

struct InstanceInfo {
  std::size_t module = 0;
  NodeId host;
  std::string label;  // Module@node
};

/// Discrete-event run of one application on one topology under one
/// placement. Single-threaded; separate Simulator objects share nothing.
class Simulator {
 public:
  Simulator(const ApplicationGraph& graph, const Topology& topo, const Placement& placement, SimConfig cfg,
            bool record_trace = false)
      : graph_(graph),
        topo_(topo),
        cfg_(std::move(cfg)),
        record_trace_(record_trace),
        rng_(cfg_.seed),
        metrics_(loop_names(graph)) {
    validate_config(cfg_);
    if (auto r = validate_dag(graph_); !r.empty()) throw ConfigurationError("invalid application graph: " + r.front().message);
    if (auto r = validate_topology(topo_); !r.empty()) throw ConfigurationError("invalid topology: " + r.front().message);
    for (const auto& v : validate_placement(placement, graph_, topo_)) {
      if (v.kind == PlacementViolation::kOverload) throw FeasibilityError(v.message);
      throw ConfigurationError("unrealizable placement: " + v.message);
    }
    build_instances(placement);
    build_loops();
    schedule_first_emissions();
  }

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Processes every event up to and including the horizon.
  MetricsReport run() {
    if (ran_) throw ConsistencyFailure("simulator already ran");
    ran_ = true;
    const SimTime horizon = from_ms(cfg_.duration_ms);
    while (!events_.empty() && events_.top().time <= horizon) {
      Event ev = events_.top();
      events_.pop();
      if (ev.time < now_) throw ConsistencyFailure("event time went backwards");
      now_ = ev.time;
      dispatch(ev);
    }
    return metrics_.finalize(topo_, drain_report(), cfg_.duration_ms);
  }

  /// Counts derived from the engine's counters plus the live tuple set.
  DrainReport drain_report() const {
    return {emitted_, created_, consumed_, delivered_, static_cast<std::uint64_t>(live_.size())};
  }

  const std::vector<TraceRecord>& trace() const { return trace_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<InstanceInfo>& instances() const { return instance_info_; }
  const std::vector<ResolvedLoop>& loops() const { return loops_; }
  const ApplicationGraph& graph() const { return graph_; }
  const Topology& topology() const { return topo_; }
  const SimConfig& config() const { return cfg_; }

 private:
  struct Event {
    SimTime time;
    std::uint64_t seq;
    EventKind kind;
    std::uint64_t tuple;    // tuple seq, or sensor node index for EMIT
    std::size_t index;      // hop index (LINK_ARRIVAL), instance (EXEC_*), emission number (EMIT)
    SimTime base;           // EMIT: unjittered emission time
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  struct Target {
    NodeId node;
    std::optional<std::size_t> instance;  // empty: a display
  };

  struct Live {
    TupleInstance tuple;
    std::vector<NodeId> path;
    Target target;
    SimTime enqueued = 0;
  };

  struct Instance {
    std::deque<std::uint64_t> queue;
    bool busy = false;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> emission_counters;
  };

  static std::vector<std::string> loop_names(const ApplicationGraph& g) {
    std::vector<std::string> names;
    for (const auto& l : g.loops) names.push_back(l.name);
    return names;
  }

  void build_instances(const Placement& placement) {
    instances_by_module_.resize(graph_.modules.size());
    for (std::size_t m = 0; m < graph_.modules.size(); ++m) {
      const auto* hosts = placement.hosts_of(graph_.modules[m].name);
      for (auto h : *hosts) {
        instances_by_module_[m].push_back(instance_info_.size());
        instance_info_.push_back({m, h, graph_.modules[m].name + "@" + topo_.node(h).name});
        instances_.emplace_back();
      }
    }
    // Replicated modules must have an instance on every branch that has
    // sensors; every such branch needs a display.
    for (auto s : topo_.nodes_of_kind(NodeKind::kSensor)) {
      auto branch = *branch_of(topo_, s);
      if (!display_of(topo_, branch))
        throw ConfigurationError("branch '" + topo_.node(branch).name + "' has sensors but no display");
      for (std::size_t m = 0; m < graph_.modules.size(); ++m) {
        if (instances_by_module_[m].size() > 1 && !instance_on(m, branch))
          throw ConfigurationError("module '" + graph_.modules[m].name + "' is replicated but has no instance on '" +
                                   topo_.node(branch).name + "'");
      }
    }
  }

  std::optional<std::size_t> instance_on(std::size_t module, NodeId host) const {
    for (auto i : instances_by_module_[module]) {
      if (instance_info_[i].host == host) return i;
    }
    return std::nullopt;
  }

  void build_loops() {
    loops_ = loops_of(graph_);
    for (std::size_t i = 0; i < loops_.size(); ++i) {
      std::vector<std::size_t> key;
      for (const auto& t : loops_[i].tuple_types) key.push_back(*graph_.tuple_index(t));
      loop_by_lineage_.emplace(std::move(key), i);
    }
    for (const auto& e : graph_.edges) {
      if (e.source == kSensor) sensor_tuples_.push_back(*graph_.tuple_index(e.tuple_type));
    }
  }

  SimTime jitter() {
    if (cfg_.jitter_ms <= 0.0) return 0;
    std::uniform_real_distribution<double> dist(0.0, cfg_.jitter_ms);
    return from_ms(dist(rng_));
  }

  SimTime emission_stop() const { return from_ms(cfg_.emission_stop_ms.value_or(cfg_.duration_ms)); }

  void schedule_first_emissions() {
    const auto sensors = topo_.nodes_of_kind(NodeKind::kSensor);
    const SimTime interval = from_ms(cfg_.emission_interval_ms);
    for (std::size_t i = 0; i < sensors.size(); ++i) {
      SimTime offset = 0;
      if (cfg_.phase == EmissionPhase::kStaggered)
        offset = interval * static_cast<SimTime>(i) / static_cast<SimTime>(sensors.size());
      if (offset < emission_stop()) schedule(offset + jitter(), EventKind::kEmit, sensors[i].value, 0, offset);
    }
  }

  void schedule(SimTime at, EventKind kind, std::uint64_t tuple, std::size_t index, SimTime base = 0) {
    events_.push({at, next_event_seq_++, kind, tuple, index, base});
  }

  void trace(const Event& ev, std::uint64_t tuple, NodeId node, std::optional<LinkKey> link = std::nullopt,
             std::optional<std::size_t> instance = std::nullopt, SimTime wait = 0) {
    if (!record_trace_) return;
    std::size_t type = 0;
    if (auto it = live_.find(tuple); it != live_.end()) type = it->second.tuple.tuple_type;
    trace_.push_back({ev.time, ev.seq, ev.kind, tuple, type, node, link, instance, wait});
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::kEmit: on_emit(ev); break;
      case EventKind::kLinkArrival: on_link_arrival(ev); break;
      case EventKind::kExecStart: on_exec_start(ev); break;
      case EventKind::kExecFinish: on_exec_finish(ev); break;
      case EventKind::kDeliver: on_deliver(ev); break;
    }
  }

  Target target_for(std::size_t tuple_type, NodeId branch) const {
    const AppEdge* edge = graph_.edge_for(graph_.tuple_types[tuple_type].name);
    if (edge->destination == kDisplay) return {*display_of(topo_, branch), std::nullopt};
    const std::size_t module = *graph_.module_index(edge->destination);
    const auto& candidates = instances_by_module_[module];
    std::size_t inst = candidates.front();
    if (candidates.size() > 1) inst = *instance_on(module, branch);
    return {instance_info_[inst].host, inst};
  }

  const std::vector<NodeId>& cached_route(NodeId from, NodeId to) {
    auto key = std::make_pair(from, to);
    auto it = routes_.find(key);
    if (it == routes_.end()) it = routes_.emplace(key, topo_.route(from, to)).first;
    return it->second;
  }

  SimTime hop_delay(const Live& l, std::size_t hop) const {
    const NetLink* link = topo_.link_between(l.path[hop - 1], l.path[hop]);
    return from_ms(transmission_delay(*link, graph_.tuple_types[l.tuple.tuple_type].size_bytes));
  }

  void begin_transit(std::uint64_t id, NodeId from) {
    Live& l = live_.at(id);
    l.target = target_for(l.tuple.tuple_type, l.tuple.branch);
    l.path = cached_route(from, l.target.node);
    if (l.path.size() == 1) {
      schedule(now_, EventKind::kLinkArrival, id, 0);
    } else {
      schedule(now_ + hop_delay(l, 1), EventKind::kLinkArrival, id, 1);
    }
  }

  std::uint64_t spawn(TupleInstance t) {
    t.seq = next_tuple_seq_++;
    const auto id = t.seq;
    live_.emplace(id, Live{std::move(t), {}, {}, 0});
    return id;
  }

  void on_emit(const Event& ev) {
    const NodeId sensor{static_cast<std::size_t>(ev.tuple)};
    const NodeId branch = *branch_of(topo_, sensor);
    for (auto type : sensor_tuples_) {
      TupleInstance t;
      t.tuple_type = type;
      t.origin_time = now_;
      t.origin_sensor = sensor;
      t.branch = branch;
      t.lineage = {type};
      const auto id = spawn(std::move(t));
      ++emitted_;
      trace(ev, id, sensor);
      begin_transit(id, sensor);
    }
    const SimTime next = ev.base + from_ms(cfg_.emission_interval_ms);
    if (next < emission_stop()) schedule(next + jitter(), EventKind::kEmit, ev.tuple, ev.index + 1, next);
  }

  void on_link_arrival(const Event& ev) {
    Live& l = live_.at(ev.tuple);
    const std::size_t hop = ev.index;
    const NodeId here = l.path[hop];
    std::optional<LinkKey> key;
    if (hop > 0) {
      const NetLink* link = topo_.link_between(l.path[hop - 1], here);
      key = LinkKey::of(l.path[hop - 1], here);
      l.tuple.network += hop_delay(l, hop);
      l.tuple.link_latency += from_ms(link->params.latency_ms);
      metrics_.record_traversal(*key, graph_.tuple_types[l.tuple.tuple_type].size_bytes);
    }
    if (hop + 1 < l.path.size()) {
      trace(ev, ev.tuple, here, key);
      schedule(now_ + hop_delay(l, hop + 1), EventKind::kLinkArrival, ev.tuple, hop + 1);
      return;
    }
    if (!l.target.instance) {
      trace(ev, ev.tuple, here, key);
      schedule(now_, EventKind::kDeliver, ev.tuple, 0);
      return;
    }
    const std::size_t inst = *l.target.instance;
    trace(ev, ev.tuple, here, key, inst);
    l.enqueued = now_;
    auto& q = instances_[inst];
    q.queue.push_back(ev.tuple);
    if (!q.busy) {
      q.busy = true;
      schedule(now_, EventKind::kExecStart, 0, inst);
    }
  }

  void on_exec_start(const Event& ev) {
    auto& q = instances_[ev.index];
    const std::uint64_t id = q.queue.front();
    q.queue.pop_front();
    Live& l = live_.at(id);
    const SimTime wait = now_ - l.enqueued;
    l.tuple.wait += wait;
    const auto& info = instance_info_[ev.index];
    metrics_.record_wait(info.label, to_ms(wait));
    trace(ev, id, info.host, std::nullopt, ev.index, wait);
    const auto& module = graph_.modules[info.module];
    schedule(now_ + from_ms(execution_time(module, graph_.tuple_types[l.tuple.tuple_type])), EventKind::kExecFinish,
             id, ev.index);
  }

  void on_exec_finish(const Event& ev) {
    const auto& info = instance_info_[ev.index];
    const auto& module = graph_.modules[info.module];
    trace(ev, ev.tuple, info.host, std::nullopt, ev.index);
    TupleInstance parent = std::move(live_.at(ev.tuple).tuple);
    live_.erase(ev.tuple);
    ++consumed_;
    parent.execution += from_ms(execution_time(module, graph_.tuple_types[parent.tuple_type]));

    const auto& input = graph_.tuple_types[parent.tuple_type].name;
    auto& inst = instances_[ev.index];
    for (std::size_t m = 0; m < module.io_map.size(); ++m) {
      if (module.io_map[m].input != input) continue;
      for (std::size_t o = 0; o < module.io_map[m].outputs.size(); ++o) {
        const auto& out = module.io_map[m].outputs[o];
        if (++inst.emission_counters[{m, o}] % out.ratio != 0) continue;
        TupleInstance child = parent;
        child.tuple_type = *graph_.tuple_index(out.output);
        child.lineage.push_back(child.tuple_type);
        const auto id = spawn(std::move(child));
        ++created_;
        begin_transit(id, info.host);
      }
    }
    if (!inst.queue.empty()) {
      schedule(now_, EventKind::kExecStart, 0, ev.index);
    } else {
      inst.busy = false;
    }
  }

  void on_deliver(const Event& ev) {
    Live& l = live_.at(ev.tuple);
    trace(ev, ev.tuple, l.target.node);
    TupleInstance t = std::move(l.tuple);
    const NodeId display = l.target.node;
    live_.erase(ev.tuple);
    ++delivered_;
    const SimTime latency = now_ - t.origin_time;
    if (latency != t.network + t.execution + t.wait)
      throw ConsistencyFailure("latency decomposition residue for tuple " + std::to_string(t.seq));
    std::optional<std::size_t> loop;
    if (auto it = loop_by_lineage_.find(t.lineage); it != loop_by_lineage_.end()) {
      loop = it->second;
      metrics_.record_loop_completion(*loop, to_ms(latency));
      metrics_.record_breakdown(*loop, to_ms(t.network), to_ms(t.execution), to_ms(t.wait));
    }
    deliveries_.push_back({std::move(t), display, now_, loop});
  }

  const ApplicationGraph& graph_;
  const Topology& topo_;
  SimConfig cfg_;
  bool record_trace_;
  std::mt19937_64 rng_;
  MetricsCollector metrics_;

  std::vector<InstanceInfo> instance_info_;
  std::vector<Instance> instances_;
  std::vector<std::vector<std::size_t>> instances_by_module_;
  std::vector<ResolvedLoop> loops_;
  std::map<std::vector<std::size_t>, std::size_t> loop_by_lineage_;
  std::vector<std::size_t> sensor_tuples_;
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> routes_;

  std::priority_queue<Event, std::vector<Event>, Later> events_;
  std::unordered_map<std::uint64_t, Live> live_;
  std::vector<TraceRecord> trace_;
  std::vector<Delivery> deliveries_;

  SimTime now_ = 0;
  std::uint64_t next_event_seq_ = 0;
  std::uint64_t next_tuple_seq_ = 0;
  std::uint64_t emitted_ = 0;
  std::uint64_t created_ = 0;
  std::uint64_t consumed_ = 0;
  std::uint64_t delivered_ = 0;
  bool ran_ = false;
};

/// Conservation check over a finished run. Throws ConsistencyFailure when
/// emitted + created differs from consumed + delivered + in flight.
inline DrainReport drain_check(const Simulator& sim) {
  auto r = sim.drain_report();
  if (!r.balanced())
    throw ConsistencyFailure("tuple imbalance: emitted " + std::to_string(r.emitted) + " + created " +
                             std::to_string(r.created) + " != consumed " + std::to_string(r.consumed) +
                             " + delivered " + std::to_string(r.delivered) + " + in flight " +
                             std::to_string(r.in_flight));
  return r;
}

inline MetricsReport simulate(const ApplicationGraph& graph, const Topology& topo, const Placement& placement,
                              const SimConfig& cfg) {
  Simulator sim(graph, topo, placement, cfg);
  auto report = sim.run();
  drain_check(sim);
  return report;
}

}  // namespace fogsim
