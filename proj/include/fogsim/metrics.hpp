#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fogsim/error.hpp"
#include "fogsim/topology.hpp"

namespace fogsim {

/// Tuple accounting at the end of a run. A tuple is consumed when a module
/// finishes executing it and delivered when a display receives it;
/// everything else is still in flight (in transit, queued or executing).
struct DrainReport {
  std::uint64_t emitted = 0;
  std::uint64_t created = 0;
  std::uint64_t consumed = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;

  bool balanced() const { return emitted + created == consumed + delivered + in_flight; }

  bool operator==(const DrainReport&) const = default;
};

struct LoopStats {
  std::string name;
  std::uint64_t count = 0;
  std::optional<double> mean_ms;
  std::optional<double> max_ms;
  // Mean latency components; they add up to mean_ms.
  std::optional<double> mean_network_ms;
  std::optional<double> mean_execution_ms;
  std::optional<double> mean_wait_ms;

  bool operator==(const LoopStats&) const = default;
};

/// Queueing at one module instance ("Module@node").
struct InstanceStats {
  std::string name;
  std::uint64_t executed = 0;
  std::optional<double> mean_wait_ms;
  std::optional<double> max_wait_ms;

  bool operator==(const InstanceStats&) const = default;
};

struct MetricsReport {
  std::vector<LoopStats> per_loop;
  std::optional<double> overall_mean_ms;
  std::optional<double> overall_mean_wait_ms;
  std::uint64_t network_usage_bytes = 0;
  std::map<std::string, std::uint64_t> per_link_bytes;
  std::vector<InstanceStats> per_instance;
  DrainReport counts;
  double horizon_ms = 0.0;

  double network_usage_bytes_per_s() const {
    return horizon_ms > 0.0 ? static_cast<double>(network_usage_bytes) * 1000.0 / horizon_ms : 0.0;
  }

  const LoopStats* loop(const std::string& name) const {
    auto it = std::find_if(per_loop.begin(), per_loop.end(), [&](const auto& l) { return l.name == name; });
    return it == per_loop.end() ? nullptr : &*it;
  }

  bool operator==(const MetricsReport&) const = default;
};

inline std::string link_name(const Topology& t, LinkKey k) {
  return t.node(k.lo).name + "--" + t.node(k.hi).name;
}

/// Accumulates metrics during one simulation run.
class MetricsCollector {
 public:
  explicit MetricsCollector(std::vector<std::string> loop_names) {
    for (auto& n : loop_names) loops_.push_back({std::move(n)});
  }

  /// One tuple crossed one link (an inter-node hop).
  void record_traversal(LinkKey link, std::uint64_t size_bytes) { per_link_[link] += size_bytes; }

  void record_loop_completion(std::size_t loop, double latency_ms) {
    if (loop >= loops_.size()) throw ConsistencyFailure("loop index " + std::to_string(loop) + " out of range");
    if (!(latency_ms >= 0.0)) throw ConsistencyFailure("negative loop latency " + std::to_string(latency_ms) + " ms");
    auto& acc = loops_[loop];
    ++acc.count;
    acc.sum_ms += latency_ms;
    acc.max_ms = std::max(acc.max_ms, latency_ms);
  }

  void record_breakdown(std::size_t loop, double network_ms, double execution_ms, double wait_ms) {
    if (loop >= loops_.size()) throw ConsistencyFailure("loop index " + std::to_string(loop) + " out of range");
    auto& acc = loops_[loop];
    acc.network_ms += network_ms;
    acc.execution_ms += execution_ms;
    acc.wait_ms += wait_ms;
  }

  void record_wait(const std::string& instance, double wait_ms) {
    auto& w = waits_[instance];
    ++w.count;
    w.sum_ms += wait_ms;
    w.max_ms = std::max(w.max_ms, wait_ms);
  }

  std::uint64_t network_usage_bytes() const {
    std::uint64_t total = 0;
    for (const auto& [k, v] : per_link_) total += v;
    return total;
  }

  MetricsReport finalize(const Topology& topo, const DrainReport& drain, double horizon_ms) const {
    MetricsReport r;
    r.counts = drain;
    r.horizon_ms = horizon_ms;
    std::uint64_t completions = 0;
    double sum = 0.0, wait_sum = 0.0;
    for (const auto& acc : loops_) {
      LoopStats s{acc.name, acc.count, {}, {}, {}, {}, {}};
      if (acc.count > 0) {
        const double n = static_cast<double>(acc.count);
        s.mean_ms = acc.sum_ms / n;
        s.max_ms = acc.max_ms;
        s.mean_network_ms = acc.network_ms / n;
        s.mean_execution_ms = acc.execution_ms / n;
        s.mean_wait_ms = acc.wait_ms / n;
      }
      completions += acc.count;
      sum += acc.sum_ms;
      wait_sum += acc.wait_ms;
      r.per_loop.push_back(std::move(s));
    }
    if (completions > 0) {
      r.overall_mean_ms = sum / static_cast<double>(completions);
      r.overall_mean_wait_ms = wait_sum / static_cast<double>(completions);
    }
    for (const auto& [k, v] : per_link_) {
      r.per_link_bytes[link_name(topo, k)] += v;
      r.network_usage_bytes += v;
    }
    for (const auto& [name, w] : waits_) {
      InstanceStats s{name, w.count, {}, {}};
      if (w.count > 0) {
        s.mean_wait_ms = w.sum_ms / static_cast<double>(w.count);
        s.max_wait_ms = w.max_ms;
      }
      r.per_instance.push_back(std::move(s));
    }
    return r;
  }

 private:
  struct LoopAcc {
    std::string name;
    std::uint64_t count = 0;
    double sum_ms = 0.0;
    double max_ms = 0.0;
    double network_ms = 0.0;
    double execution_ms = 0.0;
    double wait_ms = 0.0;
  };
  struct WaitAcc {
    std::uint64_t count = 0;
    double sum_ms = 0.0;
    double max_ms = 0.0;
  };

  std::vector<LoopAcc> loops_;
  std::map<LinkKey, std::uint64_t> per_link_;
  std::map<std::string, WaitAcc> waits_;
};

}  // namespace fogsim
