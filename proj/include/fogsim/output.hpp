#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fogsim/error.hpp"
#include "fogsim/metrics.hpp"
#include "fogsim/runner.hpp"

namespace fogsim {

enum class OutputFormat { kCsv, kJson };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw ParameterError("unknown output format '" + std::string(s) + "' (csv | json)");
}

namespace detail {

inline std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Millisecond values are rounded to 3 decimals in every output format.
inline double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

inline nlohmann::ordered_json ms_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(round3(*v)) : nlohmann::ordered_json(nullptr);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// A cell value: empty optional -> absent.
struct Cell {
  enum class Type { kInteger, kMillis, kRate, kText } type;
  std::optional<double> number;
  std::string text;
};

inline std::vector<std::string> columns(const ResultTable& t) {
  std::vector<std::string> cols{"sensors",        "strategy",   "mean_latency_ms", "network_usage_bytes",
                                "network_usage_bytes_per_s", "mean_wait_ms", "emitted", "delivered",
                                "in_flight"};
  for (const auto& l : t.loop_names) {
    cols.push_back(l + "_count");
    cols.push_back(l + "_mean_ms");
    cols.push_back(l + "_max_ms");
  }
  cols.push_back("error");
  return cols;
}

inline std::vector<Cell> cells(const ResultTable& t, const ResultRow& row) {
  using T = Cell::Type;
  std::vector<Cell> out;
  out.push_back({T::kInteger, static_cast<double>(row.sensors), {}});
  out.push_back({T::kText, std::nullopt, row.strategy});
  const MetricsReport* r = row.report ? &*row.report : nullptr;
  auto num = [&](T type, std::optional<double> v) { out.push_back({type, v, {}}); };
  num(T::kMillis, r ? r->overall_mean_ms : std::nullopt);
  num(T::kInteger, r ? std::optional<double>(static_cast<double>(r->network_usage_bytes)) : std::nullopt);
  num(T::kRate, r ? std::optional<double>(r->network_usage_bytes_per_s()) : std::nullopt);
  num(T::kMillis, r ? r->overall_mean_wait_ms : std::nullopt);
  num(T::kInteger, r ? std::optional<double>(static_cast<double>(r->counts.emitted)) : std::nullopt);
  num(T::kInteger, r ? std::optional<double>(static_cast<double>(r->counts.delivered)) : std::nullopt);
  num(T::kInteger, r ? std::optional<double>(static_cast<double>(r->counts.in_flight)) : std::nullopt);
  for (const auto& name : t.loop_names) {
    const LoopStats* l = r ? r->loop(name) : nullptr;
    num(T::kInteger, l ? std::optional<double>(static_cast<double>(l->count)) : std::nullopt);
    num(T::kMillis, l ? l->mean_ms : std::nullopt);
    num(T::kMillis, l ? l->max_ms : std::nullopt);
  }
  out.push_back({T::kText, std::nullopt, row.error});
  return out;
}

inline std::string csv_cell(const Cell& c) {
  switch (c.type) {
    case Cell::Type::kText: return csv_escape(c.text);
    case Cell::Type::kInteger: return c.number ? std::to_string(static_cast<long long>(std::llround(*c.number))) : "";
    case Cell::Type::kMillis:
    case Cell::Type::kRate: return c.number ? fixed3(*c.number) : "";
  }
  return "";
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  using oj = nlohmann::ordered_json;
  switch (c.type) {
    case Cell::Type::kText: return c.text.empty() ? oj(nullptr) : oj(c.text);
    case Cell::Type::kInteger: return c.number ? oj(static_cast<long long>(std::llround(*c.number))) : oj(nullptr);
    case Cell::Type::kMillis:
    case Cell::Type::kRate: return c.number ? oj(round3(*c.number)) : oj(nullptr);
  }
  return oj(nullptr);
}

}  // namespace detail

/// Serialises a result table. CSV has a fixed column order starting
/// `sensors,strategy,mean_latency_ms,network_usage_bytes`; JSON is an
/// array of objects with the same keys in the same order.
inline std::string emit_results(const ResultTable& table, OutputFormat format) {
  const auto cols = detail::columns(table);
  if (format == OutputFormat::kCsv) {
    std::string out = detail::join(cols, ",") + "\n";
    for (const auto& row : table.rows) {
      std::vector<std::string> fields;
      for (const auto& c : detail::cells(table, row)) fields.push_back(detail::csv_cell(c));
      out += detail::join(fields, ",") + "\n";
    }
    return out;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    auto cs = detail::cells(table, row);
    for (std::size_t i = 0; i < cols.size(); ++i) obj[cols[i]] = detail::json_cell(cs[i]);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

/// Full single-run report.
inline nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  using oj = nlohmann::ordered_json;
  using detail::ms_json;
  oj j;
  j["overall_mean_ms"] = ms_json(r.overall_mean_ms);
  j["overall_mean_wait_ms"] = ms_json(r.overall_mean_wait_ms);
  j["network_usage_bytes"] = r.network_usage_bytes;
  j["network_usage_bytes_per_s"] = detail::round3(r.network_usage_bytes_per_s());
  j["horizon_ms"] = r.horizon_ms;
  oj loops = oj::array();
  for (const auto& l : r.per_loop) {
    loops.push_back({{"loop", l.name},
                     {"count", l.count},
                     {"mean_ms", ms_json(l.mean_ms)},
                     {"max_ms", ms_json(l.max_ms)},
                     {"mean_network_ms", ms_json(l.mean_network_ms)},
                     {"mean_execution_ms", ms_json(l.mean_execution_ms)},
                     {"mean_wait_ms", ms_json(l.mean_wait_ms)}});
  }
  j["per_loop"] = loops;
  oj links = oj::object();
  for (const auto& [name, bytes] : r.per_link_bytes) links[name] = bytes;
  j["per_link_bytes"] = links;
  oj instances = oj::array();
  for (const auto& s : r.per_instance) {
    instances.push_back({{"instance", s.name},
                         {"executed", s.executed},
                         {"mean_wait_ms", ms_json(s.mean_wait_ms)},
                         {"max_wait_ms", ms_json(s.max_wait_ms)}});
  }
  j["per_instance"] = instances;
  j["counts"] = {{"emitted", r.counts.emitted},
                 {"created", r.counts.created},
                 {"consumed", r.counts.consumed},
                 {"delivered", r.counts.delivered},
                 {"in_flight", r.counts.in_flight}};
  return j;
}

}  // namespace fogsim
