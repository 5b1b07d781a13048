#pragma once

// CSV and JSON serialization of fields, series and reports. Numbers are
// written in shortest round-trip form so repeated runs give identical bytes.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "json.hpp"

#include "tfd/analysis.hpp"
#include "tfd/bounds.hpp"
#include "tfd/config.hpp"
#include "tfd/solver.hpp"

namespace tfd {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal form that round-trips.
inline std::string format_number(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, p);
}

/// Header `x,t,u,provenance`, one row per node, time-major.
inline void write_field_csv(std::ostream& os, const SolutionField& f) {
  const SpaceTimeGrid& g = f.grid();
  const char* prov = to_string(f.provenance());
  os << "x,t,u,provenance\n";
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i < g.nx; ++i)
      os << format_number(g.x(i)) << ',' << format_number(g.t(k)) << ',' << format_number(f(i, k)) << ',' << prov
         << '\n';
}

/// Header `t,value`.
inline void write_series_csv(std::ostream& os, const TimeSeries& s) {
  os << "t,value\n";
  for (std::size_t k = 0; k < s.size(); ++k) os << format_number(s.t[k]) << ',' << format_number(s.values[k]) << '\n';
}

// non-finite numbers are not valid JSON; they are written as strings
inline Json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline Json to_json(const SpaceTimeGrid& g) { return Json{{"nx", g.nx}, {"nt", g.nt}, {"t_max", g.t_max}}; }

inline Json to_json(const SolutionField& f) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "solution_field";
  j["provenance"] = to_string(f.provenance());
  j["grid"] = to_json(f.grid());
  j["x"] = f.grid().x_nodes();
  j["t"] = f.grid().t_nodes();
  Json rows = Json::array();
  for (int k = 0; k < f.grid().nt; ++k) {
    Json row = Json::array();
    for (int i = 0; i < f.grid().nx; ++i) row.push_back(f(i, k));
    rows.push_back(std::move(row));
  }
  j["u"] = std::move(rows);
  return j;
}

inline Json to_json(const TimeSeries& s) { return Json{{"t", s.t}, {"values", s.values}}; }

inline Json to_json(const BoundReport& r) {
  Json c = Json::object();
  for (const auto& [k, v] : r.fitted_constants) c[k] = json_number(v);
  return Json{{"estimate_id", r.estimate_id},
              {"pass", r.pass},
              {"worst_ratio", json_number(r.worst_ratio)},
              {"worst_param", json_number(r.worst_param)},
              {"fitted_constants", std::move(c)},
              {"train_range", Json::array({json_number(r.train_range.lo), json_number(r.train_range.hi)})},
              {"validation_range",
               Json::array({json_number(r.validation_range.lo), json_number(r.validation_range.hi)})},
              {"n_train", r.n_train},
              {"n_validation", r.n_validation}};
}

inline Json to_json(const ExperimentReport& r) {
  Json m = Json::object();
  for (const auto& [k, v] : r.metrics) m[k] = json_number(v);
  Json reports = Json::array();
  for (const auto& b : r.reports) reports.push_back(to_json(b));
  return Json{{"scenario", r.scenario},
              {"pass", r.pass},
              {"metrics", std::move(m)},
              {"bound_reports", std::move(reports)},
              {"artifacts", r.artifacts}};
}

inline Json to_json(const TitchmarshReport& r) {
  Json e = Json::array();
  for (const auto& x : r.entries)
    e.push_back(Json{{"label", x.label},
                     {"leading_support", json_number(x.leading_support)},
                     {"onset", json_number(x.onset)},
                     {"offset_steps", json_number(x.offset_steps)}});
  return Json{{"pass", r.pass}, {"monotone", r.monotone}, {"step", r.step}, {"floor_rel", r.floor_rel},
              {"entries", std::move(e)}};
}

inline Json to_json(const ExperimentConfig& c) {
  Json tol = Json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  return Json{{"alpha", c.alpha},   {"T", c.T},           {"grid", to_json(c.grid)},
              {"scenario", c.scenario}, {"datum", c.datum}, {"tolerances", tol}, {"seed", c.seed},
              {"t_large", c.t_large}, {"t_horizon", c.t_horizon}};
}

/// Pretty JSON text with a trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline std::string field_csv_text(const SolutionField& f) {
  std::ostringstream os;
  write_field_csv(os, f);
  return os.str();
}

inline std::string series_csv_text(const TimeSeries& s) {
  std::ostringstream os;
  write_series_csv(os, s);
  return os.str();
}

}  // namespace tfd
