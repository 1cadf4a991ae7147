#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "angcp/cusum.hpp"
#include "angcp/kolmogorov.hpp"
#include "angcp/segmentation.hpp"
#include "angcp/simulation.hpp"
#include "angcp/surface.hpp"

namespace angcp {

enum class AngleUnits { degrees, radians };
enum class ReportFormat { json, csv };

/// How to read a CSV of angular observations. Columns are matched by header
/// name. With lat_long set (sphere data), theta_col holds latitudes that are
/// mapped to colatitude pi/2 - lat and phi_col holds longitudes.
struct DatasetSpec {
  std::string path;
  AngleUnits units = AngleUnits::degrees;
  SurfaceSpec surface;
  std::string phi_col = "phi";
  std::string theta_col = "theta";
  std::string timestamp_col;  // optional; checked for presence only
  bool lat_long = false;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

inline double parse_double_field(std::string_view field, std::size_t row,
                                 const std::string& column) {
  const std::string_view t = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw data_error("row " + std::to_string(row) + ": cannot parse '" +
                     std::string(t) + "' in column " + column);
  }
  if (!std::isfinite(value)) {
    throw data_error("row " + std::to_string(row) + ": non-finite value in column " +
                     column);
  }
  return value;
}

inline std::size_t find_column(const std::vector<std::string_view>& header,
                               const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw data_error("missing column '" + name + "' in CSV header");
}

inline std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

// Table-2 style rendering: radians with degrees in parentheses.
inline std::string rad_deg(double radians) {
  return format("%.2f", radians) + " (" + format("%.2f", radians * 180.0 / pi) +
         ")";
}

}  // namespace detail

/// Parse angular observations from CSV text (header row required). Degrees
/// are converted to radians, latitudes to colatitudes when requested, and
/// every value is reduced to its range. Bad rows abort with the 1-based data
/// row index; nothing is dropped silently.
inline std::vector<AngularPair> parse_angular_csv_content(
    const DatasetSpec& spec, std::string_view content) {
  validate_surface(spec.surface);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= content.size(); ++i) {
    if (i == content.size() || content[i] == '\n') {
      const auto line = detail::trim(content.substr(start, i - start));
      if (!line.empty()) lines.push_back(line);
      start = i + 1;
    }
  }
  if (lines.empty()) {
    throw data_error(spec.path + ": no header row");
  }
  const auto header = detail::split_csv_line(lines[0]);
  const std::size_t phi_idx = detail::find_column(header, spec.phi_col);
  const std::size_t theta_idx = detail::find_column(header, spec.theta_col);
  if (!spec.timestamp_col.empty()) {
    detail::find_column(header, spec.timestamp_col);
  }
  if (lines.size() == 1) {
    throw data_error(spec.path + ": zero data rows");
  }

  const double to_rad = spec.units == AngleUnits::degrees ? pi / 180.0 : 1.0;
  std::vector<AngularPair> pairs;
  pairs.reserve(lines.size() - 1);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = detail::split_csv_line(lines[r]);
    if (phi_idx >= fields.size() || theta_idx >= fields.size()) {
      throw data_error("row " + std::to_string(r) + ": too few fields");
    }
    const double phi =
        detail::parse_double_field(fields[phi_idx], r, spec.phi_col) * to_rad;
    double theta =
        detail::parse_double_field(fields[theta_idx], r, spec.theta_col) * to_rad;
    if (spec.lat_long) theta = pi / 2.0 - theta;
    pairs.push_back(make_angular_pair(spec.surface, phi, theta));
  }
  return pairs;
}

inline std::vector<AngularPair> parse_angular_csv(const DatasetSpec& spec) {
  std::ifstream in(spec.path, std::ios::binary);
  if (!in) {
    throw data_error("cannot open " + spec.path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_angular_csv_content(spec, buf.str());
}

// ---------------------------------------------------------------------------
// Report emission. Key order and number formatting are fixed: p-values carry
// four decimals, mean directions appear as "radians (degrees)".

inline std::string emit_detect_report(const CusumResult& r, double alpha,
                                      ReportFormat format) {
  const bool reject = r.statistic > kolmogorov_quantile(alpha);
  if (format == ReportFormat::csv) {
    std::string out = "n,statistic,khat,p_value,s_q,alpha,reject\n";
    out += std::to_string(r.q.size()) + "," + detail::format("%.6f", r.statistic) +
           "," + std::to_string(r.khat) + "," + detail::format("%.4f", r.p_value) +
           "," + detail::format("%.6f", r.s_q) + "," +
           detail::format("%.4f", alpha) + "," + (reject ? "true" : "false") + "\n";
    return out;
  }
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(r.q.size()) + ",\n";
  out += "  \"statistic\": " + detail::format("%.6f", r.statistic) + ",\n";
  out += "  \"khat\": " + std::to_string(r.khat) + ",\n";
  out += "  \"p_value\": " + detail::format("%.4f", r.p_value) + ",\n";
  out += "  \"s_q\": " + detail::format("%.6f", r.s_q) + ",\n";
  out += "  \"alpha\": " + detail::format("%.4f", alpha) + ",\n";
  out += std::string("  \"reject\": ") + (reject ? "true" : "false") + "\n";
  out += "}\n";
  return out;
}

inline std::string emit_segment_report(const ChangepointReport& report,
                                       double alpha, ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "segment_start,segment_end,khat,p_value\n";
    for (const auto& e : report.entries) {
      out += std::to_string(e.segment_start) + "," + std::to_string(e.segment_end) +
             "," + std::to_string(e.khat) + "," +
             detail::format("%.4f", e.p_value) + "\n";
    }
    out += "\nstart,end,mean_phi,mean_theta\n";
    for (const auto& s : report.segments) {
      out += std::to_string(s.start) + "," + std::to_string(s.end) + ",";
      if (s.mean_defined) {
        out += detail::rad_deg(s.mean_phi) + "," + detail::rad_deg(s.mean_theta);
      } else {
        out += "undefined,undefined";
      }
      out += "\n";
    }
    return out;
  }
  std::string out = "{\n";
  out += "  \"alpha\": " + detail::format("%.4f", alpha) + ",\n";
  out += "  \"entries\": [\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    out += "    {\"segment_start\": " + std::to_string(e.segment_start) +
           ", \"segment_end\": " + std::to_string(e.segment_end) +
           ", \"khat\": " + std::to_string(e.khat) +
           ", \"p_value\": " + detail::format("%.4f", e.p_value) + "}";
    out += i + 1 < report.entries.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"segments\": [\n";
  for (std::size_t i = 0; i < report.segments.size(); ++i) {
    const auto& s = report.segments[i];
    out += "    {\"start\": " + std::to_string(s.start) +
           ", \"end\": " + std::to_string(s.end);
    if (s.mean_defined) {
      out += ", \"mean_phi_rad\": " + detail::format("%.6f", s.mean_phi) +
             ", \"mean_phi\": \"" + detail::rad_deg(s.mean_phi) + "\"" +
             ", \"mean_theta_rad\": " + detail::format("%.6f", s.mean_theta) +
             ", \"mean_theta\": \"" + detail::rad_deg(s.mean_theta) + "\"";
    } else {
      out += ", \"mean_phi_rad\": null, \"mean_phi\": \"undefined\""
             ", \"mean_theta_rad\": null, \"mean_theta\": \"undefined\"";
    }
    out += "}";
    out += i + 1 < report.segments.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"warnings\": [\n";
  for (std::size_t i = 0; i < report.warnings.size(); ++i) {
    const auto& w = report.warnings[i];
    out += "    {\"start\": " + std::to_string(w.start) +
           ", \"end\": " + std::to_string(w.end) + ", \"message\": \"" +
           detail::json_escape(w.message) + "\"}";
    out += i + 1 < report.warnings.size() ? ",\n" : "\n";
  }
  out += "  ]\n";
  out += "}\n";
  return out;
}

inline std::string emit_null_report(const NullExperimentResult& r,
                                    ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "statistic\n";
    for (double s : r.statistics) out += detail::format("%.6f", s) + "\n";
    return out;
  }
  std::string out = "{\n";
  out += "  \"reps\": " + std::to_string(r.statistics.size() + r.errors) + ",\n";
  out += "  \"rejection_rate\": " + detail::format("%.4f", r.rejection_rate) + ",\n";
  out += "  \"ks_distance\": " + detail::format("%.4f", r.ks_distance) + ",\n";
  out += "  \"errors\": " + std::to_string(r.errors) + ",\n";
  out += "  \"statistics\": [";
  for (std::size_t i = 0; i < r.statistics.size(); ++i) {
    out += detail::format("%.6f", r.statistics[i]);
    if (i + 1 < r.statistics.size()) out += ", ";
  }
  out += "]\n";
  out += "}\n";
  return out;
}

/// Power matrix: header row carries the delta_phi grid, first column the
/// delta_theta grid.
inline std::string emit_power_report(const PowerGridResult& r,
                                     ReportFormat format) {
  if (format == ReportFormat::csv) {
    std::string out = "delta_theta";
    for (double dp : r.delta_phi_grid) out += "," + detail::format("%.6f", dp);
    out += "\n";
    for (std::size_t ti = 0; ti < r.delta_theta_grid.size(); ++ti) {
      out += detail::format("%.6f", r.delta_theta_grid[ti]);
      for (double rate : r.rates[ti]) out += "," + detail::format("%.4f", rate);
      out += "\n";
    }
    return out;
  }
  std::string out = "{\n  \"delta_phi\": [";
  for (std::size_t i = 0; i < r.delta_phi_grid.size(); ++i) {
    out += detail::format("%.6f", r.delta_phi_grid[i]);
    if (i + 1 < r.delta_phi_grid.size()) out += ", ";
  }
  out += "],\n  \"delta_theta\": [";
  for (std::size_t i = 0; i < r.delta_theta_grid.size(); ++i) {
    out += detail::format("%.6f", r.delta_theta_grid[i]);
    if (i + 1 < r.delta_theta_grid.size()) out += ", ";
  }
  out += "],\n  \"rates\": [\n";
  for (std::size_t ti = 0; ti < r.rates.size(); ++ti) {
    out += "    [";
    for (std::size_t pj = 0; pj < r.rates[ti].size(); ++pj) {
      out += detail::format("%.4f", r.rates[ti][pj]);
      if (pj + 1 < r.rates[ti].size()) out += ", ";
    }
    out += "]";
    out += ti + 1 < r.rates.size() ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"errors\": " + std::to_string(r.errors) + "\n";
  out += "}\n";
  return out;
}

inline std::string emit_pairs_csv(const std::vector<AngularPair>& pairs,
                                  AngleUnits units) {
  const double scale = units == AngleUnits::degrees ? 180.0 / pi : 1.0;
  std::string out = "phi,theta\n";
  for (const auto& p : pairs) {
    out += detail::format("%.6f", p.phi * scale) + "," +
           detail::format("%.6f", p.theta * scale) + "\n";
  }
  return out;
}

inline std::string emit_series_csv(const AngularSeries& series,
                                   AngleUnits units) {
  const double scale = units == AngleUnits::degrees ? 180.0 / pi : 1.0;
  std::string out = "angle\n";
  for (double v : series.values) {
    out += detail::format("%.6f", v * scale) + "\n";
  }
  return out;
}

}  // namespace angcp
