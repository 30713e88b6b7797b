#pragma once

// JSON, CSV and SVG views of the library's result types.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "degen_dt/degen_dt.hpp"

namespace degen_dt::cli {

using nlohmann::ordered_json;

inline ordered_json to_json(const OrthantResult& r) {
  return {{"probability", r.probability}, {"standard_error", r.standard_error}, {"method", to_string(r.method)}};
}

inline ordered_json diagonals_json(const PolygonCode& code) {
  ordered_json arr = ordered_json::array();
  for (const auto& [a, b] : code.diagonals) arr.push_back({a, b});
  return arr;
}

inline ordered_json to_json(const DistributionReport& r) {
  const bool grid = r.kind == PointSetKind::Grid;
  ordered_json j;
  j["kind"] = grid ? "grid" : "polygon";
  j[grid ? "m" : "n"] = r.parameter;
  j["iterations"] = r.iterations;
  j["discards"] = r.discards;
  j["distinct"] = r.distinct;
  j["other_count"] = r.other_count;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries) {
    ordered_json x;
    x["code"] = e.code;
    if (grid) {
      x["rows"] = to_rows(grid_code_from_key(e.code));
    } else {
      x["diagonals"] = diagonals_json(polygon_code_from_key(r.parameter, e.code));
    }
    x["count"] = e.count;
    x["frequency"] = e.frequency;
    if (e.analytic) x["analytic"] = to_json(*e.analytic);
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  if (!grid) {
    ordered_json classes = ordered_json::array();
    for (const auto& c : r.classes) {
      classes.push_back({{"representative", c.representative},
                         {"orbit_size", c.orbit_size},
                         {"count", c.count},
                         {"frequency", c.frequency},
                         {"mean_frequency_per_member", c.frequency / c.orbit_size}});
    }
    j["classes"] = std::move(classes);
  }
  return j;
}

inline std::string rational_string(const Rational& q) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(q) << '/' << boost::multiprecision::denominator(q);
  return os.str();
}

inline ordered_json to_json(const TriangleReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["iterations"] = r.iterations;
  j["discards"] = r.discards;
  ordered_json entries = ordered_json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"triangle", e.vertices},
                       {"arcs", triangle_arcs(r.n, e.vertices[0], e.vertices[1], e.vertices[2])},
                       {"count", e.count},
                       {"frequency", e.frequency},
                       {"uniform_baseline", rational_string(e.uniform_baseline)},
                       {"uniform_baseline_value", static_cast<double>(e.uniform_baseline)}});
  }
  j["entries"] = std::move(entries);
  return j;
}

inline ordered_json to_json(const WalkStats& s, DiagonalModel model) {
  ordered_json j;
  j["model"] = to_string(model);
  j["cap"] = s.cap;
  j["grid_size"] = s.grid_size;
  j["walks"] = s.walks;
  j["closed"] = s.closed();
  j["overflow_count"] = s.overflow_count;
  j["boundary_escapes"] = s.boundary_escapes;
  j["discards"] = s.discards;
  j["mean_capped"] = s.mean_capped();
  j["half_width_95"] = s.half_width_95();
  ordered_json hist = ordered_json::array();
  for (std::size_t t = 0; t < s.histogram.size(); ++t)
    if (s.histogram[t] > 0) hist.push_back({{"length", t}, {"count", s.histogram[t]}});
  j["histogram"] = std::move(hist);
  return j;
}

inline ordered_json to_json(const CensusResult& r) {
  return {{"m", r.m},
          {"model", to_string(r.model)},
          {"iterations", r.components.size()},
          {"discards", r.discards},
          {"mean_components", r.mean_components},
          {"stddev_components", r.stddev_components},
          {"mean_component_size", r.mean_component_size},
          {"component_size_definition", "(m+1)^2 / CC per instance, averaged; isolated vertices count as components"},
          {"components", r.components}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string cell(const ordered_json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_escape(v.dump());
}

/// Flattens the row-like array of a result into CSV. Nested objects get
/// dotted column names.
inline void write_table(std::ostream& os, const ordered_json& rows) {
  std::vector<std::string> columns;
  auto flatten = [](const ordered_json& row) {
    std::vector<std::pair<std::string, ordered_json>> out;
    for (const auto& [k, v] : row.items()) {
      if (v.is_object()) {
        for (const auto& [k2, v2] : v.items()) out.emplace_back(k + "." + k2, v2);
      } else {
        out.emplace_back(k, v);
      }
    }
    return out;
  };
  for (const auto& row : rows)
    for (const auto& [k, v] : flatten(row))
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    const auto flat = flatten(row);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      for (const auto& [k, v] : flat)
        if (k == columns[c]) os << cell(v);
    }
    os << '\n';
  }
}

/// The array inside a result that holds its table rows.
inline const ordered_json* table_of(const ordered_json& result) {
  for (const char* key : {"entries", "probabilities", "rows", "histogram", "points"}) {
    if (result.contains(key) && result[key].is_array()) return &result[key];
  }
  return nullptr;
}

inline void write_csv(std::ostream& os, const ordered_json& doc) {
  os << "# manifest: " << doc.at("manifest").dump() << '\n';
  const ordered_json& result = doc.at("result");
  if (const ordered_json* rows = table_of(result)) {
    write_table(os, *rows);
    return;
  }
  // Scalar summary: one key,value line each.
  os << "key,value\n";
  for (const auto& [k, v] : result.items())
    if (!v.is_array() && !v.is_object()) os << k << ',' << cell(v) << '\n';
}

// ---------------------------------------------------------------------------
// SVG

struct Bar {
  std::string label;
  double value;
};

/// Bars for the natural quantity of a result: frequencies, probabilities,
/// histogram counts or p_n.
inline std::vector<Bar> bars_of(const ordered_json& result, std::size_t limit = 40) {
  std::vector<Bar> bars;
  const ordered_json* rows = table_of(result);
  if (!rows) return bars;
  for (const auto& row : *rows) {
    if (bars.size() >= limit) break;
    std::string label;
    double value = 0.0;
    if (row.contains("code")) label = row["code"].get<std::string>();
    else if (row.contains("triangle")) label = row["triangle"].dump();
    else if (row.contains("length")) label = std::to_string(row["length"].get<long>());
    else if (row.contains("n")) label = std::to_string(row["n"].get<long>());
    for (const char* key : {"frequency", "probability", "count", "p_n"}) {
      if (row.contains(key) && row[key].is_number()) {
        value = row[key].get<double>();
        break;
      }
    }
    bars.push_back({label, value});
  }
  return bars;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void write_svg(std::ostream& os, const std::string& title, const std::vector<Bar>& bars) {
  const double width = 60.0 + 24.0 * static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  const double height = 320.0, top = 30.0, base = 230.0;
  double vmax = 0.0;
  for (const auto& b : bars) vmax = std::max(vmax, b.value);
  if (vmax <= 0.0) vmax = 1.0;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"10\">\n";
  os << "<text x=\"10\" y=\"18\" font-size=\"13\">" << xml_escape(title) << "</text>\n";
  os << "<line x1=\"40\" y1=\"" << base << "\" x2=\"" << width - 10 << "\" y2=\"" << base << "\" stroke=\"black\"/>\n";
  os << "<text x=\"2\" y=\"" << top + 4 << "\">" << vmax << "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double h = (base - top) * bars[i].value / vmax;
    const double x = 44.0 + 24.0 * static_cast<double>(i);
    os << "<rect x=\"" << x << "\" y=\"" << base - h << "\" width=\"18\" height=\"" << h << "\" fill=\"steelblue\"><title>"
       << xml_escape(bars[i].label) << ": " << bars[i].value << "</title></rect>\n";
    os << "<text transform=\"translate(" << x + 12 << ',' << base + 6 << ") rotate(70)\">" << xml_escape(bars[i].label) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace degen_dt::cli
