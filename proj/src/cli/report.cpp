#include "gaze/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gaze/core/png_io.hpp"

namespace gaze::cli {

namespace {

// Shortest representation that still round-trips the double exactly.
std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_report_csv: empty results");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "stimulus_id,group,metric,value\n";
  for (const auto& r : rows)
    out << r.stimulus_id << ',' << r.group << ',' << r.metric << ',' << fmt_double(r.value)
        << '\n';
}

void write_report_json(const std::string& path, const std::vector<ReportRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_report_json: empty results");
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["stimulus_id"] = r.stimulus_id;
    row["group"] = r.group;
    row["metric"] = r.metric;
    row["value"] = r.value;
    j.push_back(std::move(row));
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "stimulus_id,group,metric,value")
    throw std::runtime_error(path + ": bad report header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    ReportRow r;
    std::string value;
    if (!std::getline(ss, r.stimulus_id, ',') || !std::getline(ss, r.group, ',') ||
        !std::getline(ss, r.metric, ',') || !std::getline(ss, value))
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    r.value = std::stod(value);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_matrix_csv(const std::string& path, const analysis::InvarianceMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "group";
  for (const auto& sid : m.stimulus_ids) out << ',' << sid;
  out << ",mean\n";
  for (size_t g = 0; g < m.groups.size(); ++g) {
    out << transforms::to_string(m.groups[g]);
    for (double v : m.values[g]) out << ',' << fmt_double(v);
    out << ',' << fmt_double(m.group_means[g]) << '\n';
  }
}

core::ColorImage render_heatmap(const core::LuminanceGrid& grid) {
  core::ColorImage img(grid.width, grid.height);
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x) {
      const double t = std::clamp(grid.at(x, y), 0.0, 1.0);
      // Fixed 4-stop map: dark blue -> cyan -> yellow -> red.
      double r, g, b;
      if (t < 1.0 / 3.0) {
        const double u = 3.0 * t;
        r = 0.0;
        g = u;
        b = 0.5 + 0.5 * u;
      } else if (t < 2.0 / 3.0) {
        const double u = 3.0 * t - 1.0;
        r = u;
        g = 1.0;
        b = 1.0 - u;
      } else {
        const double u = 3.0 * t - 2.0;
        r = 1.0;
        g = 1.0 - u;
        b = 0.0;
      }
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  return img;
}

void write_heatmap_png(const core::LuminanceGrid& grid, const std::string& path) {
  core::write_png(render_heatmap(grid), path);
}

void write_matrix_heatmap_png(const analysis::InvarianceMatrix& m, const std::string& path,
                              int cell) {
  if (m.values.empty() || m.values[0].empty())
    throw std::invalid_argument("write_matrix_heatmap_png: empty matrix");
  double lo = m.values[0][0], hi = lo;
  for (const auto& row : m.values)
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double range = hi > lo ? hi - lo : 1.0;

  core::LuminanceGrid grid(static_cast<int>(m.values[0].size()) * cell,
                           static_cast<int>(m.values.size()) * cell);
  for (size_t g = 0; g < m.values.size(); ++g)
    for (size_t s = 0; s < m.values[g].size(); ++s) {
      const double t = (m.values[g][s] - lo) / range;
      for (int dy = 0; dy < cell; ++dy)
        for (int dx = 0; dx < cell; ++dx)
          grid.at(static_cast<int>(s) * cell + dx, static_cast<int>(g) * cell + dy) = t;
    }
  write_heatmap_png(grid, path);
}

}  // namespace gaze::cli
