#pragma once

#include <string>
#include <vector>

#include "gaze/analysis/analysis.hpp"
#include "gaze/core/types.hpp"

namespace gaze::cli {

struct ReportRow {
  std::string stimulus_id;
  std::string group;
  std::string metric;
  double value = 0.0;
};

// Deterministic column order: stimulus_id,group,metric,value. Values are
// printed with enough precision to round-trip doubles.
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::string& path);
void write_report_json(const std::string& path, const std::vector<ReportRow>& rows);

// Matrix CSV: one row per ranked group, columns = stimulus ids + mean.
void write_matrix_csv(const std::string& path, const analysis::InvarianceMatrix& m);

// Renders a grid with a fixed colormap (dark blue -> red) scaled to [0,1].
core::ColorImage render_heatmap(const core::LuminanceGrid& grid);
void write_heatmap_png(const core::LuminanceGrid& grid, const std::string& path);

// Cell-block rendering of an invariance matrix, values normalized per matrix.
void write_matrix_heatmap_png(const analysis::InvarianceMatrix& m, const std::string& path,
                              int cell = 12);

}  // namespace gaze::cli
