#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaze::core {

// Raster conventions used everywhere: origin at the top-left corner, pixel
// centers at integer coordinates, x = column, y = row. Intensities are
// normalized doubles in [0,1]; 8-bit conversion happens only at I/O.

inline std::uint8_t to_byte(double v) {
  if (v <= 0.0) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(v * 255.0 + 0.5);  // round half away from zero
}

inline double from_byte(std::uint8_t b) { return b / 255.0; }

struct LuminanceGrid {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major, size = width*height

  LuminanceGrid() = default;
  LuminanceGrid(int w, int h, double fill = 0.0) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("LuminanceGrid: dimensions must be >= 1");
    data.assign(static_cast<size_t>(w) * h, fill);
  }

  double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return data.size(); }
};

struct ColorImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // row-major, interleaved RGB, size = width*height*3

  ColorImage() = default;
  ColorImage(int w, int h, double fill = 0.0) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("ColorImage: dimensions must be >= 1");
    data.assign(static_cast<size_t>(w) * h * 3, fill);
  }

  double& at(int x, int y, int c) { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
  double at(int x, int y, int c) const { return data[(static_cast<size_t>(y) * width + x) * 3 + c]; }
};

struct FixationPoint {
  int x = 0;
  int y = 0;
  int observer_id = 0;
};

struct FixationSet {
  std::string stimulus_id;
  std::vector<FixationPoint> points;
  int canvas_width = 0;
  int canvas_height = 0;

  void validate() const {
    for (const auto& p : points) {
      if (p.x < 0 || p.x >= canvas_width || p.y < 0 || p.y >= canvas_height)
        throw std::invalid_argument("FixationSet '" + stimulus_id + "': point (" +
                                    std::to_string(p.x) + "," + std::to_string(p.y) +
                                    ") outside canvas");
    }
  }
  bool empty() const { return points.empty(); }
};

enum class Normalization { SumToOne, MaxToOne, Raw };

struct DensityMap {
  LuminanceGrid grid;
  Normalization normalization = Normalization::Raw;

  DensityMap() = default;
  DensityMap(LuminanceGrid g, Normalization n) : grid(std::move(g)), normalization(n) { validate(); }

  void validate() const;

  int width() const { return grid.width; }
  int height() const { return grid.height; }
};

// Renormalizes in place to the requested convention.
DensityMap normalize(LuminanceGrid grid, Normalization n);

struct VisualAngleCalibration {
  double pixels_per_degree_h = 56.91;
  double pixels_per_degree_v = 56.55;
  int sigma_pixels = 57;
};

}  // namespace gaze::core
