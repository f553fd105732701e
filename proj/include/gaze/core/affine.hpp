#pragma once

#include <array>
#include <optional>

#include "gaze/core/types.hpp"

namespace gaze::core {

// 3x3 matrix acting on homogeneous row vectors: [x' y' 1] = [x y 1] * m.
// This is the convention of MATLAB's affine2d, so transformation matrices
// can be transcribed verbatim.
struct AffineMap {
  // m[row][col]
  std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static AffineMap identity() { return AffineMap{}; }
  static AffineMap translation(double tx, double ty);
  static AffineMap rotation_deg(double degrees);  // imrotate sense: positive = counterclockwise
  static AffineMap scale(double sx, double sy);
  static AffineMap from_rows(double a, double b, double c, double d, double e, double f);

  void apply(double x, double y, double& ox, double& oy) const {
    ox = x * m[0][0] + y * m[1][0] + m[2][0];
    oy = x * m[0][1] + y * m[1][1] + m[2][1];
  }

  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  AffineMap inverse() const;
  AffineMap then(const AffineMap& next) const;  // this followed by next
};

enum class BBoxMode { Loose, Fixed };

struct AffineResult {
  ColorImage image;
  AffineMap forward;  // source pixel -> destination pixel, loose shift included
};

// Destination is sampled by inverse mapping with bilinear interpolation;
// samples outside the source footprint take `fill`. Under Loose, the output
// raster is the ceiling of the axis-aligned hull of the mapped source
// footprint (pixel area corners at -0.5 .. dim-0.5).
AffineResult apply_affine(const ColorImage& img, const AffineMap& map, double fill,
                          BBoxMode bbox, int fixed_w = 0, int fixed_h = 0);

LuminanceGrid apply_affine(const LuminanceGrid& grid, const AffineMap& map, double fill,
                           BBoxMode bbox, int fixed_w = 0, int fixed_h = 0);

// Output size of a loose-bbox warp: ceil of the mapped corner hull extent.
void loose_extent(const AffineMap& map, int w, int h, int& out_w, int& out_h,
                  double& shift_x, double& shift_y);

}  // namespace gaze::core
