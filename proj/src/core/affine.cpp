#include "gaze/core/affine.hpp"

#include <algorithm>
#include <cmath>

namespace gaze::core {

AffineMap AffineMap::translation(double tx, double ty) {
  AffineMap a;
  a.m[2][0] = tx;
  a.m[2][1] = ty;
  return a;
}

AffineMap AffineMap::rotation_deg(double degrees) {
  // Raster y points down, so a counterclockwise rotation on screen (the
  // imrotate sense for positive angles) flips the sine sign relative to the
  // math-axes form.
  const double t = degrees * M_PI / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  AffineMap a;
  a.m[0][0] = c;
  a.m[0][1] = -s;
  a.m[1][0] = s;
  a.m[1][1] = c;
  return a;
}

AffineMap AffineMap::scale(double sx, double sy) {
  AffineMap a;
  a.m[0][0] = sx;
  a.m[1][1] = sy;
  return a;
}

AffineMap AffineMap::from_rows(double a, double b, double c, double d, double e, double f) {
  AffineMap out;
  out.m[0][0] = a;
  out.m[0][1] = b;
  out.m[1][0] = c;
  out.m[1][1] = d;
  out.m[2][0] = e;
  out.m[2][1] = f;
  return out;
}

AffineMap AffineMap::inverse() const {
  const double d = det();
  if (d == 0.0) throw std::invalid_argument("AffineMap: singular matrix");
  AffineMap inv;
  inv.m[0][0] = m[1][1] / d;
  inv.m[0][1] = -m[0][1] / d;
  inv.m[1][0] = -m[1][0] / d;
  inv.m[1][1] = m[0][0] / d;
  inv.m[2][0] = -(m[2][0] * inv.m[0][0] + m[2][1] * inv.m[1][0]);
  inv.m[2][1] = -(m[2][0] * inv.m[0][1] + m[2][1] * inv.m[1][1]);
  return inv;
}

AffineMap AffineMap::then(const AffineMap& next) const {
  AffineMap out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out.m[r][c] = m[r][0] * next.m[0][c] + m[r][1] * next.m[1][c] + m[r][2] * next.m[2][c];
  return out;
}

void loose_extent(const AffineMap& map, int w, int h, int& out_w, int& out_h,
                  double& shift_x, double& shift_y) {
  // Footprint corners in the pixel-area model: pixels cover [-0.5, dim-0.5].
  const double xs[2] = {-0.5, w - 0.5};
  const double ys[2] = {-0.5, h - 0.5};
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (double cx : xs)
    for (double cy : ys) {
      double tx, ty;
      map.apply(cx, cy, tx, ty);
      minx = std::min(minx, tx);
      miny = std::min(miny, ty);
      maxx = std::max(maxx, tx);
      maxy = std::max(maxy, ty);
    }
  out_w = static_cast<int>(std::ceil(maxx - minx - 1e-9));
  out_h = static_cast<int>(std::ceil(maxy - miny - 1e-9));
  // Destination pixel u has center at minx + 0.5 + u.
  shift_x = -(minx + 0.5);
  shift_y = -(miny + 0.5);
}

namespace {

template <typename Raster, int Ch>
Raster warp(const Raster& src, const AffineMap& map, double fill, BBoxMode bbox,
            int fixed_w, int fixed_h, AffineMap* forward_out) {
  if (map.det() == 0.0) throw std::invalid_argument("apply_affine: singular map");

  AffineMap fwd = map;
  int out_w, out_h;
  if (bbox == BBoxMode::Loose) {
    double sx, sy;
    loose_extent(map, src.width, src.height, out_w, out_h, sx, sy);
    fwd = map.then(AffineMap::translation(sx, sy));
  } else {
    out_w = fixed_w > 0 ? fixed_w : src.width;
    out_h = fixed_h > 0 ? fixed_h : src.height;
  }
  if (forward_out) *forward_out = fwd;

  const AffineMap inv = fwd.inverse();
  Raster dst;
  dst.width = out_w;
  dst.height = out_h;
  dst.data.assign(static_cast<size_t>(out_w) * out_h * Ch, fill);

  const int sw = src.width, sh = src.height;
  for (int v = 0; v < out_h; ++v) {
    for (int u = 0; u < out_w; ++u) {
      double sxf, syf;
      inv.apply(u, v, sxf, syf);
      // Inside the footprint means within the pixel-area extent; bilinear
      // neighbors are clamped (replicate) at the borders.
      if (sxf < -0.5 || sxf > sw - 0.5 || syf < -0.5 || syf > sh - 0.5) continue;
      const double fx = std::floor(sxf), fy = std::floor(syf);
      const double wx = sxf - fx, wy = syf - fy;
      const int x0 = std::clamp(static_cast<int>(fx), 0, sw - 1);
      const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, sw - 1);
      const int y0 = std::clamp(static_cast<int>(fy), 0, sh - 1);
      const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, sh - 1);
      const size_t base = (static_cast<size_t>(v) * out_w + u) * Ch;
      for (int c = 0; c < Ch; ++c) {
        const double p00 = src.data[(static_cast<size_t>(y0) * sw + x0) * Ch + c];
        const double p10 = src.data[(static_cast<size_t>(y0) * sw + x1) * Ch + c];
        const double p01 = src.data[(static_cast<size_t>(y1) * sw + x0) * Ch + c];
        const double p11 = src.data[(static_cast<size_t>(y1) * sw + x1) * Ch + c];
        dst.data[base + c] = (1 - wy) * ((1 - wx) * p00 + wx * p10) +
                             wy * ((1 - wx) * p01 + wx * p11);
      }
    }
  }
  return dst;
}

}  // namespace

AffineResult apply_affine(const ColorImage& img, const AffineMap& map, double fill,
                          BBoxMode bbox, int fixed_w, int fixed_h) {
  AffineResult res;
  res.image = warp<ColorImage, 3>(img, map, fill, bbox, fixed_w, fixed_h, &res.forward);
  return res;
}

LuminanceGrid apply_affine(const LuminanceGrid& grid, const AffineMap& map, double fill,
                           BBoxMode bbox, int fixed_w, int fixed_h) {
  return warp<LuminanceGrid, 1>(grid, map, fill, bbox, fixed_w, fixed_h, nullptr);
}

}  // namespace gaze::core
