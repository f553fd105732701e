#include "gaze/transforms/ops.hpp"

#include <algorithm>
#include <cmath>

#include "gaze/core/image_ops.hpp"
#include "gaze/core/rng.hpp"

namespace gaze::transforms {

namespace {

struct Kernel2D {
  int w = 0, h = 0;
  int cx = 0, cy = 0;  // anchor
  std::vector<double> k;
};

// Rasterizes a length-`len` line through the kernel center at the given
// angle, one unit tap per step, weights normalized to sum 1. Axis-aligned
// angles reproduce the classic 1 x len / len x 1 averaging kernels.
Kernel2D line_kernel(int len, double angle_deg) {
  const double t = angle_deg * M_PI / 180.0;
  // Screen-angle convention: y grows downward, positive angles go
  // counterclockwise on screen.
  const double dx = std::cos(t), dy = -std::sin(t);
  const double half = (len - 1) / 2.0;
  std::vector<std::pair<int, int>> taps;
  int minx = 0, maxx = 0, miny = 0, maxy = 0;
  for (int i = 0; i < len; ++i) {
    const double s = i - half;
    const int x = static_cast<int>(std::lround(s * dx));
    const int y = static_cast<int>(std::lround(s * dy));
    taps.emplace_back(x, y);
    minx = std::min(minx, x);
    maxx = std::max(maxx, x);
    miny = std::min(miny, y);
    maxy = std::max(maxy, y);
  }
  Kernel2D ker;
  ker.w = maxx - minx + 1;
  ker.h = maxy - miny + 1;
  ker.cx = -minx;
  ker.cy = -miny;
  ker.k.assign(static_cast<size_t>(ker.w) * ker.h, 0.0);
  for (auto [x, y] : taps) ker.k[static_cast<size_t>(y - miny) * ker.w + (x - minx)] += 1.0;
  for (double& v : ker.k) v /= len;
  return ker;
}

}  // namespace

ColorImage motion_blur(const ColorImage& img, int length, double angle_deg) {
  if (length < 1) throw std::invalid_argument("motion_blur: length must be >= 1");
  if (length == 1) return img;
  const Kernel2D ker = line_kernel(length, angle_deg);
  ColorImage out(img.width, img.height);
  const int w = img.width, h = img.height;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int ky = 0; ky < ker.h; ++ky) {
        const int sy = std::clamp(y + ky - ker.cy, 0, h - 1);
        for (int kx = 0; kx < ker.w; ++kx) {
          const double kv = ker.k[static_cast<size_t>(ky) * ker.w + kx];
          if (kv == 0.0) continue;
          const int sx = std::clamp(x + kx - ker.cx, 0, w - 1);
          const size_t si = (static_cast<size_t>(sy) * w + sx) * 3;
          acc[0] += kv * img.data[si];
          acc[1] += kv * img.data[si + 1];
          acc[2] += kv * img.data[si + 2];
        }
      }
      const size_t di = (static_cast<size_t>(y) * w + x) * 3;
      out.data[di] = acc[0];
      out.data[di + 1] = acc[1];
      out.data[di + 2] = acc[2];
    }
  }
  return out;
}

std::vector<double> gaussian_noise_field(size_t n, double mean, double variance,
                                         std::uint64_t seed) {
  if (variance <= 0.0) throw std::invalid_argument("gaussian_noise: variance must be > 0");
  core::Rng rng(seed);
  const double sigma = std::sqrt(variance);
  std::vector<double> out(n);
  for (double& v : out) v = mean + sigma * rng.next_gaussian();
  return out;
}

ColorImage gaussian_noise(const ColorImage& img, double mean, double variance,
                          std::uint64_t seed) {
  const auto noise = gaussian_noise_field(img.data.size(), mean, variance, seed);
  ColorImage out = img;
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = std::clamp(out.data[i] + noise[i], 0.0, 1.0);
  return out;
}

ColorImage contrast_adjust(const ColorImage& img, double out_low, double out_high) {
  if (!(out_low >= 0.0 && out_low < out_high && out_high <= 1.0))
    throw std::invalid_argument("contrast_adjust: need 0 <= out_low < out_high <= 1");
  ColorImage out = img;
  const double span = out_high - out_low;
  for (double& v : out.data) v = out_low + span * v;
  return out;
}

core::AffineResult rotate(const ColorImage& img, double degrees, double fill) {
  return core::apply_affine(img, AffineMap::rotation_deg(degrees), fill, core::BBoxMode::Loose);
}

core::AffineResult shear(const ColorImage& img, const AffineMap& matrix, double fill) {
  return core::apply_affine(img, matrix, fill, core::BBoxMode::Loose);
}

ColorImage mirror_horizontal(const ColorImage& img) {
  ColorImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
  return out;
}

ColorImage mirror_vertical(const ColorImage& img) {
  ColorImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, img.height - 1 - y, c);
  return out;
}

ColorImage invert180(const ColorImage& img) {
  ColorImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) = img.at(img.width - 1 - x, img.height - 1 - y, c);
  return out;
}

core::LuminanceGrid mirror_horizontal(const core::LuminanceGrid& g) {
  core::LuminanceGrid out(g.width, g.height);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) out.at(x, y) = g.at(g.width - 1 - x, y);
  return out;
}

core::LuminanceGrid invert180(const core::LuminanceGrid& g) {
  core::LuminanceGrid out(g.width, g.height);
  for (int y = 0; y < g.height; ++y)
    for (int x = 0; x < g.width; ++x) out.at(x, y) = g.at(g.width - 1 - x, g.height - 1 - y);
  return out;
}

ColorImage crop_band(const ColorImage& img, CropSide side, int band_h, int band_w,
                     double fill, CropMode mode) {
  if (band_h < 0 || band_w < 0 || band_h > img.height || band_w > img.width)
    throw std::invalid_argument("crop_band: band exceeds image extent");
  if (band_h == 0 || band_w == 0) return mode == CropMode::Remove ? img : ColorImage(img.width, img.height, fill);

  // The band is anchored at the top-left in both variants; `side` records
  // which edge it spans (Left: full-height strip, Top: full-width strip).
  ColorImage out = img;
  const bool fill_band = (mode == CropMode::Remove);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const bool in_band = x < band_w && y < band_h;
      if (in_band == fill_band)
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = fill;
    }
  }
  (void)side;
  return out;
}

ColorImage downscale(const ColorImage& img, double lambda, double fill) {
  if (lambda <= 0.0 || lambda > 1.0)
    throw std::invalid_argument("downscale: lambda must be in (0, 1]");
  if (lambda == 1.0) return img;
  const ColorImage content = core::resize_scale(img, lambda);
  ColorImage out(img.width, img.height, fill);
  const int ox = (img.width - content.width) / 2;
  const int oy = (img.height - content.height) / 2;
  for (int y = 0; y < content.height; ++y)
    for (int x = 0; x < content.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(x + ox, y + oy, c) = content.at(x, y, c);
  return out;
}

}  // namespace gaze::transforms
