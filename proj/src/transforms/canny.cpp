#include "gaze/transforms/canny.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gaze/core/image_ops.hpp"

namespace gaze::transforms {

namespace {

core::LuminanceGrid gaussian_smooth(const core::LuminanceGrid& in, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;

  const int w = in.width, h = in.height;
  core::LuminanceGrid tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i)
        s += k[i + radius] * in.at(std::clamp(x + i, 0, w - 1), y);
      tmp.at(x, y) = s;
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i)
        s += k[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      out.at(x, y) = s;
    }
  return out;
}

}  // namespace

core::LuminanceGrid canny(const core::LuminanceGrid& gray, double high_threshold,
                          double sigma) {
  const int w = gray.width, h = gray.height;
  const core::LuminanceGrid smooth = gaussian_smooth(gray, sigma);

  std::vector<double> gx(gray.size()), gy(gray.size()), mag(gray.size());
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
      const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
      const size_t i = static_cast<size_t>(y) * w + x;
      gx[i] = 0.5 * (smooth.at(xp, y) - smooth.at(xm, y));
      gy[i] = 0.5 * (smooth.at(x, yp) - smooth.at(x, ym));
      mag[i] = std::hypot(gx[i], gy[i]);
      max_mag = std::max(max_mag, mag[i]);
    }
  core::LuminanceGrid out(w, h, 0.0);
  if (max_mag <= 0.0) return out;  // constant input: no edges
  for (double& m : mag) m /= max_mag;

  // Non-maximum suppression with 4-direction quantization. Ties on symmetric
  // ridges are broken by requiring strict dominance on the negative side.
  std::vector<std::uint8_t> ridge(gray.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (mag[i] == 0.0) continue;
      double angle = std::atan2(gy[i], gx[i]) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      int dx, dy;
      if (angle < 22.5 || angle >= 157.5) {
        dx = 1, dy = 0;
      } else if (angle < 67.5) {
        dx = 1, dy = 1;
      } else if (angle < 112.5) {
        dx = 0, dy = 1;
      } else {
        dx = -1, dy = 1;
      }
      auto m_at = [&](int xx, int yy) -> double {
        if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
        return mag[static_cast<size_t>(yy) * w + xx];
      };
      if (mag[i] > m_at(x - dx, y - dy) && mag[i] >= m_at(x + dx, y + dy)) ridge[i] = 1;
    }

  const double high = high_threshold;
  const double low = 0.4 * high_threshold;
  std::vector<size_t> stack;
  for (size_t i = 0; i < mag.size(); ++i)
    if (ridge[i] && mag[i] >= high) {
      out.data[i] = 1.0;
      stack.push_back(i);
    }
  // Hysteresis: grow strong edges through weak ridge pixels, 8-connected.
  while (!stack.empty()) {
    const size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int ddy = -1; ddy <= 1; ++ddy)
      for (int ddx = -1; ddx <= 1; ++ddx) {
        const int nx = x + ddx, ny = y + ddy;
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        const size_t j = static_cast<size_t>(ny) * w + nx;
        if (out.data[j] == 0.0 && ridge[j] && mag[j] >= low) {
          out.data[j] = 1.0;
          stack.push_back(j);
        }
      }
  }
  return out;
}

core::ColorImage boundary_map(const core::ColorImage& img, double high_threshold, double sigma) {
  const core::LuminanceGrid edges = canny(core::to_grayscale(img), high_threshold, sigma);
  core::ColorImage out(edges.width, edges.height);
  for (size_t i = 0; i < edges.size(); ++i) {
    out.data[i * 3] = edges.data[i];
    out.data[i * 3 + 1] = edges.data[i];
    out.data[i * 3 + 2] = edges.data[i];
  }
  return out;
}

}  // namespace gaze::transforms
