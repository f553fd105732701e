#include "gaze/core/image_ops.hpp"

#include <algorithm>
#include <cmath>

namespace gaze::core {

LuminanceGrid to_grayscale(const ColorImage& img) {
  LuminanceGrid out(img.width, img.height);
  const size_t n = out.size();
  for (size_t i = 0; i < n; ++i) {
    out.data[i] = 0.299 * img.data[i * 3] + 0.587 * img.data[i * 3 + 1] +
                  0.114 * img.data[i * 3 + 2];
  }
  return out;
}

namespace {

template <typename Raster, int Ch>
Raster resample(const Raster& src, int out_w, int out_h, double inv_sx, double inv_sy) {
  Raster dst;
  dst.width = out_w;
  dst.height = out_h;
  dst.data.resize(static_cast<size_t>(out_w) * out_h * Ch);
  const int sw = src.width, sh = src.height;
  for (int v = 0; v < out_h; ++v) {
    const double syf = (v + 0.5) * inv_sy - 0.5;
    const double fy = std::floor(syf);
    const double wy = syf - fy;
    const int y0 = std::clamp(static_cast<int>(fy), 0, sh - 1);
    const int y1 = std::clamp(static_cast<int>(fy) + 1, 0, sh - 1);
    for (int u = 0; u < out_w; ++u) {
      const double sxf = (u + 0.5) * inv_sx - 0.5;
      const double fx = std::floor(sxf);
      const double wx = sxf - fx;
      const int x0 = std::clamp(static_cast<int>(fx), 0, sw - 1);
      const int x1 = std::clamp(static_cast<int>(fx) + 1, 0, sw - 1);
      for (int c = 0; c < Ch; ++c) {
        const double p00 = src.data[(static_cast<size_t>(y0) * sw + x0) * Ch + c];
        const double p10 = src.data[(static_cast<size_t>(y0) * sw + x1) * Ch + c];
        const double p01 = src.data[(static_cast<size_t>(y1) * sw + x0) * Ch + c];
        const double p11 = src.data[(static_cast<size_t>(y1) * sw + x1) * Ch + c];
        dst.data[(static_cast<size_t>(v) * out_w + u) * Ch + c] =
            (1 - wy) * ((1 - wx) * p00 + wx * p10) + wy * ((1 - wx) * p01 + wx * p11);
      }
    }
  }
  return dst;
}

}  // namespace

ColorImage resize_bilinear(const ColorImage& img, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resize_bilinear: bad output size");
  if (out_w == img.width && out_h == img.height) return img;
  return resample<ColorImage, 3>(img, out_w, out_h, double(img.width) / out_w,
                                 double(img.height) / out_h);
}

LuminanceGrid resize_bilinear(const LuminanceGrid& grid, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resize_bilinear: bad output size");
  if (out_w == grid.width && out_h == grid.height) return grid;
  return resample<LuminanceGrid, 1>(grid, out_w, out_h, double(grid.width) / out_w,
                                    double(grid.height) / out_h);
}

ColorImage resize_scale(const ColorImage& img, double s) {
  if (s <= 0.0) throw std::invalid_argument("resize_scale: scale must be positive");
  const int out_w = std::max(1, static_cast<int>(std::floor(img.width * s + 0.5)));
  const int out_h = std::max(1, static_cast<int>(std::floor(img.height * s + 0.5)));
  if (out_w == img.width && out_h == img.height && s == 1.0) return img;
  // Sampling uses 1/s on both axes so the embedded content keeps its aspect
  // ratio exactly even when the rounded output dimensions do not.
  return resample<ColorImage, 3>(img, out_w, out_h, 1.0 / s, 1.0 / s);
}

PadResult pad_to_canvas(const ColorImage& img, int canvas_w, int canvas_h, double fill) {
  if (canvas_w < 1 || canvas_h < 1) throw std::invalid_argument("pad_to_canvas: canvas too small");
  const double s = std::min(double(canvas_w) / img.width, double(canvas_h) / img.height);
  ColorImage content = (s == 1.0) ? img : resize_scale(img, s);
  if (content.width > canvas_w || content.height > canvas_h) {
    // Rounding may overshoot by one pixel; shrink to the exact fit.
    content = resize_bilinear(content, std::min(content.width, canvas_w),
                              std::min(content.height, canvas_h));
  }

  PadResult res;
  res.record.scale = s;
  res.record.content_w = content.width;
  res.record.content_h = content.height;
  res.record.offset_x = (canvas_w - content.width) / 2;
  res.record.offset_y = (canvas_h - content.height) / 2;

  if (content.width == canvas_w && content.height == canvas_h) {
    res.image = std::move(content);
    return res;
  }
  res.image = ColorImage(canvas_w, canvas_h, fill);
  for (int y = 0; y < content.height; ++y) {
    const double* srow = &content.data[static_cast<size_t>(y) * content.width * 3];
    double* drow = &res.image.data[((static_cast<size_t>(y) + res.record.offset_y) * canvas_w +
                                    res.record.offset_x) *
                                   3];
    std::copy(srow, srow + static_cast<size_t>(content.width) * 3, drow);
  }
  return res;
}

}  // namespace gaze::core
