#pragma once

#include "gaze/core/types.hpp"

namespace gaze::core {

// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B.
LuminanceGrid to_grayscale(const ColorImage& img);

struct PadRecord {
  double scale = 1.0;  // uniform, identical on both axes
  int offset_x = 0;    // top-left corner of the embedded content
  int offset_y = 0;
  int content_w = 0;
  int content_h = 0;
};

struct PadResult {
  ColorImage image;
  PadRecord record;
};

// Uniformly scales the image to fit the canvas (aspect ratio preserved
// exactly), centers it, and fills the remaining bands with `fill`.
PadResult pad_to_canvas(const ColorImage& img, int canvas_w = 1920, int canvas_h = 1080,
                        double fill = 0.5);

// Bilinear resize to an explicit output size (pixel-area coordinate model).
ColorImage resize_bilinear(const ColorImage& img, int out_w, int out_h);
LuminanceGrid resize_bilinear(const LuminanceGrid& grid, int out_w, int out_h);

// Bilinear resize by a single scale factor applied to both axes.
ColorImage resize_scale(const ColorImage& img, double s);

}  // namespace gaze::core
