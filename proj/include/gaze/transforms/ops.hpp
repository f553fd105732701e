#pragma once

#include "gaze/core/affine.hpp"
#include "gaze/core/types.hpp"

namespace gaze::transforms {

using core::AffineMap;
using core::ColorImage;

// Normalized line kernel of the given length/orientation, replicate borders.
// (15, 0) and (35, 90) are the MotionBlur1/2 parameter pairs.
ColorImage motion_blur(const ColorImage& img, int length, double angle_deg);

// i.i.d. Gaussian noise in the normalized [0,1] scale, then clamped.
ColorImage gaussian_noise(const ColorImage& img, double mean, double variance,
                          std::uint64_t seed);

// The raw (unclamped) noise field, exposed so the variance contract can be
// checked without the truncation the clamp introduces.
std::vector<double> gaussian_noise_field(size_t n, double mean, double variance,
                                         std::uint64_t seed);

// Per-channel linear map onto [out_low, out_high].
ColorImage contrast_adjust(const ColorImage& img, double out_low, double out_high);

// Loose-bbox bilinear warps; each returns the exact forward map for alignment.
core::AffineResult rotate(const ColorImage& img, double degrees, double fill = 0.5);
core::AffineResult shear(const ColorImage& img, const AffineMap& matrix, double fill = 0.5);

// Exact pixel permutations.
ColorImage mirror_horizontal(const ColorImage& img);
ColorImage mirror_vertical(const ColorImage& img);
ColorImage invert180(const ColorImage& img);
core::LuminanceGrid mirror_horizontal(const core::LuminanceGrid& g);
core::LuminanceGrid invert180(const core::LuminanceGrid& g);

enum class CropSide { Left, Top };
enum class CropMode { Remove, Keep };

// Removes (or keeps) a band_h x band_w band anchored at the given side. The
// canvas size is preserved and untouched pixels are copied verbatim.
ColorImage crop_band(const ColorImage& img, CropSide side, int band_h, int band_w,
                     double fill = 0.5, CropMode mode = CropMode::Remove);

// Bilinear resize by lambda on both axes, re-embedded centered on the
// original canvas.
ColorImage downscale(const ColorImage& img, double lambda, double fill = 0.5);

}  // namespace gaze::transforms
