#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaze/core/affine.hpp"
#include "gaze/core/types.hpp"
#include "gaze/transforms/ops.hpp"

namespace gaze::transforms {

enum class TransformId {
  Reference,
  MotionBlur1,
  MotionBlur2,
  Noise1,
  Noise2,
  JPEG1,
  JPEG2,
  Contrast1,
  Contrast2,
  Rotation1,
  Rotation2,
  Shearing1,
  Shearing2,
  Shearing3,
  Inversion,
  Mirroring,
  Boundary,
  Cropping1,
  Cropping2,
  DownScaling1,
  DownScaling2,
};

std::string to_string(TransformId id);
TransformId transform_id_from_string(const std::string& name);

struct TransformParams {
  // Only the fields relevant to the transform kind are meaningful.
  int blur_length = 0;
  double blur_angle = 0.0;
  double noise_variance = 0.0;
  int jpeg_quality = -1;
  double contrast_low = 0.0, contrast_high = 1.0;
  double rotation_degrees = 0.0;
  core::AffineMap shear_matrix;
  double canny_high = 0.0, canny_sigma = 0.0;
  CropSide crop_side = CropSide::Left;
  int crop_band_h = 0, crop_band_w = 0;
  double lambda = 1.0;
};

struct TransformRecord {
  TransformId id = TransformId::Reference;
  TransformParams params;
  bool invertible_for_alignment = false;
  std::optional<core::AffineMap> alignment;  // transformed-canvas -> Reference-canvas

  std::string name() const { return to_string(id); }

  // Geometric forward map (source -> transformed canvas) for the given input
  // size; only defined when invertible_for_alignment.
  core::AffineMap forward_map(int w, int h) const;
  core::AffineMap alignment_map(int w, int h) const;
};

// All 19 stimulus groups (Reference + 18 transformations) plus the two
// downscale control groups, fully parameterized. Alignment maps are
// instantiated for the standard 1920x1080 canvas.
std::vector<TransformRecord> transform_catalog(int canvas_w = 1920, int canvas_h = 1080);

const TransformRecord& catalog_record(TransformId id);

struct ApplyOptions {
  std::uint64_t seed = 0;
  double fill = 0.5;
  CropMode crop_mode = CropMode::Remove;
};

// Runs one catalog transform on a stimulus.
core::ColorImage apply_transform(const core::ColorImage& img, const TransformRecord& rec,
                                 const ApplyOptions& opt = {});

// Warps a density map gathered on a transformed stimulus back onto the
// Reference canvas and renormalizes to its declared convention. Only legal
// for geometric (invertible) transforms; the rest compare in place.
core::DensityMap align_to_reference(const core::DensityMap& map, const TransformRecord& rec,
                                    int ref_w, int ref_h);

}  // namespace gaze::transforms
