#include "gaze/transforms/catalog.hpp"

#include <cmath>
#include <map>

#include "gaze/transforms/canny.hpp"
#include "gaze/transforms/jpeg.hpp"

namespace gaze::transforms {

using core::AffineMap;

std::string to_string(TransformId id) {
  switch (id) {
    case TransformId::Reference: return "Reference";
    case TransformId::MotionBlur1: return "MotionBlur1";
    case TransformId::MotionBlur2: return "MotionBlur2";
    case TransformId::Noise1: return "Noise1";
    case TransformId::Noise2: return "Noise2";
    case TransformId::JPEG1: return "JPEG1";
    case TransformId::JPEG2: return "JPEG2";
    case TransformId::Contrast1: return "Contrast1";
    case TransformId::Contrast2: return "Contrast2";
    case TransformId::Rotation1: return "Rotation1";
    case TransformId::Rotation2: return "Rotation2";
    case TransformId::Shearing1: return "Shearing1";
    case TransformId::Shearing2: return "Shearing2";
    case TransformId::Shearing3: return "Shearing3";
    case TransformId::Inversion: return "Inversion";
    case TransformId::Mirroring: return "Mirroring";
    case TransformId::Boundary: return "Boundary";
    case TransformId::Cropping1: return "Cropping1";
    case TransformId::Cropping2: return "Cropping2";
    case TransformId::DownScaling1: return "DownScaling1";
    case TransformId::DownScaling2: return "DownScaling2";
  }
  throw std::logic_error("unknown TransformId");
}

TransformId transform_id_from_string(const std::string& name) {
  static const std::map<std::string, TransformId> lut = [] {
    std::map<std::string, TransformId> m;
    for (int i = 0; i <= static_cast<int>(TransformId::DownScaling2); ++i)
      m[to_string(static_cast<TransformId>(i))] = static_cast<TransformId>(i);
    return m;
  }();
  const auto it = lut.find(name);
  if (it == lut.end()) throw std::invalid_argument("unknown transform group '" + name + "'");
  return it->second;
}

namespace {

bool is_geometric(TransformId id) {
  switch (id) {
    case TransformId::Rotation1:
    case TransformId::Rotation2:
    case TransformId::Shearing1:
    case TransformId::Shearing2:
    case TransformId::Shearing3:
    case TransformId::Inversion:
    case TransformId::Mirroring:
    case TransformId::DownScaling1:
    case TransformId::DownScaling2:
      return true;
    default:
      return false;
  }
}

}  // namespace

AffineMap TransformRecord::forward_map(int w, int h) const {
  switch (id) {
    case TransformId::Rotation1:
    case TransformId::Rotation2: {
      const AffineMap rot = AffineMap::rotation_deg(params.rotation_degrees);
      int ow, oh;
      double sx, sy;
      core::loose_extent(rot, w, h, ow, oh, sx, sy);
      return rot.then(AffineMap::translation(sx, sy));
    }
    case TransformId::Shearing1:
    case TransformId::Shearing2:
    case TransformId::Shearing3: {
      int ow, oh;
      double sx, sy;
      core::loose_extent(params.shear_matrix, w, h, ow, oh, sx, sy);
      return params.shear_matrix.then(AffineMap::translation(sx, sy));
    }
    case TransformId::Mirroring:
      // x -> w-1-x
      return AffineMap::from_rows(-1, 0, 0, 1, w - 1.0, 0);
    case TransformId::Inversion:
      return AffineMap::from_rows(-1, 0, 0, -1, w - 1.0, h - 1.0);
    case TransformId::DownScaling1:
    case TransformId::DownScaling2: {
      // Content is scaled about the pixel-area origin then centered.
      const double lam = params.lambda;
      const int cw = std::max(1, static_cast<int>(std::floor(w * lam + 0.5)));
      const int ch = std::max(1, static_cast<int>(std::floor(h * lam + 0.5)));
      const double ox = (w - cw) / 2, oy = (h - ch) / 2;
      // resize maps source s to (s + 0.5) * lam - 0.5
      return AffineMap::scale(lam, lam).then(
          AffineMap::translation(0.5 * lam - 0.5 + ox, 0.5 * lam - 0.5 + oy));
    }
    default:
      throw std::invalid_argument("forward_map: '" + name() + "' has no geometric action");
  }
}

AffineMap TransformRecord::alignment_map(int w, int h) const {
  if (id == TransformId::Reference) return AffineMap::identity();
  if (!invertible_for_alignment)
    throw std::invalid_argument("alignment_map: '" + name() + "' is not invertible");
  return forward_map(w, h).inverse();
}

std::vector<TransformRecord> transform_catalog(int canvas_w, int canvas_h) {
  std::vector<TransformRecord> cat;
  auto add = [&](TransformId id, auto&& fill_params) {
    TransformRecord rec;
    rec.id = id;
    fill_params(rec.params);
    rec.invertible_for_alignment = is_geometric(id);
    if (rec.invertible_for_alignment) rec.alignment = rec.alignment_map(canvas_w, canvas_h);
    cat.push_back(std::move(rec));
  };

  add(TransformId::Reference, [](TransformParams&) {});
  add(TransformId::MotionBlur1, [](TransformParams& p) {
    p.blur_length = 15;
    p.blur_angle = 0.0;
  });
  add(TransformId::MotionBlur2, [](TransformParams& p) {
    p.blur_length = 35;
    p.blur_angle = 90.0;
  });
  add(TransformId::Noise1, [](TransformParams& p) { p.noise_variance = 0.1; });
  add(TransformId::Noise2, [](TransformParams& p) { p.noise_variance = 0.2; });
  add(TransformId::JPEG1, [](TransformParams& p) { p.jpeg_quality = 5; });
  add(TransformId::JPEG2, [](TransformParams& p) { p.jpeg_quality = 0; });
  add(TransformId::Contrast1, [](TransformParams& p) {
    p.contrast_low = 0.3;
    p.contrast_high = 0.7;
  });
  add(TransformId::Contrast2, [](TransformParams& p) {
    p.contrast_low = 0.4;
    p.contrast_high = 0.6;
  });
  add(TransformId::Rotation1, [](TransformParams& p) { p.rotation_degrees = -45.0; });
  add(TransformId::Rotation2, [](TransformParams& p) { p.rotation_degrees = -135.0; });
  add(TransformId::Shearing1, [](TransformParams& p) {
    p.shear_matrix = AffineMap::from_rows(1, 0, 0.5, 1, 0, 0);
  });
  add(TransformId::Shearing2, [](TransformParams& p) {
    p.shear_matrix = AffineMap::from_rows(1, 0.5, 0, 1, 0, 0);
  });
  add(TransformId::Shearing3, [](TransformParams& p) {
    p.shear_matrix = AffineMap::from_rows(1, 0.5, 0.5, 1, 0, 0);
  });
  add(TransformId::Inversion, [](TransformParams&) {});
  add(TransformId::Mirroring, [](TransformParams&) {});
  add(TransformId::Boundary, [](TransformParams& p) {
    p.canny_high = 0.3;
    p.canny_sigma = std::sqrt(2.0);
  });
  add(TransformId::Cropping1, [](TransformParams& p) {
    p.crop_side = CropSide::Left;
    p.crop_band_h = 1080;
    p.crop_band_w = 200;
  });
  add(TransformId::Cropping2, [](TransformParams& p) {
    p.crop_side = CropSide::Top;
    p.crop_band_h = 200;
    p.crop_band_w = 1920;
  });
  add(TransformId::DownScaling1, [](TransformParams& p) { p.lambda = 0.548; });
  add(TransformId::DownScaling2, [](TransformParams& p) { p.lambda = 0.726; });
  return cat;
}

const TransformRecord& catalog_record(TransformId id) {
  static const auto cat = transform_catalog();
  return cat[static_cast<size_t>(id)];
}

core::ColorImage apply_transform(const core::ColorImage& img, const TransformRecord& rec,
                                 const ApplyOptions& opt) {
  const TransformParams& p = rec.params;
  switch (rec.id) {
    case TransformId::Reference:
      return img;
    case TransformId::MotionBlur1:
    case TransformId::MotionBlur2:
      return motion_blur(img, p.blur_length, p.blur_angle);
    case TransformId::Noise1:
    case TransformId::Noise2:
      return gaussian_noise(img, 0.0, p.noise_variance, opt.seed);
    case TransformId::JPEG1:
    case TransformId::JPEG2:
      return jpeg_round_trip(img, p.jpeg_quality);
    case TransformId::Contrast1:
    case TransformId::Contrast2:
      return contrast_adjust(img, p.contrast_low, p.contrast_high);
    case TransformId::Rotation1:
    case TransformId::Rotation2:
      return rotate(img, p.rotation_degrees, opt.fill).image;
    case TransformId::Shearing1:
    case TransformId::Shearing2:
    case TransformId::Shearing3:
      return shear(img, p.shear_matrix, opt.fill).image;
    case TransformId::Inversion:
      return invert180(img);
    case TransformId::Mirroring:
      return mirror_horizontal(img);
    case TransformId::Boundary:
      return boundary_map(img, p.canny_high, p.canny_sigma);
    case TransformId::Cropping1:
    case TransformId::Cropping2: {
      const int bh = std::min(p.crop_band_h, img.height);
      const int bw = std::min(p.crop_band_w, img.width);
      return crop_band(img, p.crop_side, bh, bw, opt.fill, opt.crop_mode);
    }
    case TransformId::DownScaling1:
    case TransformId::DownScaling2:
      return downscale(img, p.lambda, opt.fill);
  }
  throw std::logic_error("unknown TransformId");
}

core::DensityMap align_to_reference(const core::DensityMap& map, const TransformRecord& rec,
                                    int ref_w, int ref_h) {
  if (rec.id == TransformId::Reference) return map;  // identity
  if (!rec.invertible_for_alignment)
    throw std::invalid_argument("align_to_reference: '" + rec.name() +
                                "' compares in place (no inverse alignment)");

  // Mirroring/inversion are exact pixel permutations: they preserve the
  // declared normalization bit-for-bit, so no renormalization pass runs.
  if (rec.id == TransformId::Mirroring)
    return core::DensityMap(mirror_horizontal(map.grid), map.normalization);
  if (rec.id == TransformId::Inversion)
    return core::DensityMap(invert180(map.grid), map.normalization);

  const AffineMap align = rec.alignment_map(ref_w, ref_h);
  core::LuminanceGrid aligned =
      core::apply_affine(map.grid, align, 0.0, core::BBoxMode::Fixed, ref_w, ref_h);
  return core::normalize(std::move(aligned), map.normalization);
}

}  // namespace gaze::transforms
