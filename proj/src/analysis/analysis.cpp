#include "gaze/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gaze/core/affine.hpp"
#include "gaze/transforms/ops.hpp"

namespace gaze::analysis {

using metrics::Metric;

InvarianceMatrix invariance_matrix(const GazeDataset& dataset, Metric metric) {
  if (metric != Metric::CC && metric != Metric::SIM && metric != Metric::KL)
    throw std::invalid_argument("invariance_matrix: metric must be cc, sim or kl");
  const auto ref_it = dataset.densities.find(TransformId::Reference);
  if (ref_it == dataset.densities.end())
    throw std::invalid_argument("invariance_matrix: dataset has no Reference group");
  const auto& ref = ref_it->second;

  InvarianceMatrix out;
  out.metric = metric;
  for (const auto& [sid, unused] : ref) out.stimulus_ids.push_back(sid);

  struct Row {
    TransformId group;
    std::vector<double> values;
    double mean;
  };
  std::vector<Row> rows;
  for (const auto& [group, stimuli] : dataset.densities) {
    Row row;
    row.group = group;
    for (const auto& sid : out.stimulus_ids) {
      const auto it = stimuli.find(sid);
      if (it == stimuli.end())
        throw std::invalid_argument("invariance_matrix: group '" + transforms::to_string(group) +
                                    "' missing stimulus '" + sid + "'");
      const DensityMap& ref_map = ref.at(sid);
      const DensityMap& test_map = it->second;
      if (ref_map.width() != test_map.width() || ref_map.height() != test_map.height())
        throw std::invalid_argument("invariance_matrix: group '" + transforms::to_string(group) +
                                    "' stimulus '" + sid + "' is not on the Reference canvas" +
                                    " (unaligned geometric group?)");
      double v = 0.0;
      switch (metric) {
        case Metric::CC: v = metrics::cc(ref_map, test_map); break;
        case Metric::SIM: v = metrics::sim(ref_map, test_map); break;
        case Metric::KL: v = metrics::kl_div(ref_map, test_map); break;
        default: break;
      }
      row.values.push_back(v);
    }
    row.mean = 0.0;
    for (double v : row.values) row.mean += v;
    row.mean /= row.values.empty() ? 1.0 : static_cast<double>(row.values.size());
    rows.push_back(std::move(row));
  }

  const bool ascending = (metric == Metric::KL);
  std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    return ascending ? a.mean < b.mean : a.mean > b.mean;
  });

  for (auto& r : rows) {
    out.groups.push_back(r.group);
    out.values.push_back(std::move(r.values));
    out.group_means.push_back(r.mean);
  }
  return out;
}

LuminanceGrid kl_contributions(const DensityMap& ref, const DensityMap& test, double eps) {
  if (ref.width() != test.width() || ref.height() != test.height())
    throw std::invalid_argument("kl_heatmap: dimension mismatch");
  LuminanceGrid heat(ref.width(), ref.height(), 0.0);
  for (size_t i = 0; i < heat.size(); ++i) {
    const double g = ref.grid.data[i];
    if (g == 0.0) continue;
    heat.data[i] = g * std::log(g / (test.grid.data[i] + eps) + eps);
  }
  return heat;
}

LuminanceGrid kl_heatmap(const DensityMap& ref, const DensityMap& test, double eps) {
  LuminanceGrid heat = kl_contributions(ref, test, eps);
  double maxv = 0.0;
  for (double v : heat.data) maxv = std::max(maxv, v);
  for (double& v : heat.data) v = maxv > 0.0 ? std::max(0.0, v) / maxv : 0.0;
  return heat;
}

AugmentationPartition partition() {
  AugmentationPartition p;
  p.valid = {TransformId::Reference, TransformId::Mirroring,  TransformId::Inversion,
             TransformId::Contrast1, TransformId::Shearing1,  TransformId::JPEG1,
             TransformId::Noise1};
  p.invalid = {TransformId::Rotation1, TransformId::Rotation2, TransformId::Shearing2,
               TransformId::Shearing3, TransformId::Cropping1, TransformId::Cropping2,
               TransformId::MotionBlur2};
  return p;
}

std::vector<AugmentedPair> augment_dataset(const std::vector<ColorImage>& images,
                                           const std::vector<DensityMap>& gazes,
                                           PartitionSide side, std::uint64_t seed) {
  if (images.size() != gazes.size())
    throw std::invalid_argument("augment_dataset: unpaired images and gaze maps");

  const AugmentationPartition part = partition();
  const auto& set = side == PartitionSide::Valid ? part.valid : part.invalid;

  std::vector<AugmentedPair> out;
  std::uint64_t draw = 0;
  for (size_t i = 0; i < images.size(); ++i) {
    const ColorImage& img = images[i];
    const DensityMap& gaze = gazes[i];
    if (gaze.width() != img.width || gaze.height() != img.height)
      throw std::invalid_argument("augment_dataset: image/label size mismatch at index " +
                                  std::to_string(i));
    for (const TransformId id : set) {
      if (id == TransformId::Reference) continue;
      const transforms::TransformRecord& rec = transforms::catalog_record(id);
      transforms::ApplyOptions opt;
      opt.seed = seed + draw++;

      AugmentedPair pair;
      pair.group = id;
      pair.image = transforms::apply_transform(img, rec, opt);

      if (rec.invertible_for_alignment) {
        // Geometric member: warp the gaze identically to the stimulus.
        if (id == TransformId::Mirroring) {
          pair.label = DensityMap(transforms::mirror_horizontal(gaze.grid), gaze.normalization);
        } else if (id == TransformId::Inversion) {
          pair.label = DensityMap(transforms::invert180(gaze.grid), gaze.normalization);
        } else {
          const core::AffineMap fwd = rec.forward_map(img.width, img.height);
          core::LuminanceGrid warped = core::apply_affine(
              gaze.grid, fwd, 0.0, core::BBoxMode::Fixed, pair.image.width, pair.image.height);
          pair.label.grid = std::move(warped);
          pair.label.normalization = core::Normalization::Raw;  // mass checked, not re-forced
        }
      } else {
        // Photometric member: the label is bitwise the source label.
        pair.label = gaze;
      }
      out.push_back(std::move(pair));
    }
  }
  return out;
}

}  // namespace gaze::analysis
