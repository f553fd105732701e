#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gaze/core/types.hpp"
#include "gaze/metrics/metrics.hpp"
#include "gaze/transforms/catalog.hpp"

namespace gaze::analysis {

using core::ColorImage;
using core::DensityMap;
using core::LuminanceGrid;
using transforms::TransformId;

// Per-group, per-stimulus density maps. Geometric groups must already be
// aligned onto the Reference canvas (transforms::align_to_reference).
struct GazeDataset {
  // group -> stimulus id -> density map (sum-to-one)
  std::map<TransformId, std::map<std::string, DensityMap>> densities;
};

struct InvarianceMatrix {
  std::vector<TransformId> groups;  // ranked by group mean
  metrics::Metric metric = metrics::Metric::CC;
  std::vector<std::string> stimulus_ids;
  // values[group rank][stimulus index]
  std::vector<std::vector<double>> values;
  std::vector<double> group_means;
};

// values[g][s] = metric(Reference density of s, group-g density of s); rows
// ranked by group mean (descending for CC/SIM, ascending for KL). KL uses
// KL(Reference || transformed).
InvarianceMatrix invariance_matrix(const GazeDataset& dataset, metrics::Metric metric);

// Per-pixel KL contribution; the sum over pixels equals kl_div(ref, test).
LuminanceGrid kl_contributions(const DensityMap& ref, const DensityMap& test,
                               double eps = 1e-7);

// Display form: contributions clamped at zero and max-normalized.
LuminanceGrid kl_heatmap(const DensityMap& ref, const DensityMap& test, double eps = 1e-7);

struct AugmentationPartition {
  std::set<TransformId> valid;
  std::set<TransformId> invalid;
};

AugmentationPartition partition();

struct AugmentedPair {
  TransformId group;
  ColorImage image;
  DensityMap label;
};

enum class PartitionSide { Valid, Invalid };

// For each (image, gaze) pair and each non-Reference member of the chosen
// set, emits (transformed image, label). Geometric members warp the gaze
// identically; photometric members keep it unchanged.
std::vector<AugmentedPair> augment_dataset(const std::vector<ColorImage>& images,
                                           const std::vector<DensityMap>& gazes,
                                           PartitionSide side, std::uint64_t seed);

}  // namespace gaze::analysis
