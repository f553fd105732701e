#pragma once

#include <string>
#include <vector>

#include "gaze/core/types.hpp"

namespace gaze::metrics {

using core::DensityMap;
using core::FixationSet;
using core::LuminanceGrid;
using core::VisualAngleCalibration;

enum class Metric { CC, SIM, KL, NSS, AUC_Judd, AUC_Borji, SAUC, IG };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);
bool higher_is_better(Metric m);

struct MetricResult {
  Metric metric;
  double value;
  bool higher_is_better;
};

struct ShuffleConfig {
  int n_splits = 100;
  int negatives_per_split = 100;
  std::uint64_t seed = 0;
};

// Binary fixation raster convolved with an isotropic Gaussian of
// sigma_pixels (truncated at 3 sigma, kernel renormalized), sum-to-one.
DensityMap smooth_fixations(const FixationSet& fix, const VisualAngleCalibration& cal = {});

LuminanceGrid fixation_raster(const FixationSet& fix);

// Pearson correlation over pixels. Throws on constant inputs.
double cc(const DensityMap& p, const DensityMap& q);

// Histogram intersection; both maps must be sum-to-one.
double sim(const DensityMap& p, const DensityMap& q);

// KL(gt || sm) with eps regularization inside log and denominator.
double kl_div(const DensityMap& gt, const DensityMap& sm, double eps = 1e-7);

// Mean of the z-scored (population std) map at fixation pixels.
double nss(const LuminanceGrid& sm, const FixationSet& fix);

double auc_judd(const LuminanceGrid& sm, const FixationSet& fix);
double auc_borji(const LuminanceGrid& sm, const FixationSet& fix, const ShuffleConfig& cfg = {});
double sauc(const LuminanceGrid& sm, const FixationSet& fix,
            const std::vector<FixationSet>& other_fix, const ShuffleConfig& cfg = {});

// Mean over fixations of log2(sm + eps) - log2(baseline + eps).
double info_gain(const DensityMap& sm, const FixationSet& fix, const DensityMap& baseline,
                 double eps = 1e-7);

// Leave-one-observer-out inter-observer score: each observer's fixations are
// predicted by the smoothed density of the remaining observers, averaged.
// `other_stimuli` supplies the shuffled-AUC negative pool (per-stimulus
// fixation sets from the rest of the evaluation group).
double io_score(const std::vector<FixationSet>& per_observer, Metric metric,
                const VisualAngleCalibration& cal = {},
                const std::vector<FixationSet>& other_stimuli = {},
                const ShuffleConfig& cfg = {});

MetricResult make_result(Metric m, double value);

}  // namespace gaze::metrics
