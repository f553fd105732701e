#include "gaze/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gaze/core/rng.hpp"

namespace gaze::metrics {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::CC: return "cc";
    case Metric::SIM: return "sim";
    case Metric::KL: return "kl";
    case Metric::NSS: return "nss";
    case Metric::AUC_Judd: return "auc_judd";
    case Metric::AUC_Borji: return "auc_borji";
    case Metric::SAUC: return "sauc";
    case Metric::IG: return "ig";
  }
  throw std::logic_error("unknown Metric");
}

Metric metric_from_string(const std::string& name) {
  static const std::map<std::string, Metric> lut = {
      {"cc", Metric::CC},           {"sim", Metric::SIM},
      {"kl", Metric::KL},           {"nss", Metric::NSS},
      {"auc_judd", Metric::AUC_Judd}, {"auc_borji", Metric::AUC_Borji},
      {"sauc", Metric::SAUC},       {"ig", Metric::IG}};
  const auto it = lut.find(name);
  if (it == lut.end()) throw std::invalid_argument("unknown metric '" + name + "'");
  return it->second;
}

bool higher_is_better(Metric m) { return m != Metric::KL; }

MetricResult make_result(Metric m, double value) { return {m, value, higher_is_better(m)}; }

LuminanceGrid fixation_raster(const FixationSet& fix) {
  fix.validate();
  LuminanceGrid raster(fix.canvas_width, fix.canvas_height, 0.0);
  for (const auto& p : fix.points) raster.at(p.x, p.y) = 1.0;
  return raster;
}

DensityMap smooth_fixations(const FixationSet& fix, const VisualAngleCalibration& cal) {
  if (fix.empty()) throw std::invalid_argument("smooth_fixations: empty fixation set");
  if (cal.sigma_pixels < 1) throw std::invalid_argument("smooth_fixations: sigma must be >= 1");
  const LuminanceGrid raster = fixation_raster(fix);

  const double sigma = cal.sigma_pixels;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    ksum += k[i + radius];
  }
  for (double& v : k) v /= ksum;

  const int w = raster.width, h = raster.height;
  LuminanceGrid tmp(w, h, 0.0), blurred(w, h, 0.0);
  // Separable convolution; the raster is sparse so scatter from fixations first.
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = raster.at(x, y);
      if (v == 0.0) continue;
      for (int i = -radius; i <= radius; ++i) {
        const int tx = x + i;
        if (tx >= 0 && tx < w) tmp.at(tx, y) += v * k[i + radius];
      }
    }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = tmp.at(x, y);
      if (v == 0.0) continue;
      for (int i = -radius; i <= radius; ++i) {
        const int ty = y + i;
        if (ty >= 0 && ty < h) blurred.at(x, ty) += v * k[i + radius];
      }
    }
  return core::normalize(std::move(blurred), core::Normalization::SumToOne);
}

namespace {

void check_same_size(const LuminanceGrid& a, const LuminanceGrid& b, const char* op) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

void check_sum_to_one(const DensityMap& m, const char* op) {
  if (m.normalization != core::Normalization::SumToOne)
    throw std::invalid_argument(std::string(op) + ": input must be sum-to-one normalized");
}

}  // namespace

double cc(const DensityMap& p, const DensityMap& q) {
  check_same_size(p.grid, q.grid, "cc");
  const size_t n = p.grid.size();
  double mp = 0.0, mq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mp += p.grid.data[i];
    mq += q.grid.data[i];
  }
  mp /= n;
  mq /= n;
  double spq = 0.0, spp = 0.0, sqq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = p.grid.data[i] - mp, b = q.grid.data[i] - mq;
    spq += a * b;
    spp += a * a;
    sqq += b * b;
  }
  if (spp == 0.0 || sqq == 0.0)
    throw std::invalid_argument("cc: constant map (zero variance)");
  return spq / std::sqrt(spp * sqq);
}

double sim(const DensityMap& p, const DensityMap& q) {
  check_same_size(p.grid, q.grid, "sim");
  check_sum_to_one(p, "sim");
  check_sum_to_one(q, "sim");
  double s = 0.0;
  for (size_t i = 0; i < p.grid.size(); ++i)
    s += std::min(p.grid.data[i], q.grid.data[i]);
  return s;
}

double kl_div(const DensityMap& gt, const DensityMap& sm, double eps) {
  check_same_size(gt.grid, sm.grid, "kl_div");
  check_sum_to_one(gt, "kl_div");
  check_sum_to_one(sm, "kl_div");
  double s = 0.0;
  for (size_t i = 0; i < gt.grid.size(); ++i) {
    const double g = gt.grid.data[i];
    if (g == 0.0) continue;
    s += g * std::log(g / (sm.grid.data[i] + eps) + eps);
  }
  return s;
}

double nss(const LuminanceGrid& sm, const FixationSet& fix) {
  if (fix.empty()) throw std::invalid_argument("nss: empty fixation set");
  if (sm.width != fix.canvas_width || sm.height != fix.canvas_height)
    throw std::invalid_argument("nss: map/fixation canvas mismatch");
  const size_t n = sm.size();
  double mean = 0.0;
  for (double v : sm.data) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sm.data) var += (v - mean) * (v - mean);
  var /= n;  // population variance
  if (var == 0.0) throw std::invalid_argument("nss: constant map (zero variance)");
  const double std_dev = std::sqrt(var);
  double s = 0.0;
  for (const auto& p : fix.points) s += (sm.at(p.x, p.y) - mean) / std_dev;
  return s / fix.points.size();
}

namespace {

// Trapezoidal ROC area for given positive scores against negative scores.
// Thresholds at each distinct positive value (>= comparison), plus the (0,0)
// and (1,1) endpoints.
double roc_auc(std::vector<double> pos, std::vector<double> neg) {
  if (pos.empty() || neg.empty())
    throw std::invalid_argument("roc_auc: empty positive or negative set");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thresholds = pos;
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  // Descending thresholds -> ascending (fpr, tpr) curve.
  std::vector<std::pair<double, double>> curve;
  curve.reserve(thresholds.size() + 2);
  curve.emplace_back(0.0, 0.0);
  for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
    const double t = *it;
    const auto p_ge = pos.end() - std::lower_bound(pos.begin(), pos.end(), t);
    const auto n_ge = neg.end() - std::lower_bound(neg.begin(), neg.end(), t);
    curve.emplace_back(static_cast<double>(n_ge) / nn, static_cast<double>(p_ge) / np);
  }
  curve.emplace_back(1.0, 1.0);

  double area = 0.0;
  for (size_t i = 1; i < curve.size(); ++i)
    area += 0.5 * (curve[i].second + curve[i - 1].second) * (curve[i].first - curve[i - 1].first);
  return area;
}

std::vector<double> values_at_fixations(const LuminanceGrid& sm, const FixationSet& fix) {
  if (fix.empty()) throw std::invalid_argument("auc: empty fixation set");
  if (sm.width != fix.canvas_width || sm.height != fix.canvas_height)
    throw std::invalid_argument("auc: map/fixation canvas mismatch");
  std::vector<double> vals;
  vals.reserve(fix.points.size());
  for (const auto& p : fix.points) vals.push_back(sm.at(p.x, p.y));
  return vals;
}

}  // namespace

double auc_judd(const LuminanceGrid& sm, const FixationSet& fix) {
  const std::vector<double> pos = values_at_fixations(sm, fix);
  std::vector<bool> fixated(sm.size(), false);
  for (const auto& p : fix.points) fixated[static_cast<size_t>(p.y) * sm.width + p.x] = true;
  std::vector<double> neg;
  neg.reserve(sm.size() - pos.size());
  for (size_t i = 0; i < sm.size(); ++i)
    if (!fixated[i]) neg.push_back(sm.data[i]);
  return roc_auc(pos, neg);
}

double auc_borji(const LuminanceGrid& sm, const FixationSet& fix, const ShuffleConfig& cfg) {
  if (cfg.n_splits < 1 || cfg.negatives_per_split < 1)
    throw std::invalid_argument("auc_borji: bad shuffle config");
  const std::vector<double> pos = values_at_fixations(sm, fix);
  core::Rng rng(cfg.seed);
  double total = 0.0;
  for (int s = 0; s < cfg.n_splits; ++s) {
    std::vector<double> neg(cfg.negatives_per_split);
    for (double& v : neg) v = sm.data[rng.next_below(sm.size())];
    total += roc_auc(pos, std::move(neg));
  }
  return total / cfg.n_splits;
}

double sauc(const LuminanceGrid& sm, const FixationSet& fix,
            const std::vector<FixationSet>& other_fix, const ShuffleConfig& cfg) {
  if (other_fix.empty()) throw std::invalid_argument("sauc: empty negative pool");
  if (cfg.n_splits < 1 || cfg.negatives_per_split < 1)
    throw std::invalid_argument("sauc: bad shuffle config");
  const std::vector<double> pos = values_at_fixations(sm, fix);

  // Pool fixation locations from the other stimuli, clamped onto this canvas.
  std::vector<std::pair<int, int>> pool;
  for (const auto& o : other_fix)
    for (const auto& p : o.points) {
      const int x = std::min(p.x, sm.width - 1);
      const int y = std::min(p.y, sm.height - 1);
      pool.emplace_back(x, y);
    }
  if (pool.empty()) throw std::invalid_argument("sauc: empty negative pool");

  core::Rng rng(cfg.seed);
  double total = 0.0;
  for (int s = 0; s < cfg.n_splits; ++s) {
    std::vector<double> neg(cfg.negatives_per_split);
    for (double& v : neg) {
      const auto [x, y] = pool[rng.next_below(pool.size())];
      v = sm.at(x, y);
    }
    total += roc_auc(pos, std::move(neg));
  }
  return total / cfg.n_splits;
}

double info_gain(const DensityMap& sm, const FixationSet& fix, const DensityMap& baseline,
                 double eps) {
  if (fix.empty()) throw std::invalid_argument("info_gain: empty fixation set");
  check_same_size(sm.grid, baseline.grid, "info_gain");
  check_sum_to_one(sm, "info_gain");
  check_sum_to_one(baseline, "info_gain");
  if (sm.grid.width != fix.canvas_width || sm.grid.height != fix.canvas_height)
    throw std::invalid_argument("info_gain: map/fixation canvas mismatch");
  double s = 0.0;
  for (const auto& p : fix.points)
    s += std::log2(sm.grid.at(p.x, p.y) + eps) - std::log2(baseline.grid.at(p.x, p.y) + eps);
  return s / fix.points.size();
}

double io_score(const std::vector<FixationSet>& per_observer, Metric metric,
                const VisualAngleCalibration& cal, const std::vector<FixationSet>& other_stimuli,
                const ShuffleConfig& cfg) {
  if (per_observer.size() < 2)
    throw std::invalid_argument("io_score: need at least 2 observers");

  double total = 0.0;
  int counted = 0;
  for (size_t held = 0; held < per_observer.size(); ++held) {
    const FixationSet& target = per_observer[held];
    if (target.empty()) continue;

    FixationSet rest;
    rest.stimulus_id = target.stimulus_id;
    rest.canvas_width = target.canvas_width;
    rest.canvas_height = target.canvas_height;
    for (size_t o = 0; o < per_observer.size(); ++o) {
      if (o == held) continue;
      rest.points.insert(rest.points.end(), per_observer[o].points.begin(),
                         per_observer[o].points.end());
    }
    if (rest.empty()) continue;

    const DensityMap pred = smooth_fixations(rest, cal);
    double v = 0.0;
    switch (metric) {
      case Metric::CC:
        v = cc(pred, smooth_fixations(target, cal));
        break;
      case Metric::SIM:
        v = sim(pred, smooth_fixations(target, cal));
        break;
      case Metric::KL:
        v = kl_div(smooth_fixations(target, cal), pred);
        break;
      case Metric::NSS:
        v = nss(pred.grid, target);
        break;
      case Metric::AUC_Judd:
        v = auc_judd(pred.grid, target);
        break;
      case Metric::AUC_Borji:
        v = auc_borji(pred.grid, target, cfg);
        break;
      case Metric::SAUC:
        v = sauc(pred.grid, target, other_stimuli, cfg);
        break;
      case Metric::IG: {
        // Uniform baseline unless the caller supplies one via other code paths.
        DensityMap uniform = core::normalize(
            LuminanceGrid(pred.grid.width, pred.grid.height, 1.0), core::Normalization::SumToOne);
        v = info_gain(pred, target, uniform);
        break;
      }
    }
    total += v;
    ++counted;
  }
  if (counted == 0) throw std::invalid_argument("io_score: no observer had fixations");
  return total / counted;
}

}  // namespace gaze::metrics
