// Independent brute-force oracles used by the unit and acceptance suites.
// These deliberately avoid the library's optimized code paths: metrics are
// written from their textbook definitions and the ROC area is an exhaustive
// threshold sweep.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double num = 0.0, da = 0.0, db = 0.0;
  for (size_t i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(da * db);
}

inline double sim(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += std::min(p[i], q[i]);
  return s;
}

inline double kl(const std::vector<double>& gt, const std::vector<double>& sm,
                 double eps = 1e-7) {
  double s = 0.0;
  for (size_t i = 0; i < gt.size(); ++i) {
    if (gt[i] == 0.0) continue;
    s += gt[i] * std::log(gt[i] / (sm[i] + eps) + eps);
  }
  return s;
}

// z-scored (population std) map averaged at fixation indices
inline double nss(const std::vector<double>& sm, const std::vector<size_t>& fix_idx) {
  const size_t n = sm.size();
  double mean = 0.0;
  for (double v : sm) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sm) var += (v - mean) * (v - mean);
  var /= n;
  const double sd = std::sqrt(var);
  double s = 0.0;
  for (size_t i : fix_idx) s += (sm[i] - mean) / sd;
  return s / fix_idx.size();
}

// Exhaustive trapezoidal ROC: thresholds at each distinct positive value
// (>= comparison), endpoints (0,0) and (1,1), O(T * N) counting.
inline double roc_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("roc oracle: empty class");
  std::vector<double> thresholds = pos;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<std::pair<double, double>> curve;  // (fpr, tpr) ascending
  curve.emplace_back(0.0, 0.0);
  for (double t : thresholds) {
    size_t tp = 0, fp = 0;
    for (double v : pos)
      if (v >= t) ++tp;
    for (double v : neg)
      if (v >= t) ++fp;
    curve.emplace_back(double(fp) / neg.size(), double(tp) / pos.size());
  }
  curve.emplace_back(1.0, 1.0);

  double area = 0.0;
  for (size_t i = 1; i < curve.size(); ++i)
    area += 0.5 * (curve[i].second + curve[i - 1].second) *
            (curve[i].first - curve[i - 1].first);
  return area;
}

// Direct convolution oracles (zero padding), shapes as in the library.
struct ConvShape {
  int n, c, h, w;
};

inline void naive_conv2d(const std::vector<double>& x, ConvShape xs, const std::vector<double>& w,
                         int cout, int kh, int kw, const std::vector<double>& bias, int stride,
                         int pad, std::vector<double>& out, int& oh, int& ow) {
  oh = (xs.h + 2 * pad - kh) / stride + 1;
  ow = (xs.w + 2 * pad - kw) / stride + 1;
  out.assign(static_cast<size_t>(xs.n) * cout * oh * ow, 0.0);
  auto X = [&](int n, int c, int y, int xx) {
    return x[((static_cast<size_t>(n) * xs.c + c) * xs.h + y) * xs.w + xx];
  };
  auto W = [&](int co, int ci, int y, int xx) {
    return w[((static_cast<size_t>(co) * xs.c + ci) * kh + y) * kw + xx];
  };
  for (int n = 0; n < xs.n; ++n)
    for (int co = 0; co < cout; ++co)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          double acc = bias[co];
          for (int ci = 0; ci < xs.c; ++ci)
            for (int ky = 0; ky < kh; ++ky)
              for (int kx = 0; kx < kw; ++kx) {
                const int iy = oy * stride - pad + ky;
                const int ix = ox * stride - pad + kx;
                if (iy < 0 || iy >= xs.h || ix < 0 || ix >= xs.w) continue;
                acc += X(n, ci, iy, ix) * W(co, ci, ky, kx);
              }
          out[((static_cast<size_t>(n) * cout + co) * oh + oy) * ow + ox] = acc;
        }
}

inline void naive_conv_transpose2d(const std::vector<double>& x, ConvShape xs,
                                   const std::vector<double>& w, int cout, int kh, int kw,
                                   const std::vector<double>& bias, int stride, int pad,
                                   int out_pad, std::vector<double>& out, int& oh, int& ow) {
  oh = (xs.h - 1) * stride - 2 * pad + kh + out_pad;
  ow = (xs.w - 1) * stride - 2 * pad + kw + out_pad;
  out.assign(static_cast<size_t>(xs.n) * cout * oh * ow, 0.0);
  for (int n = 0; n < xs.n; ++n)
    for (int co = 0; co < cout; ++co)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox)
          out[((static_cast<size_t>(n) * cout + co) * oh + oy) * ow + ox] = bias[co];
  for (int n = 0; n < xs.n; ++n)
    for (int ci = 0; ci < xs.c; ++ci)
      for (int iy = 0; iy < xs.h; ++iy)
        for (int ix = 0; ix < xs.w; ++ix) {
          const double xv = x[((static_cast<size_t>(n) * xs.c + ci) * xs.h + iy) * xs.w + ix];
          for (int co = 0; co < cout; ++co)
            for (int ky = 0; ky < kh; ++ky)
              for (int kx = 0; kx < kw; ++kx) {
                const int oy = iy * stride - pad + ky;
                const int ox = ix * stride - pad + kx;
                if (oy < 0 || oy >= oh || ox < 0 || ox >= ow) continue;
                out[((static_cast<size_t>(n) * cout + co) * oh + oy) * ow + ox] +=
                    xv * w[((static_cast<size_t>(ci) * cout + co) * kh + ky) * kw + kx];
              }
        }
}

}  // namespace oracle
