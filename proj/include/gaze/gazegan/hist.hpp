#pragma once

#include <vector>

#include "gaze/core/types.hpp"
#include "gaze/gazegan/autograd.hpp"

namespace gaze::gazegan {

// Soft histogram over N+1 nodes b_k = 255*k/N uniformly filling [0,255].
// Each luminance splits its mass between the flanking nodes by a triangular
// kernel; the top interval is closed so l = 255 contributes fully to p_N.
struct HistogramSpec {
  int node_count = 255;  // N; the histogram has N+1 entries
  double eps = 1e-8;

  double delta() const { return 255.0 / node_count; }
};

// Values must lie in [0,255]. Sum of the result is exactly 1 (partition of
// unity of the triangular kernel).
std::vector<double> hist_estimate(const std::vector<double>& luminances,
                                  const HistogramSpec& spec = {});
std::vector<double> hist_estimate(const core::LuminanceGrid& map_scaled,
                                  const HistogramSpec& spec = {});

// (p - min) / (max - min). Throws on constant input.
std::vector<double> minmax_normalize(const std::vector<double>& p);

struct AcsResult {
  double loss = 0.0;
  std::vector<double> grad_p;
  std::vector<double> grad_q;
};

// Alternative Chi-Square distance 2 * sum (p-q)^2 / (p+q+eps) with analytic
// gradients for both arguments.
AcsResult acs_loss(const std::vector<double>& p_bar, const std::vector<double>& q_bar,
                   double eps = 1e-8);

// --- differentiable pipeline nodes (batch size 1) -------------------------

// Max-to-one normalization scaled to [0,255]; subgradient picks the first
// argmax on ties.
Var max_scale255(const Var& x);

// (1,*,H,W) -> (1,1,1,N+1) soft histogram per HistogramSpec. Kink
// subgradient convention: derivative 0 when a luminance sits exactly on an
// interior node.
Var hist_estimate_node(const Var& x, const HistogramSpec& spec = {});

Var minmax_normalize_node(const Var& p);

Var acs_node(const Var& p_bar, const Var& q_bar, double eps = 1e-8);

}  // namespace gaze::gazegan
