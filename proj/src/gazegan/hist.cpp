#include "gaze/gazegan/hist.hpp"

#include <algorithm>
#include <cmath>

namespace gaze::gazegan {

namespace {

Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> bwd) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  for (const auto& p : parents) {
    n->parents.push_back(p.node());
    if (p.requires_grad()) n->requires_grad = true;
  }
  if (n->requires_grad) n->backward_fn = std::move(bwd);
  return Var(std::move(n));
}

}  // namespace

std::vector<double> hist_estimate(const std::vector<double>& luminances,
                                  const HistogramSpec& spec) {
  const int N = spec.node_count;
  const double delta = spec.delta();
  std::vector<double> p(N + 1, 0.0);
  if (luminances.empty()) throw std::invalid_argument("hist_estimate: empty input");
  const double inv_s = 1.0 / luminances.size();
  for (double l : luminances) {
    if (!(l >= 0.0 && l <= 255.0))
      throw std::invalid_argument("hist_estimate: value " + std::to_string(l) +
                                  " outside [0,255]");
    if (l >= 255.0) {
      p[N] += inv_s;  // closed top interval
      continue;
    }
    const double pos = l / delta;
    const int k = static_cast<int>(std::floor(pos));
    const double f = pos - k;
    p[k] += (1.0 - f) * inv_s;
    p[k + 1] += f * inv_s;
  }
  return p;
}

std::vector<double> hist_estimate(const core::LuminanceGrid& map_scaled,
                                  const HistogramSpec& spec) {
  return hist_estimate(map_scaled.data, spec);
}

std::vector<double> minmax_normalize(const std::vector<double>& p) {
  const auto [mn_it, mx_it] = std::minmax_element(p.begin(), p.end());
  const double mn = *mn_it, mx = *mx_it;
  if (mx == mn) throw std::invalid_argument("minmax_normalize: constant input (max == min)");
  std::vector<double> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = (p[i] - mn) / (mx - mn);
  return out;
}

AcsResult acs_loss(const std::vector<double>& p_bar, const std::vector<double>& q_bar,
                   double eps) {
  if (p_bar.size() != q_bar.size()) throw std::invalid_argument("acs_loss: length mismatch");
  AcsResult res;
  res.grad_p.assign(p_bar.size(), 0.0);
  res.grad_q.assign(q_bar.size(), 0.0);
  for (size_t k = 0; k < p_bar.size(); ++k) {
    const double d = p_bar[k] - q_bar[k];
    const double s = p_bar[k] + q_bar[k] + eps;
    res.loss += 2.0 * d * d / s;
    // d/dp [2 d^2 / s] = 2 (2 d s - d^2) / s^2; the q derivative flips the
    // sign of the 2ds term.
    res.grad_p[k] = 2.0 * (2.0 * d * s - d * d) / (s * s);
    res.grad_q[k] = 2.0 * (-2.0 * d * s - d * d) / (s * s);
  }
  return res;
}

Var max_scale255(const Var& x) {
  const Tensor& v = x.value();
  size_t arg = 0;
  double mx = v[0];
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > mx) {
      mx = v[i];
      arg = i;
    }
  if (mx <= 0.0) throw std::invalid_argument("max_scale255: map must have a positive maximum");
  Tensor out = v;
  const double scale = 255.0 / mx;
  // x * (255/max) can land one ulp above 255 for the max element.
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::min(255.0, out[i] * scale);
  return make_op(std::move(out), {x}, [x, arg, mx](Node& self) {
    if (!x.requires_grad()) return;
    Tensor& gx = x.node()->ensure_grad();
    // y_i = 255 x_i / m with m = x_arg: dy_i/dx_j = 255 (d_ij / m - [j=arg] x_i / m^2)
    double dot = 0.0;
    for (size_t i = 0; i < gx.size(); ++i) {
      gx[i] += self.grad[i] * 255.0 / mx;
      dot += self.grad[i] * x.value()[i];
    }
    gx[arg] -= 255.0 * dot / (mx * mx);
  });
}

Var hist_estimate_node(const Var& x, const HistogramSpec& spec) {
  const Tensor& v = x.value();
  if (v.shape().n != 1)
    throw std::invalid_argument("hist_estimate_node: batch size must be 1");
  const int N = spec.node_count;
  const double delta = spec.delta();
  const double inv_s = 1.0 / v.size();

  Tensor out(Shape{1, 1, 1, N + 1});
  for (size_t i = 0; i < v.size(); ++i) {
    const double l = v[i];
    if (!(l >= 0.0 && l <= 255.0))
      throw std::invalid_argument("hist_estimate_node: value outside [0,255]");
    if (l >= 255.0) {
      out[N] += inv_s;
      continue;
    }
    const double pos = l / delta;
    const int k = static_cast<int>(std::floor(pos));
    const double f = pos - k;
    out[k] += (1.0 - f) * inv_s;
    out[k + 1] += f * inv_s;
  }
  return make_op(std::move(out), {x}, [x, N, delta, inv_s](Node& self) {
    if (!x.requires_grad()) return;
    Tensor& gx = x.node()->ensure_grad();
    const Tensor& v = x.value();
    for (size_t i = 0; i < v.size(); ++i) {
      const double l = v[i];
      if (l >= 255.0) continue;  // top node: flat (closed interval)
      const double pos = l / delta;
      const int k = static_cast<int>(std::floor(pos));
      const double f = pos - k;
      if (f == 0.0 && k > 0) continue;  // kink: subgradient 0
      // dp_k/dl = -1/(S*delta), dp_{k+1}/dl = +1/(S*delta)
      gx[i] += inv_s / delta * (self.grad[k + 1] - self.grad[k]);
    }
  });
}

Var minmax_normalize_node(const Var& p) {
  const Tensor& v = p.value();
  size_t imn = 0, imx = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[imn]) imn = i;
    if (v[i] > v[imx]) imx = i;
  }
  const double mn = v[imn], mx = v[imx];
  if (mx == mn)
    throw std::invalid_argument("minmax_normalize_node: constant input (max == min)");
  const double range = mx - mn;
  Tensor out = v;
  for (size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - mn) / range;
  return make_op(std::move(out), {p}, [p, imn, imx, mn, range](Node& self) {
    if (!p.requires_grad()) return;
    Tensor& gp = p.node()->ensure_grad();
    // out_j = (p_j - mn)/R:  d/dp_i = (d_ij - [i=imn])/R
    //                               - (p_j - mn) ([i=imx] - [i=imn]) / R^2
    double gsum = 0.0, gdot = 0.0;
    for (size_t j = 0; j < gp.size(); ++j) {
      gsum += self.grad[j];
      gdot += self.grad[j] * (p.value()[j] - mn);
    }
    for (size_t j = 0; j < gp.size(); ++j) gp[j] += self.grad[j] / range;
    gp[imn] -= gsum / range;
    gp[imx] -= gdot / (range * range);
    gp[imn] += gdot / (range * range);
  });
}

Var acs_node(const Var& p_bar, const Var& q_bar, double eps) {
  const Tensor& pv = p_bar.value();
  const Tensor& qv = q_bar.value();
  if (!(pv.shape() == qv.shape())) throw std::invalid_argument("acs_node: shape mismatch");
  double loss = 0.0;
  for (size_t k = 0; k < pv.size(); ++k) {
    const double d = pv[k] - qv[k];
    loss += 2.0 * d * d / (pv[k] + qv[k] + eps);
  }
  return make_op(Tensor::scalar(loss), {p_bar, q_bar}, [p_bar, q_bar, eps](Node& self) {
    const Tensor& pv = p_bar.value();
    const Tensor& qv = q_bar.value();
    const double g = self.grad[0];
    for (size_t k = 0; k < pv.size(); ++k) {
      const double d = pv[k] - qv[k];
      const double s = pv[k] + qv[k] + eps;
      if (p_bar.requires_grad())
        p_bar.node()->ensure_grad()[k] += g * 2.0 * (2.0 * d * s - d * d) / (s * s);
      if (q_bar.requires_grad())
        q_bar.node()->ensure_grad()[k] += g * 2.0 * (-2.0 * d * s - d * d) / (s * s);
    }
  });
}

}  // namespace gaze::gazegan
