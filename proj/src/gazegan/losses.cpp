#include "gaze/gazegan/losses.hpp"

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

void check_pair(const Var& a, const Var& b, const char* op) {
  if (!(a.value().shape() == b.value().shape()))
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

constexpr double kProbClamp = 1e-7;

}  // namespace

Var l1_node(const Var& sm, const Var& gt) {
  check_pair(sm, gt, "l1_node");
  const size_t n = sm.value().size();
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += std::abs(sm.value()[i] - gt.value()[i]);
  acc /= n;
  return make_op(Tensor::scalar(acc), {sm, gt}, [sm, gt, n](Node& self) {
    if (!sm.requires_grad()) return;
    Tensor& g = sm.node()->ensure_grad();
    const double go = self.grad[0] / n;
    for (size_t i = 0; i < n; ++i) {
      const double d = sm.value()[i] - gt.value()[i];
      g[i] += go * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
    }
  });
}

Var kl_node(const Var& sm, const Var& gt, double eps) {
  check_pair(sm, gt, "kl_node");
  const size_t n = sm.value().size();
  double ssum = 0.0, gsum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (sm.value()[i] < 0.0 || gt.value()[i] < 0.0)
      throw std::invalid_argument("kl_node: negative intensity");
    ssum += sm.value()[i];
    gsum += gt.value()[i];
  }
  if (ssum <= 0.0 || gsum <= 0.0) throw std::invalid_argument("kl_node: all-zero map");

  double loss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double p = gt.value()[i] / gsum;
    if (p == 0.0) continue;
    const double q = sm.value()[i] / ssum;
    loss += p * std::log(p / (q + eps) + eps);
  }
  return make_op(Tensor::scalar(loss), {sm, gt}, [sm, gt, eps, ssum, gsum, n](Node& self) {
    if (!sm.requires_grad()) return;
    Tensor& g = sm.node()->ensure_grad();
    const double go = self.grad[0];
    // L = sum_i p_i ln(p_i/(q_i+eps) + eps), q_i = sm_i / S.
    // dL/dq_i = -p_i^2 / ((q_i+eps)^2 (p_i/(q_i+eps) + eps));
    // dq_i/dsm_j = (d_ij - q_i)/S.
    std::vector<double> dq(n, 0.0);
    double dot = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double p = gt.value()[i] / gsum;
      if (p == 0.0) continue;
      const double q = sm.value()[i] / ssum;
      const double r = p / (q + eps);
      dq[i] = -p * r / ((q + eps) * (r + eps));
      dot += dq[i] * q;
    }
    for (size_t j = 0; j < n; ++j) g[j] += go * (dq[j] - dot) / ssum;
  });
}

Var cc_node(const Var& sm, const Var& gt) {
  check_pair(sm, gt, "cc_node");
  const size_t n = sm.value().size();
  double ms = 0.0, mg = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ms += sm.value()[i];
    mg += gt.value()[i];
  }
  ms /= n;
  mg /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double a = sm.value()[i] - ms, b = gt.value()[i] - mg;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  if (saa == 0.0 || sbb == 0.0)
    throw std::invalid_argument("cc_node: constant map (zero variance)");
  const double denom = std::sqrt(saa * sbb);
  return make_op(Tensor::scalar(sab / denom), {sm, gt},
                 [sm, gt, ms, mg, saa, sab, denom, n](Node& self) {
                   if (!sm.requires_grad()) return;
                   Tensor& g = sm.node()->ensure_grad();
                   const double go = self.grad[0];
                   for (size_t i = 0; i < n; ++i) {
                     const double a = sm.value()[i] - ms, b = gt.value()[i] - mg;
                     g[i] += go * (b - (sab / saa) * a) / denom;
                   }
                 });
}

Var nss_node(const Var& sm, const Var& fix_raster) {
  check_pair(sm, fix_raster, "nss_node");
  const size_t n = sm.value().size();
  double fix_count = 0.0;
  for (size_t i = 0; i < n; ++i) fix_count += fix_raster.value()[i];
  if (fix_count <= 0.0) throw std::invalid_argument("nss_node: empty fixation raster");

  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) mean += sm.value()[i];
  mean /= n;
  double var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = sm.value()[i] - mean;
    var += d * d;
  }
  var /= n;
  if (var == 0.0) throw std::invalid_argument("nss_node: constant map (zero variance)");
  const double sd = std::sqrt(var);

  double loss = 0.0;
  for (size_t i = 0; i < n; ++i)
    loss += fix_raster.value()[i] * (sm.value()[i] - mean) / sd;
  loss /= fix_count;

  return make_op(Tensor::scalar(loss), {sm, fix_raster},
                 [sm, fix_raster, mean, sd, fix_count, n, loss](Node& self) {
                   if (!sm.requires_grad()) return;
                   Tensor& g = sm.node()->ensure_grad();
                   const double go = self.grad[0];
                   // dL/dx_j = (F_j - K/N)/(K sd) - L z_j / (N sd)
                   for (size_t j = 0; j < n; ++j) {
                     const double zj = (sm.value()[j] - mean) / sd;
                     g[j] += go * ((fix_raster.value()[j] - fix_count / n) / (fix_count * sd) -
                                   loss * zj / (n * sd));
                   }
                 });
}

Var content_loss_node(const Var& sm, const Var& gt, const Var& fix_raster,
                      const LossWeights& w) {
  const Var l1 = l1_node(sm, gt);
  const Var kl = kl_node(sm, gt);
  const Var cc = cc_node(sm, gt);
  const Var nss = nss_node(sm, fix_raster);

  const HistogramSpec spec;
  Var p_hist = hist_estimate_node(max_scale255(sm), spec);
  Var q_hist = hist_estimate_node(max_scale255(gt), spec);
  if (w.minmax_before_acs) {
    p_hist = minmax_normalize_node(p_hist);
    q_hist = minmax_normalize_node(q_hist);
  }
  const Var acs = acs_node(p_hist, q_hist, spec.eps);

  return weighted_sum({l1, kl, cc, nss, acs}, {w.w1, w.w2, w.w3, w.w4, w.w5});
}

ContentLossResult content_loss(const Tensor& sm, const Tensor& gt_den, const Tensor& gt_fix,
                               const LossWeights& w) {
  Var sm_var = Var::leaf(sm, true);
  const Var gt_var = Var::leaf(gt_den, false);
  const Var fix_var = Var::leaf(gt_fix, false);

  ContentLossResult res;
  res.l1 = l1_node(sm_var, gt_var).scalar();
  res.kl = kl_node(sm_var, gt_var).scalar();
  res.cc = cc_node(sm_var, gt_var).scalar();
  res.nss = nss_node(sm_var, fix_var).scalar();
  const HistogramSpec spec;
  {
    Var p = hist_estimate_node(max_scale255(sm_var), spec);
    Var q = hist_estimate_node(max_scale255(gt_var), spec);
    if (w.minmax_before_acs) {
      p = minmax_normalize_node(p);
      q = minmax_normalize_node(q);
    }
    res.acs = acs_node(p, q, spec.eps).scalar();
  }

  const Var total = content_loss_node(sm_var, gt_var, fix_var, w);
  res.value = total.scalar();
  backward(total);
  res.grad_sm = sm_var.grad();
  return res;
}

namespace {

double clamp_prob(double v) { return std::clamp(v, kProbClamp, 1.0 - kProbClamp); }

}  // namespace

Var disc_loss_node(const Var& d_real, const Var& d_fake_detached) {
  const size_t nr = d_real.value().size(), nf = d_fake_detached.value().size();
  double loss = 0.0;
  for (size_t i = 0; i < nr; ++i) loss -= std::log(clamp_prob(d_real.value()[i])) / nr;
  for (size_t i = 0; i < nf; ++i)
    loss -= std::log(1.0 - clamp_prob(d_fake_detached.value()[i])) / nf;
  return make_op(Tensor::scalar(loss), {d_real, d_fake_detached},
                 [d_real, d_fake_detached, nr, nf](Node& self) {
                   const double go = self.grad[0];
                   if (d_real.requires_grad()) {
                     Tensor& g = d_real.node()->ensure_grad();
                     for (size_t i = 0; i < nr; ++i)
                       g[i] -= go / (nr * clamp_prob(d_real.value()[i]));
                   }
                   if (d_fake_detached.requires_grad()) {
                     Tensor& g = d_fake_detached.node()->ensure_grad();
                     for (size_t i = 0; i < nf; ++i)
                       g[i] += go / (nf * (1.0 - clamp_prob(d_fake_detached.value()[i])));
                   }
                 });
}

Var gen_adv_loss_node(const Var& d_fake, bool saturating) {
  const size_t n = d_fake.value().size();
  double loss = 0.0;
  if (saturating) {
    for (size_t i = 0; i < n; ++i) loss += std::log(1.0 - clamp_prob(d_fake.value()[i])) / n;
  } else {
    for (size_t i = 0; i < n; ++i) loss -= std::log(clamp_prob(d_fake.value()[i])) / n;
  }
  return make_op(Tensor::scalar(loss), {d_fake}, [d_fake, n, saturating](Node& self) {
    if (!d_fake.requires_grad()) return;
    Tensor& g = d_fake.node()->ensure_grad();
    const double go = self.grad[0];
    for (size_t i = 0; i < n; ++i) {
      const double v = clamp_prob(d_fake.value()[i]);
      if (saturating)
        g[i] -= go / (n * (1.0 - v));
      else
        g[i] -= go / (n * v);
    }
  });
}

AdversarialLoss adversarial_loss(const Tensor& d_real, const Tensor& d_fake) {
  AdversarialLoss out;
  for (size_t i = 0; i < d_real.size(); ++i)
    out.loss_d -= std::log(clamp_prob(d_real[i])) / d_real.size();
  for (size_t i = 0; i < d_fake.size(); ++i) {
    const double v = clamp_prob(d_fake[i]);
    out.loss_d -= std::log(1.0 - v) / d_fake.size();
    out.loss_g -= std::log(v) / d_fake.size();
    out.loss_g_saturating += std::log(1.0 - v) / d_fake.size();
  }
  return out;
}

}  // namespace gaze::gazegan
