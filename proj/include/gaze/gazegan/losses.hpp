#pragma once

#include "gaze/core/types.hpp"
#include "gaze/gazegan/autograd.hpp"
#include "gaze/gazegan/hist.hpp"

namespace gaze::gazegan {

// Weights for the L1 / KL / CC / NSS / ACS terms of the content loss.
struct LossWeights {
  double w1 = 1.0;    // L1
  double w2 = 10.0;   // KL
  double w3 = -2.0;   // CC (higher is better, hence negative)
  double w4 = -2.0;   // NSS
  double w5 = 1.0;    // ACS histogram loss
  bool minmax_before_acs = true;  // printed pipeline; false feeds raw histograms
};

// Pixel-level scalar losses, batch size 1, gt held constant.
Var l1_node(const Var& sm, const Var& gt);
Var kl_node(const Var& sm, const Var& gt, double eps = 1e-7);
Var cc_node(const Var& sm, const Var& gt);
// fix_raster: same spatial shape, 1 at fixated pixels.
Var nss_node(const Var& sm, const Var& fix_raster);

// w1*L1 + w2*KL + w3*CC + w4*NSS + w5*ACS, with the histogram pipeline
// (max-scale to [0,255], soft histogram, min-max normalization) applied to
// both sm and gt.
Var content_loss_node(const Var& sm, const Var& gt, const Var& fix_raster,
                      const LossWeights& w = {});

struct ContentLossResult {
  double value = 0.0;
  Tensor grad_sm;
  // individual terms, unweighted
  double l1 = 0.0, kl = 0.0, cc = 0.0, nss = 0.0, acs = 0.0;
};

ContentLossResult content_loss(const Tensor& sm, const Tensor& gt_den, const Tensor& gt_fix,
                               const LossWeights& w = {});

// Adversarial losses over patch probabilities in (0,1); inputs are clamped
// to [1e-7, 1-1e-7] before the logs.
Var disc_loss_node(const Var& d_real, const Var& d_fake_detached);
Var gen_adv_loss_node(const Var& d_fake, bool saturating = false);

struct AdversarialLoss {
  double loss_d = 0.0;
  double loss_g = 0.0;            // non-saturating: -mean log d_fake
  double loss_g_saturating = 0.0; // mean log(1 - d_fake)
};

AdversarialLoss adversarial_loss(const Tensor& d_real, const Tensor& d_fake);

}  // namespace gaze::gazegan
