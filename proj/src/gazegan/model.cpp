#include "gaze/gazegan/model.hpp"

#include <algorithm>

namespace gaze::gazegan {

CscParams make_csc_params(ParamStore& store, const std::string& prefix, int surround_ch,
                          int center_ch, int unify_ch, core::Rng& rng, double init_std) {
  CscParams p;
  p.up_w = store.add(prefix + ".up.w",
                     Tensor::randn(Shape{surround_ch, surround_ch, 3, 3}, init_std, rng));
  p.up_b = store.add(prefix + ".up.b", Tensor(Shape{1, surround_ch, 1, 1}));
  p.ns_w = store.add(prefix + ".ns.w",
                     Tensor::randn(Shape{unify_ch, surround_ch, 1, 1}, init_std, rng));
  p.ns_b = store.add(prefix + ".ns.b", Tensor(Shape{1, unify_ch, 1, 1}));
  p.nc_w = store.add(prefix + ".nc.w",
                     Tensor::randn(Shape{unify_ch, center_ch, 1, 1}, init_std, rng));
  p.nc_b = store.add(prefix + ".nc.b", Tensor(Shape{1, unify_ch, 1, 1}));
  p.nq_w = store.add(prefix + ".nq.w", Tensor::randn(Shape{1, unify_ch, 1, 1}, init_std, rng));
  p.nq_b = store.add(prefix + ".nq.b", Tensor(Shape{1, 1, 1, 1}));
  return p;
}

Var csc_forward(const Var& f_s, const Var& f_c, const CscConfig& cfg, const CscParams& params) {
  cfg.validate();
  const Shape ss = f_s.value().shape(), cs = f_c.value().shape();
  if (2 * ss.h != cs.h || 2 * ss.w != cs.w)
    throw std::invalid_argument("csc_forward: surround " + ss.str() +
                                " is not spatially half of center " + cs.str());

  // One upsampling step: 3x3 transposed conv, stride 2 (pad 1, output pad 1
  // makes the doubling exact).
  const Var up = conv_transpose2d(f_s, params.up_w, params.up_b, ConvT2dSpec{2, 1, 1});
  const Var f_cs = elementwise_sum(conv2d(up, params.ns_w, params.ns_b, Conv2dSpec{1, 0}),
                                   conv2d(f_c, params.nc_w, params.nc_b, Conv2dSpec{1, 0}));
  const Var squeezed = conv2d(f_cs, params.nq_w, params.nq_b, Conv2dSpec{1, 0});
  const Var attention = spatial_softmax(squeezed);
  return mul_channel_broadcast(f_cs, attention);
}

GeneratorNet::GeneratorNet(const GeneratorConfig& cfg, std::string prefix, ParamStore& store,
                           core::Rng& rng, int in_channels, int inject_channels)
    : cfg_(cfg), prefix_(std::move(prefix)), inject_channels_(inject_channels) {
  const int L = cfg.levels;
  if (L < 5 && cfg.use_csc)
    throw std::invalid_argument("GeneratorNet: CSC modules need at least 5 decoder stages");
  if (L < 2) throw std::invalid_argument("GeneratorNet: need at least 2 stages");

  enc_out_ch_.resize(L + 1);
  for (int k = 1; k <= L; ++k)
    enc_out_ch_[k] = std::min(cfg.base_channels << (k - 1), cfg.max_channels);

  for (int k = 1; k <= L; ++k) {
    const int cin = (k == 1 ? in_channels : enc_out_ch_[k - 1]) +
                    (k == 2 ? inject_channels : 0);
    enc_w_.push_back(store.add(prefix_ + ".enc" + std::to_string(k) + ".w",
                               Tensor::randn(Shape{enc_out_ch_[k], cin, 4, 4}, cfg.init_std, rng)));
    enc_b_.push_back(store.add(prefix_ + ".enc" + std::to_string(k) + ".b",
                               Tensor(Shape{1, enc_out_ch_[k], 1, 1})));
  }

  const int bch = enc_out_ch_[L];
  if (cfg.use_residual) {
    for (int r = 0; r < cfg.residual_blocks; ++r) {
      const std::string rp = prefix_ + ".res" + std::to_string(r + 1);
      res_w1_.push_back(store.add(rp + ".w1", Tensor::randn(Shape{bch, bch, 3, 3}, cfg.init_std, rng)));
      res_b1_.push_back(store.add(rp + ".b1", Tensor(Shape{1, bch, 1, 1})));
      res_w2_.push_back(store.add(rp + ".w2", Tensor::randn(Shape{bch, bch, 3, 3}, cfg.init_std, rng)));
      res_b2_.push_back(store.add(rp + ".b2", Tensor(Shape{1, bch, 1, 1})));
    }
  }

  dec_out_ch_.resize(L + 1);
  for (int j = 1; j < L; ++j) dec_out_ch_[j] = enc_out_ch_[L - j];
  dec_out_ch_[L] = cfg.base_channels;

  const auto cscs = cfg.csc_modules();
  auto csc_at = [&](int j) -> const CscConfig* {
    for (const auto& c : cscs)
      if (c.center_layer == j) return &c;
    return nullptr;
  };

  bundle_ch_.assign(L + 1, 0);
  for (int j = 1; j <= L; ++j) {
    const int cin = (j == 1) ? bch : bundle_ch_[j - 1];
    dec_w_.push_back(store.add(prefix_ + ".dec" + std::to_string(j) + ".w",
                               Tensor::randn(Shape{cin, dec_out_ch_[j], 4, 4}, cfg.init_std, rng)));
    dec_b_.push_back(store.add(prefix_ + ".dec" + std::to_string(j) + ".b",
                               Tensor(Shape{1, dec_out_ch_[j], 1, 1})));
    bundle_ch_[j] = dec_out_ch_[j] + (j < L ? enc_out_ch_[L - j] : 0);
    if (const CscConfig* c = csc_at(j)) {
      const int surround_ch = (j == 1) ? bch : dec_out_ch_[j - 1];
      csc_params_.push_back(make_csc_params(store,
                                            prefix_ + ".csc" + std::to_string(c->surround_layer) +
                                                "_" + std::to_string(c->center_layer),
                                            surround_ch, dec_out_ch_[j], c->unify_channels, rng,
                                            cfg.init_std));
      bundle_ch_[j] += c->unify_channels;
    }
  }

  head_w_ = store.add(prefix_ + ".head.w",
                      Tensor::randn(Shape{1, bundle_ch_[L], 1, 1}, cfg.init_std, rng));
  head_b_ = store.add(prefix_ + ".head.b", Tensor(Shape{1, 1, 1, 1}));
}

GeneratorNet::Output GeneratorNet::forward(const Var& input, const Var& inject) const {
  const int L = cfg_.levels;
  const Shape is = input.value().shape();
  if (is.h % (1 << L) || is.w % (1 << L))
    throw std::invalid_argument("GeneratorNet: input " + is.str() + " not divisible by 2^" +
                                std::to_string(L));
  if ((inject_channels_ > 0) != inject.defined())
    throw std::invalid_argument("GeneratorNet: injection mismatch with configuration");

  std::vector<Var> enc_out(L + 1);
  Var cur = input;
  for (int k = 1; k <= L; ++k) {
    if (k == 2 && inject.defined()) cur = concat_channels({cur, inject});
    cur = leaky_relu(conv2d(cur, enc_w_[k - 1], enc_b_[k - 1], Conv2dSpec{2, 1}),
                     cfg_.leaky_slope);
    enc_out[k] = cur;
  }

  if (cfg_.use_residual) {
    for (size_t r = 0; r < res_w1_.size(); ++r) {
      const Var h = relu(conv2d(cur, res_w1_[r], res_b1_[r], Conv2dSpec{1, 1}));
      cur = elementwise_sum(cur, conv2d(h, res_w2_[r], res_b2_[r], Conv2dSpec{1, 1}));
    }
  }

  const auto cscs = cfg_.csc_modules();
  size_t csc_idx = 0;
  Var prev_raw;  // f_sm^{j-1}, surround source for the CSC at stage j
  Var bundle = cur;
  for (int j = 1; j <= L; ++j) {
    const Var raw = relu(conv_transpose2d(bundle, dec_w_[j - 1], dec_b_[j - 1],
                                          ConvT2dSpec{2, 1, 0}));
    std::vector<Var> groups;
    if (j < L) groups.push_back(enc_out[L - j]);  // skip features f_st
    groups.push_back(raw);                        // decoder features f_sm
    if (csc_idx < cscs.size() && cscs[csc_idx].center_layer == j) {
      const Var surround = (j == 1) ? cur : prev_raw;
      groups.push_back(csc_forward(surround, raw, cscs[csc_idx], csc_params_[csc_idx]));
      ++csc_idx;
    }
    bundle = groups.size() == 1 ? groups[0] : concat_channels(groups);
    prev_raw = raw;
  }

  Output out;
  out.decoder_bundle = bundle;
  out.saliency = logistic(conv2d(bundle, head_w_, head_b_, Conv2dSpec{1, 0}));
  return out;
}

DiscriminatorNet::DiscriminatorNet(const DiscriminatorConfig& cfg, std::string prefix,
                                   ParamStore& store, core::Rng& rng, int in_channels)
    : cfg_(cfg) {
  int cin = in_channels;
  for (int k = 1; k <= cfg.conv_layers; ++k) {
    const int cout = cfg.base_channels << (k - 1);
    w_.push_back(store.add(prefix + ".conv" + std::to_string(k) + ".w",
                           Tensor::randn(Shape{cout, cin, 4, 4}, cfg.init_std, rng)));
    b_.push_back(store.add(prefix + ".conv" + std::to_string(k) + ".b",
                           Tensor(Shape{1, cout, 1, 1})));
    cin = cout;
  }
  head_w_ = store.add(prefix + ".head.w", Tensor::randn(Shape{1, cin, 4, 4}, cfg.init_std, rng));
  head_b_ = store.add(prefix + ".head.b", Tensor(Shape{1, 1, 1, 1}));
}

Var DiscriminatorNet::forward(const Var& image, const Var& map) const {
  const Shape is = image.value().shape(), ms = map.value().shape();
  if (is.h != ms.h || is.w != ms.w || is.n != ms.n)
    throw std::invalid_argument("DiscriminatorNet: image/map spatial mismatch");
  Var cur = concat_channels({image, map});
  for (size_t k = 0; k < w_.size(); ++k) {
    // First three layers stride 2, the last stride 1 (patch head keeps a grid).
    const int stride = (k + 1 < w_.size()) ? 2 : 1;
    cur = leaky_relu(conv2d(cur, w_[k], b_[k], Conv2dSpec{stride, 1}), cfg_.leaky_slope);
  }
  return logistic(conv2d(cur, head_w_, head_b_, Conv2dSpec{1, 1}));
}

}  // namespace gaze::gazegan
