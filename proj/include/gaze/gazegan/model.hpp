#pragma once

#include <map>
#include <string>
#include <vector>

#include "gaze/gazegan/autograd.hpp"

namespace gaze::gazegan {

// Ordered, named parameter leaves. Order is creation order, which pins the
// optimizer update sequence and the checkpoint layout.
class ParamStore {
 public:
  Var add(const std::string& name, Tensor init) {
    if (index_.count(name)) throw std::invalid_argument("duplicate parameter '" + name + "'");
    Var v = Var::leaf(std::move(init), true);
    index_[name] = params_.size();
    params_.emplace_back(name, v);
    return v;
  }

  Var get(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown parameter '" + name + "'");
    return params_[it->second].second;
  }

  const std::vector<std::pair<std::string, Var>>& entries() const { return params_; }

  void zero_grad() {
    for (auto& [name, v] : params_) v.zero_grad();
  }

 private:
  std::vector<std::pair<std::string, Var>> params_;
  std::map<std::string, size_t> index_;
};

struct CscConfig {
  int surround_layer = 1;  // i, the coarse decoder stage label
  int center_layer = 5;    // j = i + 4
  int unify_channels = 16;

  void validate() const {
    if (center_layer - surround_layer != 4)
      throw std::invalid_argument("CscConfig: center_layer must equal surround_layer + 4");
    if (unify_channels < 1) throw std::invalid_argument("CscConfig: unify_channels must be >= 1");
  }
};

struct CscParams {
  Var up_w, up_b;  // 3x3 transposed conv, stride 2
  Var ns_w, ns_b;  // 1x1 unify (surround path)
  Var nc_w, nc_b;  // 1x1 unify (center path)
  Var nq_w, nq_b;  // 1x1 squeeze to one channel
};

CscParams make_csc_params(ParamStore& store, const std::string& prefix, int surround_ch,
                          int center_ch, int unify_ch, core::Rng& rng, double init_std = 0.02);

// f_s must be spatially half of f_c. Upsample the surround one step, unify
// both with 1x1 convs, element-wise sum, squeeze to a one-channel map,
// spatial softmax attention, channel-broadcast product.
Var csc_forward(const Var& f_s, const Var& f_c, const CscConfig& cfg, const CscParams& params);

struct GeneratorConfig {
  int levels = 6;           // encoder/decoder stages; 8 covers 256x256 inputs
  int base_channels = 16;
  int max_channels = 128;
  int residual_blocks = 4;
  double leaky_slope = 0.2;
  int csc_unify_channels = 16;
  bool use_residual = true;     // ablation V2+
  bool use_csc = true;          // ablation V3+
  bool use_local_global = true; // ablation V4
  double init_std = 0.02;

  // CSC modules attach to decoder stages j in [5, levels], labeled (j-4, j).
  std::vector<CscConfig> csc_modules() const {
    std::vector<CscConfig> out;
    if (!use_csc) return out;
    for (int j = 5; j <= levels; ++j)
      out.push_back(CscConfig{j - 4, j, csc_unify_channels});
    return out;
  }
};

// Modified U-Net: strided 4x4 encoder convs (leaky), residual bottleneck,
// transposed-conv decoder (relu) with skip connections, CSC modules feeding
// the late decoder stages, logistic one-channel head.
class GeneratorNet {
 public:
  // inject_channels: extra channels concatenated into the second encoder
  // stage (the coarse generator's final decoder features, for G_l).
  GeneratorNet(const GeneratorConfig& cfg, std::string prefix, ParamStore& store,
               core::Rng& rng, int in_channels = 3, int inject_channels = 0);

  struct Output {
    Var saliency;       // (N, 1, H, W) in (0,1)
    Var decoder_bundle; // final decoder feature stack, full resolution
  };

  Output forward(const Var& input, const Var& inject = {}) const;

  int final_bundle_channels() const { return bundle_ch_.back(); }
  const GeneratorConfig& config() const { return cfg_; }

 private:
  GeneratorConfig cfg_;
  std::string prefix_;
  int inject_channels_ = 0;
  std::vector<int> enc_out_ch_, dec_out_ch_, bundle_ch_;
  std::vector<Var> enc_w_, enc_b_, dec_w_, dec_b_;
  std::vector<Var> res_w1_, res_b1_, res_w2_, res_b2_;
  std::vector<CscParams> csc_params_;  // index aligned with csc stages
  Var head_w_, head_b_;
};

struct DiscriminatorConfig {
  int conv_layers = 4;
  int base_channels = 8;  // doubles per layer (full scale: 64 -> 512)
  double leaky_slope = 0.2;
  double init_std = 0.02;
};

// Conditional patch critic: the map is concatenated channel-wise with the
// conditioning image; the head emits a grid of probabilities.
class DiscriminatorNet {
 public:
  DiscriminatorNet(const DiscriminatorConfig& cfg, std::string prefix, ParamStore& store,
                   core::Rng& rng, int in_channels = 4);

  Var forward(const Var& image, const Var& map) const;

 private:
  DiscriminatorConfig cfg_;
  std::vector<Var> w_, b_;
  Var head_w_, head_b_;
};

}  // namespace gaze::gazegan
