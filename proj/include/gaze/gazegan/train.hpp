#pragma once

#include <string>
#include <vector>

#include "gaze/gazegan/losses.hpp"
#include "gaze/gazegan/model.hpp"

namespace gaze::gazegan {

// Adam with the training-loop defaults: step size 2e-4, beta1 0.5.
struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Var> params, AdamConfig cfg = {});

  void zero_grad();
  void step();

  const AdamConfig& config() const { return cfg_; }

 private:
  std::vector<Var> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig cfg_;
  long t_ = 0;
};

// Table-III style model variants.
enum class Variant { V1, V2, V3, V4 };
std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct TrainSample {
  Tensor image;    // (1,3,H,W)
  Tensor density;  // (1,1,H,W), max-to-one
  Tensor fixations;  // (1,1,H,W) binary raster
};

// Synthetic desk-scale task: a bright disk on a textured background with a
// matching Gaussian gaze blob and a handful of fixations near its center.
std::vector<TrainSample> make_toy_dataset(int count, int size, std::uint64_t seed);

struct StepRecord {
  double loss_d_fine = 0.0;
  double loss_d_coarse = 0.0;
  double loss_g_adv = 0.0;
  double l_cont = 0.0;
  double loss_g_total = 0.0;
};

class GazeGanModel {
 public:
  GazeGanModel(Variant variant, int image_size, std::uint64_t seed,
               const AdamConfig& adam = {}, const LossWeights& weights = {});

  // One alternation: both critics on loss_D, then the generator stack on
  // L_cont + loss_G. Throws on non-finite losses.
  StepRecord train_step(const TrainSample& sample);

  // Full forward pass (no grads): saliency map for an image tensor.
  Tensor predict(const Tensor& image) const;

  // Mean content loss over a sample set at the current parameters.
  double mean_content_loss(const std::vector<TrainSample>& samples) const;

  Variant variant() const { return variant_; }
  ParamStore& generator_params() { return g_store_; }
  ParamStore& discriminator_params() { return d_store_; }
  const LossWeights& weights() const { return weights_; }

 private:
  struct Forward {
    Var sm_fine;
    Var sm_coarse;  // defined only for local-global variants
  };
  Forward forward(const Var& image) const;

  Variant variant_;
  int image_size_;
  LossWeights weights_;
  ParamStore g_store_, d_store_;
  std::unique_ptr<GeneratorNet> g_local_, g_global_;
  std::unique_ptr<DiscriminatorNet> d_fine_, d_coarse_;
  std::unique_ptr<Adam> opt_g_, opt_d_;
};

struct AblationResult {
  Variant variant;
  double first_l_cont = 0.0;
  double final_l_cont = 0.0;  // mean over the dataset at the final parameters
  std::vector<StepRecord> trajectory;
};

AblationResult run_training(Variant variant, const std::vector<TrainSample>& data, int steps,
                            std::uint64_t seed, const AdamConfig& adam = {},
                            const LossWeights& weights = {});

std::vector<AblationResult> run_ablation(const std::vector<TrainSample>& data, int steps,
                                         std::uint64_t seed);

// Versioned binary checkpoint: named parameter tensors plus a JSON config blob.
void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<std::pair<std::string, Var>>& params);
struct Checkpoint {
  std::string config_json;
  std::vector<std::pair<std::string, Tensor>> tensors;
};
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gaze::gazegan
