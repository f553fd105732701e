#include "gaze/gazegan/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace gaze::gazegan {

Adam::Adam(std::vector<Var> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  for (const auto& p : params_) {
    m_.emplace_back(p.value().shape());
    v_.emplace_back(p.value().shape());
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Adam::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = params_[i].mutable_value();
    const Tensor& g = params_[i].grad();
    if (!g.defined()) continue;
    for (size_t k = 0; k < p.size(); ++k) {
      m_[i][k] = cfg_.beta1 * m_[i][k] + (1.0 - cfg_.beta1) * g[k];
      v_[i][k] = cfg_.beta2 * v_[i][k] + (1.0 - cfg_.beta2) * g[k] * g[k];
      const double mhat = m_[i][k] / bc1;
      const double vhat = v_[i][k] / bc2;
      p[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::V1: return "v1";
    case Variant::V2: return "v2";
    case Variant::V3: return "v3";
    case Variant::V4: return "v4";
  }
  throw std::logic_error("unknown Variant");
}

Variant variant_from_string(const std::string& s) {
  if (s == "v1") return Variant::V1;
  if (s == "v2") return Variant::V2;
  if (s == "v3") return Variant::V3;
  if (s == "v4") return Variant::V4;
  throw std::invalid_argument("unknown variant '" + s + "' (expected v1..v4)");
}

std::vector<TrainSample> make_toy_dataset(int count, int size, std::uint64_t seed) {
  if (size % 64 != 0) throw std::invalid_argument("make_toy_dataset: size must be a multiple of 64");
  core::Rng rng(seed);
  std::vector<TrainSample> out;
  for (int i = 0; i < count; ++i) {
    TrainSample s;
    s.image = Tensor(Shape{1, 3, size, size});
    s.density = Tensor(Shape{1, 1, size, size});
    s.fixations = Tensor(Shape{1, 1, size, size});

    // Textured background: a soft gradient plus speckle distractors.
    const double g0 = 0.15 + 0.1 * rng.next_double();
    const double g1 = 0.3 + 0.15 * rng.next_double();
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double base = g0 + (g1 - g0) * y / (size - 1);
        s.image.at(0, 0, y, x) = base;
        s.image.at(0, 1, y, x) = base * 0.95;
        s.image.at(0, 2, y, x) = base * 1.05;
      }
    const int speckles = size * size / 100;
    for (int k = 0; k < speckles; ++k) {
      const int x = static_cast<int>(rng.next_below(size));
      const int y = static_cast<int>(rng.next_below(size));
      const double v = 0.5 + 0.3 * rng.next_double();
      for (int c = 0; c < 3; ++c) s.image.at(0, c, y, x) = std::min(1.0, v);
    }

    // Odd-one-out task: four disks on a jittered 2x2 grid, three share a
    // color, one is the odd one. Gaze goes only to the odd disk, so the
    // mapping needs a global comparison, not just local contrast.
    const int cell = size / 2;
    const int quarter = cell / 2;
    int centers[4][2];
    for (int d = 0; d < 4; ++d) {
      const int gx = d % 2, gy = d / 2;
      const int jx = static_cast<int>(rng.next_below(cell / 3)) - cell / 6;
      const int jy = static_cast<int>(rng.next_below(cell / 3)) - cell / 6;
      centers[d][0] = std::clamp(gx * cell + quarter + jx, size / 10, size - size / 10);
      centers[d][1] = std::clamp(gy * cell + quarter + jy, size / 10, size - size / 10);
    }
    const int odd = static_cast<int>(rng.next_below(4));
    const bool odd_is_warm = rng.next_below(2) == 0;
    const double warm[3] = {0.9, 0.55, 0.15};
    const double cool[3] = {0.15, 0.45, 0.9};
    for (int d = 0; d < 4; ++d) {
      const double* color = ((d == odd) == odd_is_warm) ? warm : cool;
      const double radius = size / 14.0 + rng.next_double() * size / 20.0;
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          const double d2 = double(x - centers[d][0]) * (x - centers[d][0]) +
                            double(y - centers[d][1]) * (y - centers[d][1]);
          if (d2 <= radius * radius)
            for (int c = 0; c < 3; ++c) s.image.at(0, c, y, x) = color[c];
        }
    }

    // Tight gaze blob at the odd disk only, max-to-one.
    const int cx = centers[odd][0], cy = centers[odd][1];
    const double sigma = size / 16.0;
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double d2 = double(x - cx) * (x - cx) + double(y - cy) * (y - cy);
        s.density.at(0, 0, y, x) = std::exp(-0.5 * d2 / (sigma * sigma));
      }

    const int offsets[5][2] = {{0, 0}, {2, 1}, {-2, 2}, {1, -3}, {-3, -1}};
    for (const auto& off : offsets) {
      const int fx = std::clamp(cx + off[0], 0, size - 1);
      const int fy = std::clamp(cy + off[1], 0, size - 1);
      s.fixations.at(0, 0, fy, fx) = 1.0;
    }
    out.push_back(std::move(s));
  }
  return out;
}

GazeGanModel::GazeGanModel(Variant variant, int image_size, std::uint64_t seed,
                           const AdamConfig& adam, const LossWeights& weights)
    : variant_(variant), image_size_(image_size), weights_(weights) {
  core::Rng rng(seed);

  GeneratorConfig gcfg;
  gcfg.use_residual = variant != Variant::V1;
  gcfg.use_csc = variant == Variant::V3 || variant == Variant::V4;
  gcfg.use_local_global = variant == Variant::V4;

  DiscriminatorConfig dcfg;

  if (gcfg.use_local_global) {
    GeneratorConfig global_cfg = gcfg;
    global_cfg.levels = gcfg.levels - 1;  // consumes the x2-downsampled input
    g_global_ = std::make_unique<GeneratorNet>(global_cfg, "gg", g_store_, rng);
    g_local_ = std::make_unique<GeneratorNet>(gcfg, "gl", g_store_, rng, 3,
                                              g_global_->final_bundle_channels());
    d_fine_ = std::make_unique<DiscriminatorNet>(dcfg, "df", d_store_, rng);
    d_coarse_ = std::make_unique<DiscriminatorNet>(dcfg, "dc", d_store_, rng);
  } else {
    g_local_ = std::make_unique<GeneratorNet>(gcfg, "gl", g_store_, rng);
    d_fine_ = std::make_unique<DiscriminatorNet>(dcfg, "df", d_store_, rng);
  }

  std::vector<Var> gp, dp;
  for (const auto& [name, v] : g_store_.entries()) gp.push_back(v);
  for (const auto& [name, v] : d_store_.entries()) dp.push_back(v);
  opt_g_ = std::make_unique<Adam>(std::move(gp), adam);
  opt_d_ = std::make_unique<Adam>(std::move(dp), adam);
}

GazeGanModel::Forward GazeGanModel::forward(const Var& image) const {
  Forward f;
  if (g_global_) {
    const Var half = avg_pool2(image);
    const GeneratorNet::Output coarse = g_global_->forward(half);
    f.sm_coarse = coarse.saliency;
    f.sm_fine = g_local_->forward(image, coarse.decoder_bundle).saliency;
  } else {
    f.sm_fine = g_local_->forward(image).saliency;
  }
  return f;
}

StepRecord GazeGanModel::train_step(const TrainSample& sample) {
  StepRecord rec;
  const Var image = Var::leaf(sample.image, false);
  const Var gt = Var::leaf(sample.density, false);
  const Var fix = Var::leaf(sample.fixations, false);

  // One generator pass serves both halves of the alternation: the critics
  // see detached fakes, the generator update backpropagates through the
  // same graph afterwards (its parameters are untouched by the critic step).
  const Forward f = forward(image);

  // -- critic update on detached fakes
  {
    opt_d_->zero_grad();
    opt_g_->zero_grad();
    std::vector<Var> d_losses;
    const Var d_real_f = d_fine_->forward(image, gt);
    const Var d_fake_f = d_fine_->forward(image, f.sm_fine.detach());
    const Var loss_d_f = disc_loss_node(d_real_f, d_fake_f);
    rec.loss_d_fine = loss_d_f.scalar();
    d_losses.push_back(loss_d_f);
    if (d_coarse_) {
      const Var image_half = avg_pool2(image);
      const Var gt_half = avg_pool2(gt);
      const Var d_real_c = d_coarse_->forward(image_half, gt_half);
      const Var d_fake_c = d_coarse_->forward(image_half, f.sm_coarse.detach());
      const Var loss_d_c = disc_loss_node(d_real_c, d_fake_c);
      rec.loss_d_coarse = loss_d_c.scalar();
      d_losses.push_back(loss_d_c);
    }
    const Var loss_d = weighted_sum(d_losses, std::vector<double>(d_losses.size(), 1.0));
    if (!std::isfinite(loss_d.scalar()))
      throw std::runtime_error("train_step: non-finite discriminator loss");
    backward(loss_d);
    opt_d_->step();
  }

  // -- generator update on content + adversarial loss against the updated critics
  {
    opt_d_->zero_grad();
    opt_g_->zero_grad();
    const Var l_cont = content_loss_node(f.sm_fine, gt, fix, weights_);
    rec.l_cont = l_cont.scalar();

    // L_cont plus the adversarial terms 1:1; with two critics their losses
    // sum, one term per scale.
    std::vector<Var> terms{l_cont};
    std::vector<double> wts{1.0};
    const Var g_adv_f = gen_adv_loss_node(d_fine_->forward(image, f.sm_fine));
    rec.loss_g_adv = g_adv_f.scalar();
    terms.push_back(g_adv_f);
    wts.push_back(1.0);
    if (d_coarse_) {
      const Var image_half = avg_pool2(image);
      const Var g_adv_c = gen_adv_loss_node(d_coarse_->forward(image_half, f.sm_coarse));
      rec.loss_g_adv += g_adv_c.scalar();
      terms.push_back(g_adv_c);
      wts.push_back(1.0);
    }
    const Var loss_g = weighted_sum(terms, wts);
    rec.loss_g_total = loss_g.scalar();
    if (!std::isfinite(loss_g.scalar()))
      throw std::runtime_error("train_step: non-finite generator loss");
    backward(loss_g);
    opt_g_->step();
  }
  return rec;
}

Tensor GazeGanModel::predict(const Tensor& image) const {
  return forward(Var::leaf(image, false)).sm_fine.value();
}

double GazeGanModel::mean_content_loss(const std::vector<TrainSample>& samples) const {
  if (samples.empty()) throw std::invalid_argument("mean_content_loss: empty sample set");
  double total = 0.0;
  for (const auto& s : samples) {
    const Tensor sm = predict(s.image);
    total += content_loss(sm, s.density, s.fixations, weights_).value;
  }
  return total / samples.size();
}

AblationResult run_training(Variant variant, const std::vector<TrainSample>& data, int steps,
                            std::uint64_t seed, const AdamConfig& adam,
                            const LossWeights& weights) {
  if (data.empty()) throw std::invalid_argument("run_training: empty dataset");
  const int size = data[0].image.shape().h;
  GazeGanModel model(variant, size, seed, adam, weights);

  AblationResult res;
  res.variant = variant;
  for (int step = 0; step < steps; ++step) {
    const StepRecord rec = model.train_step(data[step % data.size()]);
    if (step == 0) res.first_l_cont = rec.l_cont;
    res.trajectory.push_back(rec);
  }
  res.final_l_cont = model.mean_content_loss(data);
  return res;
}

std::vector<AblationResult> run_ablation(const std::vector<TrainSample>& data, int steps,
                                         std::uint64_t seed) {
  std::vector<AblationResult> out;
  for (Variant v : {Variant::V1, Variant::V2, Variant::V3, Variant::V4})
    out.push_back(run_training(v, data, steps, seed));
  return out;
}

namespace {

constexpr char kCkptMagic[4] = {'G', 'Z', 'C', 'K'};
constexpr std::uint32_t kCkptVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<std::pair<std::string, Var>>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kCkptMagic, 4);
  write_raw(out, kCkptVersion);
  write_raw(out, static_cast<std::uint64_t>(config_json.size()));
  out.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
  write_raw(out, static_cast<std::uint64_t>(params.size()));
  for (const auto& [name, var] : params) {
    write_raw(out, static_cast<std::uint64_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    const Shape s = var.value().shape();
    write_raw(out, static_cast<std::int32_t>(s.n));
    write_raw(out, static_cast<std::int32_t>(s.c));
    write_raw(out, static_cast<std::int32_t>(s.h));
    write_raw(out, static_cast<std::int32_t>(s.w));
    out.write(reinterpret_cast<const char*>(var.value().data()),
              static_cast<std::streamsize>(var.value().size() * sizeof(double)));
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCkptMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic");
  const auto version = read_raw<std::uint32_t>(in);
  if (version != kCkptVersion)
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
  Checkpoint ck;
  const auto cfg_len = read_raw<std::uint64_t>(in);
  ck.config_json.resize(cfg_len);
  in.read(ck.config_json.data(), static_cast<std::streamsize>(cfg_len));
  const auto count = read_raw<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = read_raw<std::uint64_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), static_cast<std::streamsize>(name_len));
    Shape s;
    s.n = read_raw<std::int32_t>(in);
    s.c = read_raw<std::int32_t>(in);
    s.h = read_raw<std::int32_t>(in);
    s.w = read_raw<std::int32_t>(in);
    Tensor t(s);
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated tensor data");
    ck.tensors.emplace_back(std::move(name), std::move(t));
  }
  return ck;
}

}  // namespace gaze::gazegan
