#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "gaze/gazegan/gradcheck.hpp"
#include "gaze/gazegan/hist.hpp"
#include "gaze/gazegan/losses.hpp"
#include "gaze/gazegan/model.hpp"
#include "gaze/gazegan/train.hpp"
#include "oracles.hpp"

using namespace gaze::gazegan;
using gaze::core::Rng;

namespace {

Tensor random_tensor(Shape s, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  Tensor t(s);
  for (size_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * rng.next_double();
  return t;
}

}  // namespace

TEST_CASE("conv2d matches the naive loop oracle across shapes") {
  Rng rng(1);
  struct Fixed {
    int n, cin, cout, h, w, k, stride, pad;
  };
  // the 2x2/k4 case regresses the floor-division loop bounds
  const Fixed fixed_cases[] = {{1, 2, 3, 2, 2, 4, 2, 1}, {1, 1, 1, 4, 4, 4, 2, 1}};
  for (int trial = 0; trial < 14; ++trial) {
    int n, cin, cout, h, w, k, stride, pad;
    if (trial < 2) {
      n = fixed_cases[trial].n;
      cin = fixed_cases[trial].cin;
      cout = fixed_cases[trial].cout;
      h = fixed_cases[trial].h;
      w = fixed_cases[trial].w;
      k = fixed_cases[trial].k;
      stride = fixed_cases[trial].stride;
      pad = fixed_cases[trial].pad;
    } else {
      n = 1 + static_cast<int>(rng.next_below(2));
      cin = 1 + static_cast<int>(rng.next_below(4));
      cout = 1 + static_cast<int>(rng.next_below(4));
      h = 4 + static_cast<int>(rng.next_below(8));
      w = 4 + static_cast<int>(rng.next_below(8));
      k = 1 + static_cast<int>(rng.next_below(4));
      stride = 1 + static_cast<int>(rng.next_below(2));
      pad = static_cast<int>(rng.next_below(2));
    }
    if (h + 2 * pad < k || w + 2 * pad < k) continue;

    Tensor x = Tensor::randn(Shape{n, cin, h, w}, 1.0, rng);
    Tensor wt = Tensor::randn(Shape{cout, cin, k, k}, 1.0, rng);
    Tensor b = Tensor::randn(Shape{1, cout, 1, 1}, 1.0, rng);

    const Var out = conv2d(Var::leaf(x), Var::leaf(wt), Var::leaf(b), Conv2dSpec{stride, pad});

    std::vector<double> ref;
    int oh, ow;
    std::vector<double> xv(x.data(), x.data() + x.size());
    std::vector<double> wv(wt.data(), wt.data() + wt.size());
    std::vector<double> bv(b.data(), b.data() + b.size());
    oracle::naive_conv2d(xv, {n, cin, h, w}, wv, cout, k, k, bv, stride, pad, ref, oh, ow);

    REQUIRE(out.value().shape() == (Shape{n, cout, oh, ow}));
    CHECK(oh == (h + 2 * pad - k) / stride + 1);
    for (size_t i = 0; i < ref.size(); ++i)
      CHECK(out.value()[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("conv_transpose2d matches the naive oracle and doubles with k3 s2 p1 op1") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int cin = 1 + static_cast<int>(rng.next_below(3));
    const int cout = 1 + static_cast<int>(rng.next_below(3));
    const int h = 3 + static_cast<int>(rng.next_below(5));
    const int w = 3 + static_cast<int>(rng.next_below(5));

    Tensor x = Tensor::randn(Shape{1, cin, h, w}, 1.0, rng);
    Tensor wt = Tensor::randn(Shape{cin, cout, 3, 3}, 1.0, rng);
    Tensor b = Tensor::randn(Shape{1, cout, 1, 1}, 1.0, rng);

    const Var out =
        conv_transpose2d(Var::leaf(x), Var::leaf(wt), Var::leaf(b), ConvT2dSpec{2, 1, 1});
    CHECK(out.value().shape().h == 2 * h);
    CHECK(out.value().shape().w == 2 * w);

    std::vector<double> ref;
    int oh, ow;
    std::vector<double> xv(x.data(), x.data() + x.size());
    std::vector<double> wv(wt.data(), wt.data() + wt.size());
    std::vector<double> bv(b.data(), b.data() + b.size());
    oracle::naive_conv_transpose2d(xv, {1, cin, h, w}, wv, cout, 3, 3, bv, 2, 1, 1, ref, oh, ow);
    for (size_t i = 0; i < ref.size(); ++i)
      CHECK(out.value()[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("1x1 convolution with identity weights is a no-op") {
  const Tensor x = random_tensor(Shape{1, 2, 5, 7}, 3);
  Tensor wt(Shape{2, 2, 1, 1});
  wt.at(0, 0, 0, 0) = 1.0;
  wt.at(1, 1, 0, 0) = 1.0;
  const Tensor b(Shape{1, 2, 1, 1});
  const Var out = conv2d(Var::leaf(x), Var::leaf(wt), Var::leaf(b), Conv2dSpec{1, 0});
  for (size_t i = 0; i < x.size(); ++i) CHECK(out.value()[i] == x[i]);
}

TEST_CASE("activation values follow their definitions") {
  Tensor x(Shape{1, 1, 1, 3});
  x[0] = -1.0;
  x[1] = 0.0;
  x[2] = 2.0;
  const Var l = leaky_relu(Var::leaf(x), 0.2);
  CHECK(l.value()[0] == doctest::Approx(-0.2));
  CHECK(l.value()[2] == doctest::Approx(2.0));
  const Var r = relu(Var::leaf(x));
  CHECK(r.value()[0] == 0.0);
  CHECK(r.value()[2] == 2.0);
  const Var s = logistic(Var::leaf(x));
  CHECK(s.value()[1] == doctest::Approx(0.5));
}

TEST_CASE("backward through a composite graph matches finite differences") {
  Rng rng(7);
  Tensor x = Tensor::randn(Shape{1, 2, 6, 6}, 1.0, rng);
  Tensor w1 = Tensor::randn(Shape{3, 2, 3, 3}, 0.5, rng);
  Tensor b1 = Tensor::randn(Shape{1, 3, 1, 1}, 0.5, rng);
  Tensor w2 = Tensor::randn(Shape{3, 1, 3, 3}, 0.5, rng);
  Tensor b2 = Tensor::randn(Shape{1, 1, 1, 1}, 0.5, rng);
  Tensor probe = Tensor::randn(Shape{1, 1, 6, 6}, 1.0, rng);

  auto loss_with = [&](const Tensor& wt) {
    const Var h = leaky_relu(conv2d(Var::leaf(x), Var::leaf(wt), Var::leaf(b1), Conv2dSpec{1, 1}));
    const Var y = logistic(conv_transpose2d(avg_pool2(h), Var::leaf(w2), Var::leaf(b2),
                                            ConvT2dSpec{2, 1, 1}));
    double acc = 0.0;
    for (size_t i = 0; i < y.value().size(); ++i) acc += y.value()[i] * probe[i];
    return acc;
  };

  Var w1v = Var::leaf(w1, true);
  const Var h = leaky_relu(conv2d(Var::leaf(x), w1v, Var::leaf(b1), Conv2dSpec{1, 1}));
  const Var y = logistic(
      conv_transpose2d(avg_pool2(h), Var::leaf(w2), Var::leaf(b2), ConvT2dSpec{2, 1, 1}));
  // scalar objective: sum of y * probe, reduced through a hand-rolled node
  Var y2 = elementwise_prod(y, Var::leaf(probe));
  double base = 0.0;
  for (size_t i = 0; i < y2.value().size(); ++i) base += y2.value()[i];
  auto node = std::make_shared<Node>();
  node->value = Tensor::scalar(base);
  node->parents.push_back(y2.node());
  node->requires_grad = true;
  node->backward_fn = [y2](Node& self) {
    Tensor& g = y2.node()->ensure_grad();
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0];
  };
  backward(Var(node));

  const Tensor analytic = w1v.grad();
  const double err = finite_diff_max_rel_err(w1, [&] { return loss_with(w1); }, analytic, 1e-6);
  CHECK(err <= 1e-6);
}

TEST_CASE("csc forward contracts") {
  Rng rng(11);
  ParamStore store;
  const CscConfig cfg{1, 5, 6};
  CscParams params = make_csc_params(store, "csc", 4, 3, cfg.unify_channels, rng, 0.1);

  // all-zero inputs with zero biases -> all-zero output
  const Var zero_out = csc_forward(Var::leaf(Tensor(Shape{1, 4, 4, 4})),
                                   Var::leaf(Tensor(Shape{1, 3, 8, 8})), cfg, params);
  for (size_t i = 0; i < zero_out.value().size(); ++i) CHECK(zero_out.value()[i] == 0.0);
  CHECK(zero_out.value().shape() == (Shape{1, 6, 8, 8}));

  // spatial mismatch rejected
  CHECK_THROWS(csc_forward(Var::leaf(Tensor(Shape{1, 4, 4, 4})),
                           Var::leaf(Tensor(Shape{1, 3, 9, 8})), cfg, params));
  CHECK_THROWS(CscConfig{1, 6, 4}.validate());
}

TEST_CASE("spatial softmax attention sums to one and sharpens with scale") {
  Rng rng(13);
  Tensor f = Tensor::randn(Shape{2, 1, 5, 7}, 1.0, rng);
  const Var a = spatial_softmax(Var::leaf(f));
  for (int n = 0; n < 2; ++n) {
    double sum = 0.0, amax = 0.0;
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 7; ++x) {
        const double v = a.value().at(n, 0, y, x);
        CHECK(v > 0.0);
        sum += v;
        amax = std::max(amax, v);
      }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    Tensor doubled = f;
    for (size_t i = 0; i < doubled.size(); ++i) doubled[i] *= 2.0;
    const Var a2 = spatial_softmax(Var::leaf(doubled));
    double amax2 = 0.0;
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 7; ++x) amax2 = std::max(amax2, a2.value().at(n, 0, y, x));
    CHECK(amax2 > amax);  // doubling the logits sharpens the attention
  }
}

TEST_CASE("generator forward: shape, range, zero-weight fixed point") {
  GeneratorConfig cfg;
  cfg.base_channels = 4;
  cfg.max_channels = 16;
  cfg.csc_unify_channels = 4;
  cfg.use_local_global = false;

  {
    Rng rng(17);
    ParamStore store;
    GeneratorNet net(cfg, "g", store, rng);
    const Tensor img = random_tensor(Shape{1, 3, 64, 64}, 18);
    const auto out = net.forward(Var::leaf(img));
    CHECK(out.saliency.value().shape() == (Shape{1, 1, 64, 64}));
    for (size_t i = 0; i < out.saliency.value().size(); ++i) {
      CHECK(out.saliency.value()[i] > 0.0);
      CHECK(out.saliency.value()[i] < 1.0);
    }
    CHECK_THROWS(net.forward(Var::leaf(random_tensor(Shape{1, 3, 60, 60}, 19))));
  }

  {
    GeneratorConfig zcfg = cfg;
    zcfg.init_std = 0.0;  // all-zero weights and biases
    Rng rng(20);
    ParamStore store;
    GeneratorNet net(zcfg, "g", store, rng);
    const auto out = net.forward(Var::leaf(random_tensor(Shape{1, 3, 64, 64}, 21)));
    for (size_t i = 0; i < out.saliency.value().size(); ++i)
      CHECK(out.saliency.value()[i] == 0.5);  // logistic(0)
  }
}

TEST_CASE("discriminator forward: patch grid, batch independence, conditioning") {
  DiscriminatorConfig cfg;
  cfg.base_channels = 4;
  Rng rng(23);
  ParamStore store;
  DiscriminatorNet net(cfg, "d", store, rng);

  const Tensor img = random_tensor(Shape{2, 3, 64, 64}, 24);
  const Tensor map = random_tensor(Shape{2, 1, 64, 64}, 25);
  const Var out = net.forward(Var::leaf(img), Var::leaf(map));
  const Shape os = out.value().shape();
  CHECK(os.n == 2);
  CHECK(os.c == 1);
  CHECK(os.h > 1);  // a grid of patch probabilities, not one scalar
  CHECK(os.w > 1);
  for (size_t i = 0; i < out.value().size(); ++i) {
    CHECK(out.value()[i] > 0.0);
    CHECK(out.value()[i] < 1.0);
  }

  // permuting the batch permutes outputs identically
  Tensor img_swapped(img.shape()), map_swapped(map.shape());
  const size_t plane_i = img.size() / 2, plane_m = map.size() / 2;
  for (size_t i = 0; i < plane_i; ++i) {
    img_swapped[i] = img[plane_i + i];
    img_swapped[plane_i + i] = img[i];
  }
  for (size_t i = 0; i < plane_m; ++i) {
    map_swapped[i] = map[plane_m + i];
    map_swapped[plane_m + i] = map[i];
  }
  const Var out2 = net.forward(Var::leaf(img_swapped), Var::leaf(map_swapped));
  const size_t plane_o = out.value().size() / 2;
  for (size_t i = 0; i < plane_o; ++i) {
    CHECK(out2.value()[i] == out.value()[plane_o + i]);
    CHECK(out2.value()[plane_o + i] == out.value()[i]);
  }

  // swapping the conditioning image changes the output
  const Tensor other = random_tensor(Shape{2, 3, 64, 64}, 26);
  const Var out3 = net.forward(Var::leaf(other), Var::leaf(map));
  bool any_diff = false;
  for (size_t i = 0; i < out.value().size(); ++i)
    if (out3.value()[i] != out.value()[i]) any_diff = true;
  CHECK(any_diff);

  CHECK_THROWS(net.forward(Var::leaf(img), Var::leaf(random_tensor(Shape{2, 1, 32, 32}, 27))));
}

TEST_CASE("soft histogram hand examples and partition of unity") {
  const std::vector<double> four = {0.0, 0.0, 255.0, 255.0};
  const auto p = hist_estimate(four);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[255] == doctest::Approx(0.5).epsilon(1e-15));
  for (int k = 1; k < 255; ++k) CHECK(p[k] == 0.0);

  const auto single = hist_estimate(std::vector<double>{127.5});
  CHECK(single[127] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(single[128] == doctest::Approx(0.5).epsilon(1e-15));

  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> vals(100);
    for (double& v : vals) v = 255.0 * rng.next_double();
    const auto hist = hist_estimate(vals);
    double sum = 0.0;
    for (double v : hist) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  CHECK_THROWS(hist_estimate(std::vector<double>{-0.1}));
  CHECK_THROWS(hist_estimate(std::vector<double>{255.1}));
}

TEST_CASE("min-max normalization") {
  const auto out = minmax_normalize({0.2, 0.5, 0.8});
  CHECK(out[0] == doctest::Approx(0.0));
  CHECK(out[1] == doctest::Approx(0.5));
  CHECK(out[2] == doctest::Approx(1.0));

  Rng rng(31);
  std::vector<double> v(32);
  for (double& x : v) x = rng.next_double();
  const auto n = minmax_normalize(v);
  CHECK(*std::min_element(n.begin(), n.end()) == 0.0);
  CHECK(*std::max_element(n.begin(), n.end()) == 1.0);

  CHECK_THROWS(minmax_normalize(std::vector<double>{0.3, 0.3, 0.3}));
}

TEST_CASE("acs loss: identity, one-hot value, symmetry, nonnegativity") {
  Rng rng(33);
  std::vector<double> p(16), q(16);
  for (double& v : p) v = rng.next_double();
  for (double& v : q) v = rng.next_double();

  CHECK(acs_loss(p, p).loss == 0.0);

  std::vector<double> e0(8, 0.0), e1(8, 0.0);
  e0[0] = 1.0;
  e1[1] = 1.0;
  CHECK(acs_loss(e0, e1).loss == doctest::Approx(4.0).epsilon(1e-6));

  const double pq = acs_loss(p, q).loss;
  CHECK(pq == acs_loss(q, p).loss);
  CHECK(pq >= 0.0);
}

TEST_CASE("acs and csc analytic gradients beat their module tolerances") {
  CHECK(grad_check_acs(10).max_rel_err <= 1e-6);
  for (const auto& r : grad_check_csc(10)) {
    INFO(r.group);
    CHECK(r.max_rel_err <= 1e-5);
  }
}

TEST_CASE("content loss gradient matches fd with a fine step everywhere smooth") {
  // Away from kinks the analytic gradient is h^2-accurate; at h = 1e-7 the
  // whole map can be checked at a tight tolerance.
  Rng rng(35);
  Tensor sm(Shape{1, 1, 8, 8}), gt(Shape{1, 1, 8, 8}), fix(Shape{1, 1, 8, 8});
  for (size_t i = 0; i < sm.size(); ++i) sm[i] = 0.05 + 0.9 * rng.next_double();
  for (size_t i = 0; i < gt.size(); ++i) gt[i] = 0.05 + 0.9 * rng.next_double();
  fix[5] = fix[23] = fix[61] = 1.0;

  const LossWeights w;
  const ContentLossResult res = content_loss(sm, gt, fix, w);
  size_t argmax = 0;
  for (size_t i = 1; i < sm.size(); ++i)
    if (sm[i] > sm[argmax]) argmax = i;

  const double h = 1e-7;
  double worst = 0.0;
  for (size_t j = 0; j < sm.size(); ++j) {
    if (j == argmax) continue;
    const double l = 255.0 * sm[j] / sm[argmax];
    if (std::abs(l - std::round(l)) < 1e-3) continue;
    const double orig = sm[j];
    sm[j] = orig + h;
    const double fp = content_loss(sm, gt, fix, w).value;
    sm[j] = orig - h;
    const double fm = content_loss(sm, gt, fix, w).value;
    sm[j] = orig;
    const double numeric = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(res.grad_sm[j] - numeric) /
                                std::max({1.0, std::abs(numeric), std::abs(res.grad_sm[j])}));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("content loss at the fixed point sm = gt") {
  Rng rng(37);
  Tensor gt(Shape{1, 1, 8, 8}), fix(Shape{1, 1, 8, 8});
  for (size_t i = 0; i < gt.size(); ++i) gt[i] = 0.1 + 0.8 * rng.next_double();
  // perfect-fixation agreement: fixations sit on the two highest gt pixels
  size_t top1 = 0, top2 = 1;
  for (size_t i = 1; i < gt.size(); ++i)
    if (gt[i] > gt[top1]) top1 = i;
  for (size_t i = 0; i < gt.size(); ++i)
    if (i != top1 && gt[i] > gt[top2]) top2 = i;
  fix[top1] = fix[top2] = 1.0;

  const LossWeights w;
  const ContentLossResult res = content_loss(gt, gt, fix, w);
  CHECK(res.l1 == 0.0);
  CHECK(std::abs(res.kl) <= 1e-5);  // eps regularization residue only
  CHECK(res.cc == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.acs == 0.0);
  CHECK(res.nss > 0.0);
  // total = w3 * 1 + w4 * NSS, up to the w2-weighted eps residue of the KL term
  CHECK(std::abs(res.value - (w.w3 * 1.0 + w.w4 * res.nss)) <= 1e-4);
}

TEST_CASE("content loss shift invariance of cc and nss terms") {
  Rng rng(39);
  Tensor sm(Shape{1, 1, 8, 8}), gt(Shape{1, 1, 8, 8}), fix(Shape{1, 1, 8, 8});
  for (size_t i = 0; i < sm.size(); ++i) sm[i] = 0.1 + 0.5 * rng.next_double();
  for (size_t i = 0; i < gt.size(); ++i) gt[i] = 0.1 + 0.8 * rng.next_double();
  fix[3] = fix[44] = 1.0;

  Tensor shifted = sm;
  for (size_t i = 0; i < shifted.size(); ++i) shifted[i] += 0.2;

  const LossWeights w;
  const ContentLossResult a = content_loss(sm, gt, fix, w);
  const ContentLossResult b = content_loss(shifted, gt, fix, w);
  CHECK(a.cc == doctest::Approx(b.cc).epsilon(1e-9));
  CHECK(a.nss == doctest::Approx(b.nss).epsilon(1e-9));

  CHECK_THROWS(content_loss(Tensor(Shape{1, 1, 8, 8}, 0.5), gt, fix, w));  // constant sm
}

TEST_CASE("adversarial loss values and monotonicity") {
  const Tensor half(Shape{1, 1, 2, 2}, 0.5);
  const AdversarialLoss l = adversarial_loss(half, half);
  CHECK(l.loss_d == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

  const Tensor real(Shape{1, 1, 2, 2}, 1.0 - 1e-7);
  const Tensor fake(Shape{1, 1, 2, 2}, 1e-7);
  CHECK(adversarial_loss(real, fake).loss_d <= 1e-5);

  // loss_G strictly decreases as d_fake increases elementwise
  double prev = 1e300;
  for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double g = adversarial_loss(half, Tensor(Shape{1, 1, 2, 2}, v)).loss_g;
    CHECK(g < prev);
    prev = g;
  }

  // saturating form exposed alongside
  CHECK(adversarial_loss(half, half).loss_g_saturating ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("adam with zero learning rate leaves parameters bit-identical") {
  Rng rng(41);
  ParamStore store;
  Var p = store.add("p", Tensor::randn(Shape{1, 1, 3, 3}, 1.0, rng));
  const Tensor before = p.value();

  AdamConfig cfg;
  cfg.lr = 0.0;
  Adam opt({p}, cfg);
  Tensor& g = p.grad();
  for (size_t i = 0; i < g.size(); ++i) g[i] = 1.0 + double(i);
  opt.step();
  CHECK(p.value().data()[0] == before[0]);
  for (size_t i = 0; i < before.size(); ++i) CHECK(p.value()[i] == before[i]);
}

TEST_CASE("training is deterministic per seed") {
  const auto data = make_toy_dataset(2, 64, 5);
  GazeGanModel a(Variant::V1, 64, 9);
  GazeGanModel b(Variant::V1, 64, 9);
  for (int step = 0; step < 2; ++step) {
    const StepRecord ra = a.train_step(data[step % data.size()]);
    const StepRecord rb = b.train_step(data[step % data.size()]);
    CHECK(ra.l_cont == rb.l_cont);
    CHECK(ra.loss_d_fine == rb.loss_d_fine);
    CHECK(ra.loss_g_total == rb.loss_g_total);
  }
  // and the resulting parameters agree bitwise
  const auto& pa = a.generator_params().entries();
  const auto& pb = b.generator_params().entries();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i)
    for (size_t k = 0; k < pa[i].second.value().size(); ++k)
      CHECK(pa[i].second.value()[k] == pb[i].second.value()[k]);
}

TEST_CASE("toy dataset carries fixations and max-to-one densities") {
  const auto data = make_toy_dataset(4, 64, 11);
  CHECK(data.size() == 4);
  for (const auto& s : data) {
    double dmax = 0.0, fsum = 0.0;
    for (size_t i = 0; i < s.density.size(); ++i) dmax = std::max(dmax, s.density[i]);
    for (size_t i = 0; i < s.fixations.size(); ++i) fsum += s.fixations[i];
    CHECK(dmax == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fsum >= 1.0);
  }
}

TEST_CASE("checkpoint round trip preserves names, shapes and bits") {
  Rng rng(43);
  ParamStore store;
  store.add("a.w", Tensor::randn(Shape{2, 3, 4, 4}, 0.3, rng));
  store.add("a.b", Tensor::randn(Shape{1, 2, 1, 1}, 0.3, rng));

  const std::string path =
      (std::filesystem::temp_directory_path() / "gaze_test.gzck").string();
  save_checkpoint(path, "{\"variant\":\"v1\"}", store.entries());
  const Checkpoint ck = load_checkpoint(path);
  CHECK(ck.config_json == "{\"variant\":\"v1\"}");
  REQUIRE(ck.tensors.size() == 2);
  CHECK(ck.tensors[0].first == "a.w");
  CHECK(ck.tensors[0].second.shape() == (Shape{2, 3, 4, 4}));
  for (size_t i = 0; i < ck.tensors[0].second.size(); ++i)
    CHECK(ck.tensors[0].second[i] == store.entries()[0].second.value()[i]);
  std::filesystem::remove(path);
}
