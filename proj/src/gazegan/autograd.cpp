#include "gaze/gazegan/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace gaze::gazegan {

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void backward(const Var& root) {
  if (root.value().size() != 1) throw std::logic_error("backward: root must be scalar");

  // Iterative DFS postorder; reversed it yields consumers before producers.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* parent = node->parents[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root.node()->ensure_grad()[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn && n->grad.defined()) n->backward_fn(*n);
  }
}

namespace {

// Floor division for loop bounds: plain / truncates toward zero, which for
// negative numerators yields an index one past the valid range.
inline int floor_div(int a, int b) {
  const int q = a / b;
  return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}

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

Var conv2d(const Var& x, const Var& w, const Var& b, Conv2dSpec spec) {
  const Shape xs = x.value().shape(), ws = w.value().shape();
  if (ws.c != xs.c) throw std::invalid_argument("conv2d: channel mismatch");
  if (b.value().shape().c != ws.n || b.value().size() != static_cast<size_t>(ws.n))
    throw std::invalid_argument("conv2d: bias shape mismatch");
  const int s = spec.stride, p = spec.pad;
  const int oh = (xs.h + 2 * p - ws.h) / s + 1;
  const int ow = (xs.w + 2 * p - ws.w) / s + 1;
  if (oh < 1 || ow < 1) throw std::invalid_argument("conv2d: output would be empty");

  // Loop order (n, co, ci, ky, kx, oy, ox) keeps the inner passes contiguous
  // over rows of both operands.
  Tensor out(Shape{xs.n, ws.n, oh, ow});
  {
    const double* xd = x.value().data();
    const double* wd = w.value().data();
    double* od = out.data();
    for (int n = 0; n < xs.n; ++n)
      for (int co = 0; co < ws.n; ++co) {
        double* oplane = od + (static_cast<size_t>(n) * ws.n + co) * oh * ow;
        const double bias = b.value()[co];
        for (int i = 0; i < oh * ow; ++i) oplane[i] = bias;
        for (int ci = 0; ci < xs.c; ++ci) {
          const double* xplane = xd + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w;
          const double* wplane = wd + (static_cast<size_t>(co) * ws.c + ci) * ws.h * ws.w;
          for (int ky = 0; ky < ws.h; ++ky)
            for (int kx = 0; kx < ws.w; ++kx) {
              const double wv = wplane[ky * ws.w + kx];
              if (wv == 0.0) continue;
              for (int oy = 0; oy < oh; ++oy) {
                const int iy = oy * s - p + ky;
                if (iy < 0 || iy >= xs.h) continue;
                const double* xrow = xplane + static_cast<size_t>(iy) * xs.w;
                double* orow = oplane + static_cast<size_t>(oy) * ow;
                const int ox_lo = std::max(0, (p - kx + s - 1) / s);
                const int ox_hi = std::min(ow - 1, floor_div(xs.w - 1 + p - kx, s));
                for (int ox = ox_lo; ox <= ox_hi; ++ox)
                  orow[ox] += wv * xrow[ox * s - p + kx];
              }
            }
        }
      }
  }

  return make_op(std::move(out), {x, w, b}, [x, w, b, s, p](Node& self) {
    const Tensor& g = self.grad;
    const Shape xs = x.value().shape(), ws = w.value().shape();
    const Shape os = self.value.shape();
    const int oh = os.h, ow = os.w;
    Tensor* gx = x.requires_grad() ? &x.node()->ensure_grad() : nullptr;
    Tensor* gw = w.requires_grad() ? &w.node()->ensure_grad() : nullptr;
    Tensor* gb = b.requires_grad() ? &b.node()->ensure_grad() : nullptr;
    const double* xd = x.value().data();
    const double* wd = w.value().data();
    const double* gd = g.data();
    if (gb) {
      for (int n = 0; n < os.n; ++n)
        for (int co = 0; co < os.c; ++co) {
          const double* gplane = gd + (static_cast<size_t>(n) * os.c + co) * oh * ow;
          double acc = 0.0;
          for (int i = 0; i < oh * ow; ++i) acc += gplane[i];
          (*gb)[co] += acc;
        }
    }
    for (int n = 0; n < xs.n; ++n)
      for (int co = 0; co < ws.n; ++co) {
        const double* gplane = gd + (static_cast<size_t>(n) * ws.n + co) * oh * ow;
        for (int ci = 0; ci < xs.c; ++ci) {
          const double* xplane = xd + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w;
          const double* wplane = wd + (static_cast<size_t>(co) * ws.c + ci) * ws.h * ws.w;
          double* gxplane =
              gx ? gx->data() + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w : nullptr;
          double* gwplane =
              gw ? gw->data() + (static_cast<size_t>(co) * ws.c + ci) * ws.h * ws.w : nullptr;
          for (int ky = 0; ky < ws.h; ++ky)
            for (int kx = 0; kx < ws.w; ++kx) {
              const double wv = wplane[ky * ws.w + kx];
              double wacc = 0.0;
              for (int oy = 0; oy < oh; ++oy) {
                const int iy = oy * s - p + ky;
                if (iy < 0 || iy >= xs.h) continue;
                const double* grow = gplane + static_cast<size_t>(oy) * ow;
                const double* xrow = xplane + static_cast<size_t>(iy) * xs.w;
                double* gxrow = gxplane ? gxplane + static_cast<size_t>(iy) * xs.w : nullptr;
                const int ox_lo = std::max(0, (p - kx + s - 1) / s);
                const int ox_hi = std::min(ow - 1, floor_div(xs.w - 1 + p - kx, s));
                if (gxrow) {
                  for (int ox = ox_lo; ox <= ox_hi; ++ox)
                    gxrow[ox * s - p + kx] += grow[ox] * wv;
                }
                if (gwplane) {
                  for (int ox = ox_lo; ox <= ox_hi; ++ox)
                    wacc += grow[ox] * xrow[ox * s - p + kx];
                }
              }
              if (gwplane) gwplane[ky * ws.w + kx] += wacc;
            }
        }
      }
  });
}

Var conv_transpose2d(const Var& x, const Var& w, const Var& b, ConvT2dSpec spec) {
  const Shape xs = x.value().shape(), ws = w.value().shape();
  if (ws.n != xs.c) throw std::invalid_argument("conv_transpose2d: channel mismatch");
  const int cout = ws.c;
  if (b.value().size() != static_cast<size_t>(cout))
    throw std::invalid_argument("conv_transpose2d: bias shape mismatch");
  const int s = spec.stride, p = spec.pad, op = spec.output_pad;
  const int oh = (xs.h - 1) * s - 2 * p + ws.h + op;
  const int ow = (xs.w - 1) * s - 2 * p + ws.w + op;
  if (oh < 1 || ow < 1) throw std::invalid_argument("conv_transpose2d: output would be empty");

  Tensor out(Shape{xs.n, cout, oh, ow});
  {
    const double* xd = x.value().data();
    const double* wd = w.value().data();
    double* od = out.data();
    for (int n = 0; n < xs.n; ++n)
      for (int co = 0; co < cout; ++co) {
        double* oplane = od + (static_cast<size_t>(n) * cout + co) * oh * ow;
        const double bias = b.value()[co];
        for (int i = 0; i < oh * ow; ++i) oplane[i] = bias;
        for (int ci = 0; ci < xs.c; ++ci) {
          const double* xplane = xd + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w;
          const double* wplane = wd + (static_cast<size_t>(ci) * cout + co) * ws.h * ws.w;
          for (int ky = 0; ky < ws.h; ++ky)
            for (int kx = 0; kx < ws.w; ++kx) {
              const double wv = wplane[ky * ws.w + kx];
              if (wv == 0.0) continue;
              const int ix_lo = std::max(0, (p - kx + s - 1) / s);
              const int ix_hi = std::min(xs.w - 1, floor_div(ow - 1 + p - kx, s));
              for (int iy = 0; iy < xs.h; ++iy) {
                const int oy = iy * s - p + ky;
                if (oy < 0 || oy >= oh) continue;
                const double* xrow = xplane + static_cast<size_t>(iy) * xs.w;
                double* orow = oplane + static_cast<size_t>(oy) * ow;
                for (int ix = ix_lo; ix <= ix_hi; ++ix) orow[ix * s - p + kx] += wv * xrow[ix];
              }
            }
        }
      }
  }

  return make_op(std::move(out), {x, w, b}, [x, w, b, s, p](Node& self) {
    const Tensor& g = self.grad;
    const Shape xs = x.value().shape(), ws = w.value().shape();
    const Shape os = self.value.shape();
    const int oh = os.h, ow = os.w;
    Tensor* gx = x.requires_grad() ? &x.node()->ensure_grad() : nullptr;
    Tensor* gw = w.requires_grad() ? &w.node()->ensure_grad() : nullptr;
    Tensor* gb = b.requires_grad() ? &b.node()->ensure_grad() : nullptr;
    const double* xd = x.value().data();
    const double* wd = w.value().data();
    const double* gd = g.data();
    if (gb) {
      for (int n = 0; n < os.n; ++n)
        for (int co = 0; co < os.c; ++co) {
          const double* gplane = gd + (static_cast<size_t>(n) * os.c + co) * oh * ow;
          double acc = 0.0;
          for (int i = 0; i < oh * ow; ++i) acc += gplane[i];
          (*gb)[co] += acc;
        }
    }
    for (int n = 0; n < xs.n; ++n)
      for (int ci = 0; ci < xs.c; ++ci) {
        const double* xplane = xd + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w;
        double* gxplane =
            gx ? gx->data() + (static_cast<size_t>(n) * xs.c + ci) * xs.h * xs.w : nullptr;
        for (int co = 0; co < os.c; ++co) {
          const double* gplane = gd + (static_cast<size_t>(n) * os.c + co) * oh * ow;
          const double* wplane = wd + (static_cast<size_t>(ci) * os.c + co) * ws.h * ws.w;
          double* gwplane =
              gw ? gw->data() + (static_cast<size_t>(ci) * os.c + co) * ws.h * ws.w : nullptr;
          for (int ky = 0; ky < ws.h; ++ky)
            for (int kx = 0; kx < ws.w; ++kx) {
              const double wv = wplane[ky * ws.w + kx];
              double wacc = 0.0;
              const int ix_lo = std::max(0, (p - kx + s - 1) / s);
              const int ix_hi = std::min(xs.w - 1, floor_div(ow - 1 + p - kx, s));
              for (int iy = 0; iy < xs.h; ++iy) {
                const int oy = iy * s - p + ky;
                if (oy < 0 || oy >= oh) continue;
                const double* grow = gplane + static_cast<size_t>(oy) * ow;
                const double* xrow = xplane + static_cast<size_t>(iy) * xs.w;
                double* gxrow = gxplane ? gxplane + static_cast<size_t>(iy) * xs.w : nullptr;
                if (gxrow) {
                  for (int ix = ix_lo; ix <= ix_hi; ++ix) {
                    const double go = grow[ix * s - p + kx];
                    gxrow[ix] += go * wv;
                    wacc += go * xrow[ix];
                  }
                } else {
                  for (int ix = ix_lo; ix <= ix_hi; ++ix) wacc += grow[ix * s - p + kx] * xrow[ix];
                }
              }
              if (gwplane) gwplane[ky * ws.w + kx] += wacc;
            }
        }
      }
  });
}

Var relu(const Var& x) {
  Tensor out = x.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::max(0.0, out[i]);
  return make_op(std::move(out), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    Tensor& gx = x.node()->ensure_grad();
    for (size_t i = 0; i < gx.size(); ++i)
      if (x.value()[i] > 0.0) gx[i] += self.grad[i];
  });
}

Var leaky_relu(const Var& x, double slope) {
  Tensor out = x.value();
  for (size_t i = 0; i < out.size(); ++i)
    if (out[i] < 0.0) out[i] *= slope;
  return make_op(std::move(out), {x}, [x, slope](Node& self) {
    if (!x.requires_grad()) return;
    Tensor& gx = x.node()->ensure_grad();
    for (size_t i = 0; i < gx.size(); ++i)
      gx[i] += self.grad[i] * (x.value()[i] > 0.0 ? 1.0 : slope);
  });
}

Var logistic(const Var& x) {
  Tensor out = x.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-out[i]));
  return make_op(std::move(out), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    Tensor& gx = x.node()->ensure_grad();
    for (size_t i = 0; i < gx.size(); ++i) {
      const double y = self.value[i];
      gx[i] += self.grad[i] * y * (1.0 - y);
    }
  });
}

Var elementwise_sum(const Var& a, const Var& b) {
  if (!(a.value().shape() == b.value().shape()))
    throw std::invalid_argument("elementwise_sum: shape mismatch " + a.value().shape().str() +
                                " vs " + b.value().shape().str());
  Tensor out = a.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  return make_op(std::move(out), {a, b}, [a, b](Node& self) {
    for (const Var& v : {a, b}) {
      if (!v.requires_grad()) continue;
      Tensor& gv = v.node()->ensure_grad();
      for (size_t i = 0; i < gv.size(); ++i) gv[i] += self.grad[i];
    }
  });
}

Var elementwise_prod(const Var& a, const Var& b) {
  if (!(a.value().shape() == b.value().shape()))
    throw std::invalid_argument("elementwise_prod: shape mismatch");
  Tensor out = a.value();
  for (size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
  return make_op(std::move(out), {a, b}, [a, b](Node& self) {
    if (a.requires_grad()) {
      Tensor& ga = a.node()->ensure_grad();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i] * b.value()[i];
    }
    if (b.requires_grad()) {
      Tensor& gb = b.node()->ensure_grad();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += self.grad[i] * a.value()[i];
    }
  });
}

Var concat_channels(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat_channels: no inputs");
  const Shape s0 = xs[0].value().shape();
  int ctotal = 0;
  for (const auto& v : xs) {
    const Shape s = v.value().shape();
    if (s.n != s0.n || s.h != s0.h || s.w != s0.w)
      throw std::invalid_argument("concat_channels: spatial/batch mismatch");
    ctotal += s.c;
  }
  Tensor out(Shape{s0.n, ctotal, s0.h, s0.w});
  int coff = 0;
  for (const auto& v : xs) {
    const Shape s = v.value().shape();
    for (int n = 0; n < s.n; ++n)
      for (int c = 0; c < s.c; ++c)
        for (int y = 0; y < s.h; ++y)
          for (int x = 0; x < s.w; ++x) out.at(n, coff + c, y, x) = v.value().at(n, c, y, x);
    coff += s.c;
  }
  return make_op(std::move(out), xs, [xs](Node& self) {
    int coff = 0;
    for (const auto& v : xs) {
      const Shape s = v.value().shape();
      if (v.requires_grad()) {
        Tensor& gv = v.node()->ensure_grad();
        for (int n = 0; n < s.n; ++n)
          for (int c = 0; c < s.c; ++c)
            for (int y = 0; y < s.h; ++y)
              for (int x = 0; x < s.w; ++x) gv.at(n, c, y, x) += self.grad.at(n, coff + c, y, x);
      }
      coff += s.c;
    }
  });
}

Var mul_channel_broadcast(const Var& x, const Var& a) {
  const Shape xs = x.value().shape(), as = a.value().shape();
  if (as.c != 1 || as.n != xs.n || as.h != xs.h || as.w != xs.w)
    throw std::invalid_argument("mul_channel_broadcast: attention must be (N,1,H,W) matching x");
  Tensor out(xs);
  for (int n = 0; n < xs.n; ++n)
    for (int c = 0; c < xs.c; ++c)
      for (int y = 0; y < xs.h; ++y)
        for (int xx = 0; xx < xs.w; ++xx)
          out.at(n, c, y, xx) = x.value().at(n, c, y, xx) * a.value().at(n, 0, y, xx);
  return make_op(std::move(out), {x, a}, [x, a](Node& self) {
    const Shape xs = x.value().shape();
    if (x.requires_grad()) {
      Tensor& gx = x.node()->ensure_grad();
      for (int n = 0; n < xs.n; ++n)
        for (int c = 0; c < xs.c; ++c)
          for (int y = 0; y < xs.h; ++y)
            for (int xx = 0; xx < xs.w; ++xx)
              gx.at(n, c, y, xx) += self.grad.at(n, c, y, xx) * a.value().at(n, 0, y, xx);
    }
    if (a.requires_grad()) {
      Tensor& ga = a.node()->ensure_grad();
      for (int n = 0; n < xs.n; ++n)
        for (int y = 0; y < xs.h; ++y)
          for (int xx = 0; xx < xs.w; ++xx) {
            double acc = 0.0;
            for (int c = 0; c < xs.c; ++c)
              acc += self.grad.at(n, c, y, xx) * x.value().at(n, c, y, xx);
            ga.at(n, 0, y, xx) += acc;
          }
    }
  });
}

Var spatial_softmax(const Var& x) {
  const Shape s = x.value().shape();
  if (s.c != 1) throw std::invalid_argument("spatial_softmax: expects a single-channel map");
  Tensor out(s);
  for (int n = 0; n < s.n; ++n) {
    double maxv = -1e300;
    for (int y = 0; y < s.h; ++y)
      for (int xx = 0; xx < s.w; ++xx) maxv = std::max(maxv, x.value().at(n, 0, y, xx));
    double sum = 0.0;
    for (int y = 0; y < s.h; ++y)
      for (int xx = 0; xx < s.w; ++xx) {
        const double e = std::exp(x.value().at(n, 0, y, xx) - maxv);
        out.at(n, 0, y, xx) = e;
        sum += e;
      }
    for (int y = 0; y < s.h; ++y)
      for (int xx = 0; xx < s.w; ++xx) out.at(n, 0, y, xx) /= sum;
  }
  return make_op(std::move(out), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    const Shape s = x.value().shape();
    Tensor& gx = x.node()->ensure_grad();
    for (int n = 0; n < s.n; ++n) {
      double dot = 0.0;
      for (int y = 0; y < s.h; ++y)
        for (int xx = 0; xx < s.w; ++xx)
          dot += self.grad.at(n, 0, y, xx) * self.value.at(n, 0, y, xx);
      for (int y = 0; y < s.h; ++y)
        for (int xx = 0; xx < s.w; ++xx)
          gx.at(n, 0, y, xx) +=
              self.value.at(n, 0, y, xx) * (self.grad.at(n, 0, y, xx) - dot);
    }
  });
}

Var avg_pool2(const Var& x) {
  const Shape s = x.value().shape();
  if (s.h % 2 || s.w % 2) throw std::invalid_argument("avg_pool2: dimensions must be even");
  Tensor out(Shape{s.n, s.c, s.h / 2, s.w / 2});
  for (int n = 0; n < s.n; ++n)
    for (int c = 0; c < s.c; ++c)
      for (int y = 0; y < s.h / 2; ++y)
        for (int xx = 0; xx < s.w / 2; ++xx)
          out.at(n, c, y, xx) =
              0.25 * (x.value().at(n, c, 2 * y, 2 * xx) + x.value().at(n, c, 2 * y, 2 * xx + 1) +
                      x.value().at(n, c, 2 * y + 1, 2 * xx) +
                      x.value().at(n, c, 2 * y + 1, 2 * xx + 1));
  return make_op(std::move(out), {x}, [x](Node& self) {
    if (!x.requires_grad()) return;
    const Shape os = self.value.shape();
    Tensor& gx = x.node()->ensure_grad();
    for (int n = 0; n < os.n; ++n)
      for (int c = 0; c < os.c; ++c)
        for (int y = 0; y < os.h; ++y)
          for (int xx = 0; xx < os.w; ++xx) {
            const double g = 0.25 * self.grad.at(n, c, y, xx);
            gx.at(n, c, 2 * y, 2 * xx) += g;
            gx.at(n, c, 2 * y, 2 * xx + 1) += g;
            gx.at(n, c, 2 * y + 1, 2 * xx) += g;
            gx.at(n, c, 2 * y + 1, 2 * xx + 1) += g;
          }
  });
}

Var weighted_sum(const std::vector<Var>& terms, const std::vector<double>& weights) {
  if (terms.size() != weights.size() || terms.empty())
    throw std::invalid_argument("weighted_sum: bad arguments");
  double acc = 0.0;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].value().size() != 1) throw std::invalid_argument("weighted_sum: non-scalar term");
    acc += weights[i] * terms[i].value()[0];
  }
  return make_op(Tensor::scalar(acc), terms, [terms, weights](Node& self) {
    for (size_t i = 0; i < terms.size(); ++i)
      if (terms[i].requires_grad()) terms[i].node()->ensure_grad()[0] += weights[i] * self.grad[0];
  });
}

}  // namespace gaze::gazegan
