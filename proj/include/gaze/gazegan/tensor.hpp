#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaze/core/rng.hpp"

namespace gaze::gazegan {

struct Shape {
  int n = 0, c = 0, h = 0, w = 0;

  std::int64_t numel() const { return std::int64_t(n) * c * h * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const {
    return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
           std::to_string(w) + ")";
  }
};

// Rank-4 value carrier (batch, channels, height, width), double precision.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0) : shape_(s) {
    if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1)
      throw std::invalid_argument("Tensor: bad shape " + s.str());
    data_.assign(static_cast<size_t>(s.numel()), fill);
  }

  static Tensor randn(Shape s, double stddev, core::Rng& rng) {
    Tensor t(s);
    for (double& v : t.data_) v = stddev * rng.next_gaussian();
    return t;
  }

  static Tensor scalar(double v) {
    Tensor t(Shape{1, 1, 1, 1});
    t.data_[0] = v;
    return t;
  }

  const Shape& shape() const { return shape_; }
  bool defined() const { return !data_.empty(); }
  size_t size() const { return data_.size(); }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  double& at(int n, int c, int y, int x) {
    return data_[((static_cast<size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }
  double at(int n, int c, int y, int x) const {
    return data_[((static_cast<size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool all_finite() const;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace gaze::gazegan
