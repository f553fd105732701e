#include "gaze/core/types.hpp"

#include <cmath>

namespace gaze::core {

void DensityMap::validate() const {
  double sum = 0.0, maxv = 0.0;
  for (double v : grid.data) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("DensityMap: values must be finite and nonnegative");
    sum += v;
    if (v > maxv) maxv = v;
  }
  if (normalization == Normalization::SumToOne && std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("DensityMap: sum-to-one violated (sum=" + std::to_string(sum) + ")");
  if (normalization == Normalization::MaxToOne && std::abs(maxv - 1.0) > 1e-9)
    throw std::invalid_argument("DensityMap: max-to-one violated (max=" + std::to_string(maxv) + ")");
}

DensityMap normalize(LuminanceGrid grid, Normalization n) {
  if (n == Normalization::SumToOne) {
    double sum = 0.0;
    for (double v : grid.data) sum += v;
    if (sum <= 0.0) throw std::invalid_argument("normalize: all-zero map cannot be sum-to-one");
    for (double& v : grid.data) v /= sum;
  } else if (n == Normalization::MaxToOne) {
    double maxv = 0.0;
    for (double v : grid.data) maxv = std::max(maxv, v);
    if (maxv <= 0.0) throw std::invalid_argument("normalize: all-zero map cannot be max-to-one");
    for (double& v : grid.data) v /= maxv;
  }
  return DensityMap(std::move(grid), n);
}

}  // namespace gaze::core
