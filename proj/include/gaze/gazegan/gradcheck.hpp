#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gaze/gazegan/model.hpp"

namespace gaze::gazegan {

struct GradCheckReport {
  std::string group;        // parameter group / op name
  double max_rel_err = 0.0;
  size_t coords_checked = 0;
  size_t coords_skipped = 0;  // near histogram kinks
};

// Central finite differences (h = 1e-5) of `loss_of(x)` against `analytic`,
// relative error |a - n| / max(1, |a|, |n|).
double finite_diff_max_rel_err(Tensor& x, const std::function<double()>& loss_of,
                               const Tensor& analytic, double h = 1e-5);

// Eq.-level checks over `seeds` random instances; each returns the worst
// report across seeds.
GradCheckReport grad_check_acs(int seeds, std::uint64_t base_seed = 1234);
std::vector<GradCheckReport> grad_check_csc(int seeds, std::uint64_t base_seed = 1234);
GradCheckReport grad_check_content(int seeds, std::uint64_t base_seed = 1234);

std::vector<GradCheckReport> grad_check_all(int seeds, std::uint64_t base_seed = 1234);

}  // namespace gaze::gazegan
