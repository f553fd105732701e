#pragma once

#include "gaze/core/types.hpp"

namespace gaze::transforms {

// Canny pipeline: Gaussian smooth, central-difference gradient, non-maximum
// suppression, hysteresis with low = 0.4 * high on max-normalized gradient
// magnitudes. Output is binary {0,1}.
core::LuminanceGrid canny(const core::LuminanceGrid& gray, double high_threshold,
                          double sigma);

// Grayscale conversion + canny, rendered white-on-black into 3 channels.
core::ColorImage boundary_map(const core::ColorImage& img, double high_threshold = 0.3,
                              double sigma = 1.4142135623730951);

}  // namespace gaze::transforms
