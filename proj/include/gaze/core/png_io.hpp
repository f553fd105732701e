#pragma once

#include <string>

#include "gaze/core/types.hpp"

namespace gaze::core {

// 8-bit RGB PNG. Reading expands palette/gray/alpha inputs to RGB.
ColorImage read_png(const std::string& path);
void write_png(const ColorImage& img, const std::string& path);

// 16-bit grayscale PNG, the density-map interchange format. write_png16
// max-scales to the full 16-bit range; read_density renormalizes the decoded
// grid to the requested convention.
void write_png16(const LuminanceGrid& grid, const std::string& path);
LuminanceGrid read_png16(const std::string& path);
DensityMap read_density(const std::string& path, Normalization n = Normalization::SumToOne);

}  // namespace gaze::core
