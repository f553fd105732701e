#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaze/core/types.hpp"

namespace gaze::transforms {

// Baseline sequential JPEG, 4:4:4, standard Huffman tables. Quality follows
// the conventional scaling: scale = 5000/Q for Q < 50 (Q = 0 clamps to 1),
// scale = 200 - 2Q otherwise; table entries clamp to [1, 255].
std::vector<std::uint8_t> jpeg_encode(const core::ColorImage& img, int quality);
core::ColorImage jpeg_decode(const std::vector<std::uint8_t>& bytes);

core::ColorImage jpeg_round_trip(const core::ColorImage& img, int quality);

void write_jpeg(const core::ColorImage& img, const std::string& path, int quality);
core::ColorImage read_jpeg(const std::string& path);

// Scaled 8x8 quantization table in zigzag order (index 0 = luma, 1 = chroma).
std::array<int, 64> jpeg_quant_table(int quality, int which);

}  // namespace gaze::transforms
