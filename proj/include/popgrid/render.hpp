#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "popgrid/io.hpp"

namespace popgrid::render {

enum class Scale { linear, log };
enum class PgmFormat { plain /* P2 */, binary /* P5 */ };

/// Throws ParameterError on anything other than "linear" / "log".
Scale parse_scale(std::string_view name);
/// Accepts "p2" / "p5" (case-insensitive).
PgmFormat parse_format(std::string_view name);

/// 8-bit image, top row first.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

/// The grid maximum maps to 255, zero and nodata to 0. Log scale maps v to
/// log1p(v) / log1p(max). Negative values clamp to 0.
GrayImage tone_map(const io::AsciiGrid& grid, Scale scale);

std::string encode_pgm(const GrayImage& image, PgmFormat format);

}  // namespace popgrid::render
