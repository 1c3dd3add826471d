#include "popgrid/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "popgrid/error.hpp"

namespace popgrid::render {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Scale parse_scale(std::string_view name) {
  const std::string n = lower(name);
  if (n == "linear") return Scale::linear;
  if (n == "log") return Scale::log;
  throw ParameterError("unknown scale '" + std::string(name) + "' (expected linear or log)");
}

PgmFormat parse_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "p2") return PgmFormat::plain;
  if (n == "p5") return PgmFormat::binary;
  throw ParameterError("unknown PGM format '" + std::string(name) + "' (expected p2 or p5)");
}

GrayImage tone_map(const io::AsciiGrid& grid, Scale scale) {
  GrayImage img{grid.n_cols, grid.n_rows,
                std::vector<std::uint8_t>(grid.values.size(), 0)};
  double max_value = 0.0;
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (!grid.is_nodata(i)) max_value = std::max(max_value, grid.values[i]);
  }
  if (!(max_value > 0.0)) return img;

  const double log_max = std::log1p(max_value);
  const auto cols = static_cast<std::size_t>(grid.n_cols);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.is_nodata(i)) continue;
    const double v = std::max(grid.values[i], 0.0);
    const double t = scale == Scale::linear ? v / max_value : std::log1p(v) / log_max;
    const auto level = static_cast<std::uint8_t>(std::clamp(std::lround(t * 255.0), 0L, 255L));
    // Storage is bottom row first; images are top row first.
    const std::size_t row = i / cols;
    const std::size_t col = i % cols;
    const std::size_t out_row = static_cast<std::size_t>(grid.n_rows) - 1 - row;
    img.pixels[out_row * cols + col] = level;
  }
  return img;
}

std::string encode_pgm(const GrayImage& image, PgmFormat format) {
  std::string out = format == PgmFormat::plain ? "P2\n" : "P5\n";
  out += std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  if (format == PgmFormat::binary) {
    out.append(image.pixels.begin(), image.pixels.end());
    return out;
  }
  for (int r = 0; r < image.height; ++r) {
    for (int c = 0; c < image.width; ++c) {
      if (c) out += ' ';
      out += std::to_string(image.pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(image.width) +
                                         static_cast<std::size_t>(c)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace popgrid::render
