#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "popgrid/geo.hpp"
#include "popgrid/io.hpp"

namespace popgrid::eval {

/// Built-up is the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Cell-by-cell comparison over cells valid in both rasters. Throws
/// AlignmentError unless origin, pixel size and dimensions match exactly.
ConfusionCounts confusion(const io::BinaryRaster& predicted, const io::BinaryRaster& reference);

struct Metrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  // Not part of the headline comparison; reported for convenience.
  double precision = 0.0;
  double recall = 0.0;
  double iou = 0.0;
};

/// accuracy = (tp + tn) / total, f1 = 2tp / (2tp + fp + fn). With no positives
/// anywhere (2tp + fp + fn = 0) f1 is 1.0. Throws ParameterError on empty counts.
Metrics metrics(const ConfusionCounts& c);

nlohmann::json to_json(const ConfusionCounts& c, const Metrics& m);

inline constexpr double kDefaultTheta = 0.5;

/// Tile-resolution raster: a tile is 1 iff the fraction of built pixels among
/// its valid pixels (assigned by pixel center) is at least theta; tiles without
/// valid pixels are nodata. Throws ParameterError unless 0 < theta <= 1.
io::BinaryRaster downsample_to_tiles(const io::BinaryRaster& raster, const geo::TileGrid& grid,
                                     double theta = kDefaultTheta);

inline constexpr std::string_view kUnassignedId = "_unassigned";

struct ZonalRow {
  std::string unit_id;
  double population_sum = 0.0;
  std::size_t tile_count = 0;
  std::size_t built_tile_count = 0;
  double mean_density = 0.0;  ///< people per km2 over tile_count tiles
};

/// One row per unit in input order plus a trailing `_unassigned` row. A tile
/// belongs to the first unit containing its center. built_tile_count counts
/// tiles flagged 1 in `built_tiles` (a tile-resolution raster on the same
/// grid), or tiles with positive population when none is given.
std::vector<ZonalRow> zonal_stats(const io::PopulationGrid& population,
                                  std::span<const io::AdminUnit> units,
                                  const io::BinaryRaster* built_tiles = nullptr);

std::string format_zonal_csv(std::span<const ZonalRow> rows);

}  // namespace popgrid::eval
