#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "popgrid/geo.hpp"
#include "popgrid/io.hpp"
#include "popgrid/poi_filter.hpp"

namespace popgrid::disagg {

struct TileCount {
  std::uint32_t tile = 0;  ///< linear tile index
  std::uint32_t built = 0;

  friend bool operator==(const TileCount&, const TileCount&) = default;
};

/// Built pixels of one admin unit, keyed by tile.
struct UnitAssignment {
  std::vector<TileCount> tiles;  ///< ascending tile order, built > 0
  std::uint64_t total_built = 0;
  std::uint64_t total_retained_built = 0;
  /// Tiles whose center lies in the unit (retained or not), ascending.
  std::vector<std::uint32_t> center_tiles;
  /// Tile holding the unit's representative point; set only when
  /// center_tiles is empty and the point falls on the grid.
  std::optional<std::uint32_t> representative_tile;

  friend bool operator==(const UnitAssignment&, const UnitAssignment&) = default;
};

struct PixelAssignment {
  geo::TileGrid grid;
  std::vector<std::uint8_t> retained;
  std::vector<UnitAssignment> units;
  /// Built pixels claimed by more than one unit (kept by the first in input order).
  std::uint64_t overlap_pixels = 0;
  /// Built pixels on the grid that fall in no unit.
  std::uint64_t unassigned_built = 0;
  std::vector<std::string> warnings;
};

/// Assigns every built, valid pixel by its center to one tile and to the first
/// unit (input order) containing it. Work is split by raster row; integer
/// tallies make the result independent of `workers`.
///
/// Throws ConfigurationError when the pixel size exceeds the tile size, the
/// mask does not match the grid, or the raster, grid and units share no area.
PixelAssignment assign_pixels(const io::BinaryRaster& mask_raster, const geo::TileGrid& grid,
                              std::span<const io::AdminUnit> units, const poi::TileMask& tile_mask,
                              int workers = 1);

enum class Fallback {
  none,
  uniform,               ///< no retained built pixels: spread over contained tile centers
  representative_point,  ///< no tile center inside the unit either
};

std::string_view to_string(Fallback f) noexcept;

struct UnitReport {
  std::string id;
  double population_in = 0.0;
  double population_out = 0.0;
  Fallback fallback = Fallback::none;
  /// Tiles whose center lies in the unit, split by the POI mask.
  std::size_t retained_tiles = 0;
  std::size_t excluded_tiles = 0;
  std::uint64_t built_pixels = 0;
  std::uint64_t retained_built_pixels = 0;

  bool fallback_used() const noexcept { return fallback != Fallback::none; }
};

struct AllocationReport {
  std::vector<UnitReport> units;
  double total_in = 0.0;
  double total_out = 0.0;
  std::size_t fallback_units = 0;
  std::size_t excluded_tiles = 0;
  std::uint64_t overlap_pixels = 0;
  std::vector<std::string> warnings;

  /// |total_out - total_in| / max(total_in, 1).
  double relative_error() const noexcept;
};

struct Allocation {
  io::PopulationGrid population;
  AllocationReport report;
};

/// Spreads each unit's population over its retained tiles in proportion to
/// built pixels: tile t of unit u receives population(u) * built(t, u) /
/// total_retained_built(u). Units without retained built pixels use the
/// uniform or representative-point fallback. Per-tile sums run in unit input
/// order regardless of `workers`.
///
/// Throws ParameterError when the assignment was built from a different unit
/// list, ValidationError on a negative population, and ConfigurationError when
/// a fallback unit has no tile on the grid.
Allocation allocate(const PixelAssignment& assignment, std::span<const io::AdminUnit> units,
                    int workers = 1);

/// Baseline that ignores built-up information: each unit's population is split
/// equally over the tiles whose center it contains.
io::PopulationGrid uniform_allocate(const geo::TileGrid& grid, std::span<const io::AdminUnit> units);

nlohmann::json to_json(const AllocationReport& report);

}  // namespace popgrid::disagg
