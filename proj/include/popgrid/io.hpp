#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "popgrid/geo.hpp"

namespace popgrid::io {

// ---------------------------------------------------------------------------
// Admin units (GeoJSON FeatureCollection of Polygon / MultiPolygon features)
// ---------------------------------------------------------------------------

/// Census hierarchy below district level, coarse to fine.
enum class AdminLevel { tehsil, charge, circle, block };

std::string_view to_string(AdminLevel level) noexcept;
/// Case-insensitive; throws ValidationError on unknown names.
AdminLevel parse_level(std::string_view name);

struct AdminUnit {
  std::string id;
  AdminLevel level = AdminLevel::circle;
  /// One entry per part of a MultiPolygon; population attaches to the union.
  std::vector<geo::Polygon> parts;
  double population = 0.0;

  geo::BBox bbox() const noexcept;
  bool contains(const geo::Point& p) const noexcept;
  /// Representative point of the largest part.
  geo::Point representative_point() const;
};

struct AdminLayer {
  std::vector<AdminUnit> units;
  /// Name from a top-level legacy `crs` member, when the file carries one.
  std::optional<std::string> crs;
};

/// Requires properties `id`, `level`, `population` on every feature and every
/// feature at `expected`. Throws ParseError, SchemaError, LevelMismatchError or
/// ValidationError.
AdminLayer parse_admin_units(std::string_view text, AdminLevel expected,
                             std::string_view source = "<memory>");
AdminLayer read_admin_units(const std::filesystem::path& path, AdminLevel expected);

std::string format_admin_units(std::span<const AdminUnit> units,
                               const std::optional<std::string>& crs = std::nullopt);
void write_admin_units(const std::filesystem::path& path, std::span<const AdminUnit> units,
                       const std::optional<std::string>& crs = std::nullopt);

/// Bounding box of every unit in the layer.
geo::BBox extent_of(std::span<const AdminUnit> units) noexcept;

/// Throws ValidationError when the layer looks like geographic degrees: either
/// the declared CRS is EPSG:4326 / CRS84, or no projected CRS is declared and
/// every coordinate lies inside the longitude/latitude box.
void require_projected(const AdminLayer& layer);

// ---------------------------------------------------------------------------
// Points of interest (CSV `x,y,category` or GeoJSON Point features)
// ---------------------------------------------------------------------------

struct PoiPoint {
  geo::Point location;
  std::string category;

  friend bool operator==(const PoiPoint&, const PoiPoint&) = default;
};

/// Data rows are numbered from 1 after the header in error messages.
std::vector<PoiPoint> parse_poi_csv(std::string_view text, std::string_view source = "<memory>");
std::vector<PoiPoint> parse_poi_geojson(std::string_view text,
                                        std::string_view source = "<memory>");
/// Dispatches on content: a leading `{` means GeoJSON, anything else CSV.
std::vector<PoiPoint> read_poi(const std::filesystem::path& path);

std::string format_poi_csv(std::span<const PoiPoint> pois);
void write_poi_csv(const std::filesystem::path& path, std::span<const PoiPoint> pois);
std::string format_poi_geojson(std::span<const PoiPoint> pois);

// ---------------------------------------------------------------------------
// Rasters (ESRI ASCII grid)
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kNoData = 255;
inline constexpr double kAsciiNoData = -9999.0;

/// Fine-resolution built-up mask: 0, 1 or kNoData per pixel. Storage is
/// row-major with row 0 at the bottom, matching pixel centers
/// (origin_x + (c + 0.5) * pixel_size, origin_y + (r + 0.5) * pixel_size).
struct BinaryRaster {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double pixel_size = 1.0;
  int n_cols = 0;
  int n_rows = 0;
  std::vector<std::uint8_t> values;

  static BinaryRaster filled(double origin_x, double origin_y, double pixel_size, int n_cols,
                             int n_rows, std::uint8_t value);

  std::size_t index(int col, int row) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n_cols) +
           static_cast<std::size_t>(col);
  }
  std::uint8_t at(int col, int row) const noexcept { return values[index(col, row)]; }
  std::uint8_t& at(int col, int row) noexcept { return values[index(col, row)]; }

  double pixel_center_x(int col) const noexcept { return origin_x + (col + 0.5) * pixel_size; }
  double pixel_center_y(int row) const noexcept { return origin_y + (row + 0.5) * pixel_size; }
  geo::BBox extent() const noexcept;
  bool same_geometry(const BinaryRaster& other) const noexcept;

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;
};

/// Estimated population per tile, same storage order as BinaryRaster.
struct PopulationGrid {
  geo::TileGrid grid;
  std::vector<double> values;

  explicit PopulationGrid(const geo::TileGrid& g) : grid(g), values(g.tile_count(), 0.0) {}

  double total() const noexcept;

  friend bool operator==(const PopulationGrid&, const PopulationGrid&) = default;
};

/// Raw contents of an ESRI ASCII grid; values reordered bottom row first.
struct AsciiGrid {
  int n_cols = 0;
  int n_rows = 0;
  double xllcorner = 0.0;
  double yllcorner = 0.0;
  double cellsize = 0.0;
  double nodata = kAsciiNoData;
  std::vector<double> values;
  std::vector<std::string> warnings;

  bool is_nodata(std::size_t i) const noexcept { return values[i] == nodata; }
};

/// Header keys NCOLS, NROWS, XLLCORNER, YLLCORNER, CELLSIZE, NODATA_VALUE are
/// matched case-insensitively by name; an unconventional order only adds a
/// warning. Missing, duplicate or unknown keys throw FormatError, a value
/// count other than NCOLS*NROWS throws TruncationError.
AsciiGrid parse_ascii_grid(std::string_view text, std::string_view source = "<memory>");
AsciiGrid read_ascii_file(const std::filesystem::path& path);

/// Throws ValidationError for cells that are neither 0, 1 nor nodata.
BinaryRaster to_binary_raster(const AsciiGrid& grid);
/// Throws ValidationError for negative, non-finite or nodata cells.
PopulationGrid to_population_grid(const AsciiGrid& grid);

BinaryRaster read_ascii_grid(const std::filesystem::path& path);
PopulationGrid read_population_grid(const std::filesystem::path& path);

std::string format_ascii_grid(const BinaryRaster& raster);
std::string format_ascii_grid(const PopulationGrid& grid);
void write_ascii_grid(const BinaryRaster& raster, const std::filesystem::path& path);
void write_ascii_grid(const PopulationGrid& grid, const std::filesystem::path& path);

/// Fixed notation with at least six decimals, extended until the text parses
/// back to the identical double.
std::string format_real(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace popgrid::io
