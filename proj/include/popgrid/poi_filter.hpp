#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "popgrid/geo.hpp"
#include "popgrid/io.hpp"

namespace popgrid::poi {

inline constexpr double kDefaultRadius = 500.0;
inline constexpr std::size_t kDefaultThreshold = 5;

/// Immutable POI collection with a static 2-d tree over the locations.
///
/// Radius queries are exact: a node is skipped only when its nearest box
/// point is farther than the radius and counted wholesale only when its
/// farthest corner is within it. Because geo::distance is monotone in each
/// coordinate difference, both tests agree with evaluating every point.
class PoiSet {
 public:
  PoiSet() = default;
  explicit PoiSet(std::vector<io::PoiPoint> points);

  std::span<const io::PoiPoint> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// Number of points q with distance(center, q) <= radius. No parameter checks.
  std::size_t count_within(const geo::Point& center, double radius) const noexcept;

 private:
  struct Node {
    geo::BBox box;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);

  std::vector<io::PoiPoint> points_;
  std::vector<geo::Point> tree_points_;
  std::vector<Node> nodes_;
};

/// Per-tile residential flag; `retained[i]` is 0 when tile i is excluded.
struct TileMask {
  geo::TileGrid grid;
  std::vector<std::uint8_t> retained;

  static TileMask all_retained(const geo::TileGrid& grid);

  bool is_retained(std::size_t tile) const noexcept { return retained[tile] != 0; }
  std::size_t excluded_count() const noexcept;

  friend bool operator==(const TileMask&, const TileMask&) = default;
};

/// POIs within the closed disc of `radius` around `center`, the center point
/// itself included when it belongs to the set. Throws ParameterError when
/// radius <= 0.
std::size_t buffer_count(const PoiSet& pois, const geo::Point& center, double radius);

/// Input-order indices of the POIs whose own buffer holds at least `threshold`
/// points. Throws ParameterError when radius <= 0 or threshold < 1.
std::vector<std::size_t> dense_poi_indices(const PoiSet& pois, double radius,
                                           std::size_t threshold, int workers = 1);
std::vector<io::PoiPoint> dense_pois(const PoiSet& pois, double radius, std::size_t threshold,
                                     int workers = 1);

/// A tile is excluded iff a dense POI lies inside it. Dense POIs outside the
/// grid mark nothing but still contribute to their neighbours' counts.
TileMask compute_tile_mask(const geo::TileGrid& grid, const PoiSet& pois, double radius,
                           std::size_t threshold, int workers = 1);

/// Tile-resolution raster: 1 = retained, 0 = excluded.
io::BinaryRaster to_raster(const TileMask& mask);

}  // namespace popgrid::poi
