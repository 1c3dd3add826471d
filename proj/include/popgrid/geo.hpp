#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace popgrid::geo {

/// Planar position in a projected, meter-unit CRS.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

bool is_finite(const Point& p) noexcept;

/// Euclidean distance. Computed as sqrt(dx*dx + dy*dy) so it is monotone in
/// |dx| and |dy|; the POI index relies on that for exact pruning.
double distance(const Point& a, const Point& b) noexcept;

/// Closed ring stored without a repeated closing vertex.
using Ring = std::vector<Point>;

struct Polygon {
  Ring exterior;
  std::vector<Ring> holes;
};

struct BBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  /// Inverted box that any expand() overwrites.
  static BBox empty() noexcept;

  bool is_empty() const noexcept { return min_x > max_x || min_y > max_y; }
  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }

  void expand(const Point& p) noexcept;
  void expand(const BBox& b) noexcept;
  bool contains(const Point& p) const noexcept;
  /// Overlap with positive area; touching edges do not count.
  bool overlaps(const BBox& other) const noexcept;

  friend bool operator==(const BBox&, const BBox&) = default;
};

BBox bbox_of(const Ring& ring) noexcept;
BBox bbox_of(const Polygon& poly) noexcept;

/// Shoelace area, positive for counter-clockwise rings.
double signed_area(const Ring& ring) noexcept;
/// Exterior area minus hole areas.
double area(const Polygon& poly) noexcept;

/// Drops a trailing vertex equal to the first one (GeoJSON closure).
Ring normalize_ring(Ring ring);

/// Throws ValidationError unless every ring has at least three distinct finite
/// vertices and the polygon encloses positive area.
void validate(const Polygon& poly);

enum class RingSide { outside, boundary, inside };

/// Even-odd classification of p against one ring. Points lying exactly on an
/// edge report `boundary`.
RingSide classify(const Point& p, const Ring& ring) noexcept;

/// True iff p lies in the exterior ring and in none of the holes. A point on
/// the exterior boundary is inside; a point on a hole boundary is outside the
/// hole, so the polygon behaves as a closed set.
bool point_in_polygon(const Point& p, const Polygon& poly) noexcept;

/// A point guaranteed to satisfy point_in_polygon for any valid polygon
/// (midpoint of the widest interior span along a horizontal scanline).
Point representative_point(const Polygon& poly);

struct TileId {
  int col = 0;
  int row = 0;

  friend bool operator==(const TileId&, const TileId&) = default;
};

/// Regular square tiling anchored at its lower-left corner. Tile (c, r) covers
/// [origin_x + c*size, origin_x + (c+1)*size) x [origin_y + r*size, origin_y + (r+1)*size).
/// Row 0 is the southernmost row.
class TileGrid {
 public:
  static constexpr double kDefaultTileSize = 30.0;

  TileGrid(double origin_x, double origin_y, double tile_size, int n_cols, int n_rows);

  /// Grid covering `extent`, with its origin snapped down to a multiple of tile_size.
  static TileGrid covering(const BBox& extent, double tile_size = kDefaultTileSize);

  double origin_x() const noexcept { return origin_x_; }
  double origin_y() const noexcept { return origin_y_; }
  double tile_size() const noexcept { return tile_size_; }
  int n_cols() const noexcept { return n_cols_; }
  int n_rows() const noexcept { return n_rows_; }
  std::size_t tile_count() const noexcept {
    return static_cast<std::size_t>(n_cols_) * static_cast<std::size_t>(n_rows_);
  }
  double tile_area() const noexcept { return tile_size_ * tile_size_; }

  /// Column containing x under the half-open rule, or nullopt outside the grid.
  std::optional<int> col_of(double x) const noexcept;
  std::optional<int> row_of(double y) const noexcept;
  std::optional<TileId> tile_index_of(const Point& p) const noexcept;

  std::size_t linear(TileId t) const noexcept {
    return static_cast<std::size_t>(t.row) * static_cast<std::size_t>(n_cols_) +
           static_cast<std::size_t>(t.col);
  }
  TileId tile_at(std::size_t linear_index) const noexcept {
    return {static_cast<int>(linear_index % static_cast<std::size_t>(n_cols_)),
            static_cast<int>(linear_index / static_cast<std::size_t>(n_cols_))};
  }

  Point tile_center(TileId t) const noexcept;
  BBox tile_extent(TileId t) const noexcept;
  BBox extent() const noexcept;

  friend bool operator==(const TileGrid&, const TileGrid&) = default;

 private:
  double origin_x_;
  double origin_y_;
  double tile_size_;
  int n_cols_;
  int n_rows_;
};

}  // namespace popgrid::geo
