#include "popgrid/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "popgrid/error.hpp"

namespace popgrid::geo {

bool is_finite(const Point& p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

double distance(const Point& a, const Point& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

BBox BBox::empty() noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, -inf, -inf};
}

void BBox::expand(const Point& p) noexcept {
  min_x = std::min(min_x, p.x);
  min_y = std::min(min_y, p.y);
  max_x = std::max(max_x, p.x);
  max_y = std::max(max_y, p.y);
}

void BBox::expand(const BBox& b) noexcept {
  if (b.is_empty()) return;
  min_x = std::min(min_x, b.min_x);
  min_y = std::min(min_y, b.min_y);
  max_x = std::max(max_x, b.max_x);
  max_y = std::max(max_y, b.max_y);
}

bool BBox::contains(const Point& p) const noexcept {
  return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
}

bool BBox::overlaps(const BBox& o) const noexcept {
  return !is_empty() && !o.is_empty() && min_x < o.max_x && o.min_x < max_x && min_y < o.max_y &&
         o.min_y < max_y;
}

BBox bbox_of(const Ring& ring) noexcept {
  BBox b = BBox::empty();
  for (const Point& p : ring) b.expand(p);
  return b;
}

BBox bbox_of(const Polygon& poly) noexcept {
  // Holes lie inside the exterior for valid polygons.
  return bbox_of(poly.exterior);
}

double signed_area(const Ring& ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += (ring[j].x * ring[i].y) - (ring[i].x * ring[j].y);
  }
  return 0.5 * twice;
}

double area(const Polygon& poly) noexcept {
  double a = std::abs(signed_area(poly.exterior));
  for (const Ring& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

Ring normalize_ring(Ring ring) {
  if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

namespace {

void validate_ring(const Ring& ring, const char* what) {
  for (const Point& p : ring) {
    if (!is_finite(p)) throw ValidationError(std::string(what) + " has a non-finite vertex");
  }
  Ring distinct = ring;
  std::sort(distinct.begin(), distinct.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) {
    throw ValidationError(std::string(what) + " has fewer than 3 distinct vertices");
  }
  if (signed_area(ring) == 0.0) throw ValidationError(std::string(what) + " has zero area");
}

bool on_segment(const Point& p, const Point& a, const Point& b) noexcept {
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (cross != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
         p.y <= std::max(a.y, b.y);
}

// x-coordinates where the horizontal line at y crosses the polygon's edges.
std::vector<double> scanline_crossings(const Polygon& poly, double y) {
  std::vector<double> xs;
  auto scan = [&](const Ring& ring) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = ring[j];
      const Point& b = ring[i];
      if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
  };
  scan(poly.exterior);
  for (const Ring& h : poly.holes) scan(h);
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

void validate(const Polygon& poly) {
  validate_ring(poly.exterior, "exterior ring");
  for (const Ring& h : poly.holes) validate_ring(h, "hole ring");
  if (!(area(poly) > 0.0)) throw ValidationError("polygon has non-positive area");
}

RingSide classify(const Point& p, const Ring& ring) noexcept {
  const std::size_t n = ring.size();
  if (n < 3) return RingSide::outside;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[j];
    const Point& b = ring[i];
    if (on_segment(p, a, b)) return RingSide::boundary;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside ? RingSide::inside : RingSide::outside;
}

bool point_in_polygon(const Point& p, const Polygon& poly) noexcept {
  if (classify(p, poly.exterior) == RingSide::outside) return false;
  for (const Ring& h : poly.holes) {
    if (classify(p, h) == RingSide::inside) return false;
  }
  return true;
}

Point representative_point(const Polygon& poly) {
  if (poly.exterior.empty()) throw ValidationError("representative point of an empty polygon");
  const BBox box = bbox_of(poly.exterior);
  // Mid-height first, then a spread of other scanlines in case the first one
  // only grazes vertices.
  constexpr double fractions[] = {0.5, 0.25, 0.75, 0.375, 0.625, 0.125, 0.875, 0.3125, 0.6875};
  for (double f : fractions) {
    const double y = box.min_y + f * box.height();
    const std::vector<double> xs = scanline_crossings(poly, y);
    double best_width = -1.0;
    Point best;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
      const double w = xs[i + 1] - xs[i];
      if (w > best_width) {
        best_width = w;
        best = {xs[i] + 0.5 * w, y};
      }
    }
    if (best_width > 0.0 && point_in_polygon(best, poly)) return best;
  }
  return poly.exterior.front();
}

TileGrid::TileGrid(double origin_x, double origin_y, double tile_size, int n_cols, int n_rows)
    : origin_x_(origin_x),
      origin_y_(origin_y),
      tile_size_(tile_size),
      n_cols_(n_cols),
      n_rows_(n_rows) {
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y)) {
    throw ParameterError("tile grid origin must be finite");
  }
  if (!(tile_size > 0.0) || !std::isfinite(tile_size)) {
    throw ParameterError("tile size must be positive");
  }
  if (n_cols < 1 || n_rows < 1) throw ParameterError("tile grid needs at least one column and row");
}

TileGrid TileGrid::covering(const BBox& extent, double tile_size) {
  if (extent.is_empty()) throw ParameterError("cannot build a tile grid over an empty extent");
  if (!(tile_size > 0.0)) throw ParameterError("tile size must be positive");
  const double ox = std::floor(extent.min_x / tile_size) * tile_size;
  const double oy = std::floor(extent.min_y / tile_size) * tile_size;
  const double cols = std::ceil((extent.max_x - ox) / tile_size);
  const double rows = std::ceil((extent.max_y - oy) / tile_size);
  if (cols > std::numeric_limits<int>::max() || rows > std::numeric_limits<int>::max()) {
    throw ParameterError("tile grid would be too large");
  }
  return TileGrid(ox, oy, tile_size, std::max(1, static_cast<int>(cols)),
                  std::max(1, static_cast<int>(rows)));
}

std::optional<int> TileGrid::col_of(double x) const noexcept {
  const double c = std::floor((x - origin_x_) / tile_size_);
  if (!(c >= 0.0 && c < static_cast<double>(n_cols_))) return std::nullopt;
  return static_cast<int>(c);
}

std::optional<int> TileGrid::row_of(double y) const noexcept {
  const double r = std::floor((y - origin_y_) / tile_size_);
  if (!(r >= 0.0 && r < static_cast<double>(n_rows_))) return std::nullopt;
  return static_cast<int>(r);
}

std::optional<TileId> TileGrid::tile_index_of(const Point& p) const noexcept {
  const auto c = col_of(p.x);
  if (!c) return std::nullopt;
  const auto r = row_of(p.y);
  if (!r) return std::nullopt;
  return TileId{*c, *r};
}

Point TileGrid::tile_center(TileId t) const noexcept {
  return {origin_x_ + (t.col + 0.5) * tile_size_, origin_y_ + (t.row + 0.5) * tile_size_};
}

BBox TileGrid::tile_extent(TileId t) const noexcept {
  return {origin_x_ + t.col * tile_size_, origin_y_ + t.row * tile_size_,
          origin_x_ + (t.col + 1) * tile_size_, origin_y_ + (t.row + 1) * tile_size_};
}

BBox TileGrid::extent() const noexcept {
  return {origin_x_, origin_y_, origin_x_ + n_cols_ * tile_size_, origin_y_ + n_rows_ * tile_size_};
}

}  // namespace popgrid::geo
