#include "popgrid/poi_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "popgrid/error.hpp"
#include "popgrid/parallel.hpp"

namespace popgrid::poi {

namespace {

constexpr std::uint32_t kLeafSize = 16;

void check_params(double radius, std::size_t threshold) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ParameterError("buffer radius must be positive and finite");
  }
  if (threshold < 1) throw ParameterError("POI threshold must be at least 1");
}

}  // namespace

PoiSet::PoiSet(std::vector<io::PoiPoint> points) : points_(std::move(points)) {
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("too many POIs for the spatial index");
  }
  tree_points_.reserve(points_.size());
  for (const io::PoiPoint& p : points_) tree_points_.push_back(p.location);
  if (!tree_points_.empty()) {
    nodes_.reserve(2 * (tree_points_.size() / kLeafSize + 1));
    build(0, static_cast<std::uint32_t>(tree_points_.size()), 0);
  }
}

std::int32_t PoiSet::build(std::uint32_t begin, std::uint32_t end, int depth) {
  const auto self = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  geo::BBox box = geo::BBox::empty();
  for (std::uint32_t i = begin; i < end; ++i) box.expand(tree_points_[i]);
  nodes_[static_cast<std::size_t>(self)].box = box;
  nodes_[static_cast<std::size_t>(self)].begin = begin;
  nodes_[static_cast<std::size_t>(self)].end = end;
  if (end - begin <= kLeafSize) return self;

  const bool split_x = box.width() >= box.height();
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(tree_points_.begin() + begin, tree_points_.begin() + mid,
                   tree_points_.begin() + end, [split_x](const geo::Point& a, const geo::Point& b) {
                     return split_x ? a.x < b.x : a.y < b.y;
                   });
  const std::int32_t left = build(begin, mid, depth + 1);
  const std::int32_t right = build(mid, end, depth + 1);
  nodes_[static_cast<std::size_t>(self)].left = left;
  nodes_[static_cast<std::size_t>(self)].right = right;
  return self;
}

std::size_t PoiSet::count_within(const geo::Point& center, double radius) const noexcept {
  if (nodes_.empty()) return 0;
  std::size_t count = 0;
  std::vector<std::int32_t> stack;
  stack.reserve(64);
  stack.push_back(0);
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    const geo::BBox& b = node.box;

    const geo::Point nearest{std::clamp(center.x, b.min_x, b.max_x),
                             std::clamp(center.y, b.min_y, b.max_y)};
    if (geo::distance(center, nearest) > radius) continue;

    const geo::Point farthest{
        std::abs(center.x - b.min_x) >= std::abs(center.x - b.max_x) ? b.min_x : b.max_x,
        std::abs(center.y - b.min_y) >= std::abs(center.y - b.max_y) ? b.min_y : b.max_y};
    if (geo::distance(center, farthest) <= radius) {
      count += node.end - node.begin;
      continue;
    }

    if (node.left < 0) {
      for (std::uint32_t i = node.begin; i < node.end; ++i) {
        if (geo::distance(center, tree_points_[i]) <= radius) ++count;
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return count;
}

TileMask TileMask::all_retained(const geo::TileGrid& grid) {
  return TileMask{grid, std::vector<std::uint8_t>(grid.tile_count(), 1)};
}

std::size_t TileMask::excluded_count() const noexcept {
  return static_cast<std::size_t>(std::count(retained.begin(), retained.end(), std::uint8_t{0}));
}

std::size_t buffer_count(const PoiSet& pois, const geo::Point& center, double radius) {
  check_params(radius, 1);
  return pois.count_within(center, radius);
}

std::vector<std::size_t> dense_poi_indices(const PoiSet& pois, double radius,
                                           std::size_t threshold, int workers) {
  check_params(radius, threshold);
  const auto points = pois.points();
  std::vector<std::uint8_t> dense(points.size(), 0);
  parallel_chunks(points.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      dense[i] = pois.count_within(points[i].location, radius) >= threshold ? 1 : 0;
    }
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i]) out.push_back(i);
  }
  return out;
}

std::vector<io::PoiPoint> dense_pois(const PoiSet& pois, double radius, std::size_t threshold,
                                     int workers) {
  std::vector<io::PoiPoint> out;
  for (std::size_t i : dense_poi_indices(pois, radius, threshold, workers)) {
    out.push_back(pois.points()[i]);
  }
  return out;
}

TileMask compute_tile_mask(const geo::TileGrid& grid, const PoiSet& pois, double radius,
                           std::size_t threshold, int workers) {
  TileMask mask = TileMask::all_retained(grid);
  for (std::size_t i : dense_poi_indices(pois, radius, threshold, workers)) {
    if (const auto tile = grid.tile_index_of(pois.points()[i].location)) {
      mask.retained[grid.linear(*tile)] = 0;
    }
  }
  return mask;
}

io::BinaryRaster to_raster(const TileMask& mask) {
  const geo::TileGrid& g = mask.grid;
  io::BinaryRaster r =
      io::BinaryRaster::filled(g.origin_x(), g.origin_y(), g.tile_size(), g.n_cols(), g.n_rows(), 1);
  r.values = mask.retained;
  return r;
}

}  // namespace popgrid::poi
