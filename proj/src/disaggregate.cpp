#include "popgrid/disaggregate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "popgrid/error.hpp"
#include "popgrid/parallel.hpp"

namespace popgrid::disagg {

namespace {

// Unit geometry with per-part boxes for cheap rejection.
struct PreparedUnit {
  const io::AdminUnit* unit;
  std::vector<geo::BBox> part_boxes;
  geo::BBox box;

  explicit PreparedUnit(const io::AdminUnit& u) : unit(&u), box(geo::BBox::empty()) {
    for (const geo::Polygon& p : u.parts) {
      part_boxes.push_back(geo::bbox_of(p));
      box.expand(part_boxes.back());
    }
  }

  bool contains(const geo::Point& p) const noexcept {
    if (!box.contains(p)) return false;
    for (std::size_t i = 0; i < part_boxes.size(); ++i) {
      if (part_boxes[i].contains(p) && geo::point_in_polygon(p, unit->parts[i])) return true;
    }
    return false;
  }
};

struct IndexRange {
  int lo = 0;
  int hi = -1;  // inclusive; empty when hi < lo
};

// Cells of a regular lattice (origin, step, n) whose centers may fall in [lo, hi].
IndexRange center_range(double lo, double hi, double origin, double step, int n) {
  const double a = std::floor((lo - origin) / step - 0.5) - 1.0;
  const double b = std::ceil((hi - origin) / step - 0.5) + 1.0;
  IndexRange r;
  r.lo = static_cast<int>(std::clamp(a, 0.0, static_cast<double>(n)));
  r.hi = static_cast<int>(std::clamp(b, -1.0, static_cast<double>(n - 1)));
  return r;
}

std::vector<std::uint32_t> center_tiles_of(const geo::TileGrid& grid, const PreparedUnit& pu) {
  std::vector<std::uint32_t> out;
  if (pu.box.is_empty()) return out;
  const IndexRange cols =
      center_range(pu.box.min_x, pu.box.max_x, grid.origin_x(), grid.tile_size(), grid.n_cols());
  const IndexRange rows =
      center_range(pu.box.min_y, pu.box.max_y, grid.origin_y(), grid.tile_size(), grid.n_rows());
  for (int r = rows.lo; r <= rows.hi; ++r) {
    for (int c = cols.lo; c <= cols.hi; ++c) {
      if (pu.contains(grid.tile_center({c, r}))) {
        out.push_back(static_cast<std::uint32_t>(grid.linear({c, r})));
      }
    }
  }
  return out;
}

std::optional<std::uint32_t> representative_tile_of(const geo::TileGrid& grid,
                                                    const io::AdminUnit& unit) {
  if (const auto t = grid.tile_index_of(unit.representative_point())) {
    return static_cast<std::uint32_t>(grid.linear(*t));
  }
  return std::nullopt;
}

}  // namespace

PixelAssignment assign_pixels(const io::BinaryRaster& raster, const geo::TileGrid& grid,
                              std::span<const io::AdminUnit> units, const poi::TileMask& tile_mask,
                              int workers) {
  if (!(tile_mask.grid == grid) || tile_mask.retained.size() != grid.tile_count()) {
    throw ConfigurationError("tile mask was computed for a different grid");
  }
  if (raster.pixel_size > grid.tile_size()) {
    throw ConfigurationError("mask pixel size exceeds the tile size");
  }
  if (raster.values.size() !=
      static_cast<std::size_t>(raster.n_cols) * static_cast<std::size_t>(raster.n_rows)) {
    throw ConfigurationError("mask raster storage does not match its dimensions");
  }
  if (!raster.extent().overlaps(grid.extent())) {
    throw ConfigurationError("mask raster and tile grid do not overlap");
  }
  if (!units.empty() && !io::extent_of(units).overlaps(raster.extent())) {
    throw ConfigurationError("admin units and mask raster do not overlap");
  }

  std::vector<PreparedUnit> prepared;
  prepared.reserve(units.size());
  for (const io::AdminUnit& u : units) prepared.emplace_back(u);

  std::vector<IndexRange> col_ranges(units.size());
  std::vector<IndexRange> row_ranges(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const geo::BBox& b = prepared[u].box;
    if (b.is_empty()) continue;
    col_ranges[u] = center_range(b.min_x, b.max_x, raster.origin_x, raster.pixel_size, raster.n_cols);
    row_ranges[u] = center_range(b.min_y, b.max_y, raster.origin_y, raster.pixel_size, raster.n_rows);
  }

  // Pass 1: owner of each built pixel, split by raster row.
  const auto n_rows = static_cast<std::size_t>(raster.n_rows);
  std::vector<std::int32_t> owner(raster.values.size(), -1);
  std::atomic<std::uint64_t> overlap_total{0};
  parallel_chunks(n_rows, workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t overlaps = 0;
    for (std::size_t u = 0; u < prepared.size(); ++u) {
      const IndexRange rows = row_ranges[u];
      const IndexRange cols = col_ranges[u];
      const int r0 = std::max(rows.lo, static_cast<int>(begin));
      const int r1 = std::min(rows.hi, static_cast<int>(end) - 1);
      for (int r = r0; r <= r1; ++r) {
        const double y = raster.pixel_center_y(r);
        for (int c = cols.lo; c <= cols.hi; ++c) {
          const std::size_t i = raster.index(c, r);
          if (raster.values[i] != 1) continue;
          if (!prepared[u].contains({raster.pixel_center_x(c), y})) continue;
          if (owner[i] < 0) {
            owner[i] = static_cast<std::int32_t>(u);
          } else {
            ++overlaps;
          }
        }
      }
    }
    overlap_total += overlaps;
  });

  PixelAssignment out{grid, tile_mask.retained, std::vector<UnitAssignment>(units.size()), 0, 0, {}};
  out.overlap_pixels = overlap_total.load();

  // Pass 2: tally owned pixels by tile.
  std::vector<int> tile_col(static_cast<std::size_t>(raster.n_cols), -1);
  for (int c = 0; c < raster.n_cols; ++c) {
    if (const auto tc = grid.col_of(raster.pixel_center_x(c))) tile_col[static_cast<std::size_t>(c)] = *tc;
  }
  std::vector<std::vector<std::uint32_t>> pixel_tiles(units.size());
  for (int r = 0; r < raster.n_rows; ++r) {
    const auto tr = grid.row_of(raster.pixel_center_y(r));
    if (!tr) continue;
    for (int c = 0; c < raster.n_cols; ++c) {
      const int tc = tile_col[static_cast<std::size_t>(c)];
      if (tc < 0) continue;
      const std::size_t i = raster.index(c, r);
      if (raster.values[i] != 1) continue;
      const auto tile = static_cast<std::uint32_t>(grid.linear({tc, *tr}));
      if (owner[i] < 0) {
        ++out.unassigned_built;
      } else {
        pixel_tiles[static_cast<std::size_t>(owner[i])].push_back(tile);
      }
    }
  }

  parallel_chunks(units.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      UnitAssignment& ua = out.units[u];
      std::vector<std::uint32_t>& tiles = pixel_tiles[u];
      std::sort(tiles.begin(), tiles.end());
      for (std::size_t k = 0; k < tiles.size();) {
        std::size_t j = k;
        while (j < tiles.size() && tiles[j] == tiles[k]) ++j;
        const TileCount tcount{tiles[k], static_cast<std::uint32_t>(j - k)};
        ua.tiles.push_back(tcount);
        ua.total_built += tcount.built;
        if (out.retained[tcount.tile]) ua.total_retained_built += tcount.built;
        k = j;
      }
      std::vector<std::uint32_t>().swap(tiles);
      ua.center_tiles = center_tiles_of(grid, prepared[u]);
      if (ua.center_tiles.empty()) ua.representative_tile = representative_tile_of(grid, units[u]);
    }
  });

  if (out.overlap_pixels > 0) {
    out.warnings.push_back(std::to_string(out.overlap_pixels) +
                           " built pixels fall in more than one admin unit; each was assigned to "
                           "the first unit in input order");
  }
  return out;
}

std::string_view to_string(Fallback f) noexcept {
  switch (f) {
    case Fallback::none: return "none";
    case Fallback::uniform: return "uniform";
    case Fallback::representative_point: return "representative_point";
  }
  return "unknown";
}

double AllocationReport::relative_error() const noexcept {
  return std::abs(total_out - total_in) / std::max(total_in, 1.0);
}

Allocation allocate(const PixelAssignment& assignment, std::span<const io::AdminUnit> units,
                    int workers) {
  if (assignment.units.size() != units.size()) {
    throw ParameterError("pixel assignment was built from a different unit list");
  }
  for (const io::AdminUnit& u : units) {
    if (!std::isfinite(u.population) || u.population < 0.0) {
      throw ValidationError("admin unit '" + u.id + "' has a negative or non-finite population");
    }
  }

  const geo::TileGrid& grid = assignment.grid;
  struct Contribution {
    std::uint32_t tile;
    double value;
  };
  std::vector<std::vector<Contribution>> contributions(units.size());
  std::vector<UnitReport> reports(units.size());

  parallel_chunks(units.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const UnitAssignment& ua = assignment.units[u];
      const double pop = units[u].population;
      UnitReport& rep = reports[u];
      rep.id = units[u].id;
      rep.population_in = pop;
      rep.built_pixels = ua.total_built;
      rep.retained_built_pixels = ua.total_retained_built;
      for (std::uint32_t t : ua.center_tiles) {
        if (assignment.retained[t]) {
          ++rep.retained_tiles;
        } else {
          ++rep.excluded_tiles;
        }
      }

      std::vector<Contribution>& out = contributions[u];
      if (ua.total_retained_built > 0) {
        const auto denom = static_cast<double>(ua.total_retained_built);
        for (const TileCount& tc : ua.tiles) {
          if (!assignment.retained[tc.tile]) continue;
          out.push_back({tc.tile, pop * static_cast<double>(tc.built) / denom});
        }
      } else if (!ua.center_tiles.empty()) {
        rep.fallback = Fallback::uniform;
        const double share = pop / static_cast<double>(ua.center_tiles.size());
        for (std::uint32_t t : ua.center_tiles) out.push_back({t, share});
      } else if (ua.representative_tile) {
        rep.fallback = Fallback::representative_point;
        out.push_back({*ua.representative_tile, pop});
      } else {
        throw ConfigurationError("admin unit '" + units[u].id +
                                 "' has no built pixels and lies entirely off the tile grid");
      }
      for (const Contribution& c : out) rep.population_out += c.value;
    }
  });

  Allocation result{io::PopulationGrid(grid), {}};
  AllocationReport& report = result.report;
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const Contribution& c : contributions[u]) result.population.values[c.tile] += c.value;
    report.total_in += units[u].population;
    if (reports[u].fallback_used()) {
      ++report.fallback_units;
      report.warnings.push_back("admin unit '" + reports[u].id +
                                "' has no retained built pixels; used " +
                                std::string(to_string(reports[u].fallback)) + " fallback");
    }
  }
  report.units = std::move(reports);
  report.total_out = result.population.total();
  report.excluded_tiles = static_cast<std::size_t>(
      std::count(assignment.retained.begin(), assignment.retained.end(), std::uint8_t{0}));
  report.overlap_pixels = assignment.overlap_pixels;
  report.warnings.insert(report.warnings.begin(), assignment.warnings.begin(),
                         assignment.warnings.end());
  return result;
}

io::PopulationGrid uniform_allocate(const geo::TileGrid& grid, std::span<const io::AdminUnit> units) {
  io::PopulationGrid out(grid);
  for (const io::AdminUnit& u : units) {
    const PreparedUnit pu(u);
    const std::vector<std::uint32_t> tiles = center_tiles_of(grid, pu);
    if (!tiles.empty()) {
      const double share = u.population / static_cast<double>(tiles.size());
      for (std::uint32_t t : tiles) out.values[t] += share;
    } else if (const auto t = representative_tile_of(grid, u)) {
      out.values[*t] += u.population;
    } else {
      throw ConfigurationError("admin unit '" + u.id + "' lies entirely off the tile grid");
    }
  }
  return out;
}

nlohmann::json to_json(const AllocationReport& report) {
  nlohmann::json units = nlohmann::json::array();
  for (const UnitReport& u : report.units) {
    units.push_back({{"id", u.id},
                     {"population_in", u.population_in},
                     {"population_out", u.population_out},
                     {"fallback_used", u.fallback_used()},
                     {"fallback", std::string(to_string(u.fallback))},
                     {"retained_tiles", u.retained_tiles},
                     {"excluded_tiles", u.excluded_tiles},
                     {"built_pixels", u.built_pixels},
                     {"retained_built_pixels", u.retained_built_pixels}});
  }
  return {{"totals",
           {{"population_in", report.total_in},
            {"population_out", report.total_out},
            {"relative_error", report.relative_error()},
            {"units", report.units.size()},
            {"fallback_units", report.fallback_units},
            {"excluded_tiles", report.excluded_tiles},
            {"overlap_pixels", report.overlap_pixels}}},
          {"units", units},
          {"warnings", report.warnings}};
}

}  // namespace popgrid::disagg
