#include "popgrid/evaluate.hpp"

#include <cmath>

#include "popgrid/error.hpp"

namespace popgrid::eval {

ConfusionCounts confusion(const io::BinaryRaster& predicted, const io::BinaryRaster& reference) {
  if (!predicted.same_geometry(reference)) {
    throw AlignmentError("predicted and reference rasters differ in origin, pixel size or "
                         "dimensions; downsample explicitly before comparing");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.values.size(); ++i) {
    const std::uint8_t p = predicted.values[i];
    const std::uint8_t r = reference.values[i];
    if (p == io::kNoData || r == io::kNoData) continue;
    if (p && r) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (r) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

Metrics metrics(const ConfusionCounts& c) {
  const std::uint64_t total = c.total();
  if (total == 0) throw ParameterError("no valid cells to score");
  const auto tp = static_cast<double>(c.tp);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const auto tn = static_cast<double>(c.tn);

  auto ratio_or_perfect = [&](double num, double den) {
    if (den > 0.0) return num / den;
    return (c.fp == 0 && c.fn == 0) ? 1.0 : 0.0;
  };

  Metrics m;
  m.accuracy = (tp + tn) / static_cast<double>(total);
  m.f1 = ratio_or_perfect(2.0 * tp, 2.0 * tp + fp + fn);
  m.precision = ratio_or_perfect(tp, tp + fp);
  m.recall = ratio_or_perfect(tp, tp + fn);
  m.iou = ratio_or_perfect(tp, tp + fp + fn);
  return m;
}

nlohmann::json to_json(const ConfusionCounts& c, const Metrics& m) {
  return {{"accuracy", m.accuracy}, {"f1", m.f1},         {"tp", c.tp},
          {"fp", c.fp},             {"fn", c.fn},         {"tn", c.tn},
          {"precision", m.precision}, {"recall", m.recall}, {"iou", m.iou}};
}

io::BinaryRaster downsample_to_tiles(const io::BinaryRaster& raster, const geo::TileGrid& grid,
                                     double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in (0, 1]");

  std::vector<std::uint64_t> built(grid.tile_count(), 0);
  std::vector<std::uint64_t> valid(grid.tile_count(), 0);
  std::vector<int> tile_col(static_cast<std::size_t>(raster.n_cols), -1);
  for (int c = 0; c < raster.n_cols; ++c) {
    if (const auto tc = grid.col_of(raster.pixel_center_x(c))) tile_col[static_cast<std::size_t>(c)] = *tc;
  }
  for (int r = 0; r < raster.n_rows; ++r) {
    const auto tr = grid.row_of(raster.pixel_center_y(r));
    if (!tr) continue;
    for (int c = 0; c < raster.n_cols; ++c) {
      const int tc = tile_col[static_cast<std::size_t>(c)];
      if (tc < 0) continue;
      const std::uint8_t v = raster.at(c, r);
      if (v == io::kNoData) continue;
      const std::size_t t = grid.linear({tc, *tr});
      ++valid[t];
      if (v) ++built[t];
    }
  }

  io::BinaryRaster out = io::BinaryRaster::filled(grid.origin_x(), grid.origin_y(), grid.tile_size(),
                                                  grid.n_cols(), grid.n_rows(), io::kNoData);
  for (std::size_t t = 0; t < out.values.size(); ++t) {
    if (valid[t] == 0) continue;
    const double fraction = static_cast<double>(built[t]) / static_cast<double>(valid[t]);
    out.values[t] = fraction >= theta ? 1 : 0;
  }
  return out;
}

std::vector<ZonalRow> zonal_stats(const io::PopulationGrid& population,
                                  std::span<const io::AdminUnit> units,
                                  const io::BinaryRaster* built_tiles) {
  const geo::TileGrid& grid = population.grid;
  if (built_tiles && (built_tiles->n_cols != grid.n_cols() || built_tiles->n_rows != grid.n_rows() ||
                      built_tiles->origin_x != grid.origin_x() ||
                      built_tiles->origin_y != grid.origin_y() ||
                      built_tiles->pixel_size != grid.tile_size())) {
    throw AlignmentError("built-tile raster does not match the population grid");
  }

  std::vector<geo::BBox> boxes;
  boxes.reserve(units.size());
  for (const io::AdminUnit& u : units) boxes.push_back(u.bbox());

  std::vector<ZonalRow> rows(units.size() + 1);
  for (std::size_t u = 0; u < units.size(); ++u) rows[u].unit_id = units[u].id;
  rows.back().unit_id = std::string(kUnassignedId);

  for (std::size_t t = 0; t < grid.tile_count(); ++t) {
    const geo::Point center = grid.tile_center(grid.tile_at(t));
    std::size_t owner = units.size();
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (boxes[u].contains(center) && units[u].contains(center)) {
        owner = u;
        break;
      }
    }
    ZonalRow& row = rows[owner];
    const double v = population.values[t];
    row.population_sum += v;
    ++row.tile_count;
    const bool built = built_tiles ? built_tiles->values[t] == 1 : v > 0.0;
    if (built) ++row.built_tile_count;
  }

  const double tile_km2 = grid.tile_area() / 1.0e6;
  for (ZonalRow& row : rows) {
    row.mean_density =
        row.tile_count ? row.population_sum / (static_cast<double>(row.tile_count) * tile_km2) : 0.0;
  }
  return rows;
}

std::string format_zonal_csv(std::span<const ZonalRow> rows) {
  std::string out = "unit_id,population_sum,tile_count,built_tile_count,mean_density\n";
  for (const ZonalRow& r : rows) {
    out += r.unit_id;
    out += ',' + io::format_real(r.population_sum);
    out += ',' + std::to_string(r.tile_count);
    out += ',' + std::to_string(r.built_tile_count);
    out += ',' + io::format_real(r.mean_density);
    out += '\n';
  }
  return out;
}

}  // namespace popgrid::eval
