#include "popgrid/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "popgrid/error.hpp"

namespace popgrid::synth {

__extension__ using Wide = __int128;

namespace {

constexpr std::array<const char*, 6> kClusterCategories = {"market", "office", "school",
                                                           "bank",   "hospital", "mall"};
constexpr std::array<const char*, 4> kIsolatedCategories = {"shop", "mosque", "clinic", "school"};

bool on_lattice(double v, double step) {
  const double q = v / step;
  return std::isfinite(q) && q == std::floor(q);
}

// Half-open tile rectangle [c0, c1) x [r0, r1).
struct TileRect {
  int c0, r0, c1, r1;
  int width() const { return c1 - c0; }
  int height() const { return r1 - r0; }
  long long area() const { return static_cast<long long>(width()) * height(); }
};

std::vector<TileRect> partition(int cols, int rows, int n_units, SplitMix64& rng) {
  std::vector<TileRect> rects{{0, 0, cols, rows}};
  while (static_cast<int>(rects.size()) < n_units) {
    std::size_t pick = rects.size();
    for (std::size_t i = 0; i < rects.size(); ++i) {
      if (rects[i].area() < 2) continue;
      if (pick == rects.size() || rects[i].area() > rects[pick].area()) pick = i;
    }
    if (pick == rects.size()) throw GenerationError("cannot partition the extent into enough units");
    const TileRect r = rects[pick];
    const bool vertical = r.width() >= r.height();
    const int len = vertical ? r.width() : r.height();
    const int lo = std::max(1, len / 4);
    const int hi = std::max(lo, std::min(len - 1, len - len / 4));
    const int cut = static_cast<int>(rng.uniform_int(lo, hi));
    TileRect a = r;
    TileRect b = r;
    if (vertical) {
      a.c1 = r.c0 + cut;
      b.c0 = r.c0 + cut;
    } else {
      a.r1 = r.r0 + cut;
      b.r0 = r.r0 + cut;
    }
    rects[pick] = a;
    rects.push_back(b);
  }
  return rects;
}

std::string unit_id(std::size_t i) {
  std::string digits = std::to_string(i + 1);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return "C" + digits;
}

}  // namespace

void validate(const ScenarioSpec& s) {
  if (!(s.tile_size > 0.0) || !(s.pixel_size > 0.0)) {
    throw GenerationError("tile and pixel sizes must be positive");
  }
  const double per_tile = std::round(s.tile_size / s.pixel_size);
  if (per_tile < 1.0 || per_tile * s.pixel_size != s.tile_size) {
    throw GenerationError("pixel size must divide the tile size");
  }
  if (s.extent.is_empty() || !(s.extent.width() > 0.0) || !(s.extent.height() > 0.0)) {
    throw GenerationError("extent must have positive area");
  }
  for (double v : {s.extent.min_x, s.extent.min_y, s.extent.max_x, s.extent.max_y}) {
    if (!on_lattice(v, s.tile_size)) throw GenerationError("extent corners must lie on the tile lattice");
  }
  const double tiles = (s.extent.width() / s.tile_size) * (s.extent.height() / s.tile_size);
  if (s.n_units < 1 || static_cast<double>(s.n_units) > tiles) {
    throw GenerationError("n_units must be between 1 and the number of tiles");
  }
  if (!(s.built_fraction.lo >= 0.0 && s.built_fraction.lo <= s.built_fraction.hi &&
        s.built_fraction.hi <= 1.0)) {
    throw GenerationError("built_fraction must satisfy 0 <= lo <= hi <= 1");
  }
  if (!(s.population.lo >= 0.0 && s.population.lo <= s.population.hi) ||
      s.population.hi > 1e12) {
    throw GenerationError("population range must satisfy 0 <= lo <= hi");
  }
  if (s.n_poi_clusters < 0 || s.n_isolated_pois < 0) {
    throw GenerationError("POI counts must be non-negative");
  }
  if (s.poi_cluster_size.lo < 1 || s.poi_cluster_size.lo > s.poi_cluster_size.hi) {
    throw GenerationError("poi_cluster_size must satisfy 1 <= lo <= hi");
  }
  if (!(s.poi_cluster_radius > 0.0)) throw GenerationError("poi_cluster_radius must be positive");
  if (s.built_fraction.hi == 0.0 && s.population.hi > 0.0) {
    throw GenerationError("population cannot be placed when no pixel may be built");
  }
}

nlohmann::json to_json(const ScenarioSpec& s) {
  return {{"seed", s.seed},
          {"extent", {s.extent.min_x, s.extent.min_y, s.extent.max_x, s.extent.max_y}},
          {"tile_size", s.tile_size},
          {"pixel_size", s.pixel_size},
          {"n_units", s.n_units},
          {"built_fraction", {s.built_fraction.lo, s.built_fraction.hi}},
          {"n_poi_clusters", s.n_poi_clusters},
          {"poi_cluster_size", {s.poi_cluster_size.lo, s.poi_cluster_size.hi}},
          {"poi_cluster_radius", s.poi_cluster_radius},
          {"n_isolated_pois", s.n_isolated_pois},
          {"population", {s.population.lo, s.population.hi}}};
}

ScenarioSpec spec_from_json(const nlohmann::json& j) {
  ScenarioSpec s;
  try {
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("extent")) {
      const auto& e = j.at("extent");
      s.extent = {e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>(),
                  e.at(3).get<double>()};
    }
    if (j.contains("tile_size")) s.tile_size = j.at("tile_size").get<double>();
    if (j.contains("pixel_size")) s.pixel_size = j.at("pixel_size").get<double>();
    if (j.contains("n_units")) s.n_units = j.at("n_units").get<int>();
    if (j.contains("built_fraction")) {
      s.built_fraction = {j.at("built_fraction").at(0).get<double>(),
                          j.at("built_fraction").at(1).get<double>()};
    }
    if (j.contains("n_poi_clusters")) s.n_poi_clusters = j.at("n_poi_clusters").get<int>();
    if (j.contains("poi_cluster_size")) {
      s.poi_cluster_size = {j.at("poi_cluster_size").at(0).get<int>(),
                            j.at("poi_cluster_size").at(1).get<int>()};
    }
    if (j.contains("poi_cluster_radius")) s.poi_cluster_radius = j.at("poi_cluster_radius").get<double>();
    if (j.contains("n_isolated_pois")) s.n_isolated_pois = j.at("n_isolated_pois").get<int>();
    if (j.contains("population")) {
      s.population = {j.at("population").at(0).get<double>(), j.at("population").at(1).get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    throw GenerationError(std::string("bad scenario spec: ") + e.what());
  }
  return s;
}

GroundTruth generate(const ScenarioSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);

  const int cols = static_cast<int>(std::llround(spec.extent.width() / spec.tile_size));
  const int rows = static_cast<int>(std::llround(spec.extent.height() / spec.tile_size));
  const int per_tile = static_cast<int>(std::llround(spec.tile_size / spec.pixel_size));
  const geo::TileGrid grid(spec.extent.min_x, spec.extent.min_y, spec.tile_size, cols, rows);

  GroundTruth truth{grid,
                    io::BinaryRaster::filled(spec.extent.min_x, spec.extent.min_y, spec.pixel_size,
                                             cols * per_tile, rows * per_tile, 0),
                    {},
                    {},
                    {},
                    std::vector<std::uint8_t>(grid.tile_count(), 0),
                    io::PopulationGrid(grid)};
  io::BinaryRaster& mask = truth.mask;

  // Admin units: rectangular partition on tile boundaries.
  const std::vector<TileRect> rects = partition(cols, rows, spec.n_units, rng);
  std::vector<std::size_t> unit_of_tile(grid.tile_count());
  std::vector<std::int64_t> unit_population(rects.size());
  std::vector<double> unit_fraction(rects.size());
  for (std::size_t u = 0; u < rects.size(); ++u) {
    const TileRect& r = rects[u];
    for (int tr = r.r0; tr < r.r1; ++tr) {
      for (int tc = r.c0; tc < r.c1; ++tc) unit_of_tile[grid.linear({tc, tr})] = u;
    }
    const double x0 = grid.origin_x() + r.c0 * spec.tile_size;
    const double y0 = grid.origin_y() + r.r0 * spec.tile_size;
    const double x1 = grid.origin_x() + r.c1 * spec.tile_size;
    const double y1 = grid.origin_y() + r.r1 * spec.tile_size;
    unit_fraction[u] = rng.uniform(spec.built_fraction.lo, spec.built_fraction.hi);
    unit_population[u] = std::llround(rng.uniform(spec.population.lo, spec.population.hi));
    io::AdminUnit unit;
    unit.id = unit_id(u);
    unit.level = io::AdminLevel::circle;
    unit.parts.push_back({{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}, {}});
    unit.population = static_cast<double>(unit_population[u]);
    truth.units.push_back(std::move(unit));
  }

  // Built probability per tile: frac^g keeps 0 and 1 fixed and varies the rest.
  std::vector<double> tile_prob(grid.tile_count());
  std::vector<std::int64_t> tile_occupancy(grid.tile_count());
  for (std::size_t t = 0; t < grid.tile_count(); ++t) {
    const double frac = unit_fraction[unit_of_tile[t]];
    const double g = std::exp(rng.uniform(-1.2, 1.2));
    tile_prob[t] = frac <= 0.0 ? 0.0 : std::pow(frac, g);
    tile_occupancy[t] = static_cast<std::int64_t>(100.0 * std::exp(rng.uniform(-0.7, 0.7)));
  }

  // POI clusters on commercial patches.
  const geo::BBox& ext = spec.extent;
  const double rc = spec.poi_cluster_radius;
  for (int k = 0; k < spec.n_poi_clusters; ++k) {
    const int size = static_cast<int>(rng.uniform_int(spec.poi_cluster_size.lo, spec.poi_cluster_size.hi));
    const double cx = ext.width() > 2 * rc ? rng.uniform(ext.min_x + rc, ext.max_x - rc)
                                           : 0.5 * (ext.min_x + ext.max_x);
    const double cy = ext.height() > 2 * rc ? rng.uniform(ext.min_y + rc, ext.max_y - rc)
                                            : 0.5 * (ext.min_y + ext.max_y);
    for (int i = 0; i < size; ++i) {
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      const double dist = rc * std::sqrt(rng.uniform());
      const geo::Point p{cx + dist * std::cos(angle), cy + dist * std::sin(angle)};
      const char* category =
          kClusterCategories[static_cast<std::size_t>(rng.uniform_int(0, kClusterCategories.size() - 1))];
      truth.pois.push_back({p, category});
      if (const auto t = grid.tile_index_of(p)) truth.non_residential[grid.linear(*t)] = 1;
    }
  }
  for (int i = 0; i < spec.n_isolated_pois; ++i) {
    const geo::Point p{rng.uniform(ext.min_x, ext.max_x), rng.uniform(ext.min_y, ext.max_y)};
    const char* category =
        kIsolatedCategories[static_cast<std::size_t>(rng.uniform_int(0, kIsolatedCategories.size() - 1))];
    truth.pois.push_back({p, category});
  }

  // Built mask. Pixels align with tiles, so pixel (c, r) lies in tile (c / k, r / k).
  auto tile_of_pixel = [&](int c, int r) {
    return grid.linear({c / per_tile, r / per_tile});
  };
  for (int r = 0; r < mask.n_rows; ++r) {
    for (int c = 0; c < mask.n_cols; ++c) {
      const std::size_t t = tile_of_pixel(c, r);
      const bool built = truth.non_residential[t] || rng.uniform() < tile_prob[t];
      mask.at(c, r) = built ? 1 : 0;
    }
  }

  // Residential pixels per unit, in storage order.
  std::vector<std::vector<std::size_t>> residential(rects.size());
  for (int r = 0; r < mask.n_rows; ++r) {
    for (int c = 0; c < mask.n_cols; ++c) {
      const std::size_t t = tile_of_pixel(c, r);
      if (mask.at(c, r) == 1 && !truth.non_residential[t]) {
        residential[unit_of_tile[t]].push_back(mask.index(c, r));
      }
    }
  }
  for (std::size_t u = 0; u < rects.size(); ++u) {
    if (!residential[u].empty() || unit_population[u] == 0) continue;
    std::vector<std::size_t> candidates;
    const TileRect& rect = rects[u];
    for (int r = rect.r0 * per_tile; r < rect.r1 * per_tile; ++r) {
      for (int c = rect.c0 * per_tile; c < rect.c1 * per_tile; ++c) {
        if (!truth.non_residential[tile_of_pixel(c, r)]) candidates.push_back(mask.index(c, r));
      }
    }
    if (candidates.empty()) {
      // Wholly commercial unit.
      unit_population[u] = 0;
      truth.units[u].population = 0.0;
      continue;
    }
    const std::size_t i =
        candidates[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(candidates.size()) - 1))];
    mask.values[i] = 1;
    residential[u].push_back(i);
  }

  // Integer largest-remainder apportionment of each unit's population.
  truth.pixel_population.assign(mask.values.size(), 0.0);
  for (std::size_t u = 0; u < rects.size(); ++u) {
    const std::vector<std::size_t>& pixels = residential[u];
    if (pixels.empty()) continue;
    std::vector<std::int64_t> weight(pixels.size());
    std::int64_t weight_sum = 0;
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      const int c = static_cast<int>(pixels[k] % static_cast<std::size_t>(mask.n_cols));
      const int r = static_cast<int>(pixels[k] / static_cast<std::size_t>(mask.n_cols));
      weight[k] = tile_occupancy[tile_of_pixel(c, r)] * (5 + rng.uniform_int(0, 10));
      weight_sum += weight[k];
    }
    const std::int64_t pop = unit_population[u];
    std::vector<std::int64_t> share(pixels.size());
    std::vector<std::int64_t> remainder(pixels.size());
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      const Wide num = static_cast<Wide>(pop) * weight[k];
      share[k] = static_cast<std::int64_t>(num / weight_sum);
      remainder[k] = static_cast<std::int64_t>(num % weight_sum);
      assigned += share[k];
    }
    std::vector<std::size_t> order(pixels.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::int64_t k = 0; k < pop - assigned; ++k) ++share[order[static_cast<std::size_t>(k)]];
    for (std::size_t k = 0; k < pixels.size(); ++k) {
      truth.pixel_population[pixels[k]] = static_cast<double>(share[k]);
    }
  }

  for (int r = 0; r < mask.n_rows; ++r) {
    for (int c = 0; c < mask.n_cols; ++c) {
      truth.tile_population.values[tile_of_pixel(c, r)] += truth.pixel_population[mask.index(c, r)];
    }
  }
  return truth;
}

Score score(const io::PopulationGrid& estimate, const io::PopulationGrid& truth_tiles) {
  if (!(estimate.grid == truth_tiles.grid)) {
    throw AlignmentError("estimate and truth grids differ");
  }
  Score s;
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double est_total = 0.0;
  double truth_total = 0.0;
  for (std::size_t t = 0; t < estimate.values.size(); ++t) {
    const double d = estimate.values[t] - truth_tiles.values[t];
    abs_sum += std::abs(d);
    sq_sum += d * d;
    est_total += estimate.values[t];
    truth_total += truth_tiles.values[t];
  }
  const auto n = static_cast<double>(estimate.values.size());
  s.mae = abs_sum / n;
  s.rmse = std::sqrt(sq_sum / n);
  s.total_error = std::abs(est_total - truth_total);
  return s;
}

Score score(const io::PopulationGrid& estimate, const GroundTruth& truth) {
  return score(estimate, truth.tile_population);
}

void write_scenario(const GroundTruth& truth, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_admin_units(dir / "admin.geojson", truth.units, std::string(kSyntheticCrs));
  io::write_poi_csv(dir / "poi.csv", truth.pois);
  io::write_ascii_grid(truth.mask, dir / "mask.asc");
  io::write_ascii_grid(truth.tile_population, dir / "truth.asc");
}

}  // namespace popgrid::synth
