#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "popgrid/geo.hpp"
#include "popgrid/io.hpp"

namespace popgrid::synth {

/// SplitMix64 (Steele, Lea & Flood): a 64-bit counter passed through a fixed
/// mixing function. Every draw below is derived from next() with explicit
/// arithmetic, so streams are reproducible across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

 private:
  std::uint64_t state_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct CountRange {
  int lo = 0;
  int hi = 0;
};

/// UTM 43N (Lahore) so generated coordinates look like real projected data.
inline constexpr const char* kSyntheticCrs = "EPSG:32643";

struct ScenarioSpec {
  std::uint64_t seed = 42;
  /// Corners must lie on the tile lattice.
  geo::BBox extent{429000.0, 3480000.0, 429000.0 + 1920.0, 3480000.0 + 1920.0};
  double tile_size = 30.0;
  /// Must divide tile_size exactly.
  double pixel_size = 3.0;
  int n_units = 16;
  Range built_fraction{0.15, 0.7};
  int n_poi_clusters = 4;
  CountRange poi_cluster_size{5, 10};
  /// Cluster members fall within this distance of the cluster center, so with
  /// radius <= 250 every pair is within 500 m and all members are dense.
  double poi_cluster_radius = 120.0;
  int n_isolated_pois = 12;
  Range population{2000.0, 20000.0};
};

/// Throws GenerationError when the spec is malformed or infeasible.
void validate(const ScenarioSpec& spec);

nlohmann::json to_json(const ScenarioSpec& spec);
/// Missing keys keep their defaults.
ScenarioSpec spec_from_json(const nlohmann::json& j);

struct GroundTruth {
  geo::TileGrid grid;
  io::BinaryRaster mask;
  /// Residential population per mask pixel (integer-valued), mask storage order.
  std::vector<double> pixel_population;
  std::vector<io::AdminUnit> units;
  std::vector<io::PoiPoint> pois;
  /// Tiles occupied by POI clusters; they are fully built and unpopulated.
  std::vector<std::uint8_t> non_residential;
  io::PopulationGrid tile_population;
};

/// Deterministic in spec.seed. Units form a rectangular partition of the
/// extent on tile boundaries; each unit's integer population is apportioned to
/// its residential built pixels by largest remainder, so per-unit sums are exact.
GroundTruth generate(const ScenarioSpec& spec);

struct Score {
  double mae = 0.0;
  double rmse = 0.0;
  double total_error = 0.0;
};

/// Per-tile errors against the tile-aggregated truth. Throws AlignmentError
/// when the grids differ.
Score score(const io::PopulationGrid& estimate, const io::PopulationGrid& truth_tiles);
Score score(const io::PopulationGrid& estimate, const GroundTruth& truth);

/// Writes admin.geojson, poi.csv, mask.asc and truth.asc into `dir`.
void write_scenario(const GroundTruth& truth, const std::filesystem::path& dir);

}  // namespace popgrid::synth
