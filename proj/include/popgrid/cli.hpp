#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "popgrid/disaggregate.hpp"
#include "popgrid/evaluate.hpp"
#include "popgrid/io.hpp"
#include "popgrid/poi_filter.hpp"
#include "popgrid/render.hpp"
#include "popgrid/synth.hpp"

namespace popgrid::cli {

enum ExitCode : int { kOk = 0, kWarnings = 1, kError = 2 };

struct PipelineConfig {
  std::filesystem::path admin;
  std::filesystem::path poi;
  std::filesystem::path mask;
  std::filesystem::path out;
  io::AdminLevel level = io::AdminLevel::circle;
  double tile_size = geo::TileGrid::kDefaultTileSize;
  double poi_radius = poi::kDefaultRadius;
  std::size_t poi_threshold = poi::kDefaultThreshold;
  double theta = eval::kDefaultTheta;
  /// Grid origin/size overrides; by default the grid snaps to the admin extent.
  std::optional<double> origin_x;
  std::optional<double> origin_y;
  std::optional<int> n_cols;
  std::optional<int> n_rows;
  int workers = 1;
};

/// Overlays keys present in `j` onto `cfg`. Relative paths resolve against
/// `base_dir`. Throws ParameterError on unknown keys or wrong types.
void apply_json(PipelineConfig& cfg, const nlohmann::json& j,
                const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Admin extent snapped down to the tile lattice, unless overridden.
geo::TileGrid resolve_grid(const PipelineConfig& cfg, std::span<const io::AdminUnit> units);

struct RunResult {
  io::PopulationGrid population;
  disagg::AllocationReport report;
  poi::TileMask tile_mask;
  std::vector<std::string> warnings;  ///< input warnings plus report warnings
};

/// ingest -> POI tile mask -> pixel assignment -> allocation, without writing files.
RunResult run_pipeline(const PipelineConfig& cfg);

/// JSON written to report.json: grid, parameters and the allocation report.
nlohmann::json report_json(const PipelineConfig& cfg, const RunResult& result);

int cmd_validate(const PipelineConfig& cfg, bool json, std::ostream& out, std::ostream& err);
/// Writes population.asc, tile_mask.asc and report.json into cfg.out.
int cmd_run(const PipelineConfig& cfg, bool json, std::ostream& out, std::ostream& err);
/// Writes the tile mask (1 retained, 0 excluded) to cfg.out.
int cmd_filter_poi(const PipelineConfig& cfg, bool json, std::ostream& out, std::ostream& err);

struct EvaluateOptions {
  std::filesystem::path predicted;
  std::filesystem::path reference;
  std::filesystem::path out;  ///< optional copy of the metrics JSON
  /// When set, both rasters are binarised onto a shared tile grid first.
  std::optional<double> tile_size;
  double theta = eval::kDefaultTheta;
};
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);

struct ZonalOptions {
  std::filesystem::path population;
  std::filesystem::path admin;
  std::filesystem::path mask;  ///< optional fine mask for built_tile_count
  std::filesystem::path out;
  io::AdminLevel level = io::AdminLevel::circle;
  double theta = eval::kDefaultTheta;
  bool json = false;
};
int cmd_zonal(const ZonalOptions& opts, std::ostream& out, std::ostream& err);

struct RenderOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  render::Scale scale = render::Scale::linear;
  render::PgmFormat format = render::PgmFormat::binary;
};
int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err);

struct SynthOptions {
  synth::ScenarioSpec spec;
  std::filesystem::path out;
};
/// Writes the scenario files plus spec.json into opts.out.
int cmd_synth(const SynthOptions& opts, bool json, std::ostream& out, std::ostream& err);

/// Full command line (args[0] is the program name).
int main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace popgrid::cli
