#include "popgrid/cli.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "popgrid/error.hpp"

namespace popgrid::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Prints an error in the requested style and returns kError.
int fail(const std::string& message, bool as_json, std::ostream& out, std::ostream& err) {
  if (as_json) {
    out << json{{"status", "error"}, {"errors", {message}}}.dump(2) << "\n";
  } else {
    err << "error: " << message << "\n";
  }
  return kError;
}

template <typename Fn>
int guarded(bool as_json, std::ostream& out, std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return fail(e.what(), as_json, out, err);
  } catch (const std::exception& e) {
    return fail(std::string("unexpected failure: ") + e.what(), as_json, out, err);
  }
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
}

json grid_json(const geo::TileGrid& g) {
  return {{"origin_x", g.origin_x()}, {"origin_y", g.origin_y()}, {"tile_size", g.tile_size()},
          {"n_cols", g.n_cols()},     {"n_rows", g.n_rows()}};
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

void apply_json(PipelineConfig& cfg, const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParameterError("pipeline config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "admin") {
        cfg.admin = resolve(value.get<std::string>(), base_dir);
      } else if (key == "poi") {
        cfg.poi = resolve(value.get<std::string>(), base_dir);
      } else if (key == "mask") {
        cfg.mask = resolve(value.get<std::string>(), base_dir);
      } else if (key == "out") {
        cfg.out = resolve(value.get<std::string>(), base_dir);
      } else if (key == "level") {
        cfg.level = io::parse_level(value.get<std::string>());
      } else if (key == "tile_size") {
        cfg.tile_size = value.get<double>();
      } else if (key == "poi_radius") {
        cfg.poi_radius = value.get<double>();
      } else if (key == "poi_threshold") {
        cfg.poi_threshold = value.get<std::size_t>();
      } else if (key == "theta") {
        cfg.theta = value.get<double>();
      } else if (key == "origin_x") {
        cfg.origin_x = value.get<double>();
      } else if (key == "origin_y") {
        cfg.origin_y = value.get<double>();
      } else if (key == "n_cols") {
        cfg.n_cols = value.get<int>();
      } else if (key == "n_rows") {
        cfg.n_rows = value.get<int>();
      } else if (key == "workers") {
        cfg.workers = value.get<int>();
      } else {
        throw ParameterError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("bad config value: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParameterError(e.what());
  }
}

PipelineConfig load_config(const fs::path& path) {
  const std::string text = io::read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  PipelineConfig cfg;
  apply_json(cfg, j, path.parent_path());
  return cfg;
}

geo::TileGrid resolve_grid(const PipelineConfig& cfg, std::span<const io::AdminUnit> units) {
  if (!(cfg.tile_size > 0.0)) throw ParameterError("tile size must be positive");
  const geo::BBox extent = io::extent_of(units);
  if (extent.is_empty() && !(cfg.origin_x && cfg.origin_y && cfg.n_cols && cfg.n_rows)) {
    throw ConfigurationError("no admin units to anchor the tile grid; pass an explicit grid");
  }
  const double ts = cfg.tile_size;
  double ox = 0.0;
  double oy = 0.0;
  if (!extent.is_empty()) {
    const geo::TileGrid snapped = geo::TileGrid::covering(extent, ts);
    ox = snapped.origin_x();
    oy = snapped.origin_y();
  }
  ox = cfg.origin_x.value_or(ox);
  oy = cfg.origin_y.value_or(oy);
  auto span_count = [&](double hi, double origin) {
    return std::max(1, static_cast<int>(std::ceil((hi - origin) / ts)));
  };
  const int cols = cfg.n_cols ? *cfg.n_cols : span_count(extent.max_x, ox);
  const int rows = cfg.n_rows ? *cfg.n_rows : span_count(extent.max_y, oy);
  return geo::TileGrid(ox, oy, ts, cols, rows);
}

RunResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.admin.empty()) throw ParameterError("--admin is required");
  if (cfg.mask.empty()) throw ParameterError("--mask is required");

  const io::AdminLayer layer = io::read_admin_units(cfg.admin, cfg.level);
  io::require_projected(layer);
  std::vector<io::PoiPoint> points;
  if (!cfg.poi.empty()) points = io::read_poi(cfg.poi);
  const io::AsciiGrid ascii = io::read_ascii_file(cfg.mask);
  const io::BinaryRaster raster = io::to_binary_raster(ascii);

  const geo::TileGrid grid = resolve_grid(cfg, layer.units);
  const poi::PoiSet pois(std::move(points));
  poi::TileMask tile_mask =
      poi::compute_tile_mask(grid, pois, cfg.poi_radius, cfg.poi_threshold, cfg.workers);
  const disagg::PixelAssignment assignment =
      disagg::assign_pixels(raster, grid, layer.units, tile_mask, cfg.workers);
  disagg::Allocation alloc = disagg::allocate(assignment, layer.units, cfg.workers);

  RunResult result{std::move(alloc.population), std::move(alloc.report), std::move(tile_mask),
                   ascii.warnings};
  result.warnings.insert(result.warnings.end(), result.report.warnings.begin(),
                         result.report.warnings.end());
  return result;
}

json report_json(const PipelineConfig& cfg, const RunResult& result) {
  json j = disagg::to_json(result.report);
  j["grid"] = grid_json(result.population.grid);
  j["parameters"] = {{"level", std::string(io::to_string(cfg.level))},
                     {"tile_size", cfg.tile_size},
                     {"poi_radius", cfg.poi_radius},
                     {"poi_threshold", cfg.poi_threshold}};
  j["warnings"] = result.warnings;
  return j;
}

int cmd_validate(const PipelineConfig& cfg, bool as_json, std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  json summary = json::object();

  auto attempt = [&](const std::function<void()>& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      errors.emplace_back(e.what());
    } catch (const std::exception& e) {
      errors.emplace_back(e.what());
    }
    return false;
  };

  std::optional<io::AdminLayer> layer;
  if (cfg.admin.empty()) {
    errors.emplace_back("--admin is required");
  } else if (attempt([&] { layer = io::read_admin_units(cfg.admin, cfg.level); })) {
    summary["units"] = layer->units.size();
    attempt([&] { io::require_projected(*layer); });
    if (layer->units.empty()) warnings.emplace_back("admin layer holds no units");
  }
  const geo::BBox admin_extent = layer ? io::extent_of(layer->units) : geo::BBox::empty();

  if (!cfg.poi.empty()) {
    std::vector<io::PoiPoint> pois;
    if (attempt([&] { pois = io::read_poi(cfg.poi); })) {
      summary["pois"] = pois.size();
      if (!admin_extent.is_empty()) {
        const auto outside = std::count_if(pois.begin(), pois.end(), [&](const io::PoiPoint& p) {
          return !admin_extent.contains(p.location);
        });
        if (outside > 0) {
          warnings.push_back(std::to_string(outside) + " POIs lie outside the admin extent");
        }
      }
    }
  }

  if (!cfg.mask.empty()) {
    io::AsciiGrid ascii;
    io::BinaryRaster raster;
    if (attempt([&] {
          ascii = io::read_ascii_file(cfg.mask);
          raster = io::to_binary_raster(ascii);
        })) {
      warnings.insert(warnings.end(), ascii.warnings.begin(), ascii.warnings.end());
      summary["mask"] = {{"n_cols", raster.n_cols}, {"n_rows", raster.n_rows},
                         {"pixel_size", raster.pixel_size}};
      if (raster.pixel_size > cfg.tile_size) {
        errors.emplace_back("mask pixel size exceeds the tile size");
      }
      if (!admin_extent.is_empty()) {
        const geo::BBox me = raster.extent();
        if (!me.overlaps(admin_extent)) {
          errors.emplace_back("mask extent and admin extent are disjoint");
        } else if (!(me.contains({admin_extent.min_x, admin_extent.min_y}) &&
                     me.contains({admin_extent.max_x, admin_extent.max_y}))) {
          warnings.emplace_back("mask covers the admin extent only partially");
        }
      }
    }
  } else {
    warnings.emplace_back("no mask given; only admin and POI inputs were checked");
  }

  const int code = !errors.empty() ? kError : (!warnings.empty() ? kWarnings : kOk);
  if (as_json) {
    summary["status"] = code == kOk ? "ok" : (code == kWarnings ? "warnings" : "error");
    summary["errors"] = errors;
    summary["warnings"] = warnings;
    out << summary.dump(2) << "\n";
  } else {
    for (const std::string& e : errors) err << "error: " << e << "\n";
    print_warnings(warnings, err);
    if (code == kOk) out << "inputs are valid\n";
  }
  return code;
}

int cmd_run(const PipelineConfig& cfg, bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(as_json, out, err, [&] {
    if (cfg.out.empty()) throw ParameterError("--out directory is required");
    const RunResult result = run_pipeline(cfg);
    fs::create_directories(cfg.out);
    io::write_ascii_grid(result.population, cfg.out / "population.asc");
    io::write_ascii_grid(poi::to_raster(result.tile_mask), cfg.out / "tile_mask.asc");
    const json report = report_json(cfg, result);
    io::write_text_file(cfg.out / "report.json", report.dump(2) + "\n");

    const int code = result.warnings.empty() ? kOk : kWarnings;
    if (as_json) {
      json j = {{"status", code == kOk ? "ok" : "warnings"},
                {"totals", report["totals"]},
                {"warnings", result.warnings},
                {"outputs",
                 {(cfg.out / "population.asc").string(), (cfg.out / "tile_mask.asc").string(),
                  (cfg.out / "report.json").string()}}};
      out << j.dump(2) << "\n";
    } else {
      print_warnings(result.warnings, err);
      out << "allocated " << io::format_real(result.report.total_out) << " of "
          << io::format_real(result.report.total_in) << " people over "
          << result.population.grid.tile_count() << " tiles ("
          << result.report.excluded_tiles << " excluded by POI density, "
          << result.report.fallback_units << " fallback units)\n";
    }
    return code;
  });
}

int cmd_filter_poi(const PipelineConfig& cfg, bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(as_json, out, err, [&] {
    if (cfg.admin.empty()) throw ParameterError("--admin is required to anchor the tile grid");
    if (cfg.poi.empty()) throw ParameterError("--poi is required");
    const io::AdminLayer layer = io::read_admin_units(cfg.admin, cfg.level);
    io::require_projected(layer);
    const geo::TileGrid grid = resolve_grid(cfg, layer.units);
    const poi::PoiSet pois(io::read_poi(cfg.poi));
    const std::vector<std::size_t> dense =
        poi::dense_poi_indices(pois, cfg.poi_radius, cfg.poi_threshold, cfg.workers);
    const poi::TileMask mask =
        poi::compute_tile_mask(grid, pois, cfg.poi_radius, cfg.poi_threshold, cfg.workers);
    if (!cfg.out.empty()) io::write_ascii_grid(poi::to_raster(mask), cfg.out);

    if (as_json) {
      out << json{{"status", "ok"},
                  {"pois", pois.size()},
                  {"dense_pois", dense.size()},
                  {"excluded_tiles", mask.excluded_count()},
                  {"grid", grid_json(grid)}}
                 .dump(2)
          << "\n";
    } else {
      out << dense.size() << " of " << pois.size() << " POIs are dense; "
          << mask.excluded_count() << " of " << grid.tile_count() << " tiles excluded\n";
    }
    return kOk;
  });
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(true, out, err, [&] {
    if (opts.predicted.empty() || opts.reference.empty()) {
      throw ParameterError("--predicted and --reference are required");
    }
    io::BinaryRaster predicted = io::read_ascii_grid(opts.predicted);
    io::BinaryRaster reference = io::read_ascii_grid(opts.reference);
    if (opts.tile_size) {
      geo::BBox extent = predicted.extent();
      extent.expand(reference.extent());
      const geo::TileGrid grid = geo::TileGrid::covering(extent, *opts.tile_size);
      predicted = eval::downsample_to_tiles(predicted, grid, opts.theta);
      reference = eval::downsample_to_tiles(reference, grid, opts.theta);
    }
    const eval::ConfusionCounts counts = eval::confusion(predicted, reference);
    const eval::Metrics m = eval::metrics(counts);
    const std::string text = eval::to_json(counts, m).dump(2) + "\n";
    if (!opts.out.empty()) io::write_text_file(opts.out, text);
    out << text;
    return kOk;
  });
}

int cmd_zonal(const ZonalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(opts.json, out, err, [&] {
    if (opts.population.empty() || opts.admin.empty()) {
      throw ParameterError("--population and --admin are required");
    }
    const io::PopulationGrid pop = io::read_population_grid(opts.population);
    const io::AdminLayer layer = io::read_admin_units(opts.admin, opts.level);
    std::optional<io::BinaryRaster> built;
    if (!opts.mask.empty()) {
      built = eval::downsample_to_tiles(io::read_ascii_grid(opts.mask), pop.grid, opts.theta);
    }
    const std::vector<eval::ZonalRow> rows =
        eval::zonal_stats(pop, layer.units, built ? &*built : nullptr);

    std::string text;
    if (opts.json) {
      json arr = json::array();
      for (const eval::ZonalRow& r : rows) {
        arr.push_back({{"unit_id", r.unit_id},
                       {"population_sum", r.population_sum},
                       {"tile_count", r.tile_count},
                       {"built_tile_count", r.built_tile_count},
                       {"mean_density", r.mean_density}});
      }
      text = arr.dump(2) + "\n";
    } else {
      text = eval::format_zonal_csv(rows);
    }
    if (!opts.out.empty()) {
      io::write_text_file(opts.out, text);
    } else {
      out << text;
    }
    return kOk;
  });
}

int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(false, out, err, [&] {
    if (opts.input.empty() || opts.output.empty()) throw ParameterError("--in and --out are required");
    const io::AsciiGrid grid = io::read_ascii_file(opts.input);
    const render::GrayImage img = render::tone_map(grid, opts.scale);
    io::write_text_file(opts.output, render::encode_pgm(img, opts.format));
    out << "wrote " << img.width << "x" << img.height << " image to " << opts.output.string() << "\n";
    return kOk;
  });
}

int cmd_synth(const SynthOptions& opts, bool as_json, std::ostream& out, std::ostream& err) {
  return guarded(as_json, out, err, [&] {
    if (opts.out.empty()) throw ParameterError("--out directory is required");
    const synth::GroundTruth truth = synth::generate(opts.spec);
    synth::write_scenario(truth, opts.out);
    io::write_text_file(opts.out / "spec.json", synth::to_json(opts.spec).dump(2) + "\n");
    if (as_json) {
      out << json{{"status", "ok"},
                  {"units", truth.units.size()},
                  {"pois", truth.pois.size()},
                  {"population", truth.tile_population.total()},
                  {"grid", grid_json(truth.grid)}}
                 .dump(2)
          << "\n";
    } else {
      out << "wrote scenario with " << truth.units.size() << " units and " << truth.pois.size()
          << " POIs to " << opts.out.string() << "\n";
    }
    return kOk;
  });
}

int main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disaggregates census counts onto a 30 m tile grid weighted by built-up pixels."};
  app.name(args.empty() ? "popgrid" : args.front());
  app.require_subcommand(1);

  // Pipeline flags shared by validate / run / filter-poi.
  struct PipelineFlags {
    std::string config, admin, poi, mask, out, level;
    double tile_size = 0, poi_radius = 0, theta = 0, origin_x = 0, origin_y = 0;
    std::size_t poi_threshold = 0;
    int n_cols = 0, n_rows = 0, workers = 1;
    bool json = false;
    std::map<std::string, CLI::Option*> opts;
  };
  auto add_pipeline = [](CLI::App* sub, PipelineFlags& f) {
    f.opts["config"] = sub->add_option("--config", f.config, "JSON config mirroring the flags");
    f.opts["admin"] = sub->add_option("--admin", f.admin, "admin units (GeoJSON)");
    f.opts["poi"] = sub->add_option("--poi", f.poi, "points of interest (CSV or GeoJSON)");
    f.opts["mask"] = sub->add_option("--mask", f.mask, "built-up mask (ESRI ASCII grid)");
    f.opts["out"] = sub->add_option("--out", f.out, "output path");
    f.opts["level"] = sub->add_option("--level", f.level, "expected admin level (default circle)");
    f.opts["tile_size"] = sub->add_option("--tile-size", f.tile_size, "tile edge in meters (default 30)");
    f.opts["poi_radius"] = sub->add_option("--poi-radius", f.poi_radius, "POI buffer radius in meters (default 500)");
    f.opts["poi_threshold"] = sub->add_option("--poi-threshold", f.poi_threshold, "POIs per buffer that exclude a tile (default 5)");
    f.opts["theta"] = sub->add_option("--theta", f.theta, "built fraction for tile binarisation (default 0.5)");
    f.opts["origin_x"] = sub->add_option("--origin-x", f.origin_x, "grid origin easting override");
    f.opts["origin_y"] = sub->add_option("--origin-y", f.origin_y, "grid origin northing override");
    f.opts["n_cols"] = sub->add_option("--cols", f.n_cols, "grid column count override");
    f.opts["n_rows"] = sub->add_option("--rows", f.n_rows, "grid row count override");
    f.opts["workers"] = sub->add_option("--workers", f.workers, "worker threads (results do not depend on it)");
    sub->add_flag("--json", f.json, "machine-readable JSON on stdout");
  };
  auto to_config = [](const PipelineFlags& f) {
    PipelineConfig cfg = f.config.empty() ? PipelineConfig{} : load_config(f.config);
    auto given = [&](const char* key) { return f.opts.at(key)->count() > 0; };
    if (given("admin")) cfg.admin = f.admin;
    if (given("poi")) cfg.poi = f.poi;
    if (given("mask")) cfg.mask = f.mask;
    if (given("out")) cfg.out = f.out;
    if (given("level")) cfg.level = io::parse_level(f.level);
    if (given("tile_size")) cfg.tile_size = f.tile_size;
    if (given("poi_radius")) cfg.poi_radius = f.poi_radius;
    if (given("poi_threshold")) cfg.poi_threshold = f.poi_threshold;
    if (given("theta")) cfg.theta = f.theta;
    if (given("origin_x")) cfg.origin_x = f.origin_x;
    if (given("origin_y")) cfg.origin_y = f.origin_y;
    if (given("n_cols")) cfg.n_cols = f.n_cols;
    if (given("n_rows")) cfg.n_rows = f.n_rows;
    if (given("workers")) cfg.workers = f.workers;
    return cfg;
  };

  PipelineFlags validate_flags, run_flags, filter_flags;
  CLI::App* validate = app.add_subcommand("validate", "check inputs; exit 0 clean, 1 warnings, 2 errors");
  add_pipeline(validate, validate_flags);
  CLI::App* run = app.add_subcommand("run", "disaggregate census counts onto the tile grid");
  add_pipeline(run, run_flags);
  CLI::App* filter = app.add_subcommand("filter-poi", "compute the POI density tile mask");
  add_pipeline(filter, filter_flags);

  EvaluateOptions eval_opts;
  std::string eval_out;
  double eval_tile = 0;
  bool eval_json = false;
  CLI::App* evaluate = app.add_subcommand("evaluate", "accuracy and F1 of a built-up mask");
  evaluate->add_option("--predicted", eval_opts.predicted, "predicted mask")->required();
  evaluate->add_option("--reference", eval_opts.reference, "reference mask")->required();
  evaluate->add_option("--out", eval_opts.out, "also write the metrics JSON here");
  CLI::Option* eval_tile_opt =
      evaluate->add_option("--tile-size", eval_tile, "binarise both masks onto tiles of this size first");
  evaluate->add_option("--theta", eval_opts.theta, "built fraction threshold (default 0.5)");
  evaluate->add_flag("--json", eval_json, "accepted for symmetry; output is always JSON");

  ZonalOptions zonal_opts;
  std::string zonal_level;
  CLI::App* zonal = app.add_subcommand("zonal", "per-unit population sums of a population grid");
  zonal->add_option("--population", zonal_opts.population, "population grid (ESRI ASCII)")->required();
  zonal->add_option("--admin", zonal_opts.admin, "admin units (GeoJSON)")->required();
  zonal->add_option("--mask", zonal_opts.mask, "fine built-up mask for built_tile_count");
  zonal->add_option("--out", zonal_opts.out, "output file (default stdout)");
  CLI::Option* zonal_level_opt = zonal->add_option("--level", zonal_level, "expected admin level");
  zonal->add_option("--theta", zonal_opts.theta, "built fraction threshold (default 0.5)");
  zonal->add_flag("--json", zonal_opts.json, "JSON rows instead of CSV");

  RenderOptions render_opts;
  std::string render_scale = "linear", render_format = "p5";
  CLI::App* render_cmd = app.add_subcommand("render", "grayscale PGM heatmap of a grid");
  render_cmd->add_option("--in", render_opts.input, "ESRI ASCII grid")->required();
  render_cmd->add_option("--out", render_opts.output, "output .pgm")->required();
  render_cmd->add_option("--scale", render_scale, "linear or log");
  render_cmd->add_option("--format", render_format, "p2 (text) or p5 (binary)");

  SynthOptions synth_opts;
  std::string synth_config;
  std::uint64_t synth_seed = 0;
  int synth_cols = 0, synth_rows = 0, synth_units = 0, synth_clusters = 0, synth_isolated = 0;
  double synth_pixel = 0, synth_tile = 0;
  bool synth_json = false;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic city with ground truth");
  CLI::Option* synth_config_opt = synth_cmd->add_option("--config", synth_config, "scenario spec JSON");
  CLI::Option* synth_seed_opt = synth_cmd->add_option("--seed", synth_seed, "RNG seed");
  synth_cmd->add_option("--out", synth_opts.out, "output directory")->required();
  CLI::Option* synth_cols_opt = synth_cmd->add_option("--cols", synth_cols, "extent width in tiles");
  CLI::Option* synth_rows_opt = synth_cmd->add_option("--rows", synth_rows, "extent height in tiles");
  CLI::Option* synth_units_opt = synth_cmd->add_option("--units", synth_units, "number of admin units");
  CLI::Option* synth_pixel_opt = synth_cmd->add_option("--pixel-size", synth_pixel, "mask pixel size (divides tile size)");
  CLI::Option* synth_tile_opt = synth_cmd->add_option("--tile-size", synth_tile, "tile size in meters");
  CLI::Option* synth_clusters_opt = synth_cmd->add_option("--clusters", synth_clusters, "POI clusters");
  CLI::Option* synth_isolated_opt = synth_cmd->add_option("--isolated-pois", synth_isolated, "isolated POIs");
  synth_cmd->add_flag("--json", synth_json, "machine-readable JSON on stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (validate->parsed()) return cmd_validate(to_config(validate_flags), validate_flags.json, out, err);
    if (run->parsed()) return cmd_run(to_config(run_flags), run_flags.json, out, err);
    if (filter->parsed()) return cmd_filter_poi(to_config(filter_flags), filter_flags.json, out, err);
    if (evaluate->parsed()) {
      if (eval_tile_opt->count() > 0) eval_opts.tile_size = eval_tile;
      return cmd_evaluate(eval_opts, out, err);
    }
    if (zonal->parsed()) {
      if (zonal_level_opt->count() > 0) zonal_opts.level = io::parse_level(zonal_level);
      return cmd_zonal(zonal_opts, out, err);
    }
    if (render_cmd->parsed()) {
      render_opts.scale = render::parse_scale(render_scale);
      render_opts.format = render::parse_format(render_format);
      return cmd_render(render_opts, out, err);
    }
    if (synth_cmd->parsed()) {
      if (synth_config_opt->count() > 0) {
        synth_opts.spec = synth::spec_from_json(json::parse(io::read_text_file(synth_config)));
      }
      synth::ScenarioSpec& s = synth_opts.spec;
      if (synth_seed_opt->count() > 0) s.seed = synth_seed;
      if (synth_tile_opt->count() > 0) s.tile_size = synth_tile;
      if (synth_pixel_opt->count() > 0) s.pixel_size = synth_pixel;
      if (synth_cols_opt->count() > 0) s.extent.max_x = s.extent.min_x + synth_cols * s.tile_size;
      if (synth_rows_opt->count() > 0) s.extent.max_y = s.extent.min_y + synth_rows * s.tile_size;
      if (synth_units_opt->count() > 0) s.n_units = synth_units;
      if (synth_clusters_opt->count() > 0) s.n_poi_clusters = synth_clusters;
      if (synth_isolated_opt->count() > 0) s.n_isolated_pois = synth_isolated;
      return cmd_synth(synth_opts, synth_json, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace popgrid::cli
