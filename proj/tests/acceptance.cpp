// Acceptance harness: one PASS/FAIL line per criterion.
//   acceptance            run everything
//   acceptance --only AC3 run a single criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "popgrid/cli.hpp"
#include "popgrid/disaggregate.hpp"
#include "popgrid/error.hpp"
#include "popgrid/evaluate.hpp"
#include "popgrid/poi_filter.hpp"
#include "popgrid/synth.hpp"

using namespace popgrid;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kData = POPGRID_TEST_DATA;

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

disagg::Allocation pipeline(const io::BinaryRaster& mask, const geo::TileGrid& grid,
                            const std::vector<io::AdminUnit>& units, const std::vector<io::PoiPoint>& pois,
                            double radius = poi::kDefaultRadius, std::size_t threshold = poi::kDefaultThreshold) {
  const poi::PoiSet set(pois);
  const poi::TileMask tiles = poi::compute_tile_mask(grid, set, radius, threshold);
  const disagg::PixelAssignment a = disagg::assign_pixels(mask, grid, units, tiles);
  return disagg::allocate(a, units);
}

// ---------------------------------------------------------------------------

Verdict ac1_conservation() {
  const auto t0 = Clock::now();
  Verdict v;
  double worst = 0.0;
  std::size_t fallbacks = 0;
  std::size_t fallback_scenarios = 0;
  int largest = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    oracle::Rng rng(1000 + i);
    const int tiles = i < 4 ? 256 : static_cast<int>(rng.uniform_int(8, 256));
    const double ps = tiles > 160 ? 15.0 : (tiles > 96 ? 10.0 : (tiles > 48 ? 5.0 : 3.0));
    const int max_units = std::min(200, tiles * tiles / 4);
    synth::ScenarioSpec spec =
        oracle::synth_spec(1000 + i, tiles, ps, static_cast<int>(rng.uniform_int(1, max_units)));
    if (i % 5 == 1) spec.population = {0.0, 1e9};
    if (i % 5 == 2) spec.population = {0.0, 50.0};
    synth::GroundTruth t = synth::generate(spec);
    largest = std::max(largest, tiles);

    // Every third scenario wipes the built mask of some units so they have
    // nothing to weight by and must fall back.
    if (i % 3 == 0) {
      for (const io::AdminUnit& u : t.units) {
        if (rng.uniform() > 0.3) continue;
        const geo::BBox b = u.bbox();
        for (int r = 0; r < t.mask.n_rows; ++r) {
          for (int c = 0; c < t.mask.n_cols; ++c) {
            if (b.contains({t.mask.pixel_center_x(c), t.mask.pixel_center_y(r)})) t.mask.at(c, r) = 0;
          }
        }
      }
    }
    const disagg::Allocation out = pipeline(t.mask, t.grid, t.units, t.pois);
    double in = 0.0;
    for (const io::AdminUnit& u : t.units) in += u.population;
    const double rel = std::abs(out.population.total() - in) / std::max(in, 1.0);
    worst = std::max(worst, rel);
    if (rel > 1e-9) {
      v.pass = false;
      v.detail += fmt("scenario %llu off by %.3g; ", static_cast<unsigned long long>(i), rel);
    }
    fallbacks += out.report.fallback_units;
    if (out.report.fallback_units > 0) ++fallback_scenarios;
  }
  const double secs = seconds_since(t0);
  if (fallback_scenarios == 0) {
    v.pass = false;
    v.detail += "no scenario exercised the fallback; ";
  }
  if (secs >= 60.0) v.pass = false;
  v.detail += fmt("100 scenarios up to %dx%d tiles, max relative error %.3g, %zu fallback units in %zu "
                  "scenarios, %.1f s (limit 60 s)",
                  largest, largest, worst, fallbacks, fallback_scenarios, secs);
  return v;
}

Verdict ac2_exact_split() {
  const geo::TileGrid grid(0.0, 0.0, 30.0, 2, 1);
  io::BinaryRaster mask = io::BinaryRaster::filled(0.0, 0.0, 15.0, 4, 2, 0);
  mask.at(0, 0) = 1;
  mask.at(1, 0) = 1;
  mask.at(1, 1) = 1;
  mask.at(2, 1) = 1;
  io::AdminUnit u;
  u.id = "A";
  u.parts.push_back({{{0, 0}, {60, 0}, {60, 30}, {0, 30}}, {}});
  u.population = 100.0;
  const disagg::Allocation out = pipeline(mask, grid, {u}, {});
  Verdict v;
  v.pass = out.population.values[0] == 75.0 && out.population.values[1] == 25.0;
  v.detail = fmt("tiles = %.17g / %.17g (want 75 / 25)", out.population.values[0], out.population.values[1]);
  return v;
}

Verdict ac3_poi_oracle() {
  const auto t0 = Clock::now();
  Verdict v;
  std::size_t total_pois = 0;
  std::size_t dense_total = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    oracle::Rng rng(3000 + i);
    const geo::TileGrid grid(rng.uniform(-2000, 2000), rng.uniform(-2000, 2000), rng.uniform(30.0, 250.0),
                             static_cast<int>(rng.uniform_int(20, 160)), static_cast<int>(rng.uniform_int(20, 160)));
    const std::size_t n = i < 5 ? 2000 : static_cast<std::size_t>(rng.uniform_int(1, 2000));
    const std::vector<io::PoiPoint> pois = oracle::random_pois(rng, n, grid.extent());
    const double r = std::array{250.0, 500.0, 1000.0, rng.uniform(5.0, 1500.0)}[i % 4];
    const std::size_t p = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const poi::PoiSet set(pois);
    const std::vector<std::size_t> dense = poi::dense_poi_indices(set, r, p);
    const bool same_points = dense == oracle::dense_indices(pois, r, p);
    const bool same_mask = poi::compute_tile_mask(grid, set, r, p).retained == oracle::tile_mask(grid, pois, r, p);
    if (!same_points || !same_mask) {
      v.pass = false;
      v.detail += fmt("set %llu differs; ", static_cast<unsigned long long>(i));
    }
    total_pois += n;
    dense_total += dense.size();
  }
  const double secs = seconds_since(t0);
  if (secs >= 30.0) v.pass = false;
  v.detail += fmt("50 sets, %zu POIs (%zu dense), exact match with O(n^2) scan, %.1f s (limit 30 s)", total_pois,
                  dense_total, secs);
  return v;
}

Verdict ac4_monotone() {
  Verdict v;
  const double radii[] = {250.0, 500.0, 1000.0};
  const std::size_t thresholds[] = {3, 5, 8};
  std::size_t checks = 0;
  std::size_t strict = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    synth::ScenarioSpec spec;
    spec.seed = 4000 + i;
    spec.n_isolated_pois = 150;
    const synth::GroundTruth t = synth::generate(spec);
    const poi::PoiSet set(t.pois);
    std::vector<std::vector<std::uint8_t>> m(9);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a * 3 + b] = poi::compute_tile_mask(t.grid, set, radii[a], thresholds[b]).retained;
    }
    // excluded(x) subset of excluded(y)  <=>  retained(y) implies retained(x)
    auto subset = [&](const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y) {
      ++checks;
      bool proper = false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (!x[k] && y[k]) return false;
        if (x[k] && !y[k]) proper = true;
      }
      if (proper) ++strict;
      return true;
    };
    for (int b = 0; b < 3; ++b) {
      for (int a = 0; a + 1 < 3; ++a) {
        if (!subset(m[a * 3 + b], m[(a + 1) * 3 + b])) v.pass = false;
      }
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b + 1 < 3; ++b) {
        if (!subset(m[a * 3 + b + 1], m[a * 3 + b])) v.pass = false;
      }
    }
  }
  v.detail = fmt("20 scenarios x R{250,500,1000} x P{3,5,8}: %zu nested pairs checked, %zu strictly nested", checks,
                 strict);
  return v;
}

Verdict ac5_allocation_oracle() {
  Verdict v;
  std::size_t fallback_units = 0;
  std::size_t tiles = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const oracle::Scenario s = oracle::random_scenario(5000 + i, 64);
    const disagg::PixelAssignment a =
        disagg::assign_pixels(s.raster, s.grid, s.units, poi::TileMask{s.grid, s.retained});
    const disagg::Allocation out = disagg::allocate(a, s.units);
    const oracle::BruteAllocation want = oracle::brute_force_allocate(s.raster, s.grid, s.units, s.retained);
    if (out.population.values != want.population) {
      v.pass = false;
      v.detail += fmt("scenario %llu differs; ", static_cast<unsigned long long>(i));
    }
    fallback_units += out.report.fallback_units;
    tiles += s.grid.tile_count();
  }
  v.detail += fmt("50 scenarios, %zu tiles compared bit for bit, %zu fallback units", tiles, fallback_units);
  return v;
}

// Raster with the requested confusion counts against an all-valid reference.
std::pair<io::BinaryRaster, io::BinaryRaster> with_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                                                          std::uint64_t tn) {
  const int n = static_cast<int>(tp + fp + fn + tn);
  io::BinaryRaster p = io::BinaryRaster::filled(0, 0, 1, n, 1, 0);
  io::BinaryRaster r = p;
  int c = 0;
  for (std::uint64_t k = 0; k < tp; ++k, ++c) p.at(c, 0) = r.at(c, 0) = 1;
  for (std::uint64_t k = 0; k < fp; ++k, ++c) p.at(c, 0) = 1;
  for (std::uint64_t k = 0; k < fn; ++k, ++c) r.at(c, 0) = 1;
  return {p, r};
}

Verdict ac6_metrics() {
  struct Fixture {
    std::uint64_t tp, fp, fn, tn;
    double accuracy, f1;
  };
  // Hand-computed: accuracy = (tp+tn)/N, F1 = 2tp/(2tp+fp+fn).
  const Fixture fixtures[] = {
      {4, 2, 2, 8, 0.75, 0.6666666666666666},          // 12/16, 8/12
      {50, 10, 5, 35, 0.85, 0.8695652173913043},       // 85/100, 100/115
      {7, 0, 3, 90, 0.97, 0.8235294117647058},         // 97/100, 14/17
      {0, 5, 5, 0, 0.0, 0.0},                          // nothing right
      {0, 0, 0, 10, 1.0, 1.0},                         // no positives anywhere
  };
  Verdict v;
  double worst = 0.0;
  for (const Fixture& f : fixtures) {
    const auto [p, r] = with_counts(f.tp, f.fp, f.fn, f.tn);
    const eval::Metrics m = eval::metrics(eval::confusion(p, r));
    worst = std::max({worst, std::abs(m.accuracy - f.accuracy), std::abs(m.f1 - f.f1)});
  }
  // The 4x4 golden files give the first fixture.
  const eval::Metrics g = eval::metrics(
      eval::confusion(io::read_ascii_grid(kData / "predicted_4x4.asc"), io::read_ascii_grid(kData / "reference_4x4.asc")));
  worst = std::max({worst, std::abs(g.accuracy - 0.75), std::abs(g.f1 - 0.6666666666666666)});
  if (worst > 1e-12) v.pass = false;

  oracle::Rng rng(6000);
  int self_ok = 0;
  for (int k = 0; k < 25; ++k) {
    io::BinaryRaster x = io::BinaryRaster::filled(0, 0, 1, 40, 30, 0);
    const double density = k == 0 ? 0.0 : (k == 1 ? 1.0 : rng.uniform());
    for (std::uint8_t& c : x.values) {
      const double u = rng.uniform();
      c = u < 0.03 ? io::kNoData : (u < density ? 1 : 0);
    }
    const eval::Metrics m = eval::metrics(eval::confusion(x, x));
    if (m.accuracy == 1.0 && m.f1 == 1.0) ++self_ok;
  }
  if (self_ok != 25) v.pass = false;
  v.detail = fmt("5 fixtures + 4x4 golden pair, max deviation %.3g (limit 1e-12); self comparison (1,1) in %d/25",
                 worst, self_ok);
  return v;
}

Verdict ac7_quality() {
  Verdict v;
  int wins = 0;
  double ours_sum = 0.0;
  double base_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    synth::ScenarioSpec spec;
    spec.seed = seed;
    const synth::GroundTruth t = synth::generate(spec);
    const synth::Score ours = synth::score(pipeline(t.mask, t.grid, t.units, t.pois).population, t);
    const synth::Score base = synth::score(disagg::uniform_allocate(t.grid, t.units), t);
    if (ours.mae < base.mae) ++wins;
    ours_sum += ours.mae;
    base_sum += base.mae;
  }
  v.pass = wins >= 27;
  v.detail = fmt("built-weighted MAE below uniform MAE in %d/30 default scenarios (need 27); mean MAE %.2f vs %.2f",
                 wins, ours_sum / 30.0, base_sum / 30.0);
  return v;
}

Verdict ac8_run_scale() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "popgrid_acceptance_ac8";
  fs::remove_all(root);

  synth::ScenarioSpec spec;
  spec.seed = 8;
  spec.pixel_size = 1.875;  // 1920 m / 1.875 m = 1024 pixels a side
  spec.n_units = 500;
  spec.n_poi_clusters = 60;
  spec.n_isolated_pois = 0;
  const std::size_t clustered = synth::generate(spec).pois.size();
  spec.n_isolated_pois = static_cast<int>(10000 - clustered);
  const synth::GroundTruth t = synth::generate(spec);
  synth::write_scenario(t, root / "in");

  auto run = [&](const std::string& out, int workers) {
    std::ostringstream so;
    std::ostringstream se;
    const std::vector<std::string> args{"popgrid", "run",
                                        "--admin", (root / "in" / "admin.geojson").string(),
                                        "--poi", (root / "in" / "poi.csv").string(),
                                        "--mask", (root / "in" / "mask.asc").string(),
                                        "--out", (root / out).string(),
                                        "--workers", std::to_string(workers)};
    const auto t0 = Clock::now();
    const int code = cli::main(args, so, se);
    const double secs = seconds_since(t0);
    if (code > 1) std::cerr << se.str();
    return std::pair{code, secs};
  };
  const auto [c1, s1] = run("w1", 1);
  const auto [c2, s2] = run("w1_again", 1);
  const auto [c4, s4] = run("w4", 4);
  bool identical = true;
  for (const char* f : {"population.asc", "tile_mask.asc", "report.json"}) {
    const std::string a = io::read_text_file(root / "w1" / f);
    identical = identical && a == io::read_text_file(root / "w1_again" / f) && a == io::read_text_file(root / "w4" / f);
  }
  v.pass = c1 <= 1 && c2 <= 1 && c4 <= 1 && identical && s1 < 10.0;
  v.detail = fmt("%dx%d mask, %zu units, %zu POIs: single-threaded %.2f s (limit 10 s), rerun %.2f s, "
                 "4 workers %.2f s, outputs %s",
                 t.mask.n_cols, t.mask.n_rows, t.units.size(), t.pois.size(), s1, s2, s4,
                 identical ? "byte-identical" : "DIFFER");
  fs::remove_all(root);
  return v;
}

// --- AC9 -------------------------------------------------------------------

template <typename E, typename Fn>
bool throws_exactly(Fn&& fn) {
  try {
    fn();
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

Verdict ac9_round_trip() {
  Verdict v;
  int round_trips = 0;
  int failures = 0;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      v.detail += what + "; ";
    }
  };

  // Round trips.
  const io::AdminLayer admin = io::read_admin_units(kData / "admin_circles.geojson", io::AdminLevel::circle);
  const synth::GroundTruth t = synth::generate(oracle::synth_spec(9, 24, 3.0, 9));
  for (const auto* units : {&admin.units, &t.units}) {
    const io::AdminLayer back = io::parse_admin_units(io::format_admin_units(*units), io::AdminLevel::circle);
    bool same = back.units.size() == units->size();
    for (std::size_t i = 0; same && i < units->size(); ++i) {
      const io::AdminUnit& a = (*units)[i];
      const io::AdminUnit& b = back.units[i];
      same = a.id == b.id && a.population == b.population && a.parts.size() == b.parts.size();
      for (std::size_t p = 0; same && p < a.parts.size(); ++p) {
        same = a.parts[p].exterior == b.parts[p].exterior && a.parts[p].holes.size() == b.parts[p].holes.size();
        for (std::size_t h = 0; same && h < a.parts[p].holes.size(); ++h) same = a.parts[p].holes[h] == b.parts[p].holes[h];
      }
    }
    expect(same, "admin round trip");
    ++round_trips;
  }
  for (const char* f : {"predicted_4x4.asc", "mask_nodata.asc"}) {
    const io::BinaryRaster r = io::read_ascii_grid(kData / f);
    expect(io::to_binary_raster(io::parse_ascii_grid(io::format_ascii_grid(r))) == r, std::string("mask ") + f);
    ++round_trips;
  }
  expect(io::to_binary_raster(io::parse_ascii_grid(io::format_ascii_grid(t.mask))) == t.mask, "synth mask");
  ++round_trips;
  {
    const io::PopulationGrid g = io::read_population_grid(kData / "population.asc");
    const io::PopulationGrid back = io::to_population_grid(io::parse_ascii_grid(io::format_ascii_grid(g)));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) worst = std::max(worst, std::abs(g.values[i] - back.values[i]));
    expect(back.grid == g.grid && worst <= 1e-9, "population fixture");
    ++round_trips;
    oracle::Rng rng(9000);
    io::PopulationGrid fine(t.grid);
    for (double& x : fine.values) x = rng.uniform(0.0, 1e6) / 3.0;
    expect(io::to_population_grid(io::parse_ascii_grid(io::format_ascii_grid(fine))) == fine, "random reals");
    ++round_trips;
  }
  expect(io::parse_poi_csv(io::format_poi_csv(t.pois)) == t.pois, "poi csv");
  expect(io::parse_poi_geojson(io::format_poi_geojson(t.pois)) == t.pois, "poi geojson");
  round_trips += 2;

  // Schema-mutation fuzzing of the golden files.
  const std::string admin_text = io::read_text_file(kData / "admin_circles.geojson");
  const nlohmann::json admin_json = nlohmann::json::parse(admin_text);
  const std::string grid_text = io::read_text_file(kData / "predicted_4x4.asc");
  const std::string poi_text = io::read_text_file(kData / "poi.csv");
  oracle::Rng rng(9001);
  int mutations = 0;
  std::map<std::string, int> by_class;

  auto lines_of = [](const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  };
  auto join = [](const std::vector<std::string>& ls) {
    std::string s;
    for (const std::string& l : ls) s += l + "\n";
    return s;
  };
  const std::vector<std::string> grid_lines = lines_of(grid_text);
  const char* header_keys[] = {"NCOLS", "NROWS", "XLLCORNER", "YLLCORNER", "CELLSIZE", "NODATA_VALUE"};

  for (int k = 0; k < 600; ++k) {
    const int kind = static_cast<int>(rng.uniform_int(0, 16));
    const auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1)); };
    bool ok = false;
    std::string cls;
    switch (kind) {
      case 0: {  // drop a header line
        std::vector<std::string> ls = grid_lines;
        ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(pick(6)));
        ok = throws_exactly<FormatError>([&] { io::parse_ascii_grid(join(ls)); });
        cls = "FormatError";
        break;
      }
      case 1: {  // duplicate a header line
        std::vector<std::string> ls = grid_lines;
        const std::size_t i = pick(6);
        ls.insert(ls.begin() + static_cast<std::ptrdiff_t>(pick(6)), ls[i]);
        ok = throws_exactly<FormatError>([&] { io::parse_ascii_grid(join(ls)); });
        cls = "FormatError";
        break;
      }
      case 2: {  // unknown or garbled header key
        std::vector<std::string> ls = grid_lines;
        const std::size_t i = pick(6);
        ls[i] = std::string(header_keys[i]) + "X" + ls[i].substr(ls[i].find(' '));
        ok = throws_exactly<FormatError>([&] { io::parse_ascii_grid(join(ls)); });
        cls = "FormatError";
        break;
      }
      case 3: {  // non-numeric header value
        std::vector<std::string> ls = grid_lines;
        const std::size_t i = pick(6);
        ls[i] = std::string(header_keys[i]) + " abc";
        ok = throws_exactly<FormatError>([&] { io::parse_ascii_grid(join(ls)); });
        cls = "FormatError";
        break;
      }
      case 4: {  // drop body values
        std::string body;
        for (std::size_t i = 6; i < grid_lines.size(); ++i) body += grid_lines[i] + " ";
        std::istringstream in(body);
        std::vector<std::string> vals;
        for (std::string s; in >> s;) vals.push_back(s);
        vals.resize(vals.size() - 1 - pick(vals.size() - 1));
        std::string text;
        for (int i = 0; i < 6; ++i) text += grid_lines[static_cast<std::size_t>(i)] + "\n";
        for (const std::string& s : vals) text += s + " ";
        ok = throws_exactly<TruncationError>([&] { io::parse_ascii_grid(text); });
        cls = "TruncationError";
        break;
      }
      case 5: {  // extra body values
        std::string text = grid_text;
        const std::size_t extra = 1 + pick(5);
        for (std::size_t i = 0; i < extra; ++i) text += "0 ";
        ok = throws_exactly<TruncationError>([&] { io::parse_ascii_grid(text); });
        cls = "TruncationError";
        break;
      }
      case 6: {  // garbage cell
        std::vector<std::string> ls = grid_lines;
        ls[6 + pick(4)] = "1 0 ? 1";
        ok = throws_exactly<FormatError>([&] { io::parse_ascii_grid(join(ls)); });
        cls = "FormatError";
        break;
      }
      case 7:
      case 8: {  // remove a required property
        nlohmann::json j = admin_json;
        const char* keys[] = {"id", "level", "population"};
        j["features"][pick(3)]["properties"].erase(keys[pick(3)]);
        ok = throws_exactly<SchemaError>([&] { io::parse_admin_units(j.dump(), io::AdminLevel::circle); });
        cls = "SchemaError";
        break;
      }
      case 9: {  // wrong level on one feature
        nlohmann::json j = admin_json;
        const char* levels[] = {"tehsil", "charge", "block"};
        j["features"][pick(3)]["properties"]["level"] = levels[pick(3)];
        ok = throws_exactly<LevelMismatchError>([&] { io::parse_admin_units(j.dump(), io::AdminLevel::circle); });
        cls = "LevelMismatchError";
        break;
      }
      case 10: {  // negative population
        nlohmann::json j = admin_json;
        j["features"][pick(3)]["properties"]["population"] = -rng.uniform(0.001, 1e6);
        ok = throws_exactly<ValidationError>([&] { io::parse_admin_units(j.dump(), io::AdminLevel::circle); });
        cls = "ValidationError";
        break;
      }
      case 11: {  // non-areal geometry
        nlohmann::json j = admin_json;
        const char* types[] = {"Point", "LineString", "MultiPoint", "GeometryCollection"};
        j["features"][pick(3)]["geometry"]["type"] = types[pick(4)];
        ok = throws_exactly<SchemaError>([&] { io::parse_admin_units(j.dump(), io::AdminLevel::circle); });
        cls = "SchemaError";
        break;
      }
      case 12: {  // truncated JSON
        const std::size_t cut = 1 + pick(admin_text.rfind('}') - 1);
        ok = throws_exactly<ParseError>([&] { io::parse_admin_units(admin_text.substr(0, cut), io::AdminLevel::circle); });
        cls = "ParseError";
        break;
      }
      case 13: {  // POI header renamed
        std::string text = poi_text;
        text.replace(0, 1, rng.uniform() < 0.5 ? "lon" : "easting");
        ok = throws_exactly<SchemaError>([&] { io::parse_poi_csv(text); });
        cls = "SchemaError";
        break;
      }
      case 14: {  // POI coordinate garbage
        std::vector<std::string> ls = lines_of(poi_text);
        const std::size_t row = 1 + pick(ls.size() - 1);
        ls[row] = rng.uniform() < 0.5 ? "12a,4,shop" : "1,,shop";
        ok = throws_exactly<ValidationError>([&] { io::parse_poi_csv(join(ls)); });
        cls = "ValidationError";
        break;
      }
      case 15: {  // duplicate id
        nlohmann::json j = admin_json;
        const std::size_t from = pick(3);
        const std::size_t to = (from + 1 + pick(2)) % 3;
        j["features"][to]["properties"]["id"] = j["features"][from]["properties"]["id"];
        ok = throws_exactly<ValidationError>([&] { io::parse_admin_units(j.dump(), io::AdminLevel::circle); });
        cls = "ValidationError";
        break;
      }
      case 16: {  // unterminated quote
        std::vector<std::string> ls = lines_of(poi_text);
        const std::size_t row = 1 + pick(ls.size() - 1);
        ls[row] += ",\"open";
        ok = throws_exactly<ParseError>([&] { io::parse_poi_csv(join(ls)); });
        cls = "ParseError";
        break;
      }
    }
    ++mutations;
    ++by_class[cls];
    expect(ok, fmt("mutation %d (kind %d) not rejected as %s", k, kind, cls.c_str()));
  }

  v.pass = failures == 0;
  std::string classes;
  for (const auto& [name, n] : by_class) classes += fmt("%s %d, ", name.c_str(), n);
  classes.resize(classes.size() - 2);
  v.detail += fmt("%d round trips exact; %d golden-file mutations rejected with the expected class (%s)", round_trips,
                  mutations - failures, classes.c_str());
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "conservation", ac1_conservation},
      {"AC2", "exact 75/25 split", ac2_exact_split},
      {"AC3", "POI filter matches brute force", ac3_poi_oracle},
      {"AC4", "mask monotone in R and P", ac4_monotone},
      {"AC5", "allocation matches brute force", ac5_allocation_oracle},
      {"AC6", "accuracy and F1", ac6_metrics},
      {"AC7", "beats uniform baseline", ac7_quality},
      {"AC8", "run determinism and speed", ac8_run_scale},
      {"AC9", "I/O round trip and mutation fuzzing", ac9_round_trip},
  };

  std::string only;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--only") only = argv[i + 1];
  }

  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && only != c.id) continue;
    ++ran;
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::cout << c.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << v.detail << std::endl;
  }
  if (ran == 0) {
    std::cerr << "no criterion named '" << only << "'\n";
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
