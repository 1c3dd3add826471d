#include "popgrid/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "popgrid/error.hpp"

namespace popgrid::io {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string shortest_fixed(double v) {
  std::array<char, 512> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  return std::string(buf.data(), res.ptr);
}

// Converts a byte offset into a 1-based line/column pair.
std::pair<std::size_t, std::size_t> position_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = position_of(text, offset);
    throw ParseError(std::string(source), line, col, "malformed JSON");
  }
}

const json& feature_array(const json& root, std::string_view source) {
  if (!root.is_object() || root.value("type", std::string()) != "FeatureCollection") {
    throw SchemaError(std::string(source) + ": expected a GeoJSON FeatureCollection");
  }
  const auto it = root.find("features");
  if (it == root.end() || !it->is_array()) {
    throw SchemaError(std::string(source) + ": FeatureCollection has no `features` array");
  }
  return *it;
}

geo::Point parse_position(const json& pos, const std::string& where) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw SchemaError(where + ": position must be an array of at least two numbers");
  }
  const geo::Point p{pos[0].get<double>(), pos[1].get<double>()};
  if (!geo::is_finite(p)) throw ValidationError(where + ": non-finite coordinate");
  return p;
}

geo::Ring parse_ring(const json& ring, const std::string& where) {
  if (!ring.is_array()) throw SchemaError(where + ": ring must be an array of positions");
  geo::Ring out;
  out.reserve(ring.size());
  for (const json& pos : ring) out.push_back(parse_position(pos, where));
  return geo::normalize_ring(std::move(out));
}

geo::Polygon parse_polygon(const json& rings, const std::string& where) {
  if (!rings.is_array() || rings.empty()) {
    throw SchemaError(where + ": polygon must be a non-empty array of rings");
  }
  geo::Polygon poly;
  poly.exterior = parse_ring(rings[0], where);
  for (std::size_t i = 1; i < rings.size(); ++i) poly.holes.push_back(parse_ring(rings[i], where));
  try {
    geo::validate(poly);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return poly;
}

std::string feature_label(const json& props, std::size_t index) {
  if (props.is_object()) {
    const auto it = props.find("id");
    if (it != props.end()) {
      if (it->is_string()) return "feature '" + it->get<std::string>() + "'";
      if (it->is_number_integer()) return "feature '" + std::to_string(it->get<long long>()) + "'";
    }
  }
  return "feature #" + std::to_string(index);
}

json ring_json(const geo::Ring& ring) {
  json out = json::array();
  for (const geo::Point& p : ring) out.push_back({p.x, p.y});
  if (!ring.empty()) out.push_back({ring.front().x, ring.front().y});
  return out;
}

json polygon_json(const geo::Polygon& poly) {
  json rings = json::array();
  rings.push_back(ring_json(poly.exterior));
  for (const geo::Ring& h : poly.holes) rings.push_back(ring_json(h));
  return rings;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV record; double quotes group fields and `""` escapes a quote.
std::optional<std::vector<std::string>> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) return std::nullopt;
  return fields;
}

}  // namespace

// ---------------------------------------------------------------------------
// Admin units
// ---------------------------------------------------------------------------

std::string_view to_string(AdminLevel level) noexcept {
  switch (level) {
    case AdminLevel::tehsil: return "tehsil";
    case AdminLevel::charge: return "charge";
    case AdminLevel::circle: return "circle";
    case AdminLevel::block: return "block";
  }
  return "unknown";
}

AdminLevel parse_level(std::string_view name) {
  const std::string l = lower(trim(name));
  if (l == "tehsil") return AdminLevel::tehsil;
  if (l == "charge") return AdminLevel::charge;
  if (l == "circle") return AdminLevel::circle;
  if (l == "block") return AdminLevel::block;
  throw ValidationError("unknown admin level '" + std::string(name) + "'");
}

geo::BBox AdminUnit::bbox() const noexcept {
  geo::BBox b = geo::BBox::empty();
  for (const geo::Polygon& p : parts) b.expand(geo::bbox_of(p));
  return b;
}

bool AdminUnit::contains(const geo::Point& p) const noexcept {
  return std::any_of(parts.begin(), parts.end(),
                     [&](const geo::Polygon& poly) { return geo::point_in_polygon(p, poly); });
}

geo::Point AdminUnit::representative_point() const {
  if (parts.empty()) throw ValidationError("admin unit '" + id + "' has no geometry");
  const auto largest = std::max_element(
      parts.begin(), parts.end(),
      [](const geo::Polygon& a, const geo::Polygon& b) { return geo::area(a) < geo::area(b); });
  return geo::representative_point(*largest);
}

AdminLayer parse_admin_units(std::string_view text, AdminLevel expected, std::string_view source) {
  const json root = parse_json(text, source);
  const json& features = feature_array(root, source);
  const std::string src(source);

  AdminLayer layer;
  if (const auto crs = root.find("crs"); crs != root.end() && crs->is_object()) {
    const auto props = crs->find("properties");
    if (props != crs->end() && props->is_object()) {
      const auto name = props->find("name");
      if (name != props->end() && name->is_string()) layer.crs = name->get<std::string>();
    }
  }

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    if (!f.is_object()) throw SchemaError(src + ": feature #" + std::to_string(i) + " is not an object");
    const auto props_it = f.find("properties");
    const json props = props_it != f.end() ? *props_it : json();
    const std::string label = src + ": " + feature_label(props, i);
    if (!props.is_object()) throw SchemaError(label + " has no properties object");

    auto require = [&](const char* key) -> const json& {
      const auto it = props.find(key);
      if (it == props.end() || it->is_null()) {
        throw SchemaError(label + " is missing property `" + key + "`");
      }
      return *it;
    };

    AdminUnit unit;
    const json& id = require("id");
    if (id.is_string()) {
      unit.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      unit.id = std::to_string(id.get<long long>());
    } else {
      throw SchemaError(label + ": property `id` must be a string or integer");
    }

    const json& level = require("level");
    if (!level.is_string()) throw SchemaError(label + ": property `level` must be a string");
    unit.level = parse_level(level.get<std::string>());
    if (unit.level != expected) {
      throw LevelMismatchError(label + " has level '" + std::string(to_string(unit.level)) +
                               "', expected '" + std::string(to_string(expected)) + "'");
    }

    const json& pop = require("population");
    if (!pop.is_number()) throw SchemaError(label + ": property `population` must be a number");
    unit.population = pop.get<double>();
    if (!std::isfinite(unit.population) || unit.population < 0.0) {
      throw ValidationError(label + ": population must be a finite non-negative number");
    }

    const auto geom_it = f.find("geometry");
    if (geom_it == f.end() || !geom_it->is_object()) throw SchemaError(label + " has no geometry");
    const json& geom = *geom_it;
    const std::string type = geom.value("type", std::string());
    const auto coords = geom.find("coordinates");
    if (coords == geom.end()) throw SchemaError(label + ": geometry has no coordinates");
    if (type == "Polygon") {
      unit.parts.push_back(parse_polygon(*coords, label));
    } else if (type == "MultiPolygon") {
      if (!coords->is_array() || coords->empty()) {
        throw SchemaError(label + ": MultiPolygon needs at least one polygon");
      }
      for (const json& poly : *coords) unit.parts.push_back(parse_polygon(poly, label));
    } else {
      throw SchemaError(label + ": geometry type '" + type + "' is not Polygon or MultiPolygon");
    }

    if (!seen.insert(unit.id).second) throw ValidationError(label + ": duplicate id");
    layer.units.push_back(std::move(unit));
  }
  return layer;
}

AdminLayer read_admin_units(const std::filesystem::path& path, AdminLevel expected) {
  return parse_admin_units(read_text_file(path), expected, path.string());
}

std::string format_admin_units(std::span<const AdminUnit> units,
                               const std::optional<std::string>& crs) {
  std::string out = "{\"type\":\"FeatureCollection\",";
  if (crs) {
    nlohmann::ordered_json c = {{"type", "name"}, {"properties", {{"name", *crs}}}};
    out += "\"crs\":" + c.dump() + ",";
  }
  out += "\"features\":[\n";
  for (std::size_t i = 0; i < units.size(); ++i) {
    const AdminUnit& u = units[i];
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"id", u.id}, {"level", std::string(to_string(u.level))},
                       {"population", u.population}};
    if (u.parts.size() == 1) {
      f["geometry"] = {{"type", "Polygon"}, {"coordinates", polygon_json(u.parts.front())}};
    } else {
      json polys = json::array();
      for (const geo::Polygon& p : u.parts) polys.push_back(polygon_json(p));
      f["geometry"] = {{"type", "MultiPolygon"}, {"coordinates", polys}};
    }
    out += f.dump();
    out += i + 1 < units.size() ? ",\n" : "\n";
  }
  out += "]}\n";
  return out;
}

void write_admin_units(const std::filesystem::path& path, std::span<const AdminUnit> units,
                       const std::optional<std::string>& crs) {
  write_text_file(path, format_admin_units(units, crs));
}

geo::BBox extent_of(std::span<const AdminUnit> units) noexcept {
  geo::BBox b = geo::BBox::empty();
  for (const AdminUnit& u : units) b.expand(u.bbox());
  return b;
}

void require_projected(const AdminLayer& layer) {
  if (layer.crs) {
    const std::string c = lower(*layer.crs);
    if (c.find("4326") != std::string::npos || c.find("crs84") != std::string::npos) {
      throw ValidationError("admin layer declares geographic CRS '" + *layer.crs +
                            "'; a projected meter CRS is required");
    }
    return;
  }
  if (layer.units.empty()) return;
  const geo::BBox b = extent_of(layer.units);
  if (b.min_x >= -180.0 && b.max_x <= 180.0 && b.min_y >= -90.0 && b.max_y <= 90.0) {
    throw ValidationError(
        "admin coordinates fall inside the longitude/latitude range and no projected CRS is "
        "declared; reproject to a meter CRS or add a `crs` member");
  }
}

// ---------------------------------------------------------------------------
// POI
// ---------------------------------------------------------------------------

std::vector<PoiPoint> parse_poi_csv(std::string_view text, std::string_view source) {
  const std::string src(source);
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<PoiPoint> out;
  bool have_header = false;
  std::size_t row = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto fields = split_csv(line);
    if (!fields) throw ParseError(src, line_no, line.size() + 1, "unterminated quoted field");

    if (!have_header) {
      if (fields->size() < 2 || lower(trim((*fields)[0])) != "x" ||
          lower(trim((*fields)[1])) != "y" ||
          (fields->size() >= 3 && lower(trim((*fields)[2])) != "category") || fields->size() > 3) {
        throw SchemaError(src + ": expected header `x,y,category`");
      }
      have_header = true;
      continue;
    }

    ++row;
    const std::string where = src + ": row " + std::to_string(row);
    if (fields->size() < 2 || fields->size() > 3) {
      throw ValidationError(where + ": expected 2 or 3 fields, got " +
                            std::to_string(fields->size()));
    }
    const auto x = parse_double((*fields)[0]);
    const auto y = parse_double((*fields)[1]);
    if (!x || !y) throw ValidationError(where + ": unparseable coordinate");
    PoiPoint p{{*x, *y}, fields->size() == 3 ? std::string(trim((*fields)[2])) : std::string()};
    if (!geo::is_finite(p.location)) throw ValidationError(where + ": non-finite coordinate");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PoiPoint> parse_poi_geojson(std::string_view text, std::string_view source) {
  const json root = parse_json(text, source);
  const json& features = feature_array(root, source);
  const std::string src(source);
  std::vector<PoiPoint> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    const std::string label = src + ": feature #" + std::to_string(i);
    if (!f.is_object()) throw SchemaError(label + " is not an object");
    const auto geom = f.find("geometry");
    if (geom == f.end() || !geom->is_object() || geom->value("type", std::string()) != "Point") {
      throw SchemaError(label + ": geometry must be a Point");
    }
    const auto coords = geom->find("coordinates");
    if (coords == geom->end()) throw SchemaError(label + ": Point has no coordinates");
    PoiPoint p{parse_position(*coords, label), {}};
    if (const auto props = f.find("properties"); props != f.end() && props->is_object()) {
      if (const auto cat = props->find("category"); cat != props->end() && !cat->is_null()) {
        p.category = cat->is_string() ? cat->get<std::string>() : cat->dump();
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PoiPoint> read_poi(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_poi_geojson(text, path.string());
  return parse_poi_csv(text, path.string());
}

std::string format_poi_csv(std::span<const PoiPoint> pois) {
  std::string out = "x,y,category\n";
  for (const PoiPoint& p : pois) {
    out += shortest(p.location.x);
    out += ',';
    out += shortest(p.location.y);
    out += ',';
    out += csv_field(p.category);
    out += '\n';
  }
  return out;
}

void write_poi_csv(const std::filesystem::path& path, std::span<const PoiPoint> pois) {
  write_text_file(path, format_poi_csv(pois));
}

std::string format_poi_geojson(std::span<const PoiPoint> pois) {
  std::string out = "{\"type\":\"FeatureCollection\",\"features\":[\n";
  for (std::size_t i = 0; i < pois.size(); ++i) {
    nlohmann::ordered_json f;
    f["type"] = "Feature";
    f["properties"] = {{"category", pois[i].category}};
    f["geometry"] = {{"type", "Point"},
                     {"coordinates", {pois[i].location.x, pois[i].location.y}}};
    out += f.dump();
    out += i + 1 < pois.size() ? ",\n" : "\n";
  }
  out += "]}\n";
  return out;
}

// ---------------------------------------------------------------------------
// ESRI ASCII grid
// ---------------------------------------------------------------------------

BinaryRaster BinaryRaster::filled(double origin_x, double origin_y, double pixel_size, int n_cols,
                                  int n_rows, std::uint8_t value) {
  if (!(pixel_size > 0.0)) throw ParameterError("pixel size must be positive");
  if (n_cols < 1 || n_rows < 1) throw ParameterError("raster needs at least one column and row");
  BinaryRaster r;
  r.origin_x = origin_x;
  r.origin_y = origin_y;
  r.pixel_size = pixel_size;
  r.n_cols = n_cols;
  r.n_rows = n_rows;
  r.values.assign(static_cast<std::size_t>(n_cols) * static_cast<std::size_t>(n_rows), value);
  return r;
}

geo::BBox BinaryRaster::extent() const noexcept {
  return {origin_x, origin_y, origin_x + n_cols * pixel_size, origin_y + n_rows * pixel_size};
}

bool BinaryRaster::same_geometry(const BinaryRaster& o) const noexcept {
  return origin_x == o.origin_x && origin_y == o.origin_y && pixel_size == o.pixel_size &&
         n_cols == o.n_cols && n_rows == o.n_rows;
}

double PopulationGrid::total() const noexcept {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

namespace {

constexpr std::array<std::string_view, 6> kHeaderKeys = {"ncols",     "nrows",    "xllcorner",
                                                         "yllcorner", "cellsize", "nodata_value"};

std::string header_block(int n_cols, int n_rows, double xll, double yll, double cellsize,
                         double nodata) {
  std::string out;
  out += "NCOLS " + std::to_string(n_cols) + "\n";
  out += "NROWS " + std::to_string(n_rows) + "\n";
  out += "XLLCORNER " + shortest_fixed(xll) + "\n";
  out += "YLLCORNER " + shortest_fixed(yll) + "\n";
  out += "CELLSIZE " + shortest_fixed(cellsize) + "\n";
  out += "NODATA_VALUE " + shortest_fixed(nodata) + "\n";
  return out;
}

}  // namespace

AsciiGrid parse_ascii_grid(std::string_view text, std::string_view source) {
  const std::string src(source);
  AsciiGrid g;
  std::array<std::optional<double>, kHeaderKeys.size()> header{};
  std::vector<std::size_t> order;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= text.size()) return std::nullopt;
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    return line;
  };

  // Header: leading lines whose first token starts with a letter.
  std::size_t body_start = 0;
  std::size_t body_line = 1;
  while (true) {
    const std::size_t line_start = pos;
    const auto line = next_line();
    if (!line) {
      body_start = text.size();
      break;
    }
    const std::string_view t = trim(*line);
    if (t.empty()) continue;
    if (!std::isalpha(static_cast<unsigned char>(t.front()))) {
      body_start = line_start;
      body_line = line_no;
      break;
    }
    const std::size_t split = t.find_first_of(" \t");
    if (split == std::string_view::npos) {
      throw FormatError(src + ":" + std::to_string(line_no) + ": header line has no value");
    }
    const std::string key = lower(t.substr(0, split));
    const std::string_view rest = trim(t.substr(split));
    const auto it = std::find(kHeaderKeys.begin(), kHeaderKeys.end(), key);
    if (it == kHeaderKeys.end()) {
      throw FormatError(src + ":" + std::to_string(line_no) + ": unknown header key '" + key + "'");
    }
    const std::size_t k = static_cast<std::size_t>(it - kHeaderKeys.begin());
    if (header[k]) {
      throw FormatError(src + ":" + std::to_string(line_no) + ": duplicate header key '" + key + "'");
    }
    const auto v = parse_double(rest);
    if (!v || !std::isfinite(*v)) {
      throw FormatError(src + ":" + std::to_string(line_no) + ": bad value for '" + key + "'");
    }
    header[k] = *v;
    order.push_back(k);
  }

  for (std::size_t k = 0; k < kHeaderKeys.size(); ++k) {
    if (!header[k]) {
      throw FormatError(src + ": missing header key '" + std::string(kHeaderKeys[k]) + "'");
    }
  }
  if (!std::is_sorted(order.begin(), order.end())) {
    g.warnings.push_back(src + ": header keys are not in the conventional order");
  }

  auto as_count = [&](std::size_t k) {
    const double v = *header[k];
    if (v < 1.0 || v != std::floor(v) || v > 1e9) {
      throw FormatError(src + ": '" + std::string(kHeaderKeys[k]) + "' must be a positive integer");
    }
    return static_cast<int>(v);
  };
  g.n_cols = as_count(0);
  g.n_rows = as_count(1);
  g.xllcorner = *header[2];
  g.yllcorner = *header[3];
  g.cellsize = *header[4];
  g.nodata = *header[5];
  if (!(g.cellsize > 0.0)) throw FormatError(src + ": CELLSIZE must be positive");

  const std::size_t expected = static_cast<std::size_t>(g.n_cols) * static_cast<std::size_t>(g.n_rows);
  std::vector<double> file_order;
  file_order.reserve(expected);
  std::size_t line = body_line;
  const char* p = text.data() + body_start;
  const char* const end = text.data() + text.size();
  while (p < end) {
    if (*p == '\n') ++line;
    if (std::isspace(static_cast<unsigned char>(*p))) {
      ++p;
      continue;
    }
    const char* tok_end = p;
    while (tok_end < end && !std::isspace(static_cast<unsigned char>(*tok_end))) ++tok_end;
    const auto v = parse_double(std::string_view(p, static_cast<std::size_t>(tok_end - p)));
    if (!v || !std::isfinite(*v)) {
      throw FormatError(src + ":" + std::to_string(line) + ": bad cell value '" +
                        std::string(p, tok_end) + "'");
    }
    file_order.push_back(*v);
    p = tok_end;
  }
  if (file_order.size() != expected) {
    throw TruncationError(src + ": expected " + std::to_string(expected) + " cell values, found " +
                          std::to_string(file_order.size()));
  }

  // File rows run top-down; storage runs bottom-up.
  g.values.resize(expected);
  const auto cols = static_cast<std::size_t>(g.n_cols);
  for (int fr = 0; fr < g.n_rows; ++fr) {
    const auto r = static_cast<std::size_t>(g.n_rows - 1 - fr);
    std::copy_n(file_order.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(fr) * cols),
                cols, g.values.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  return g;
}

AsciiGrid read_ascii_file(const std::filesystem::path& path) {
  return parse_ascii_grid(read_text_file(path), path.string());
}

BinaryRaster to_binary_raster(const AsciiGrid& g) {
  BinaryRaster r = BinaryRaster::filled(g.xllcorner, g.yllcorner, g.cellsize, g.n_cols, g.n_rows, 0);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double v = g.values[i];
    if (g.is_nodata(i)) {
      r.values[i] = kNoData;
    } else if (v == 0.0) {
      r.values[i] = 0;
    } else if (v == 1.0) {
      r.values[i] = 1;
    } else {
      const auto cols = static_cast<std::size_t>(g.n_cols);
      throw ValidationError("binary raster cell (col " + std::to_string(i % cols) + ", row " +
                            std::to_string(i / cols) + ") holds " + shortest(v) +
                            "; expected 0, 1 or nodata");
    }
  }
  return r;
}

PopulationGrid to_population_grid(const AsciiGrid& g) {
  PopulationGrid out(geo::TileGrid(g.xllcorner, g.yllcorner, g.cellsize, g.n_cols, g.n_rows));
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (g.is_nodata(i) || g.values[i] < 0.0) {
      throw ValidationError("population grid cell " + std::to_string(i) +
                            " is nodata or negative");
    }
    out.values[i] = g.values[i];
  }
  return out;
}

BinaryRaster read_ascii_grid(const std::filesystem::path& path) {
  return to_binary_raster(read_ascii_file(path));
}

PopulationGrid read_population_grid(const std::filesystem::path& path) {
  return to_population_grid(read_ascii_file(path));
}

std::string format_ascii_grid(const BinaryRaster& r) {
  std::string out = header_block(r.n_cols, r.n_rows, r.origin_x, r.origin_y, r.pixel_size, kAsciiNoData);
  const std::string nodata = shortest_fixed(kAsciiNoData);
  out.reserve(out.size() + r.values.size() * 2 + nodata.size() * 8);
  for (int row = r.n_rows - 1; row >= 0; --row) {
    for (int col = 0; col < r.n_cols; ++col) {
      if (col) out += ' ';
      const std::uint8_t v = r.at(col, row);
      if (v == kNoData) {
        out += nodata;
      } else {
        out += v ? '1' : '0';
      }
    }
    out += '\n';
  }
  return out;
}

std::string format_ascii_grid(const PopulationGrid& pg) {
  const geo::TileGrid& g = pg.grid;
  std::string out = header_block(g.n_cols(), g.n_rows(), g.origin_x(), g.origin_y(), g.tile_size(),
                                 kAsciiNoData);
  for (int row = g.n_rows() - 1; row >= 0; --row) {
    for (int col = 0; col < g.n_cols(); ++col) {
      if (col) out += ' ';
      out += format_real(pg.values[g.linear({col, row})]);
    }
    out += '\n';
  }
  return out;
}

void write_ascii_grid(const BinaryRaster& raster, const std::filesystem::path& path) {
  write_text_file(path, format_ascii_grid(raster));
}

void write_ascii_grid(const PopulationGrid& grid, const std::filesystem::path& path) {
  write_text_file(path, format_ascii_grid(grid));
}

std::string format_real(double value) {
  if (value == 0.0) return "0.000000";
  std::string s = shortest_fixed(value);
  const std::size_t dot = s.find('.');
  if (dot == std::string::npos) {
    s += ".000000";
  } else if (const std::size_t decimals = s.size() - dot - 1; decimals < 6) {
    s.append(6 - decimals, '0');
  }
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace popgrid::io
