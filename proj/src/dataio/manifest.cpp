#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "textforge/dataio.hpp"
#include "textforge/errors.hpp"

namespace textforge {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Parabola: return "parabola";
    case CurveKind::Circle: return "circle";
    default: return "straight";
  }
}

CurveKind curve_kind_from_string(const std::string& s) {
  if (s == "straight") return CurveKind::Straight;
  if (s == "parabola") return CurveKind::Parabola;
  if (s == "circle") return CurveKind::Circle;
  throw ManifestError("unknown curve kind '" + s + "'");
}

namespace {

Json point_json(Point2 p) { return Json::array({p.x, p.y}); }

template <typename Range>
Json points_json(const Range& pts) {
  Json arr = Json::array();
  for (const Point2& p : pts) arr.push_back(point_json(p));
  return arr;
}

Point2 point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ManifestError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <std::size_t N>
std::array<Point2, N> fixed_points(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != N)
    throw ManifestError(std::string(what) + " must hold " + std::to_string(N) + " points");
  std::array<Point2, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = point_from(j[i]);
  return out;
}

}  // namespace

std::string serialize_record(const SampleRecord& rec) {
  Json j;
  j["id"] = rec.id;
  j["image"] = rec.image_path;
  j["text"] = rec.text;
  if (rec.polygon) {
    j["polygon"] = points_json(rec.polygon->fiducials());
    j["top"] = points_json(rec.polygon->top);
    j["bottom"] = points_json(rec.polygon->bottom);
  } else {
    j["polygon"] = nullptr;
    j["top"] = nullptr;
    j["bottom"] = nullptr;
  }
  if (rec.char_boxes) {
    Json boxes = Json::array();
    for (const Quad& q : *rec.char_boxes) boxes.push_back(points_json(q));
    j["char_boxes"] = std::move(boxes);
  } else {
    j["char_boxes"] = nullptr;
  }
  if (rec.curve) {
    Json c;
    c["kind"] = to_string(rec.curve->kind);
    if (rec.curve->kind == CurveKind::Parabola) c["alpha"] = rec.curve->alpha;
    if (rec.curve->kind == CurveKind::Circle) {
      c["bend_angle"] = rec.curve->bend_angle;
      c["concavity"] = rec.curve->concavity == Concavity::Up ? "up" : "down";
    }
    j["curve"] = std::move(c);
  } else {
    j["curve"] = nullptr;
  }
  j["is_curved"] = rec.is_curved;
  return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

SampleRecord parse_record(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ManifestError(std::string("malformed manifest line: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("manifest line is not an object");
  try {
    SampleRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.image_path = j.at("image").get<std::string>();
    rec.text = j.value("text", std::string{});
    const auto has = [&](const char* key) { return j.contains(key) && !j[key].is_null(); };
    if (has("top") && has("bottom")) {
      ControlPolygon poly;
      poly.top = fixed_points<kChainPoints>(j["top"], "top");
      poly.bottom = fixed_points<kChainPoints>(j["bottom"], "bottom");
      rec.polygon = poly;
    } else if (has("polygon")) {
      const auto pts = fixed_points<kFiducials>(j["polygon"], "polygon");
      rec.polygon = ControlPolygon::from_fiducials(pts);
    }
    if (has("char_boxes")) {
      std::vector<Quad> boxes;
      for (const Json& b : j["char_boxes"]) boxes.push_back(fixed_points<4>(b, "char box"));
      rec.char_boxes = std::move(boxes);
    }
    if (has("curve")) {
      const Json& c = j["curve"];
      CurveSpec curve;
      curve.kind = curve_kind_from_string(c.at("kind").get<std::string>());
      curve.alpha = c.value("alpha", 0.0);
      curve.bend_angle = c.value("bend_angle", 0.0);
      if (curve.kind == CurveKind::Parabola)
        curve.concavity = curve.alpha >= 0.0 ? Concavity::Down : Concavity::Up;
      else
        curve.concavity = c.value("concavity", std::string("up")) == "down" ? Concavity::Down : Concavity::Up;
      rec.curve = curve;
    }
    rec.is_curved = j.value("is_curved", false);
    return rec;
  } catch (const Json::exception& e) {
    throw ManifestError(std::string("invalid manifest record: ") + e.what());
  }
}

std::string serialize_manifest(const Manifest& m) {
  std::string out;
  for (const auto& rec : m.records) {
    out += serialize_record(rec);
    out += '\n';
  }
  return out;
}

Manifest parse_manifest(std::string_view text, std::string source_name, Split split) {
  Manifest m{std::move(source_name), split, {}};
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      m.records.push_back(parse_record(line));
    } catch (const ManifestError& e) {
      throw ManifestError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return m;
}

Manifest read_manifest(const fs::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), path.stem().string(), split);
}

void write_manifest(const fs::path& path, const Manifest& m) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ManifestError("cannot write manifest " + path.string());
  out << serialize_manifest(m);
}

void validate_manifest(const Manifest& m, const fs::path& base_dir) {
  std::set<std::string> seen;
  for (const auto& rec : m.records) {
    if (!seen.insert(rec.id).second) throw ManifestError("duplicate record id '" + rec.id + "'");
    if (!fs::exists(base_dir / rec.image_path))
      throw ManifestError("record '" + rec.id + "': missing image " + (base_dir / rec.image_path).string());
  }
}

}  // namespace textforge
