#include "plyplan/model.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

#include "plyplan/errors.hpp"
#include "plyplan/geometry.hpp"
#include "plyplan/json_format.hpp"

namespace plyplan {

const GripperUnit* CellLayout::find_gripper(std::string_view id) const {
  for (const GripperUnit& g : grippers) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

std::optional<std::size_t> CellLayout::robot_of(std::string_view gripper_id) const {
  for (std::size_t r = 0; r < robots.size(); ++r) {
    for (const std::string& g : robots[r].gripper_ids) {
      if (g == gripper_id) return r;
    }
  }
  return std::nullopt;
}

std::string_view to_string(Curvature c) {
  switch (c) {
    case Curvature::kFlat: return "flat";
    case Curvature::kSingle: return "single";
    case Curvature::kDouble: return "double";
  }
  return "?";
}

std::string_view to_string(GripMethod m) {
  switch (m) {
    case GripMethod::kVacuum: return "vacuum";
    case GripMethod::kVolumeFlow: return "volume_flow";
    case GripMethod::kNeedles: return "needles";
  }
  return "?";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

namespace {

// Schema reader that reports the JSON path of the offending field.
class Reader {
 public:
  explicit Reader(std::string_view origin) : origin_(origin) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(origin_ + ": " + path + ": " + what);
  }

  const Json& field(const Json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing field");
    return *it;
  }

  const Json& array(const Json& obj, const std::string& path, const char* key) const {
    const Json& v = field(obj, path, key);
    if (!v.is_array()) fail(path + "." + key, "expected array");
    return v;
  }

  double number(const Json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected finite number");
    return d;
  }

  double number(const Json& obj, const std::string& path, const char* key) const {
    return number(field(obj, path, key), path + "." + key);
  }

  std::string string(const Json& obj, const std::string& path, const char* key) const {
    const Json& v = field(obj, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected string");
    return v.get<std::string>();
  }

  bool boolean(const Json& obj, const std::string& path, const char* key) const {
    const Json& v = field(obj, path, key);
    if (!v.is_boolean()) fail(path + "." + key, "expected boolean");
    return v.get<bool>();
  }

  std::array<double, 3> triple(const Json& obj, const std::string& path, const char* key) const {
    const Json& v = array(obj, path, key);
    const std::string p = path + "." + key;
    if (v.size() != 3) fail(p, "expected 3 numbers");
    return {number(v[0], p + "[0]"), number(v[1], p + "[1]"), number(v[2], p + "[2]")};
  }

  Json parse(std::string_view text) const {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ParseError(origin_ + ": malformed JSON: " + e.what());
    }
  }

 private:
  std::string origin_;
};

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

Curvature parse_curvature(const Reader& rd, const std::string& s, const std::string& path) {
  if (s == "flat") return Curvature::kFlat;
  if (s == "single") return Curvature::kSingle;
  if (s == "double") return Curvature::kDouble;
  rd.fail(path, "unknown curvature '" + s + "'");
}

GripMethod parse_method(const Reader& rd, const std::string& s, const std::string& path) {
  if (s == "vacuum") return GripMethod::kVacuum;
  if (s == "volume_flow") return GripMethod::kVolumeFlow;
  if (s == "needles") return GripMethod::kNeedles;
  rd.fail(path, "unknown gripping method '" + s + "'");
}

Json triple_json(const std::array<double, 3>& v) { return Json::array({v[0], v[1], v[2]}); }

}  // namespace

void validate(const Plybook& book) {
  if (book.plies.empty()) throw InvariantError("plybook is empty");
  std::set<std::string> ids;
  std::set<int> layers;
  for (const Ply& ply : book.plies) {
    if (ply.id.empty()) throw InvariantError("ply with empty id");
    if (!ids.insert(ply.id).second) throw InvariantError("duplicate ply id '" + ply.id + "'");
    if (ply.layer < 0) throw InvariantError("ply '" + ply.id + "': negative layer");
    if (!layers.insert(ply.layer).second) {
      throw InvariantError("duplicate layer " + std::to_string(ply.layer) + " (ply '" + ply.id +
                           "')");
    }
    if (ply.polygon.size() < 3) {
      throw InvariantError("ply '" + ply.id + "': polygon needs at least 3 vertices");
    }
    if (!is_simple(ply.polygon)) {
      throw InvariantError("ply '" + ply.id + "': polygon is self-intersecting");
    }
    const double area = signed_area(ply.polygon);
    if (area <= kMinArea) {
      throw InvariantError("ply '" + ply.id + "': polygon must be counter-clockwise with positive area");
    }
  }
}

void validate(const CellLayout& cell) {
  std::set<std::string> gripper_ids;
  for (const GripperUnit& g : cell.grippers) {
    if (g.id.empty()) throw InvariantError("gripper with empty id");
    if (!gripper_ids.insert(g.id).second) {
      throw InvariantError("duplicate gripper id '" + g.id + "'");
    }
    if (!(g.length > 0.0) || !(g.width > 0.0) || g.length < g.width) {
      throw InvariantError("gripper '" + g.id + "': need length >= width > 0");
    }
  }
  if (cell.robots.size() != 2) throw InvariantError("exactly 2 robots required");
  std::set<std::string> robot_ids;
  std::set<std::string> mounted;
  for (const Robot& r : cell.robots) {
    if (r.id.empty()) throw InvariantError("robot with empty id");
    if (!robot_ids.insert(r.id).second) throw InvariantError("duplicate robot id '" + r.id + "'");
    if (r.gripper_ids.empty()) throw InvariantError("robot '" + r.id + "' carries no gripper");
    for (const std::string& g : r.gripper_ids) {
      if (!gripper_ids.contains(g)) {
        throw ParseError("robot '" + r.id + "': unresolved reference to gripper '" + g + "'");
      }
      if (!mounted.insert(g).second) {
        throw InvariantError("gripper '" + g + "' mounted more than once");
      }
    }
  }
  const Durations& d = cell.durations;
  if (!(d.pick_s > 0.0) || !(d.place_s > 0.0) || !(d.drive_s > 0.0)) {
    throw InvariantError("durations must be positive");
  }
  const Thresholds& t = cell.thresholds;
  if (!(t.single_gripper_max_len_m > 0.0) || !(t.pair_min_len_m > 0.0) ||
      !(t.overlap_eps_m2 > 0.0)) {
    throw InvariantError("thresholds must be positive");
  }
}

Plybook parse_plybook(std::string_view json_text, std::string_view origin) {
  const Reader rd(origin);
  const Json root = rd.parse(json_text);
  const Json& plies = rd.array(root, "$", "plies");
  Plybook book;
  for (std::size_t i = 0; i < plies.size(); ++i) {
    const std::string path = index_path("$.plies", i);
    const Json& jp = plies[i];
    Ply ply;
    ply.id = rd.string(jp, path, "id");
    const Json& poly = rd.array(jp, path, "polygon");
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const std::string vp = index_path(path + ".polygon", k);
      if (!poly[k].is_array() || poly[k].size() != 2) rd.fail(vp, "expected [x, y]");
      ply.polygon.push_back({rd.number(poly[k][0], vp + "[0]"), rd.number(poly[k][1], vp + "[1]")});
    }
    const Json& layer = rd.field(jp, path, "layer");
    if (!layer.is_number_integer()) rd.fail(path + ".layer", "expected integer");
    ply.layer = layer.get<int>();
    ply.curvature = parse_curvature(rd, rd.string(jp, path, "curvature"), path + ".curvature");
    const Json& mat = rd.field(jp, path, "material");
    ply.material.air_permeable = rd.boolean(mat, path + ".material", "air_permeable");
    ply.material.name = rd.string(mat, path + ".material", "name");
    const Json& frame = rd.field(jp, path, "drop_frame");
    ply.drop_frame.position = rd.triple(frame, path + ".drop_frame", "position");
    ply.drop_frame.rpy = rd.triple(frame, path + ".drop_frame", "rpy");
    book.plies.push_back(std::move(ply));
  }
  validate(book);
  return book;
}

CellLayout parse_cell(std::string_view json_text, std::string_view origin) {
  const Reader rd(origin);
  const Json root = rd.parse(json_text);
  CellLayout cell;
  const Json& grippers = rd.array(root, "$", "grippers");
  for (std::size_t i = 0; i < grippers.size(); ++i) {
    const std::string path = index_path("$.grippers", i);
    GripperUnit g;
    g.id = rd.string(grippers[i], path, "id");
    g.length = rd.number(grippers[i], path, "length_m");
    g.width = rd.number(grippers[i], path, "width_m");
    g.deformable = rd.boolean(grippers[i], path, "deformable");
    g.method = parse_method(rd, rd.string(grippers[i], path, "method"), path + ".method");
    cell.grippers.push_back(std::move(g));
  }
  const Json& robots = rd.array(root, "$", "robots");
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const std::string path = index_path("$.robots", i);
    Robot r;
    r.id = rd.string(robots[i], path, "id");
    const Json& ids = rd.array(robots[i], path, "grippers");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!ids[k].is_string()) rd.fail(index_path(path + ".grippers", k), "expected string");
      const std::string gid = ids[k].get<std::string>();
      if (cell.find_gripper(gid) == nullptr) {
        rd.fail(index_path(path + ".grippers", k), "unresolved reference to gripper '" + gid + "'");
      }
      r.gripper_ids.push_back(gid);
    }
    cell.robots.push_back(std::move(r));
  }
  const Json& dur = rd.field(root, "$", "durations");
  cell.durations.pick_s = rd.number(dur, "$.durations", "pick_s");
  cell.durations.place_s = rd.number(dur, "$.durations", "place_s");
  cell.durations.drive_s = rd.number(dur, "$.durations", "drive_s");
  const Json& th = rd.field(root, "$", "thresholds");
  cell.thresholds.single_gripper_max_len_m = rd.number(th, "$.thresholds", "single_gripper_max_len_m");
  cell.thresholds.pair_min_len_m = rd.number(th, "$.thresholds", "pair_min_len_m");
  cell.thresholds.overlap_eps_m2 = rd.number(th, "$.thresholds", "overlap_eps_m2");
  validate(cell);
  return cell;
}

Plybook load_plybook(const std::filesystem::path& path) {
  return parse_plybook(read_text_file(path), path.string());
}

CellLayout load_cell(const std::filesystem::path& path) {
  return parse_cell(read_text_file(path), path.string());
}

std::string plybook_to_json(const Plybook& book) {
  Json plies = Json::array();
  for (const Ply& ply : book.plies) {
    Json poly = Json::array();
    for (const Vec2& p : ply.polygon) poly.push_back(Json::array({p.x, p.y}));
    plies.push_back({
        {"id", ply.id},
        {"polygon", std::move(poly)},
        {"layer", ply.layer},
        {"curvature", std::string(to_string(ply.curvature))},
        {"material", {{"air_permeable", ply.material.air_permeable}, {"name", ply.material.name}}},
        {"drop_frame",
         {{"position", triple_json(ply.drop_frame.position)},
          {"rpy", triple_json(ply.drop_frame.rpy)}}},
    });
  }
  return canonical_dump(Json{{"plies", std::move(plies)}});
}

std::string cell_to_json(const CellLayout& cell) {
  Json robots = Json::array();
  for (const Robot& r : cell.robots) robots.push_back({{"id", r.id}, {"grippers", r.gripper_ids}});
  Json grippers = Json::array();
  for (const GripperUnit& g : cell.grippers) {
    grippers.push_back({{"id", g.id},
                        {"length_m", g.length},
                        {"width_m", g.width},
                        {"deformable", g.deformable},
                        {"method", std::string(to_string(g.method))}});
  }
  const Durations& d = cell.durations;
  const Thresholds& t = cell.thresholds;
  return canonical_dump(Json{
      {"robots", std::move(robots)},
      {"grippers", std::move(grippers)},
      {"durations", {{"pick_s", d.pick_s}, {"place_s", d.place_s}, {"drive_s", d.drive_s}}},
      {"thresholds",
       {{"single_gripper_max_len_m", t.single_gripper_max_len_m},
        {"pair_min_len_m", t.pair_min_len_m},
        {"overlap_eps_m2", t.overlap_eps_m2}}},
  });
}

void save_plybook(const Plybook& book, const std::filesystem::path& path) {
  write_text_file(path, plybook_to_json(book));
}

void save_cell(const CellLayout& cell, const std::filesystem::path& path) {
  write_text_file(path, cell_to_json(cell));
}

namespace {

// splitmix64 with a fixed 53-bit mantissa mapping; identical on every
// platform, unlike the <random> distributions.
class UnitRng {
 public:
  explicit UnitRng(std::uint64_t seed) : state_(seed) {}

  double next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::uint64_t state_;
};

// 0.1 mm grid; keeps every coordinate exactly representable in 9 digits.
double quantize(double v) { return std::round(v * 1e4) / 1e4; }

constexpr double kTableX = 3.0;
constexpr double kTableY = 1.6;
constexpr double kGeneratorOverlap = 1e-3;

Ply random_ply(UnitRng& rng, int index, int digits) {
  const double length = rng.uniform(0.2, 0.75);
  const double width = rng.uniform(0.1, std::min(length, 0.45));
  const double theta = rng.uniform(-0.35, 0.35);
  const double cx = rng.uniform(0.4, kTableX - 0.4);
  const double cy = rng.uniform(0.4, kTableY - 0.4);
  const bool curved = rng.next() < 0.3;

  const Vec2 u{std::cos(theta), std::sin(theta)};
  const Vec2 v{-u.y, u.x};
  Ply ply;
  std::ostringstream id;
  id << "P";
  id.width(digits);
  id.fill('0');
  id << index;
  ply.id = id.str();
  for (const auto& [su, sv] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
    const Vec2 p = Vec2{cx, cy} + (su * length / 2.0) * u + (sv * width / 2.0) * v;
    ply.polygon.push_back({quantize(p.x), quantize(p.y)});
  }
  ply.layer = index;
  ply.curvature = curved ? Curvature::kSingle : Curvature::kFlat;
  ply.material = {false, "carbon-ncf"};
  ply.drop_frame.position = {quantize(cx), quantize(cy + 2.0), 0.5};
  ply.drop_frame.rpy = {0.0, 0.0, quantize(theta)};
  return ply;
}

}  // namespace

Plybook generate_plybook(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_plybook: n must be >= 1");
  const int digits = std::max(2, static_cast<int>(std::to_string(n - 1).size()));
  UnitRng rng(seed);
  while (true) {
    Plybook book;
    for (int i = 0; i < n; ++i) book.plies.push_back(random_ply(rng, i, digits));
    if (n < 3) return book;
    bool overlapping = false;
    bool disjoint = false;
    for (int i = 0; i < n && !(overlapping && disjoint); ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double a = overlap_area(book.plies[i].polygon, book.plies[j].polygon);
        overlapping = overlapping || a > kGeneratorOverlap;
        disjoint = disjoint || a == 0.0;
      }
    }
    if (overlapping && disjoint) return book;
  }
}

CellLayout default_cell() {
  CellLayout cell;
  cell.grippers = {{"G1", 1.2, 0.3, true, GripMethod::kVacuum},
                   {"G2", 1.2, 0.3, true, GripMethod::kVacuum}};
  cell.robots = {{"R1", {"G1"}}, {"R2", {"G2"}}};
  return cell;
}

}  // namespace plyplan
