#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plyplan {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Ordered vertex list, counter-clockwise, in meters (table frame).
using Polygon = std::vector<Vec2>;

enum class Curvature { kFlat, kSingle, kDouble };

struct Material {
  bool air_permeable = false;
  std::string name;

  friend bool operator==(const Material&, const Material&) = default;
};

struct Frame {
  std::array<double, 3> position{};  // x, y, z in meters, cell frame
  std::array<double, 3> rpy{};       // roll, pitch, yaw in radians

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Ply {
  std::string id;
  Polygon polygon;
  int layer = 0;
  Curvature curvature = Curvature::kFlat;
  Material material;
  Frame drop_frame;

  friend bool operator==(const Ply&, const Ply&) = default;
};

struct Plybook {
  std::vector<Ply> plies;

  std::size_t size() const { return plies.size(); }
  friend bool operator==(const Plybook&, const Plybook&) = default;
};

enum class GripMethod { kVacuum, kVolumeFlow, kNeedles };

struct GripperUnit {
  std::string id;
  double length = 0.0;  // long axis, meters
  double width = 0.0;
  bool deformable = false;
  GripMethod method = GripMethod::kVacuum;

  friend bool operator==(const GripperUnit&, const GripperUnit&) = default;
};

struct Robot {
  std::string id;
  std::vector<std::string> gripper_ids;

  friend bool operator==(const Robot&, const Robot&) = default;
};

struct Durations {
  double pick_s = 10.0;
  double place_s = 20.0;
  double drive_s = 5.0;

  friend bool operator==(const Durations&, const Durations&) = default;
};

struct Thresholds {
  double single_gripper_max_len_m = 0.8;
  double pair_min_len_m = 0.6;
  double overlap_eps_m2 = 1e-4;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct CellLayout {
  std::vector<Robot> robots;
  std::vector<GripperUnit> grippers;
  Durations durations;
  Thresholds thresholds;

  const GripperUnit* find_gripper(std::string_view id) const;
  // Index into robots of the robot carrying the gripper, if any.
  std::optional<std::size_t> robot_of(std::string_view gripper_id) const;

  friend bool operator==(const CellLayout&, const CellLayout&) = default;
};

std::string_view to_string(Curvature c);
std::string_view to_string(GripMethod m);

// Parse from JSON text. `origin` prefixes error messages (usually the path).
Plybook parse_plybook(std::string_view json_text, std::string_view origin = "<plybook>");
CellLayout parse_cell(std::string_view json_text, std::string_view origin = "<cell>");

Plybook load_plybook(const std::filesystem::path& path);
CellLayout load_cell(const std::filesystem::path& path);

// Canonical serialization: sorted keys, 9 significant digits.
std::string plybook_to_json(const Plybook& book);
std::string cell_to_json(const CellLayout& cell);

void save_plybook(const Plybook& book, const std::filesystem::path& path);
void save_cell(const CellLayout& cell, const std::filesystem::path& path);

// Re-run every plybook/cell invariant; throws InvariantError or ParseError.
void validate(const Plybook& book);
void validate(const CellLayout& cell);

// Deterministic synthetic plybook of n jittered rectangles. For n >= 3 the
// result contains at least one overlapping and one disjoint pair.
Plybook generate_plybook(int n, std::uint64_t seed);

// The two-robot reference cell: one 1.2 m x 0.3 m deformable vacuum gripper
// per robot, durations {10, 20, 5} s, thresholds {0.8 m, 0.6 m, 1e-4 m^2}.
CellLayout default_cell();

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace plyplan
