#pragma once

#include <string>
#include <vector>

#include "plyplan/json_format.hpp"
#include "plyplan/model.hpp"

namespace plyplan {

struct GripPose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  friend bool operator==(const GripPose&, const GripPose&) = default;
};

// One feasible way to handle a ply: a single gripper, or a two-gripper team
// spread over both robots. poses[k] belongs to gripper_ids[k].
struct GripperConfiguration {
  std::string ply_id;
  std::vector<std::string> gripper_ids;
  std::vector<std::string> robot_ids;  // in cell order
  std::vector<GripPose> poses;
  bool team = false;

  friend bool operator==(const GripperConfiguration&, const GripperConfiguration&) = default;
};

// Configurations per ply, indexed like Plybook::plies.
using ConfigTable = std::vector<std::vector<GripperConfiguration>>;

// Vacuum cannot hold air-permeable material; other methods handle anything.
bool material_compatible(const GripperUnit& gripper, const Ply& ply);

// Single configurations first, then pairs, each sorted by gripper id(s).
// Throws UnsupportedCurvature for doubly curved plies and
// NoFeasibleConfiguration when nothing fits.
std::vector<GripperConfiguration> assign_grippers(const Ply& ply, const CellLayout& cell);

// assign_grippers for every ply. Plies that cannot be handled get an empty list.
ConfigTable assign_book(const Plybook& book, const CellLayout& cell);

Json config_to_json(const GripperConfiguration& config);
GripperConfiguration config_from_json(const Json& j, const std::string& ply_id);

// [{"ply_id": ..., "configs": [...]}, ...]
Json config_table_to_json(const Plybook& book, const ConfigTable& table);
ConfigTable config_table_from_json(const Json& j, const Plybook& book);

}  // namespace plyplan
