#include "plyplan/assignment.hpp"

#include <algorithm>
#include <numbers>

#include "plyplan/errors.hpp"
#include "plyplan/geometry.hpp"

namespace plyplan {

bool material_compatible(const GripperUnit& gripper, const Ply& ply) {
  return !(gripper.method == GripMethod::kVacuum && ply.material.air_permeable);
}

namespace {

bool can_handle(const GripperUnit& g, const Ply& ply) {
  if (!material_compatible(g, ply)) return false;
  return ply.curvature != Curvature::kSingle || g.deformable;
}

}  // namespace

std::vector<GripperConfiguration> assign_grippers(const Ply& ply, const CellLayout& cell) {
  if (ply.curvature == Curvature::kDouble) {
    throw UnsupportedCurvature("ply '" + ply.id + "' is doubly curved");
  }
  const BoundingRect rect = min_enclosing_rectangle(ply.polygon);
  const Thresholds& th = cell.thresholds;

  std::vector<const GripperUnit*> usable;
  for (const GripperUnit& g : cell.grippers) {
    if (cell.robot_of(g.id) && can_handle(g, ply)) usable.push_back(&g);
  }
  std::sort(usable.begin(), usable.end(),
            [](const GripperUnit* a, const GripperUnit* b) { return a->id < b->id; });

  std::vector<GripperConfiguration> out;
  if (rect.length <= th.single_gripper_max_len_m) {
    for (const GripperUnit* g : usable) {
      GripperConfiguration c;
      c.ply_id = ply.id;
      c.gripper_ids = {g->id};
      c.robot_ids = {cell.robots[*cell.robot_of(g->id)].id};
      c.poses = {{rect.center.x, rect.center.y, rect.angle}};
      out.push_back(std::move(c));
    }
  }
  if (rect.length >= th.pair_min_len_m) {
    const Vec2 axis = rect.long_axis();
    const double across = rect.angle + std::numbers::pi / 2.0;
    for (std::size_t a = 0; a < usable.size(); ++a) {
      for (std::size_t b = a + 1; b < usable.size(); ++b) {
        const std::size_t ra = *cell.robot_of(usable[a]->id);
        const std::size_t rb = *cell.robot_of(usable[b]->id);
        if (ra == rb) continue;
        const Vec2 pa = rect.center - (rect.length / 2.0 - usable[a]->width / 2.0) * axis;
        const Vec2 pb = rect.center + (rect.length / 2.0 - usable[b]->width / 2.0) * axis;
        GripperConfiguration c;
        c.ply_id = ply.id;
        c.gripper_ids = {usable[a]->id, usable[b]->id};
        c.robot_ids = {cell.robots[std::min(ra, rb)].id, cell.robots[std::max(ra, rb)].id};
        c.poses = {{pa.x, pa.y, across}, {pb.x, pb.y, across}};
        c.team = true;
        out.push_back(std::move(c));
      }
    }
  }
  if (out.empty()) throw NoFeasibleConfiguration("no gripper configuration for ply '" + ply.id + "'");
  return out;
}

ConfigTable assign_book(const Plybook& book, const CellLayout& cell) {
  ConfigTable table;
  table.reserve(book.size());
  for (const Ply& ply : book.plies) {
    try {
      table.push_back(assign_grippers(ply, cell));
    } catch (const NoFeasibleConfiguration&) {
      table.emplace_back();
    } catch (const UnsupportedCurvature&) {
      table.emplace_back();
    }
  }
  return table;
}

Json config_to_json(const GripperConfiguration& config) {
  Json poses = Json::array();
  for (const GripPose& p : config.poses) poses.push_back({{"x", p.x}, {"y", p.y}, {"theta", p.theta}});
  return {{"grippers", config.gripper_ids},
          {"robots", config.robot_ids},
          {"poses", std::move(poses)},
          {"team", config.team}};
}

GripperConfiguration config_from_json(const Json& j, const std::string& ply_id) {
  try {
    GripperConfiguration c;
    c.ply_id = ply_id;
    c.gripper_ids = j.at("grippers").get<std::vector<std::string>>();
    c.robot_ids = j.at("robots").get<std::vector<std::string>>();
    for (const Json& p : j.at("poses")) {
      c.poses.push_back({p.at("x").get<double>(), p.at("y").get<double>(), p.at("theta").get<double>()});
    }
    c.team = j.at("team").get<bool>();
    if (c.gripper_ids.empty() || c.gripper_ids.size() > 2 || c.poses.size() != c.gripper_ids.size() ||
        c.robot_ids.empty() || c.robot_ids.size() > 2 || c.team != (c.robot_ids.size() == 2)) {
      throw ParseError("inconsistent configuration for ply '" + ply_id + "'");
    }
    return c;
  } catch (const Json::exception& e) {
    throw ParseError("configuration for ply '" + ply_id + "': " + e.what());
  }
}

Json config_table_to_json(const Plybook& book, const ConfigTable& table) {
  Json out = Json::array();
  for (std::size_t i = 0; i < book.size(); ++i) {
    Json configs = Json::array();
    for (const GripperConfiguration& c : table[i]) configs.push_back(config_to_json(c));
    out.push_back({{"ply_id", book.plies[i].id}, {"configs", std::move(configs)}});
  }
  return out;
}

ConfigTable config_table_from_json(const Json& j, const Plybook& book) {
  if (!j.is_array() || j.size() != book.size()) {
    throw ParseError("configuration table does not match the plybook");
  }
  ConfigTable table(book.size());
  for (std::size_t i = 0; i < book.size(); ++i) {
    const Json& entry = j[i];
    if (!entry.is_object() || !entry.contains("ply_id") || !entry.contains("configs") ||
        entry["ply_id"] != book.plies[i].id) {
      throw ParseError("configuration table entry " + std::to_string(i) + " does not match ply '" +
                       book.plies[i].id + "'");
    }
    for (const Json& c : entry["configs"]) table[i].push_back(config_from_json(c, book.plies[i].id));
  }
  return table;
}

}  // namespace plyplan
