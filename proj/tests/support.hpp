#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "plyplan/assignment.hpp"
#include "plyplan/dependency.hpp"
#include "plyplan/geometry.hpp"
#include "plyplan/model.hpp"
#include "plyplan/planning_model.hpp"
#include "plyplan/scheduler.hpp"

namespace plyplan::test {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(PLYPLAN_TEST_DATA) / name;
}

inline Polygon rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

inline Ply make_ply(std::string id, Polygon polygon, int layer, Curvature curvature = Curvature::kFlat) {
  Ply p;
  p.id = std::move(id);
  p.polygon = std::move(polygon);
  p.layer = layer;
  p.curvature = curvature;
  p.material = {false, "carbon-ncf"};
  p.drop_frame.position = {0.0, 2.0, 0.5};
  return p;
}

inline Plybook make_book(std::vector<Ply> plies) { return Plybook{std::move(plies)}; }

// Two 0.4 x 0.3 plies far apart: single-robot, no dependency.
inline Plybook independent_pair() {
  return make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0), make_ply("P1", rect(1, 0, 1.4, 0.3), 1)});
}

// Same sizes, overlapping: P0 before P1.
inline Plybook dependent_pair() {
  return make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0), make_ply("P1", rect(0.2, 0, 0.6, 0.3), 1)});
}

// 1.5 x 0.4: only the two-robot team configuration fits.
inline Plybook team_ply() { return make_book({make_ply("P0", rect(0, 0, 1.5, 0.4), 0)}); }

inline PlanningModel model_of(const Plybook& book) { return make_model(book, default_cell()); }

}  // namespace plyplan::test

namespace plyplan::test {

// Message of the expected exception type; empty if nothing was thrown.
template <typename E, typename F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return {};
}

}  // namespace plyplan::test
