#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "plyplan/scheduler.hpp"

namespace plyplan {

using RobotIds = std::array<std::string, kRobotCount>;

RobotIds robot_ids(const CellLayout& cell);

// Self-contained plan file: the schedule plus what is needed to export it
// without the cell (robot ids and the configuration table).
struct PlanFile {
  std::string strategy;
  bool optimal = false;
  RobotIds robots;
  ConfigTable configs;
  Schedule schedule;
};

PlanFile make_plan_file(const PlanningModel& model, const Schedule& schedule, std::string strategy,
                        bool optimal);

std::string plan_to_json(const PlanFile& plan, const Plybook& book);
// Throws ParseError.
PlanFile plan_from_json(std::string_view text, const Plybook& book);

// One step per sub-action, sorted by start time. Picks carry grip poses,
// places carry the drop frame.
std::string export_sim(const Schedule& s, const Plybook& book, const ConfigTable& configs,
                       const RobotIds& robots);

// One lane per robot, one bar per sub-action labeled "action/ply".
std::string render_gantt(const Schedule& s, const Plybook& book, const RobotIds& robots);

struct ReportRow {
  Strategy strategy = Strategy::kSequential;
  std::string status;  // "ok" or the error kind
  std::string message;
  double makespan = 0.0;
  std::size_t actions = 0;
  std::size_t parallel = 0;
  bool optimal = false;
};

// Runs every strategy; a failing strategy yields an error row.
std::vector<ReportRow> run_report(const Plybook& book, const CellLayout& cell,
                                  const std::vector<Strategy>& strategies,
                                  const SearchOptions& options = {});
std::string format_report(const std::vector<ReportRow>& rows);

std::string report(const Plybook& book, const CellLayout& cell, const std::vector<Strategy>& strategies,
                   const SearchOptions& options = {});

}  // namespace plyplan
