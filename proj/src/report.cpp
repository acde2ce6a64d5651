#include "plyplan/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "plyplan/errors.hpp"
#include "plyplan/json_format.hpp"

namespace plyplan {

RobotIds robot_ids(const CellLayout& cell) {
  if (cell.robots.size() != kRobotCount) throw InvariantError("exactly 2 robots required");
  return {cell.robots[0].id, cell.robots[1].id};
}

PlanFile make_plan_file(const PlanningModel& model, const Schedule& schedule, std::string strategy,
                        bool optimal) {
  return {std::move(strategy), optimal, robot_ids(model.cell()), model.configs(), schedule};
}

namespace {

Json robots_json(RobotMask m, const RobotIds& robots) {
  Json out = Json::array();
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    if (m & robot_bit(r)) out.push_back(robots[r]);
  }
  return out;
}

RobotMask robots_from_json(const Json& j, const RobotIds& robots) {
  RobotMask m = 0;
  for (const Json& id : j) {
    const auto it = std::find(robots.begin(), robots.end(), id.get<std::string>());
    if (it == robots.end()) throw ParseError("unknown robot '" + id.get<std::string>() + "'");
    m |= robot_bit(static_cast<std::size_t>(it - robots.begin()));
  }
  return m;
}

template <typename E>
E enum_from_name(const std::string& name, std::initializer_list<E> values) {
  for (E v : values) {
    if (to_string(v) == name) return v;
  }
  throw ParseError("unknown name '" + name + "'");
}

// FNV-1a over the canonical plybook JSON.
std::string book_digest(const Plybook& book) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : plybook_to_json(book)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::size_t ply_index(const Plybook& book, const std::string& id) {
  for (std::size_t i = 0; i < book.size(); ++i) {
    if (book.plies[i].id == id) return i;
  }
  throw ParseError("unknown ply '" + id + "'");
}

}  // namespace

std::string plan_to_json(const PlanFile& plan, const Plybook& book) {
  Json actions = Json::array();
  for (const ActionInstance& a : plan.schedule.actions) {
    Json subs = Json::array();
    for (const SubAction& s : a.subs()) {
      Json sub = {{"op", to_string(s.op)},
                  {"robots", robots_json(s.robots, plan.robots)},
                  {"t_start", s.t_start},
                  {"t_end", s.t_end}};
      if (s.op != Op::kDrive) {
        sub["ply"] = book.plies.at(static_cast<std::size_t>(s.ply)).id;
        sub["config"] = s.config;
      }
      subs.push_back(std::move(sub));
    }
    actions.push_back({{"kind", to_string(a.kind)}, {"t_start", a.t_start}, {"t_end", a.t_end},
                       {"subs", std::move(subs)}});
  }
  Json out = {{"strategy", plan.strategy},
              {"optimal", plan.optimal},
              {"makespan", plan.schedule.makespan},
              {"robots", plan.robots},
              {"book_digest", book_digest(book)},
              {"configs", config_table_to_json(book, plan.configs)},
              {"actions", std::move(actions)}};
  return canonical_dump(out);
}

PlanFile plan_from_json(std::string_view text, const Plybook& book) {
  PlanFile plan;
  try {
    const Json j = Json::parse(text);
    if (j.at("book_digest").get<std::string>() != book_digest(book)) {
      throw ParseError("plan was made for a different plybook");
    }
    plan.strategy = j.at("strategy").get<std::string>();
    plan.optimal = j.at("optimal").get<bool>();
    const auto robots = j.at("robots").get<std::vector<std::string>>();
    if (robots.size() != kRobotCount) throw ParseError("plan must name exactly 2 robots");
    plan.robots = {robots[0], robots[1]};
    plan.configs = config_table_from_json(j.at("configs"), book);
    plan.schedule.makespan = j.at("makespan").get<double>();
    for (const Json& ja : j.at("actions")) {
      ActionInstance a;
      a.kind = enum_from_name<ActionKind>(
          ja.at("kind").get<std::string>(),
          {ActionKind::kPick, ActionKind::kPlace, ActionKind::kDrive, ActionKind::kTeamPick,
           ActionKind::kTeamPlace, ActionKind::kTeamDrive, ActionKind::kParPickPlace,
           ActionKind::kParPlaceDrive, ActionKind::kParPickDrive, ActionKind::kParDriveDrive});
      a.t_start = ja.at("t_start").get<double>();
      a.t_end = ja.at("t_end").get<double>();
      const Json& subs = ja.at("subs");
      if (subs.empty() || subs.size() > 2) throw ParseError("action needs one or two sub-actions");
      a.sub_count = static_cast<std::uint8_t>(subs.size());
      for (std::size_t k = 0; k < subs.size(); ++k) {
        SubAction& s = a.sub[k];
        s.op = enum_from_name<Op>(subs[k].at("op").get<std::string>(), {Op::kPick, Op::kPlace, Op::kDrive});
        s.robots = robots_from_json(subs[k].at("robots"), plan.robots);
        s.t_start = subs[k].at("t_start").get<double>();
        s.t_end = subs[k].at("t_end").get<double>();
        if (s.op != Op::kDrive) {
          s.ply = static_cast<int>(ply_index(book, subs[k].at("ply").get<std::string>()));
          s.config = subs[k].at("config").get<int>();
          if (s.config < 0 || static_cast<std::size_t>(s.config) >= plan.configs[static_cast<std::size_t>(s.ply)].size()) {
            throw ParseError("configuration index out of range for ply '" + book.plies[static_cast<std::size_t>(s.ply)].id + "'");
          }
        }
      }
      plan.schedule.actions.push_back(a);
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  return plan;
}

std::string export_sim(const Schedule& s, const Plybook& book, const ConfigTable& configs,
                       const RobotIds& robots) {
  std::vector<const SubAction*> subs;
  for (const ActionInstance& a : s.actions) {
    for (const SubAction& sub : a.subs()) subs.push_back(&sub);
  }
  std::stable_sort(subs.begin(), subs.end(),
                   [](const SubAction* a, const SubAction* b) { return a->t_start < b->t_start; });

  Json steps = Json::array();
  for (const SubAction* sub : subs) {
    Json step = {{"t_start", sub->t_start},
                 {"t_end", sub->t_end},
                 {"robots", robots_json(sub->robots, robots)},
                 {"action", to_string(sub->op)},
                 {"grip_poses", Json::array()}};
    if (sub->op != Op::kDrive) {
      const auto p = static_cast<std::size_t>(sub->ply);
      const Ply& ply = book.plies.at(p);
      step["ply"] = ply.id;
      if (sub->op == Op::kPick) {
        const GripperConfiguration& c = configs.at(p).at(static_cast<std::size_t>(sub->config));
        for (std::size_t k = 0; k < c.gripper_ids.size(); ++k) {
          step["grip_poses"].push_back(
              {{"gripper", c.gripper_ids[k]}, {"x", c.poses[k].x}, {"y", c.poses[k].y}, {"theta", c.poses[k].theta}});
        }
      } else {
        step["drop_frame"] = {{"position", ply.drop_frame.position}, {"rpy", ply.drop_frame.rpy}};
      }
    }
    steps.push_back(std::move(step));
  }
  return canonical_dump({{"makespan", s.makespan}, {"steps", std::move(steps)}});
}

namespace {

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* bar_color(Op op) {
  switch (op) {
    case Op::kPick: return "#4e79a7";
    case Op::kPlace: return "#f28e2b";
    case Op::kDrive: return "#9c9c9c";
  }
  return "#000000";
}

}  // namespace

std::string render_gantt(const Schedule& s, const Plybook& book, const RobotIds& robots) {
  constexpr double kLeft = 80.0;
  constexpr double kTop = 30.0;
  constexpr double kLane = 40.0;
  constexpr double kBar = 28.0;
  constexpr double kPlotWidth = 1000.0;
  const double span = s.makespan > 0.0 ? s.makespan : 1.0;
  const double scale = kPlotWidth / span;
  const double width = kLeft + kPlotWidth + 20.0;
  const double height = kTop + kLane * kRobotCount + 30.0;
  const auto num = [](double v) { return format_number(std::round(v * 100.0) / 100.0); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"18\">makespan " << format_number(s.makespan) << " s</text>\n";
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    const double y = kTop + kLane * static_cast<double>(r);
    out << "<g class=\"lane\" data-robot=\"" << xml_escape(robots[r]) << "\">\n";
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y) << "\" width=\"" << num(kPlotWidth)
        << "\" height=\"" << num(kLane) << "\" fill=\"" << (r % 2 ? "#ffffff" : "#f4f4f4") << "\"/>\n";
    out << "<text x=\"4\" y=\"" << num(y + kLane / 2 + 4) << "\">" << xml_escape(robots[r]) << "</text>\n";
    for (const ActionInstance& a : s.actions) {
      for (const SubAction& sub : a.subs()) {
        if (!(sub.robots & robot_bit(r))) continue;
        std::string label(to_string(sub.op));
        if (sub.op != Op::kDrive) label += "/" + book.plies.at(static_cast<std::size_t>(sub.ply)).id;
        const double x = kLeft + sub.t_start * scale;
        const double w = (sub.t_end - sub.t_start) * scale;
        out << "<rect class=\"bar\" x=\"" << num(x) << "\" y=\"" << num(y + (kLane - kBar) / 2) << "\" width=\""
            << num(w) << "\" height=\"" << num(kBar) << "\" fill=\"" << bar_color(sub.op)
            << "\" stroke=\"#333333\"><title>" << xml_escape(label) << " " << format_number(sub.t_start) << "-"
            << format_number(sub.t_end) << "</title></rect>\n";
        out << "<text x=\"" << num(x + 2) << "\" y=\"" << num(y + kLane / 2 + 4) << "\">" << xml_escape(label)
            << "</text>\n";
      }
    }
    out << "</g>\n";
  }
  const double axis_y = kTop + kLane * kRobotCount;
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(kLeft + kPlotWidth)
      << "\" y2=\"" << num(axis_y) << "\" stroke=\"#333333\"/>\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"" << num(axis_y + 16) << "\">0</text>\n";
  out << "<text x=\"" << num(kLeft + kPlotWidth) << "\" y=\"" << num(axis_y + 16) << "\" text-anchor=\"end\">"
      << format_number(s.makespan) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<ReportRow> run_report(const Plybook& book, const CellLayout& cell,
                                  const std::vector<Strategy>& strategies, const SearchOptions& options) {
  std::vector<ReportRow> rows;
  for (Strategy strategy : strategies) {
    ReportRow row;
    row.strategy = strategy;
    try {
      const PlanningModel model = make_model(book, cell);
      Schedule schedule;
      switch (strategy) {
        case Strategy::kSequential: schedule = schedule_sequential(model); break;
        case Strategy::kGreedy: schedule = schedule_greedy(model); break;
        case Strategy::kOptimal: {
          SearchResult result = schedule_optimal(model, options);
          schedule = std::move(result.schedule);
          row.optimal = result.optimal;
          break;
        }
      }
      row.status = "ok";
      row.makespan = schedule.makespan;
      row.actions = schedule.actions.size();
      row.parallel = parallel_count(schedule);
    } catch (const Error& e) {
      row.status = e.kind();
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"strategy", "status", "makespan", "actions", "parallel", "optimal"});
  for (const ReportRow& r : rows) {
    if (r.status == "ok") {
      cells.push_back({std::string(to_string(r.strategy)), r.status, format_number(r.makespan),
                       std::to_string(r.actions), std::to_string(r.parallel), r.optimal ? "yes" : "no"});
    } else {
      cells.push_back({std::string(to_string(r.strategy)), r.status, "-", "-", "-", "-"});
    }
  }
  std::array<std::size_t, 6> widths{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string report(const Plybook& book, const CellLayout& cell, const std::vector<Strategy>& strategies,
                   const SearchOptions& options) {
  return format_report(run_report(book, cell, strategies, options));
}

}  // namespace plyplan
