#include "plyplan/planning_model.hpp"

#include <algorithm>
#include <cmath>

#include "plyplan/errors.hpp"

namespace plyplan {

std::string_view to_string(Op op) {
  switch (op) {
    case Op::kPick: return "pick";
    case Op::kPlace: return "place";
    case Op::kDrive: return "drive";
  }
  return "?";
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kPick: return "pick";
    case ActionKind::kPlace: return "place";
    case ActionKind::kDrive: return "drive";
    case ActionKind::kTeamPick: return "team-pick";
    case ActionKind::kTeamPlace: return "team-place";
    case ActionKind::kTeamDrive: return "team-drive";
    case ActionKind::kParPickPlace: return "par-pick-place";
    case ActionKind::kParPlaceDrive: return "par-place-drive";
    case ActionKind::kParPickDrive: return "par-pick-drive";
    case ActionKind::kParDriveDrive: return "par-drive-drive";
  }
  return "?";
}

bool is_composite(ActionKind kind) {
  return kind == ActionKind::kParPickPlace || kind == ActionKind::kParPlaceDrive ||
         kind == ActionKind::kParPickDrive || kind == ActionKind::kParDriveDrive;
}

bool is_team(ActionKind kind) {
  return kind == ActionKind::kTeamPick || kind == ActionKind::kTeamPlace ||
         kind == ActionKind::kTeamDrive;
}

RobotMask ActionInstance::robots() const {
  RobotMask m = 0;
  for (const SubAction& s : subs()) m |= s.robots;
  return m;
}

namespace {

constexpr double kTimeTol = 1e-9;

bool single_robot(RobotMask m) { return m == robot_bit(0) || m == robot_bit(1); }

template <typename F>
void for_each_robot(RobotMask m, F&& f) {
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    if (m & robot_bit(r)) f(r);
  }
}

// Expected sub-action ops for a kind; nullopt marks "no second sub".
struct Shape {
  Op first;
  std::optional<Op> second;
  bool team;
};

Shape shape_of(ActionKind kind) {
  switch (kind) {
    case ActionKind::kPick: return {Op::kPick, std::nullopt, false};
    case ActionKind::kPlace: return {Op::kPlace, std::nullopt, false};
    case ActionKind::kDrive: return {Op::kDrive, std::nullopt, false};
    case ActionKind::kTeamPick: return {Op::kPick, std::nullopt, true};
    case ActionKind::kTeamPlace: return {Op::kPlace, std::nullopt, true};
    case ActionKind::kTeamDrive: return {Op::kDrive, std::nullopt, true};
    case ActionKind::kParPickPlace: return {Op::kPick, Op::kPlace, false};
    case ActionKind::kParPlaceDrive: return {Op::kPlace, Op::kDrive, false};
    case ActionKind::kParPickDrive: return {Op::kPick, Op::kDrive, false};
    case ActionKind::kParDriveDrive: return {Op::kDrive, Op::kDrive, false};
  }
  return {Op::kPick, std::nullopt, false};
}

std::optional<std::string> structure_failure(const ActionInstance& a) {
  const Shape shape = shape_of(a.kind);
  const std::size_t expected = shape.second ? 2 : 1;
  if (a.sub_count != expected) return "wrong number of sub-actions for " + std::string(to_string(a.kind));
  if (a.sub[0].op != shape.first || (shape.second && a.sub[1].op != *shape.second)) {
    return "sub-action operations do not match " + std::string(to_string(a.kind));
  }
  for (const SubAction& s : a.subs()) {
    if (shape.team ? s.robots != kBothRobots : !single_robot(s.robots)) {
      return "wrong robot set for " + std::string(to_string(a.kind));
    }
  }
  if (expected == 2 && (a.sub[0].robots & a.sub[1].robots) != 0) {
    return "parallel sub-actions share a robot";
  }
  return std::nullopt;
}

}  // namespace

PlanningModel::PlanningModel(Plybook book, DependencyMatrix deps, ConfigTable configs,
                             CellLayout cell)
    : book_(std::move(book)), deps_(std::move(deps)), configs_(std::move(configs)),
      cell_(std::move(cell)) {
  const std::size_t n = book_.size();
  if (n > kMaxPlies) {
    throw InstanceTooLarge("planning supports at most 64 plies, got " + std::to_string(n));
  }
  if (deps_.n != n || configs_.size() != n) {
    throw InvariantError("plybook, dependency matrix and configuration table disagree in size");
  }
  if (cell_.robots.size() != kRobotCount) throw InvariantError("exactly 2 robots required");
  config_robots_.resize(n);
  pred_bits_.assign(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    if (configs_[p].size() > 0xFFFF) throw InstanceTooLarge("too many configurations");
    for (const GripperConfiguration& c : configs_[p]) {
      RobotMask m = 0;
      for (const std::string& id : c.robot_ids) {
        auto it = std::find_if(cell_.robots.begin(), cell_.robots.end(),
                               [&](const Robot& r) { return r.id == id; });
        if (it == cell_.robots.end()) {
          throw InvariantError("configuration of ply '" + c.ply_id + "' names unknown robot '" + id + "'");
        }
        m |= robot_bit(static_cast<std::size_t>(it - cell_.robots.begin()));
      }
      if (m == 0) throw InvariantError("configuration of ply '" + c.ply_id + "' has no robot");
      config_robots_[p].push_back(m);
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (deps_.closure(q, p)) pred_bits_[p] |= std::uint64_t{1} << q;
    }
  }
}

double PlanningModel::duration(Op op) const {
  switch (op) {
    case Op::kPick: return cell_.durations.pick_s;
    case Op::kPlace: return cell_.durations.place_s;
    case Op::kDrive: return cell_.durations.drive_s;
  }
  return 0.0;
}

double PlanningModel::duration(const ActionInstance& a) const {
  double d = 0.0;
  for (const SubAction& s : a.subs()) d = std::max(d, duration(s.op));
  return d;
}

WorldState PlanningModel::initial_state() const { return WorldState{}; }

bool PlanningModel::is_goal(const WorldState& s) const {
  return s.placed.size() == book_.size() && s.robot_at[0] == Location::kTable &&
         s.robot_at[1] == Location::kTable;
}

ActionInstance PlanningModel::timed(ActionInstance a, double t_start) const {
  a.t_start = t_start;
  a.t_end = t_start + duration(a);
  for (std::size_t k = 0; k < a.sub_count; ++k) {
    a.sub[k].t_start = t_start;
    a.sub[k].t_end = t_start + duration(a.sub[k].op);
  }
  return a;
}

std::optional<std::string> PlanningModel::check(const WorldState& s, const ActionInstance& a,
                                                bool check_precedence) const {
  if (auto failure = structure_failure(a)) return failure;
  const std::size_t n = book_.size();
  for (const SubAction& sub : a.subs()) {
    if (sub.op == Op::kDrive) {
      bool ok = true;
      for_each_robot(sub.robots, [&](std::size_t r) { ok = ok && s.robot_at[r] == Location::kForm; });
      if (!ok) return std::string("drive: robot is not at the form");
      continue;
    }
    if (sub.ply < 0 || static_cast<std::size_t>(sub.ply) >= n) return std::string("unknown ply index");
    const auto p = static_cast<std::size_t>(sub.ply);
    if (sub.config < 0 || static_cast<std::size_t>(sub.config) >= configs_[p].size()) {
      return "unknown configuration for ply '" + book_.plies[p].id + "'";
    }
    const auto c = static_cast<std::size_t>(sub.config);
    if (config_robots_[p][c] != sub.robots) {
      return "configuration of ply '" + book_.plies[p].id + "' does not match the robots";
    }
    const Held held{static_cast<std::uint16_t>(p), static_cast<std::uint16_t>(c)};
    if (sub.op == Op::kPick) {
      if (s.placed.contains(p)) return "pick: ply '" + book_.plies[p].id + "' already placed";
      for (const auto& h : s.holding) {
        if (h && h->ply == p) return "pick: ply '" + book_.plies[p].id + "' already held";
      }
      bool ok = true;
      for_each_robot(sub.robots, [&](std::size_t r) {
        ok = ok && s.robot_at[r] == Location::kTable && !s.holding[r];
      });
      if (!ok) return std::string("pick: robot not at the table with an empty hand");
    } else {
      bool ok = true;
      for_each_robot(sub.robots, [&](std::size_t r) { ok = ok && s.holding[r] == held; });
      if (!ok) return "place: robot does not hold ply '" + book_.plies[p].id + "' in that configuration";
      if (check_precedence && (pred_bits_[p] & ~s.placed.bits()) != 0) {
        return "place: predecessors of ply '" + book_.plies[p].id + "' not placed";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> PlanningModel::precondition_failure(const WorldState& s,
                                                               const ActionInstance& a) const {
  return check(s, a, true);
}

WorldState PlanningModel::apply_unchecked(const WorldState& s, const ActionInstance& a) const {
  WorldState next = s;
  for (const SubAction& sub : a.subs()) {
    for_each_robot(sub.robots, [&](std::size_t r) {
      switch (sub.op) {
        case Op::kPick:
          next.holding[r] = Held{static_cast<std::uint16_t>(sub.ply), static_cast<std::uint16_t>(sub.config)};
          break;
        case Op::kPlace:
          next.holding[r].reset();
          next.robot_at[r] = Location::kForm;
          next.placed.insert(static_cast<std::size_t>(sub.ply));
          break;
        case Op::kDrive:
          next.robot_at[r] = Location::kTable;
          break;
      }
    });
  }
  next.time = s.time + duration(a);
  return next;
}

WorldState PlanningModel::apply(const WorldState& s, const ActionInstance& a) const {
  if (auto failure = check(s, a, true)) throw InapplicableAction(*failure);
  return apply_unchecked(s, a);
}

void PlanningModel::applicable_actions(const WorldState& s, std::vector<ActionInstance>& out) const {
  const std::size_t n = book_.size();
  std::array<std::vector<SubAction>, kRobotCount> picks, places;
  std::array<bool, kRobotCount> drives{};
  std::vector<SubAction> team_picks;
  std::optional<SubAction> team_place;

  std::uint64_t held_bits = 0;
  for (const auto& h : s.holding) {
    if (h) held_bits |= std::uint64_t{1} << h->ply;
  }
  const std::uint64_t free_bits = ~(s.placed.bits() | held_bits);

  const bool both_free = s.robot_at[0] == Location::kTable && s.robot_at[1] == Location::kTable &&
                         !s.holding[0] && !s.holding[1];
  for (std::size_t p = 0; p < n; ++p) {
    if (!((free_bits >> p) & 1u)) continue;
    for (std::size_t c = 0; c < configs_[p].size(); ++c) {
      const RobotMask m = config_robots_[p][c];
      const SubAction sub{Op::kPick, m, static_cast<int>(p), static_cast<int>(c)};
      if (m == kBothRobots) {
        if (both_free) team_picks.push_back(sub);
      } else {
        const std::size_t r = m == robot_bit(0) ? 0 : 1;
        if (s.robot_at[r] == Location::kTable && !s.holding[r]) picks[r].push_back(sub);
      }
    }
  }
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    drives[r] = s.robot_at[r] == Location::kForm;
    if (!s.holding[r]) continue;
    const Held h = *s.holding[r];
    if (pred_bits_[h.ply] & ~s.placed.bits()) continue;
    const RobotMask m = config_robots_[h.ply][h.config];
    const SubAction sub{Op::kPlace, m, h.ply, h.config};
    if (m == kBothRobots) {
      if (r == 0 && s.holding[1] == h) team_place = sub;
    } else {
      places[r].push_back(sub);
    }
  }

  const double t = s.time;
  const auto emit = [&](ActionKind kind, const SubAction& a, const SubAction* b) {
    ActionInstance act;
    act.kind = kind;
    act.sub[0] = a;
    if (b) {
      act.sub[1] = *b;
      act.sub_count = 2;
    }
    out.push_back(timed(act, t));
  };
  const SubAction drive_sub[kRobotCount] = {{Op::kDrive, robot_bit(0)}, {Op::kDrive, robot_bit(1)}};

  for (std::size_t r = 0; r < kRobotCount; ++r) {
    for (const SubAction& p : picks[r]) emit(ActionKind::kPick, p, nullptr);
  }
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    for (const SubAction& p : places[r]) emit(ActionKind::kPlace, p, nullptr);
  }
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    if (drives[r]) emit(ActionKind::kDrive, drive_sub[r], nullptr);
  }
  for (const SubAction& p : team_picks) emit(ActionKind::kTeamPick, p, nullptr);
  if (team_place) emit(ActionKind::kTeamPlace, *team_place, nullptr);
  const bool both_at_form = drives[0] && drives[1];
  if (both_at_form) emit(ActionKind::kTeamDrive, SubAction{Op::kDrive, kBothRobots}, nullptr);

  for (std::size_t a = 0; a < kRobotCount; ++a) {
    const std::size_t b = 1 - a;
    for (const SubAction& pick : picks[a]) {
      for (const SubAction& place : places[b]) emit(ActionKind::kParPickPlace, pick, &place);
    }
  }
  for (std::size_t a = 0; a < kRobotCount; ++a) {
    if (!drives[1 - a]) continue;
    for (const SubAction& place : places[a]) emit(ActionKind::kParPlaceDrive, place, &drive_sub[1 - a]);
  }
  for (std::size_t a = 0; a < kRobotCount; ++a) {
    if (!drives[1 - a]) continue;
    for (const SubAction& pick : picks[a]) emit(ActionKind::kParPickDrive, pick, &drive_sub[1 - a]);
  }
  if (both_at_form) emit(ActionKind::kParDriveDrive, drive_sub[0], &drive_sub[1]);
}

std::vector<ActionInstance> PlanningModel::applicable_actions(const WorldState& s) const {
  std::vector<ActionInstance> out;
  applicable_actions(s, out);
  return out;
}

std::vector<Violation> PlanningModel::validate(std::span<const ActionInstance> actions) const {
  std::vector<Violation> violations;
  WorldState s = initial_state();
  std::vector<double> place_end(book_.size(), 0.0);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const ActionInstance& a = actions[i];
    if (auto failure = structure_failure(a)) {
      violations.push_back({i, "structure", *failure});
      return violations;
    }
    const ActionInstance expected = timed(a, s.time);
    if (std::abs(a.t_start - s.time) > kTimeTol) {
      violations.push_back({i, "timing", "action starts at " + std::to_string(a.t_start) +
                                             " but the previous step ends at " + std::to_string(s.time)});
    }
    bool subs_ok = std::abs(a.t_end - a.t_start - duration(a)) <= kTimeTol;
    for (std::size_t k = 0; k < a.sub_count; ++k) {
      subs_ok = subs_ok && std::abs(a.sub[k].t_start - a.t_start) <= kTimeTol &&
                std::abs(a.sub[k].t_end - a.sub[k].t_start - duration(a.sub[k].op)) <= kTimeTol;
    }
    if (!subs_ok) violations.push_back({i, "timing", "durations do not follow the duration table"});

    for (const SubAction& sub : a.subs()) {
      if (sub.op != Op::kPlace || sub.ply < 0 || static_cast<std::size_t>(sub.ply) >= book_.size()) continue;
      const auto p = static_cast<std::size_t>(sub.ply);
      for (std::size_t q = 0; q < book_.size(); ++q) {
        if (!((pred_bits_[p] >> q) & 1u)) continue;
        if (!s.placed.contains(q)) {
          violations.push_back({i, "precedence", "ply '" + book_.plies[p].id +
                                                     "' placed before its predecessor '" +
                                                     book_.plies[q].id + "'"});
        } else if (a.t_start < place_end[q] - kTimeTol) {
          violations.push_back({i, "precedence", "ply '" + book_.plies[p].id +
                                                     "' placed before '" + book_.plies[q].id +
                                                     "' finished"});
        }
      }
    }
    if (auto failure = check(s, a, false)) {
      violations.push_back({i, "precondition", *failure});
      return violations;
    }
    for (const SubAction& sub : expected.subs()) {
      if (sub.op == Op::kPlace) place_end[static_cast<std::size_t>(sub.ply)] = a.t_start + duration(Op::kPlace);
    }
    s = apply_unchecked(s, a);
  }
  if (!is_goal(s)) {
    violations.push_back({actions.size(), "goal failure",
                          "plan ends with " + std::to_string(s.placed.size()) + " of " +
                              std::to_string(book_.size()) + " plies placed" +
                              (s.robot_at[0] == Location::kForm || s.robot_at[1] == Location::kForm
                                   ? " and a robot away from the table"
                                   : "")});
  }
  return violations;
}

std::string PlanningModel::sub_label(const SubAction& s) const {
  std::string label(to_string(s.op));
  if (s.op != Op::kDrive && s.ply >= 0 && static_cast<std::size_t>(s.ply) < book_.size()) {
    label += "/" + book_.plies[static_cast<std::size_t>(s.ply)].id;
  }
  return label;
}

WorldState initial_state(const CellLayout& cell) {
  if (cell.robots.size() != kRobotCount) throw InvariantError("exactly 2 robots required");
  return WorldState{};
}

bool is_goal(const WorldState& s, const Plybook& book) {
  return s.placed.size() == book.size() && s.robot_at[0] == Location::kTable &&
         s.robot_at[1] == Location::kTable;
}

std::vector<ActionInstance> applicable_actions(const WorldState& s, const PlanningModel& model) {
  return model.applicable_actions(s);
}

WorldState apply(const PlanningModel& model, const WorldState& s, const ActionInstance& a) {
  return model.apply(s, a);
}

std::vector<Violation> validate_plan(std::span<const ActionInstance> actions, const Plybook& book,
                                     const DependencyMatrix& deps, const ConfigTable& configs,
                                     const CellLayout& cell) {
  return PlanningModel(book, deps, configs, cell).validate(actions);
}

namespace {

ActionInstance atomic(ActionKind kind, Op op, RobotMask robots, int ply, int config) {
  ActionInstance a;
  a.kind = kind;
  a.sub[0] = SubAction{op, robots, ply, config};
  return a;
}

}  // namespace

ActionInstance make_pick(std::size_t robot, std::size_t ply, std::size_t config) {
  return atomic(ActionKind::kPick, Op::kPick, robot_bit(robot), static_cast<int>(ply), static_cast<int>(config));
}

ActionInstance make_place(std::size_t robot, std::size_t ply, std::size_t config) {
  return atomic(ActionKind::kPlace, Op::kPlace, robot_bit(robot), static_cast<int>(ply), static_cast<int>(config));
}

ActionInstance make_drive(std::size_t robot) {
  return atomic(ActionKind::kDrive, Op::kDrive, robot_bit(robot), -1, -1);
}

ActionInstance make_team_pick(std::size_t ply, std::size_t config) {
  return atomic(ActionKind::kTeamPick, Op::kPick, kBothRobots, static_cast<int>(ply), static_cast<int>(config));
}

ActionInstance make_team_place(std::size_t ply, std::size_t config) {
  return atomic(ActionKind::kTeamPlace, Op::kPlace, kBothRobots, static_cast<int>(ply), static_cast<int>(config));
}

ActionInstance make_team_drive() { return atomic(ActionKind::kTeamDrive, Op::kDrive, kBothRobots, -1, -1); }

ActionInstance make_parallel(const ActionInstance& a, const ActionInstance& b) {
  if (a.sub_count != 1 || b.sub_count != 1 || is_team(a.kind) || is_team(b.kind)) {
    throw InapplicableAction("only single-robot atomic actions can be combined");
  }
  if (a.sub[0].robots == b.sub[0].robots) throw InapplicableAction("parallel actions need two robots");
  const Op x = a.sub[0].op;
  const Op y = b.sub[0].op;
  const auto pair = [&](ActionKind kind, const SubAction& first, const SubAction& second) {
    ActionInstance out;
    out.kind = kind;
    out.sub = {first, second};
    out.sub_count = 2;
    return out;
  };
  const SubAction& sa = a.sub[0];
  const SubAction& sb = b.sub[0];
  if (x == Op::kPick && y == Op::kPlace) return pair(ActionKind::kParPickPlace, sa, sb);
  if (x == Op::kPlace && y == Op::kPick) return pair(ActionKind::kParPickPlace, sb, sa);
  if (x == Op::kPlace && y == Op::kDrive) return pair(ActionKind::kParPlaceDrive, sa, sb);
  if (x == Op::kDrive && y == Op::kPlace) return pair(ActionKind::kParPlaceDrive, sb, sa);
  if (x == Op::kPick && y == Op::kDrive) return pair(ActionKind::kParPickDrive, sa, sb);
  if (x == Op::kDrive && y == Op::kPick) return pair(ActionKind::kParPickDrive, sb, sa);
  if (x == Op::kDrive && y == Op::kDrive) {
    return sa.robots == robot_bit(0) ? pair(ActionKind::kParDriveDrive, sa, sb)
                                     : pair(ActionKind::kParDriveDrive, sb, sa);
  }
  throw InapplicableAction("no composite action runs " + std::string(to_string(x)) + " and " +
                           std::string(to_string(y)) + " in parallel");
}

}  // namespace plyplan
