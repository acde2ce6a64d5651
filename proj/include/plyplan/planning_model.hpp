#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plyplan/assignment.hpp"
#include "plyplan/dependency.hpp"
#include "plyplan/model.hpp"

namespace plyplan {

inline constexpr std::size_t kRobotCount = 2;
inline constexpr std::size_t kMaxPlies = 64;

enum class Location : std::uint8_t { kTable, kForm };

// Atomic operations. Place includes the transport to the form.
enum class Op : std::uint8_t { kPick, kPlace, kDrive };

enum class ActionKind : std::uint8_t {
  kPick,
  kPlace,
  kDrive,
  kTeamPick,
  kTeamPlace,
  kTeamDrive,
  kParPickPlace,
  kParPlaceDrive,
  kParPickDrive,
  kParDriveDrive,
};

std::string_view to_string(Op op);
std::string_view to_string(ActionKind kind);
bool is_composite(ActionKind kind);
bool is_team(ActionKind kind);

// Bit r set when robot r (index into CellLayout::robots) takes part.
using RobotMask = std::uint8_t;
inline constexpr RobotMask kBothRobots = 0b11;
inline constexpr RobotMask robot_bit(std::size_t r) { return static_cast<RobotMask>(1u << r); }

class PlySet {
 public:
  bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  void insert(std::size_t i) { bits_ |= std::uint64_t{1} << i; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  std::uint64_t bits() const { return bits_; }

  friend bool operator==(const PlySet&, const PlySet&) = default;

 private:
  std::uint64_t bits_ = 0;
};

struct Held {
  std::uint16_t ply = 0;
  std::uint16_t config = 0;

  friend bool operator==(const Held&, const Held&) = default;
};

struct WorldState {
  std::array<Location, kRobotCount> robot_at{Location::kTable, Location::kTable};
  std::array<std::optional<Held>, kRobotCount> holding{};
  PlySet placed;
  double time = 0.0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct SubAction {
  Op op = Op::kPick;
  RobotMask robots = 0;
  int ply = -1;     // pick and place only
  int config = -1;  // pick and place only
  double t_start = 0.0;
  double t_end = 0.0;

  friend bool operator==(const SubAction&, const SubAction&) = default;
};

// One step of a schedule. Composite sub-actions are stored in the order of
// the kind's name: pick/place, place/drive, pick/drive, drive(r0)/drive(r1).
struct ActionInstance {
  ActionKind kind = ActionKind::kPick;
  std::array<SubAction, 2> sub{};
  std::uint8_t sub_count = 1;
  double t_start = 0.0;
  double t_end = 0.0;

  std::span<const SubAction> subs() const { return {sub.data(), sub_count}; }
  RobotMask robots() const;

  friend bool operator==(const ActionInstance&, const ActionInstance&) = default;
};

struct Schedule {
  std::vector<ActionInstance> actions;
  double makespan = 0.0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct Violation {
  std::size_t step = 0;  // index of the offending action; actions.size() for goal failure
  std::string category;  // structure | timing | precedence | precondition | goal failure
  std::string message;
};

// Immutable view of one planning instance. Copies its inputs, so instances
// can outlive the book/cell they were made from.
class PlanningModel {
 public:
  PlanningModel(Plybook book, DependencyMatrix deps, ConfigTable configs, CellLayout cell);

  const Plybook& book() const { return book_; }
  const DependencyMatrix& deps() const { return deps_; }
  const ConfigTable& configs() const { return configs_; }
  const CellLayout& cell() const { return cell_; }
  std::size_t ply_count() const { return book_.size(); }

  RobotMask config_robots(std::size_t ply, std::size_t config) const {
    return config_robots_[ply][config];
  }
  // closure predecessors of ply as a bit set
  std::uint64_t predecessor_bits(std::size_t ply) const { return pred_bits_[ply]; }

  double duration(Op op) const;
  double duration(const ActionInstance& a) const;

  WorldState initial_state() const;
  bool is_goal(const WorldState& s) const;

  // Appends every applicable action, with times set from s.time.
  void applicable_actions(const WorldState& s, std::vector<ActionInstance>& out) const;
  std::vector<ActionInstance> applicable_actions(const WorldState& s) const;

  // Reason the action cannot be applied, or nullopt.
  std::optional<std::string> precondition_failure(const WorldState& s, const ActionInstance& a) const;

  // Throws InapplicableAction. Time advances by duration(a).
  WorldState apply(const WorldState& s, const ActionInstance& a) const;

  // Fill t_start/t_end of a and its sub-actions for a start time.
  ActionInstance timed(ActionInstance a, double t_start) const;

  // Replay from the initial state; empty result means the plan is valid.
  std::vector<Violation> validate(std::span<const ActionInstance> actions) const;

  // e.g. "pick/P00", "drive"; used for Gantt labels and tie-breaking.
  std::string sub_label(const SubAction& s) const;
  std::string robot_id(std::size_t r) const { return cell_.robots[r].id; }

 private:
  std::optional<std::string> check(const WorldState& s, const ActionInstance& a,
                                   bool check_precedence) const;
  WorldState apply_unchecked(const WorldState& s, const ActionInstance& a) const;

  Plybook book_;
  DependencyMatrix deps_;
  ConfigTable configs_;
  CellLayout cell_;
  std::vector<std::vector<RobotMask>> config_robots_;
  std::vector<std::uint64_t> pred_bits_;
};

// Free-function forms of the model operations.
WorldState initial_state(const CellLayout& cell);
bool is_goal(const WorldState& s, const Plybook& book);
std::vector<ActionInstance> applicable_actions(const WorldState& s, const PlanningModel& model);
WorldState apply(const PlanningModel& model, const WorldState& s, const ActionInstance& a);
std::vector<Violation> validate_plan(std::span<const ActionInstance> actions, const Plybook& book,
                                     const DependencyMatrix& deps, const ConfigTable& configs,
                                     const CellLayout& cell);

// Builders for hand-written plans; times are filled in by PlanningModel::timed.
ActionInstance make_pick(std::size_t robot, std::size_t ply, std::size_t config);
ActionInstance make_place(std::size_t robot, std::size_t ply, std::size_t config);
ActionInstance make_drive(std::size_t robot);
ActionInstance make_team_pick(std::size_t ply, std::size_t config);
ActionInstance make_team_place(std::size_t ply, std::size_t config);
ActionInstance make_team_drive();
// Two single-robot atomic actions run in parallel. Throws InapplicableAction
// for combinations without a composite kind (pick/pick, place/place).
ActionInstance make_parallel(const ActionInstance& a, const ActionInstance& b);

}  // namespace plyplan
