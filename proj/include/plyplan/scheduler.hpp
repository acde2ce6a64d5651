#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "plyplan/planning_model.hpp"

namespace plyplan {

enum class Strategy { kSequential, kGreedy, kOptimal };

std::string_view to_string(Strategy s);
// Throws std::invalid_argument for unknown names.
Strategy parse_strategy(std::string_view name);

struct SearchOptions {
  std::uint64_t node_budget = 5'000'000;  // generated nodes
  bool seed_with_greedy = true;           // start from the greedy plan as incumbent
};

struct SearchResult {
  Schedule schedule;
  bool optimal = false;  // search completed within budget
  std::uint64_t nodes_generated = 0;
};

// Builds dependency matrix and gripper configurations from book and cell.
PlanningModel make_model(const Plybook& book, const CellLayout& cell);

// Assign start/end times by accumulation (composite max rule) and set the
// makespan. Throws InapplicableAction if the sequence is not executable.
Schedule make_schedule(const PlanningModel& model, std::vector<ActionInstance> actions);

// Ply by ply in layer order: pick, place, drive. Single-robot plies go to
// the lowest robot id that has a configuration.
Schedule schedule_sequential(const PlanningModel& model);

// Event-driven greedy over the composite model. Picks are restricted to
// plies whose predecessors are placed or currently held, which rules out
// dead ends.
Schedule schedule_greedy(const PlanningModel& model);

// A* with branch-and-bound pruning against an incumbent. Returns the best
// plan found; optimal is true only when the search finished within budget.
// Throws BudgetExceeded when the budget runs out with no incumbent.
SearchResult schedule_optimal(const PlanningModel& model, const SearchOptions& options = {});

// Admissible lower bound on the remaining makespan from s: the maximum of
// the critical placement chain, half the remaining robot work and the
// serialized placements.
double remaining_lower_bound(const PlanningModel& model, const WorldState& s);

// Exhaustive search over all applicable action sequences with memoization
// on the state. At most 6 plies (InstanceTooLarge otherwise).
double brute_force_oracle(const PlanningModel& model);

inline constexpr std::size_t kOracleMaxPlies = 6;

// Number of composite actions in a schedule.
std::size_t parallel_count(const Schedule& s);

}  // namespace plyplan
