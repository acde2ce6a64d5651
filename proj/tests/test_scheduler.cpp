#include <doctest.h>

#include "plyplan/errors.hpp"
#include "support.hpp"

using namespace plyplan;
using namespace plyplan::test;

namespace {

std::vector<ActionKind> kinds(const Schedule& s) {
  std::vector<ActionKind> out;
  for (const auto& a : s.actions) out.push_back(a.kind);
  return out;
}

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_strategy("greedy") == Strategy::kGreedy);
  CHECK(to_string(Strategy::kOptimal) == "optimal");
  CHECK_THROWS_AS(parse_strategy("fastest"), std::invalid_argument);
}

TEST_CASE("sequential baseline") {
  const PlanningModel pair = model_of(independent_pair());
  const Schedule s = schedule_sequential(pair);
  CHECK(s.makespan == 70.0);
  CHECK(s.actions.size() == 6);
  for (const auto& a : s.actions) CHECK(a.robots() == robot_bit(0));
  CHECK(pair.validate(s.actions).empty());

  const Schedule team = schedule_sequential(model_of(team_ply()));
  CHECK(team.makespan == 35.0);
  CHECK(kinds(team) == std::vector<ActionKind>{ActionKind::kTeamPick, ActionKind::kTeamPlace, ActionKind::kTeamDrive});

  Plybook bad = independent_pair();
  bad.plies[1].curvature = Curvature::kDouble;
  CHECK_THROWS_AS(schedule_sequential(model_of(bad)), NoFeasibleConfiguration);
  CHECK_THROWS_AS(schedule_greedy(model_of(bad)), NoFeasibleConfiguration);
  CHECK_THROWS_AS(schedule_optimal(model_of(bad)), NoFeasibleConfiguration);
}

TEST_CASE("sequential follows layer order") {
  Plybook book = independent_pair();
  book.plies[0].layer = 3;
  const Schedule s = schedule_sequential(model_of(book));
  CHECK(s.actions[0].sub[0].ply == 1);
}

TEST_CASE("greedy on two independent plies") {
  const PlanningModel m = model_of(independent_pair());
  const Schedule s = schedule_greedy(m);
  CHECK(s.makespan == 55.0);
  CHECK(kinds(s) == std::vector<ActionKind>{ActionKind::kPick, ActionKind::kParPickPlace,
                                            ActionKind::kParPlaceDrive, ActionKind::kDrive});
  CHECK(s.actions[0].robots() == robot_bit(0));
  CHECK(s.actions[1].sub[1].ply == s.actions[0].sub[0].ply);
  CHECK(m.validate(s.actions).empty());
}

TEST_CASE("greedy picks a dependent ply early") {
  const PlanningModel m = model_of(dependent_pair());
  const Schedule s = schedule_greedy(m);
  CHECK(s.makespan == 55.0);
  CHECK(m.validate(s.actions).empty());
}

TEST_CASE("single ply: every strategy gives 35") {
  const PlanningModel m = model_of(make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0)}));
  CHECK(schedule_sequential(m).makespan == 35.0);
  CHECK(schedule_greedy(m).makespan == 35.0);
  CHECK(schedule_optimal(m).schedule.makespan == 35.0);
  CHECK(brute_force_oracle(m) == 35.0);
  const PlanningModel team = model_of(team_ply());
  CHECK(schedule_greedy(team).makespan == 35.0);
  const SearchResult r = schedule_optimal(team);
  CHECK(r.schedule.makespan == 35.0);
  CHECK(r.optimal);
}

TEST_CASE("optimal on two independent plies") {
  const PlanningModel m = model_of(independent_pair());
  const SearchResult r = schedule_optimal(m);
  CHECK(r.schedule.makespan == 55.0);
  CHECK(r.optimal);
  CHECK(m.validate(r.schedule.actions).empty());
  CHECK(brute_force_oracle(m) == 55.0);
  SearchOptions cold;
  cold.seed_with_greedy = false;
  CHECK(schedule_optimal(m, cold).schedule.makespan == 55.0);
}

TEST_CASE("oracle guard") {
  CHECK_THROWS_AS(brute_force_oracle(model_of(generate_plybook(7, 0))), InstanceTooLarge);
  CHECK_NOTHROW(brute_force_oracle(model_of(generate_plybook(3, 0))));
}

TEST_CASE("optimal matches the oracle on small instances") {
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const PlanningModel m = model_of(generate_plybook(n, seed));
      const double oracle = brute_force_oracle(m);
      const SearchResult r = schedule_optimal(m);
      CAPTURE(n);
      CAPTURE(seed);
      CHECK(r.optimal);
      CHECK(r.schedule.makespan == oracle);
      CHECK(remaining_lower_bound(m, m.initial_state()) <= oracle);
      SearchOptions cold;
      cold.seed_with_greedy = false;
      CHECK(schedule_optimal(m, cold).schedule.makespan == oracle);
    }
  }
}

TEST_CASE("heuristic is admissible along optimal plans") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PlanningModel m = model_of(generate_plybook(5, seed));
    const Schedule s = schedule_optimal(m).schedule;
    WorldState state = m.initial_state();
    for (const auto& a : s.actions) {
      CHECK(remaining_lower_bound(m, state) <= s.makespan - state.time + 1e-9);
      state = m.apply(state, a);
    }
    CHECK(remaining_lower_bound(m, state) == 0.0);
  }
}

TEST_CASE("strategy ordering and validity") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const PlanningModel m = model_of(generate_plybook(8, seed));
    const Schedule seq = schedule_sequential(m);
    const Schedule greedy = schedule_greedy(m);
    const SearchResult opt = schedule_optimal(m);
    CHECK(m.validate(seq.actions).empty());
    CHECK(m.validate(greedy.actions).empty());
    CHECK(m.validate(opt.schedule.actions).empty());
    CHECK(opt.schedule.makespan <= greedy.makespan);
    CHECK(opt.schedule.makespan <= seq.makespan);
    CHECK(opt.schedule.makespan < seq.makespan);
    CHECK(seq.makespan == 35.0 * 8);
    CHECK(parallel_count(seq) == 0);
    CHECK(parallel_count(greedy) > 0);
  }
}

TEST_CASE("budget handling") {
  const PlanningModel m = model_of(generate_plybook(10, 1));
  SearchOptions tight;
  tight.node_budget = 50;
  const SearchResult r = schedule_optimal(m, tight);
  CHECK_FALSE(r.optimal);
  CHECK(r.schedule.makespan <= schedule_greedy(m).makespan);
  CHECK(m.validate(r.schedule.actions).empty());

  SearchOptions none;
  none.node_budget = 10;
  none.seed_with_greedy = false;
  CHECK_THROWS_AS(schedule_optimal(m, none), BudgetExceeded);
}

TEST_CASE("make_schedule") {
  const PlanningModel m = model_of(independent_pair());
  const Schedule s = make_schedule(m, {make_pick(0, 0, 0), make_place(0, 0, 0), make_drive(0), make_pick(1, 1, 1),
                                       make_place(1, 1, 1), make_drive(1)});
  CHECK(s.makespan == 70.0);
  CHECK(s.actions[3].t_start == 35.0);
  CHECK_THROWS_AS(make_schedule(m, {make_drive(0)}), InapplicableAction);
}

TEST_CASE("schedules are deterministic") {
  const PlanningModel m = model_of(generate_plybook(9, 4));
  CHECK(schedule_greedy(m) == schedule_greedy(m));
  CHECK(schedule_optimal(m).schedule == schedule_optimal(m).schedule);
  CHECK(schedule_sequential(m) == schedule_sequential(m));
}
