#include <doctest.h>

#include <algorithm>

#include "plyplan/errors.hpp"
#include "plyplan/pddl.hpp"
#include "support.hpp"

using namespace plyplan;
using namespace plyplan::test;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

PlanningModel fixture_model() {
  return make_model(load_plybook(data_path("book3.json")), load_cell(data_path("cell.json")));
}

std::vector<std::string> categories_of(const InvalidExternalPlan& e) {
  std::vector<std::string> out;
  for (const auto& v : e.violations()) out.push_back(v.substr(0, v.find(':')));
  return out;
}

}  // namespace

TEST_CASE("one ply with one configuration") {
  CellLayout cell = default_cell();
  cell.grippers[1].deformable = false;
  const Plybook book = make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0, Curvature::kSingle)});
  const PlanningModel m = make_model(book, cell);
  REQUIRE(m.configs()[0].size() == 1);
  const std::string domain = emit_domain(m).text;
  CHECK(domain.find("(:action pick-p0-c0\n") != std::string::npos);
  CHECK(domain.find("(:action place-p0-c0\n") != std::string::npos);
  CHECK(domain.find("(:action drive\n") != std::string::npos);
  CHECK(domain.find("par-pick-p0-c0-place") == std::string::npos);
  CHECK(check_domain(domain).empty());
}

TEST_CASE("two independent plies get parallel pick and place") {
  const PlanningModel m = model_of(independent_pair());
  const std::string domain = emit_domain(m).text;
  CHECK(domain.find("(:action par-pick-p0-c0-place-p1-c1\n") != std::string::npos);
  CHECK(domain.find("(:action par-pick-p1-c1-place-p0-c0\n") != std::string::npos);
  // same robot on both sides is never emitted
  CHECK(domain.find("(:action par-pick-p0-c0-place-p1-c0\n") == std::string::npos);
  CHECK(domain.find("(:action par-place-p0-c0-drive\n") != std::string::npos);
  CHECK(domain.find("(:action par-pick-p1-c1-drive\n") != std::string::npos);
  CHECK(domain.find("(:action par-drive-drive\n") != std::string::npos);
  CHECK(domain.find("(:action team-drive\n") != std::string::npos);
  CHECK(domain.find("(increase (total-duration) 20)") != std::string::npos);
}

TEST_CASE("team configuration actions") {
  const PlanningModel m = model_of(team_ply());
  const std::string domain = emit_domain(m).text;
  CHECK(domain.find("(:action team-pick-p0-c0\n") != std::string::npos);
  CHECK(domain.find("(:action team-place-p0-c0\n") != std::string::npos);
  CHECK(domain.find("uses-p0-c0") == std::string::npos);
  CHECK(check_domain(domain).empty());
  CHECK(check_problem(emit_problem(m).text, domain).empty());
}

TEST_CASE("problem structure") {
  for (const Plybook& book : {independent_pair(), generate_plybook(5, 0), generate_plybook(12, 3)}) {
    const PlanningModel m = model_of(book);
    const PddlDocument problem = emit_problem(m, "demo");
    CHECK(problem.kind == PddlKind::kProblem);
    CHECK(problem.text.find("(define (problem demo-problem)") == 0);
    CHECK(problem.text.find("(:domain demo)") != std::string::npos);
    const std::string init = problem.text.substr(0, problem.text.find("(:goal"));
    CHECK(count(init, "(at-table ") == 2);
    const std::string goal = problem.text.substr(problem.text.find("(:goal"));
    CHECK(count(goal, "(placed ") + count(goal, "(at-table ") == book.size() + 2);
    CHECK(problem.text.find("(:metric minimize (total-duration))") != std::string::npos);
    CHECK(check_problem(problem.text, emit_domain(m, "demo").text).empty());
  }
}

TEST_CASE("raw dependencies guard place actions") {
  // chain 0 -> 1 -> 2 without a direct 0-2 overlap
  const Plybook book = make_book({make_ply("A", rect(0, 0, 0.5, 0.3), 0), make_ply("B", rect(0.4, 0, 0.9, 0.3), 1),
                                  make_ply("C", rect(0.8, 0, 1.3, 0.3), 2)});
  const std::string domain = emit_domain(model_of(book)).text;
  const auto start = domain.find("(:action place-p2-c0\n");
  REQUIRE(start != std::string::npos);
  const std::string action = domain.substr(start, domain.find("(:action", start + 1) - start);
  CHECK(action.find("(placed p1)") != std::string::npos);
  CHECK(action.find("(placed p0)") == std::string::npos);
}

TEST_CASE("emitted documents pass the checker") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const PlanningModel m = model_of(generate_plybook(6, seed));
    const std::string domain = emit_domain(m).text;
    CHECK(check_domain(domain).empty());
    CHECK(check_problem(emit_problem(m).text, domain).empty());
  }
  Plybook bad = independent_pair();
  bad.plies[0].curvature = Curvature::kDouble;
  CHECK_THROWS_AS(emit_domain(model_of(bad)), NoFeasibleConfiguration);
}

TEST_CASE("checker rejects broken documents") {
  const PlanningModel m = fixture_model();
  const std::string domain = emit_domain(m, "book3").text;
  const std::string problem = emit_problem(m, "book3").text;

  CHECK_FALSE(check_domain(domain.substr(0, domain.size() - 2)).empty());
  std::string upper = domain;
  upper.replace(upper.find("(:action drive"), 14, "(:action DRIVE");
  CHECK_FALSE(check_domain(upper).empty());
  std::string undeclared = domain;
  undeclared.replace(undeclared.find("(at-form ?r)"), 12, "(at-home ?r)");
  CHECK_FALSE(check_domain(undeclared).empty());
  std::string arity = domain;
  arity.replace(arity.find("(hand-empty ?r)"), 15, "(hand-empty ?r ?r)");
  CHECK_FALSE(check_domain(arity).empty());
  std::string unbound = domain;
  unbound.replace(unbound.find("(hand-empty ?r)"), 15, "(hand-empty ?x)");
  CHECK_FALSE(check_domain(unbound).empty());
  std::string keyword = domain;
  keyword.replace(keyword.find("(:functions"), 11, "(:fluentz");
  CHECK_FALSE(check_domain(keyword).empty());

  std::string other_domain = problem;
  other_domain.replace(other_domain.find("(:domain book3)"), 15, "(:domain other)");
  CHECK_FALSE(check_problem(other_domain, domain).empty());
  std::string unknown_object = problem;
  unknown_object.replace(unknown_object.find("(unhandled p2)"), 14, "(unhandled p9)");
  CHECK_FALSE(check_problem(unknown_object, domain).empty());
}

TEST_CASE("golden files for the 3-ply fixture") {
  const PlanningModel m = fixture_model();
  CHECK(emit_domain(m, "book3").text == read_text_file(data_path("book3-domain.pddl")));
  CHECK(emit_problem(m, "book3").text == read_text_file(data_path("book3-problem.pddl")));
}

TEST_CASE("parse_plan") {
  const ExternalPlan plan = parse_plan("(pick-p0-c0 r1)\n(place-p0-c0 r1)\n(drive r1)\n");
  REQUIRE(plan.steps.size() == 3);
  CHECK(plan.steps[0].action == "pick-p0-c0");
  CHECK(plan.steps[0].args == std::vector<std::string>{"r1"});
  CHECK(plan.steps[2].line == 3);

  const ExternalPlan decorated = parse_plan(
      "; solver output\n\n0: (PICK-P0-C0 R1)\n10.0: (par-pick-p1-c1-place-p0-c0 r2 r1) [20.000]\n"
      "  30.000 :  ( drive   r1 )  \n");
  REQUIRE(decorated.steps.size() == 3);
  CHECK(decorated.steps[0].action == "pick-p0-c0");
  CHECK(decorated.steps[0].args == std::vector<std::string>{"r1"});
  CHECK(decorated.steps[1].args == std::vector<std::string>{"r2", "r1"});
  CHECK(decorated.steps[2].action == "drive");

  CHECK_THROWS_AS(parse_plan("(teleport r1)"), UnknownAction);
  CHECK_THROWS_AS(parse_plan("(pick-p0 r1)"), UnknownAction);
  const auto syntax = message_of<PlanSyntaxError>([] { parse_plan("(drive r1)\n(drive r1\n"); });
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK_THROWS_AS(parse_plan("(drive r1 r2)"), PlanSyntaxError);
  CHECK_THROWS_AS(parse_plan("(team-drive r1)"), PlanSyntaxError);
  CHECK(parse_plan("; nothing\n").steps.empty());
}

TEST_CASE("round trip through the plan format") {
  for (const PlanningModel& m : {fixture_model(), model_of(generate_plybook(5, 0)), model_of(team_ply())}) {
    for (const Schedule& s : {schedule_optimal(m).schedule, schedule_greedy(m), schedule_sequential(m)}) {
      const std::string text = serialize_plan(s);
      const Schedule back = rehydrate(parse_plan(text), m);
      CHECK(back == s);
      CHECK(serialize_plan(back) == text);
    }
  }
}

TEST_CASE("plan lines") {
  const PlanningModel m = model_of(independent_pair());
  CHECK(plan_line(make_pick(1, 1, 1)) == "(pick-p1-c1 r2)");
  CHECK(plan_line(make_parallel(make_place(0, 0, 0), make_pick(1, 1, 1))) == "(par-pick-p1-c1-place-p0-c0 r2 r1)");
  CHECK(plan_line(make_parallel(make_drive(1), make_drive(0))) == "(par-drive-drive r1 r2)");
  CHECK(plan_line(make_team_drive()) == "(team-drive r1 r2)");
  const Schedule s = schedule_greedy(m);
  CHECK(serialize_plan(s).find("0: (pick-p0-c0 r1)\n") == 0);
}

TEST_CASE("rehydrate rejects invalid plans") {
  const PlanningModel m = model_of(dependent_pair());
  try {
    rehydrate(parse_plan("(pick-p0-c0 r1)\n(place-p0-c0 r1)\n(pick-p1-c1 r2)\n(par-place-p1-c1-drive r2 r1)\n"), m);
    FAIL("expected InvalidExternalPlan");
  } catch (const InvalidExternalPlan& e) {
    const auto cats = categories_of(e);
    CHECK(std::find(cats.begin(), cats.end(), "goal failure") != cats.end());
    CHECK(std::string(e.what()).find("goal failure") != std::string::npos);
  }
  try {
    rehydrate(parse_plan("(pick-p1-c0 r1)\n(place-p1-c0 r1)\n(drive r1)\n(pick-p0-c0 r1)\n(place-p0-c0 r1)\n(drive r1)\n"), m);
    FAIL("expected InvalidExternalPlan");
  } catch (const InvalidExternalPlan& e) {
    const auto cats = categories_of(e);
    CHECK(std::find(cats.begin(), cats.end(), "precedence") != cats.end());
  }
  CHECK_THROWS_AS(rehydrate(parse_plan("(pick-p0-c1 r1)"), m), InvalidExternalPlan);   // R2's configuration
  CHECK_THROWS_AS(rehydrate(parse_plan("(pick-p7-c0 r1)"), m), InvalidExternalPlan);   // no such ply
  CHECK_THROWS_AS(rehydrate(parse_plan("(drive r3)"), m), InvalidExternalPlan);
  CHECK_THROWS_AS(rehydrate(parse_plan("(par-drive-drive r1 r1)"), m), InvalidExternalPlan);
}

TEST_CASE("rehydrate ignores solver timestamps") {
  const PlanningModel m = model_of(independent_pair());
  const Schedule s = rehydrate(parse_plan("7: (pick-p0-c0 r1)\n9: (par-pick-p1-c1-place-p0-c0 r2 r1)\n"
                                          "11: (par-place-p1-c1-drive r2 r1)\n13: (drive r2)\n"),
                               m);
  CHECK(s.makespan == 55.0);
  CHECK(s.actions[1].t_start == 10.0);
}
