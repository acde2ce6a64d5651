#include <doctest.h>

#include "plyplan/errors.hpp"
#include "plyplan/json_format.hpp"
#include "plyplan/report.hpp"
#include "support.hpp"

using namespace plyplan;
using namespace plyplan::test;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Shape of one exported step: required keys, types and the pick/place extras.
void check_step_schema(const Json& step) {
  REQUIRE(step.is_object());
  CHECK(step.at("t_start").is_number());
  CHECK(step.at("t_end").is_number());
  CHECK(step.at("t_end").get<double>() >= step.at("t_start").get<double>());
  REQUIRE(step.at("robots").is_array());
  CHECK_FALSE(step.at("robots").empty());
  for (const Json& r : step.at("robots")) CHECK(r.is_string());
  const std::string action = step.at("action").get<std::string>();
  CHECK((action == "pick" || action == "place" || action == "drive"));
  REQUIRE(step.at("grip_poses").is_array());
  CHECK(step.contains("ply") == (action != "drive"));
  CHECK(step.contains("drop_frame") == (action == "place"));
  if (action == "pick") {
    CHECK_FALSE(step.at("grip_poses").empty());
    for (const Json& g : step.at("grip_poses")) {
      CHECK(g.at("gripper").is_string());
      CHECK(g.at("x").is_number());
      CHECK(g.at("y").is_number());
      CHECK(g.at("theta").is_number());
    }
  } else {
    CHECK(step.at("grip_poses").empty());
  }
  if (action == "place") {
    CHECK(step.at("drop_frame").at("position").size() == 3);
    CHECK(step.at("drop_frame").at("rpy").size() == 3);
  }
}

}  // namespace

TEST_CASE("export of a single ply plan") {
  const Plybook book = make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0)});
  const PlanningModel m = model_of(book);
  const Json j = Json::parse(export_sim(schedule_sequential(m), book, m.configs(), robot_ids(m.cell())));
  const Json& steps = j.at("steps");
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].at("action") == "pick");
  CHECK(steps[1].at("action") == "place");
  CHECK(steps[2].at("action") == "drive");
  CHECK(steps[0].at("grip_poses")[0].at("gripper") == "G1");
  CHECK(steps[0].at("grip_poses")[0].at("x").get<double>() == doctest::Approx(0.2));
  CHECK(steps[1].at("drop_frame").at("position")[1] == 2.0);
  CHECK(steps[1].at("ply") == "P0");
  CHECK(j.at("makespan") == 35);
  for (const Json& s : steps) check_step_schema(s);
}

TEST_CASE("composites expand into two steps") {
  const Plybook book = independent_pair();
  const PlanningModel m = model_of(book);
  const Schedule s = schedule_greedy(m);
  const Json steps = Json::parse(export_sim(s, book, m.configs(), robot_ids(m.cell()))).at("steps");
  std::size_t subs = 0;
  for (const auto& a : s.actions) subs += a.sub_count;
  REQUIRE(steps.size() == subs);
  // Par(pick R2, place R1) starting at 10
  CHECK(steps[1].at("t_start") == steps[2].at("t_start"));
  CHECK(steps[1].at("t_end") != steps[2].at("t_end"));
  double last = 0.0;
  std::size_t k = 0;
  for (const auto& a : s.actions) {
    for (const auto& sub : a.subs()) {
      CHECK(steps[k].at("t_start").get<double>() == sub.t_start);
      CHECK(steps[k].at("t_end").get<double>() == sub.t_end);
      ++k;
    }
  }
  for (const Json& step : steps) {
    check_step_schema(step);
    CHECK(step.at("t_start").get<double>() >= last);
    last = step.at("t_start").get<double>();
  }
}

TEST_CASE("team steps name both robots") {
  const Plybook book = team_ply();
  const PlanningModel m = model_of(book);
  const Json steps =
      Json::parse(export_sim(schedule_sequential(m), book, m.configs(), robot_ids(m.cell()))).at("steps");
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].at("robots") == Json::array({"R1", "R2"}));
  CHECK(steps[0].at("grip_poses").size() == 2);
}

TEST_CASE("gantt chart") {
  const RobotIds robots{"R1", "R2"};
  const std::string empty = render_gantt(Schedule{}, Plybook{}, robots);
  CHECK(count(empty, "class=\"lane\"") == 2);
  CHECK(count(empty, "class=\"bar\"") == 0);
  CHECK(empty.rfind("</svg>\n") == empty.size() - 7);

  const Plybook book = independent_pair();
  const PlanningModel m = model_of(book);
  const Schedule s = schedule_greedy(m);
  const std::string svg = render_gantt(s, book, robots);
  CHECK(count(svg, "class=\"bar\"") == 6);
  CHECK(svg.find(">pick/P0<") != std::string::npos);
  CHECK(svg.find(">place/P1<") != std::string::npos);
  // R2's pick runs during R1's place
  const std::size_t lane2 = svg.find("data-robot=\"R2\"");
  CHECK(svg.find("pick/P1 10-20", lane2) != std::string::npos);
  CHECK(svg.find("place/P0 10-30") < lane2);
  CHECK(svg == render_gantt(s, book, robots));
}

TEST_CASE("golden gantt for the 3-ply fixture") {
  const Plybook book = load_plybook(data_path("book3.json"));
  const PlanningModel m = make_model(book, load_cell(data_path("cell.json")));
  CHECK(render_gantt(schedule_optimal(m).schedule, book, robot_ids(m.cell())) ==
        read_text_file(data_path("book3-gantt.svg")));
}

TEST_CASE("plan file round trip") {
  const Plybook book = generate_plybook(6, 2);
  const PlanningModel m = model_of(book);
  const SearchResult r = schedule_optimal(m);
  const PlanFile file = make_plan_file(m, r.schedule, "optimal", r.optimal);
  const std::string text = plan_to_json(file, book);
  const PlanFile back = plan_from_json(text, book);
  CHECK(back.schedule == file.schedule);
  CHECK(back.strategy == "optimal");
  CHECK(back.optimal == r.optimal);
  CHECK(back.robots == file.robots);
  CHECK(plan_to_json(back, book) == text);
  CHECK(m.validate(back.schedule.actions).empty());

  CHECK_THROWS_AS(plan_from_json("{}", book), ParseError);
  CHECK_THROWS_AS(plan_from_json(text, generate_plybook(6, 3)), ParseError);
}

TEST_CASE("report rows") {
  const auto rows = run_report(independent_pair(), default_cell(), {Strategy::kSequential, Strategy::kOptimal});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].makespan == 70.0);
  CHECK(rows[1].makespan == 55.0);
  CHECK(rows[1].optimal);
  CHECK(rows[1].parallel == 2);
  const std::string table = format_report(rows);
  CHECK(table.find("strategy") == 0);
  CHECK(table.find("sequential  ok      70") != std::string::npos);
  CHECK(table.find("optimal     ok      55") != std::string::npos);

  const auto single = run_report(make_book({make_ply("P0", rect(0, 0, 0.4, 0.3), 0)}), default_cell(),
                                 {Strategy::kSequential, Strategy::kGreedy, Strategy::kOptimal});
  for (const auto& row : single) {
    CHECK(row.status == "ok");
    CHECK(row.makespan == 35.0);
  }
}

TEST_CASE("report keeps going after a failing row") {
  Plybook book = independent_pair();
  book.plies[1].material.air_permeable = true;
  const auto rows = run_report(book, default_cell(), {Strategy::kSequential, Strategy::kGreedy});
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) CHECK(row.status == "NoFeasibleConfiguration");
  const std::string table = report(book, default_cell(), {Strategy::kSequential, Strategy::kGreedy});
  CHECK(count(table, "NoFeasibleConfiguration") == 2);
}

TEST_CASE("one failing strategy does not hide the others") {
  SearchOptions starved;
  starved.node_budget = 1;
  starved.seed_with_greedy = false;
  const auto rows = run_report(generate_plybook(6, 1), default_cell(),
                               {Strategy::kSequential, Strategy::kOptimal, Strategy::kGreedy}, starved);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].status == "ok");
  CHECK(rows[1].status == "BudgetExceeded");
  CHECK(rows[2].status == "ok");
  CHECK(format_report(rows).find("optimal     BudgetExceeded  -") != std::string::npos);
}
