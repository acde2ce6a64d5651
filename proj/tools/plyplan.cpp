// plyplan command-line front end.
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "plyplan/errors.hpp"
#include "plyplan/pddl.hpp"
#include "plyplan/report.hpp"

namespace fs = std::filesystem;
using namespace plyplan;

namespace {

struct Inputs {
  std::string book;
  std::string cell;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--book", in.book, "plybook JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--cell", in.cell, "cell layout JSON (default: reference cell)")->check(CLI::ExistingFile);
}

CellLayout load_cell_or_default(const std::string& path) {
  return path.empty() ? default_cell() : load_cell(path);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
}

void write_gantt(const std::string& path, const PlanFile& plan, const Plybook& book) {
  if (!path.empty()) write_text_file(path, render_gantt(plan.schedule, book, plan.robots));
}

std::vector<Strategy> parse_strategies(const std::string& list) {
  std::vector<Strategy> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_strategy(item));
  }
  if (out.empty()) throw std::invalid_argument("no strategies given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pick-and-place planning for ply layup with two robots"};
  app.require_subcommand(1);
  int status = 0;

  // generate
  int plies = 23;
  std::uint64_t seed = 42;
  std::string out;
  auto* generate = app.add_subcommand("generate", "write a synthetic plybook");
  generate->add_option("--plies", plies, "number of plies")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "generator seed");
  generate->add_option("--out", out, "output file (default stdout)");
  generate->callback([&] { emit(out, plybook_to_json(generate_plybook(plies, seed))); });

  // analyze
  Inputs analyze_in;
  auto* analyze = app.add_subcommand("analyze", "dependency, closure and successor matrices");
  add_inputs(analyze, analyze_in);
  analyze->add_option("--out", out, "output file (default stdout)");
  analyze->callback([&] {
    const Plybook book = load_plybook(analyze_in.book);
    const CellLayout cell = load_cell_or_default(analyze_in.cell);
    emit(out, dependency_to_json(build_dependency_matrix(book, cell.thresholds.overlap_eps_m2)));
  });

  // assign
  Inputs assign_in;
  auto* assign = app.add_subcommand("assign", "gripper configurations per ply");
  add_inputs(assign, assign_in);
  assign->add_option("--out", out, "output file (default stdout)");
  assign->callback([&] {
    const Plybook book = load_plybook(assign_in.book);
    const CellLayout cell = load_cell_or_default(assign_in.cell);
    const ConfigTable table = assign_book(book, cell);
    emit(out, canonical_dump(config_table_to_json(book, table)));
    for (std::size_t i = 0; i < book.size(); ++i) {
      if (table[i].empty()) {
        std::cerr << "error: ply '" << book.plies[i].id << "' has no feasible gripper configuration\n";
        status = 1;
      }
    }
  });

  // plan
  Inputs plan_in;
  std::string strategy = "optimal";
  std::uint64_t budget = SearchOptions{}.node_budget;
  std::string gantt;
  auto* plan = app.add_subcommand("plan", "compute a schedule");
  add_inputs(plan, plan_in);
  plan->add_option("--strategy", strategy, "sequential | greedy | optimal")
      ->check(CLI::IsMember({"sequential", "greedy", "optimal"}));
  plan->add_option("--budget", budget, "node budget for the optimal search");
  plan->add_option("--out", out, "plan JSON (default stdout)");
  plan->add_option("--gantt", gantt, "also write a Gantt chart SVG");
  plan->callback([&] {
    const Plybook book = load_plybook(plan_in.book);
    const PlanningModel model = make_model(book, load_cell_or_default(plan_in.cell));
    PlanFile file;
    switch (parse_strategy(strategy)) {
      case Strategy::kSequential: file = make_plan_file(model, schedule_sequential(model), strategy, false); break;
      case Strategy::kGreedy: file = make_plan_file(model, schedule_greedy(model), strategy, false); break;
      case Strategy::kOptimal: {
        SearchOptions options;
        options.node_budget = budget;
        const SearchResult r = schedule_optimal(model, options);
        file = make_plan_file(model, r.schedule, strategy, r.optimal);
        break;
      }
    }
    emit(out, plan_to_json(file, book));
    write_gantt(gantt, file, book);
  });

  // emit-pddl
  Inputs pddl_in;
  std::string name = "plyplan";
  std::string out_dir = ".";
  auto* emit_pddl = app.add_subcommand("emit-pddl", "write PDDL domain and problem files");
  add_inputs(emit_pddl, pddl_in);
  emit_pddl->add_option("--name", name, "domain name");
  emit_pddl->add_option("--out-dir", out_dir, "output directory");
  emit_pddl->callback([&] {
    const PlanningModel model =
        make_model(load_plybook(pddl_in.book), load_cell_or_default(pddl_in.cell));
    const PddlDocument domain = emit_domain(model, name);
    const PddlDocument problem = emit_problem(model, name);
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / (name + "-domain.pddl"), domain.text);
    write_text_file(fs::path(out_dir) / (name + "-problem.pddl"), problem.text);
  });

  // import-plan
  Inputs import_in;
  std::string plan_path;
  auto* import_plan = app.add_subcommand("import-plan", "validate an external solver plan");
  add_inputs(import_plan, import_in);
  import_plan->add_option("--plan", plan_path, "solver plan file")->required()->check(CLI::ExistingFile);
  import_plan->add_option("--out", out, "plan JSON (default stdout)");
  import_plan->add_option("--gantt", gantt, "also write a Gantt chart SVG");
  import_plan->callback([&] {
    const Plybook book = load_plybook(import_in.book);
    const PlanningModel model = make_model(book, load_cell_or_default(import_in.cell));
    try {
      const Schedule schedule = rehydrate(parse_plan(read_text_file(plan_path)), model);
      const PlanFile file = make_plan_file(model, schedule, "external", false);
      emit(out, plan_to_json(file, book));
      write_gantt(gantt, file, book);
    } catch (const InvalidExternalPlan& e) {
      for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
      throw;
    }
  });

  // export-sim
  std::string book_path;
  auto* export_cmd = app.add_subcommand("export-sim", "simulation step list from a plan");
  export_cmd->add_option("--plan", plan_path, "plan JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--book", book_path, "plybook JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--out", out, "output file (default stdout)");
  export_cmd->callback([&] {
    const Plybook book = load_plybook(book_path);
    const PlanFile file = plan_from_json(read_text_file(plan_path), book);
    emit(out, export_sim(file.schedule, book, file.configs, file.robots));
  });

  // report
  Inputs report_in;
  std::string strategies = "sequential,greedy,optimal";
  auto* report_cmd = app.add_subcommand("report", "compare strategies");
  add_inputs(report_cmd, report_in);
  report_cmd->add_option("--strategies", strategies, "comma-separated strategy list");
  report_cmd->add_option("--budget", budget, "node budget for the optimal search");
  report_cmd->add_option("--out", out, "output file (default stdout)");
  report_cmd->callback([&] {
    SearchOptions options;
    options.node_budget = budget;
    const auto rows = run_report(load_plybook(report_in.book), load_cell_or_default(report_in.cell),
                                 parse_strategies(strategies), options);
    emit(out, format_report(rows));
    for (const auto& r : rows) {
      if (r.status != "ok") {
        std::cerr << "error: " << r.message << "\n";
        status = 1;
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return status;
}
