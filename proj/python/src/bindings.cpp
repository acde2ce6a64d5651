#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plyplan/errors.hpp"
#include "plyplan/json_format.hpp"
#include "plyplan/pddl.hpp"
#include "plyplan/report.hpp"

namespace py = pybind11;
using namespace plyplan;

namespace {

// Python exception classes keyed by Error::kind(). Never freed.
std::map<std::string, py::handle>& exception_classes() {
  static auto* classes = new std::map<std::string, py::handle>();
  return *classes;
}

void raise_python(const Error& e, const std::vector<std::string>& violations) {
  auto& classes = exception_classes();
  const auto it = classes.find(e.kind());
  py::handle cls = it != classes.end() ? it->second : classes.at("PlyplanError");
  py::object instance = py::reinterpret_borrow<py::object>(cls)(e.what());
  instance.attr("kind") = e.kind();
  instance.attr("violations") = py::cast(violations);
  PyErr_SetObject(cls.ptr(), instance.ptr());
}

void register_exceptions(py::module_& m) {
  auto make = [&](const char* name, PyObject* base) {
    const std::string qualified = std::string("plyplan._plyplan.") + name;
    PyObject* cls = PyErr_NewException(qualified.c_str(), base, nullptr);
    if (cls == nullptr) throw py::error_already_set();
    m.add_object(name, py::handle(cls));
    exception_classes()[name] = cls;
    return cls;
  };
  PyObject* base = make("PlyplanError", PyExc_RuntimeError);
  for (const char* kind :
       {"ParseError", "InvariantError", "DegenerateGeometry", "CyclicDependency", "IndexOutOfRange",
        "UnsupportedCurvature", "NoFeasibleConfiguration", "InapplicableAction", "DeadEnd", "BudgetExceeded",
        "InstanceTooLarge", "PlanSyntaxError", "UnknownAction", "InvalidExternalPlan"}) {
    make(kind, base);
  }
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidExternalPlan& e) {
      raise_python(e, e.violations());
    } catch (const Error& e) {
      raise_python(e, {});
    }
  });
}

CellLayout cell_or_default(const std::optional<std::string>& cell) {
  return cell ? parse_cell(*cell) : default_cell();
}

std::string plan(const std::string& book_text, const std::optional<std::string>& cell, const std::string& strategy,
                 std::uint64_t budget) {
  const Plybook book = parse_plybook(book_text);
  const PlanningModel model = make_model(book, cell_or_default(cell));
  const Strategy s = parse_strategy(strategy);
  if (s == Strategy::kOptimal) {
    SearchOptions options;
    options.node_budget = budget;
    const SearchResult r = schedule_optimal(model, options);
    return plan_to_json(make_plan_file(model, r.schedule, strategy, r.optimal), book);
  }
  const Schedule schedule = s == Strategy::kSequential ? schedule_sequential(model) : schedule_greedy(model);
  return plan_to_json(make_plan_file(model, schedule, strategy, false), book);
}

std::string report_text(const std::string& book_text, const std::optional<std::string>& cell,
                        const std::vector<std::string>& strategies, std::uint64_t budget) {
  std::vector<Strategy> list;
  for (const auto& s : strategies) list.push_back(parse_strategy(s));
  SearchOptions options;
  options.node_budget = budget;
  return format_report(run_report(parse_plybook(book_text), cell_or_default(cell), list, options));
}

}  // namespace

PYBIND11_MODULE(_plyplan, m) {
  m.doc() = "Pick-and-place planning for ply layup with two robots";
  register_exceptions(m);

  using Release = py::call_guard<py::gil_scoped_release>;
  const std::uint64_t default_budget = SearchOptions{}.node_budget;

  m.def(
      "generate_plybook", [](int n, std::uint64_t seed) { return plybook_to_json(generate_plybook(n, seed)); },
      py::arg("n"), py::arg("seed"), "Synthetic plybook as canonical JSON.");
  m.def(
      "default_cell", [] { return cell_to_json(default_cell()); }, "Reference cell as canonical JSON.");
  m.def(
      "canonical_plybook", [](const std::string& text) { return plybook_to_json(parse_plybook(text)); },
      py::arg("book"), "Parse, validate and re-serialize a plybook.");
  m.def(
      "analyze",
      [](const std::string& book, const std::optional<std::string>& cell) {
        return dependency_to_json(
            build_dependency_matrix(parse_plybook(book), cell_or_default(cell).thresholds.overlap_eps_m2));
      },
      py::arg("book"), py::arg("cell") = py::none(), Release(), "Dependency, closure and successor matrices.");
  m.def(
      "assign",
      [](const std::string& book_text, const std::optional<std::string>& cell) {
        const Plybook book = parse_plybook(book_text);
        return canonical_dump(config_table_to_json(book, assign_book(book, cell_or_default(cell))));
      },
      py::arg("book"), py::arg("cell") = py::none(), Release(), "Gripper configurations per ply.");
  m.def("plan", &plan, py::arg("book"), py::arg("cell") = py::none(), py::arg("strategy") = "optimal",
        py::arg("budget") = default_budget, Release(), "Plan JSON for one strategy.");
  m.def(
      "emit_pddl",
      [](const std::string& book, const std::optional<std::string>& cell, const std::string& name) {
        const PlanningModel model = make_model(parse_plybook(book), cell_or_default(cell));
        return std::make_pair(emit_domain(model, name).text, emit_problem(model, name).text);
      },
      py::arg("book"), py::arg("cell") = py::none(), py::arg("name") = "plyplan", Release(),
      "(domain, problem) PDDL texts.");
  m.def("check_domain", [](const std::string& text) { return check_domain(text); }, py::arg("domain"));
  m.def(
      "check_problem", [](const std::string& problem, const std::string& domain) { return check_problem(problem, domain); },
      py::arg("problem"), py::arg("domain"));
  m.def(
      "plan_to_pddl",
      [](const std::string& plan_json, const std::string& book) {
        return serialize_plan(plan_from_json(plan_json, parse_plybook(book)).schedule);
      },
      py::arg("plan"), py::arg("book"), "Solver-style plan text for a plan JSON.");
  m.def(
      "import_plan",
      [](const std::string& plan_text, const std::string& book_text, const std::optional<std::string>& cell) {
        const Plybook book = parse_plybook(book_text);
        const PlanningModel model = make_model(book, cell_or_default(cell));
        const Schedule schedule = rehydrate(parse_plan(plan_text), model);
        return plan_to_json(make_plan_file(model, schedule, "external", false), book);
      },
      py::arg("plan"), py::arg("book"), py::arg("cell") = py::none(), "Validate a solver plan; returns plan JSON.");
  m.def(
      "export_sim",
      [](const std::string& plan_json, const std::string& book_text) {
        const Plybook book = parse_plybook(book_text);
        const PlanFile file = plan_from_json(plan_json, book);
        return export_sim(file.schedule, book, file.configs, file.robots);
      },
      py::arg("plan"), py::arg("book"));
  m.def(
      "gantt",
      [](const std::string& plan_json, const std::string& book_text) {
        const Plybook book = parse_plybook(book_text);
        const PlanFile file = plan_from_json(plan_json, book);
        return render_gantt(file.schedule, book, file.robots);
      },
      py::arg("plan"), py::arg("book"), "Gantt chart SVG.");
  m.def("report", &report_text, py::arg("book"), py::arg("cell") = py::none(),
        py::arg("strategies") = std::vector<std::string>{"sequential", "greedy", "optimal"},
        py::arg("budget") = default_budget, Release(), "Strategy comparison table.");
}
