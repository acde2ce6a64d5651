#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plyplan/planning_model.hpp"

namespace plyplan {

enum class PddlKind { kDomain, kProblem };

struct PddlDocument {
  PddlKind kind = PddlKind::kDomain;
  std::string name;  // domain name; the problem is called <name>-problem
  std::string text;
};

struct PlanStep {
  std::string action;
  std::vector<std::string> args;
  int line = 0;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

struct ExternalPlan {
  std::vector<PlanStep> steps;
};

// Grounded numeric-fluent domain: one action per (ply, configuration) and
// kind, plus the four parallel composites. Precedence uses the raw
// dependency relation. Throws NoFeasibleConfiguration.
PddlDocument emit_domain(const PlanningModel& model, std::string_view name = "plyplan");
PddlDocument emit_problem(const PlanningModel& model, std::string_view name = "plyplan");

// Structural check of an emitted document: balanced parentheses, lowercase
// tokens, known section keywords, declared predicates with matching arity,
// declared variables and objects. A problem is checked against its domain.
std::vector<std::string> check_domain(std::string_view text);
std::vector<std::string> check_problem(std::string_view problem_text, std::string_view domain_text);

// Grounded PDDL name and arguments for an action, e.g. "(pick-p0-c0 r1)".
std::string plan_line(const ActionInstance& a);

// One "t: (action args)" line per action.
std::string serialize_plan(const Schedule& schedule);

// Reads "(action args)" lines with optional "k:" / "k.0:" prefixes and
// trailing "[duration]". ';' lines are comments; names are case-insensitive.
// Throws PlanSyntaxError (with line number) or UnknownAction.
ExternalPlan parse_plan(std::string_view text);

// Maps a parsed plan onto the model, assigns times by accumulation and
// validates it. Throws InvalidExternalPlan with the violation list.
Schedule rehydrate(const ExternalPlan& plan, const PlanningModel& model);

}  // namespace plyplan
