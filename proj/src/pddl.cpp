#include "plyplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "plyplan/errors.hpp"
#include "plyplan/json_format.hpp"

namespace plyplan {

namespace {

std::string ply_sym(std::size_t p) { return "p" + std::to_string(p); }
std::string robot_sym(std::size_t r) { return "r" + std::to_string(r + 1); }
std::string config_sym(std::size_t p, std::size_t c) { return ply_sym(p) + "-c" + std::to_string(c); }

struct Fragment {
  std::vector<std::string> pre;
  std::vector<std::string> eff;

  void append(const Fragment& o) {
    pre.insert(pre.end(), o.pre.begin(), o.pre.end());
    eff.insert(eff.end(), o.eff.begin(), o.eff.end());
  }
};

Fragment pick_fragment(std::size_t p, std::size_t c, const std::vector<std::string>& vars, bool single) {
  Fragment f;
  const std::string cs = config_sym(p, c);
  for (const auto& v : vars) {
    f.pre.push_back("(at-table " + v + ")");
    f.pre.push_back("(hand-empty " + v + ")");
  }
  f.pre.push_back("(unhandled " + ply_sym(p) + ")");
  if (single) f.pre.push_back("(uses-" + cs + " " + vars[0] + ")");
  for (const auto& v : vars) {
    f.eff.push_back("(not (hand-empty " + v + "))");
    f.eff.push_back("(holding-" + cs + " " + v + " " + ply_sym(p) + ")");
  }
  f.eff.push_back("(not (unhandled " + ply_sym(p) + "))");
  return f;
}

Fragment place_fragment(const PlanningModel& model, std::size_t p, std::size_t c,
                        const std::vector<std::string>& vars) {
  Fragment f;
  const std::string cs = config_sym(p, c);
  for (const auto& v : vars) f.pre.push_back("(holding-" + cs + " " + v + " " + ply_sym(p) + ")");
  for (std::size_t q = 0; q < model.ply_count(); ++q) {
    if (model.deps().dep(q, p)) f.pre.push_back("(placed " + ply_sym(q) + ")");
  }
  for (const auto& v : vars) {
    f.eff.push_back("(not (holding-" + cs + " " + v + " " + ply_sym(p) + "))");
    f.eff.push_back("(hand-empty " + v + ")");
    f.eff.push_back("(not (at-table " + v + "))");
    f.eff.push_back("(at-form " + v + ")");
  }
  f.eff.push_back("(placed " + ply_sym(p) + ")");
  return f;
}

Fragment drive_fragment(const std::vector<std::string>& vars) {
  Fragment f;
  for (const auto& v : vars) {
    f.pre.push_back("(at-form " + v + ")");
    f.eff.push_back("(not (at-form " + v + "))");
    f.eff.push_back("(at-table " + v + ")");
  }
  return f;
}

void write_action(std::ostream& out, const std::string& name, const std::vector<std::string>& vars,
                  Fragment body, double duration) {
  if (vars.size() == 2) body.pre.insert(body.pre.begin(), "(other " + vars[0] + " " + vars[1] + ")");
  body.eff.push_back("(increase (total-duration) " + format_number(duration) + ")");
  out << "  (:action " << name << "\n    :parameters (";
  for (std::size_t i = 0; i < vars.size(); ++i) out << (i ? " " : "") << vars[i] << " - robot";
  out << ")\n    :precondition (and";
  for (const auto& p : body.pre) out << " " << p;
  out << ")\n    :effect (and";
  for (const auto& e : body.eff) out << " " << e;
  out << ")\n  )\n";
}

bool is_team_config(const PlanningModel& model, std::size_t p, std::size_t c) {
  return model.config_robots(p, c) == kBothRobots;
}

void require_configs(const PlanningModel& model) {
  for (std::size_t p = 0; p < model.ply_count(); ++p) {
    if (model.configs()[p].empty()) {
      throw NoFeasibleConfiguration("ply '" + model.book().plies[p].id + "' has no gripper configuration");
    }
  }
}

}  // namespace

PddlDocument emit_domain(const PlanningModel& model, std::string_view name) {
  require_configs(model);
  const std::size_t n = model.ply_count();
  const double pick = model.duration(Op::kPick);
  const double place = model.duration(Op::kPlace);
  const double drive = model.duration(Op::kDrive);
  const std::vector<std::string> one{"?r"};
  const std::vector<std::string> two{"?a", "?b"};
  const std::vector<std::string> first{"?a"};
  const std::vector<std::string> second{"?b"};

  std::ostringstream out;
  out << "(define (domain " << name << ")\n";
  out << "  (:requirements :typing :fluents)\n";
  out << "  (:types robot ply)\n";
  out << "  (:constants";
  for (std::size_t p = 0; p < n; ++p) out << " " << ply_sym(p);
  out << " - ply)\n";
  out << "  (:predicates\n";
  out << "    (at-table ?r - robot)\n";
  out << "    (at-form ?r - robot)\n";
  out << "    (hand-empty ?r - robot)\n";
  out << "    (other ?a - robot ?b - robot)\n";
  out << "    (unhandled ?p - ply)\n";
  out << "    (placed ?p - ply)\n";
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < model.configs()[p].size(); ++c) {
      if (!is_team_config(model, p, c)) out << "    (uses-" << config_sym(p, c) << " ?r - robot)\n";
      out << "    (holding-" << config_sym(p, c) << " ?r - robot ?p - ply)\n";
    }
  }
  out << "  )\n";
  out << "  (:functions\n    (total-duration)\n  )\n";

  std::vector<std::pair<std::size_t, std::size_t>> singles, teams;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < model.configs()[p].size(); ++c) {
      (is_team_config(model, p, c) ? teams : singles).emplace_back(p, c);
    }
  }

  for (const auto& [p, c] : singles) {
    write_action(out, "pick-" + config_sym(p, c), one, pick_fragment(p, c, one, true), pick);
    write_action(out, "place-" + config_sym(p, c), one, place_fragment(model, p, c, one), place);
  }
  write_action(out, "drive", one, drive_fragment(one), drive);
  for (const auto& [p, c] : teams) {
    write_action(out, "team-pick-" + config_sym(p, c), two, pick_fragment(p, c, two, false), pick);
    write_action(out, "team-place-" + config_sym(p, c), two, place_fragment(model, p, c, two), place);
  }
  write_action(out, "team-drive", two, drive_fragment(two), drive);

  for (const auto& [p, c] : singles) {
    for (const auto& [q, d] : singles) {
      if (p == q || model.config_robots(p, c) == model.config_robots(q, d)) continue;
      Fragment body = pick_fragment(p, c, first, true);
      body.append(place_fragment(model, q, d, second));
      write_action(out, "par-pick-" + config_sym(p, c) + "-place-" + config_sym(q, d), two, body,
                   std::max(pick, place));
    }
  }
  for (const auto& [p, c] : singles) {
    Fragment body = place_fragment(model, p, c, first);
    body.append(drive_fragment(second));
    write_action(out, "par-place-" + config_sym(p, c) + "-drive", two, body, std::max(place, drive));
  }
  for (const auto& [p, c] : singles) {
    Fragment body = pick_fragment(p, c, first, true);
    body.append(drive_fragment(second));
    write_action(out, "par-pick-" + config_sym(p, c) + "-drive", two, body, std::max(pick, drive));
  }
  {
    Fragment body = drive_fragment(first);
    body.append(drive_fragment(second));
    write_action(out, "par-drive-drive", two, body, drive);
  }
  out << ")\n";
  return {PddlKind::kDomain, std::string(name), out.str()};
}

PddlDocument emit_problem(const PlanningModel& model, std::string_view name) {
  const std::size_t n = model.ply_count();
  std::ostringstream out;
  out << "(define (problem " << name << "-problem)\n";
  out << "  (:domain " << name << ")\n";
  out << "  (:objects " << robot_sym(0) << " " << robot_sym(1) << " - robot)\n";
  out << "  (:init\n";
  for (std::size_t r = 0; r < kRobotCount; ++r) out << "    (at-table " << robot_sym(r) << ")\n";
  for (std::size_t r = 0; r < kRobotCount; ++r) out << "    (hand-empty " << robot_sym(r) << ")\n";
  out << "    (other r1 r2)\n    (other r2 r1)\n";
  for (std::size_t p = 0; p < n; ++p) out << "    (unhandled " << ply_sym(p) << ")\n";
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < model.configs()[p].size(); ++c) {
      const RobotMask m = model.config_robots(p, c);
      if (m == kBothRobots) continue;
      out << "    (uses-" << config_sym(p, c) << " " << robot_sym(m == robot_bit(0) ? 0 : 1) << ")\n";
    }
  }
  out << "    (= (total-duration) 0)\n";
  out << "  )\n";
  out << "  (:goal (and";
  for (std::size_t p = 0; p < n; ++p) out << " (placed " << ply_sym(p) << ")";
  out << " (at-table r1) (at-table r2)))\n";
  out << "  (:metric minimize (total-duration))\n";
  out << ")\n";
  return {PddlKind::kProblem, std::string(name), out.str()};
}

// ---------------------------------------------------------------------------
// Grammar check

namespace {

struct Sexp {
  std::string atom;  // empty for lists
  std::vector<Sexp> items;
  bool is_list = false;
};

class SexpParser {
 public:
  SexpParser(std::string_view text, std::vector<std::string>& errors) : text_(text), errors_(errors) {}

  std::optional<Sexp> parse_document() {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      errors_.push_back("document does not start with '('");
      return std::nullopt;
    }
    Sexp root = parse_list();
    skip();
    if (!failed_ && pos_ != text_.size()) errors_.push_back("trailing text after the closing parenthesis");
    if (failed_) return std::nullopt;
    return root;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Sexp parse_list() {
    Sexp list;
    list.is_list = true;
    ++pos_;
    while (true) {
      skip();
      if (pos_ >= text_.size()) {
        fail("unbalanced parentheses: missing ')'");
        return list;
      }
      if (text_[pos_] == ')') {
        ++pos_;
        return list;
      }
      if (text_[pos_] == '(') {
        list.items.push_back(parse_list());
        if (failed_) return list;
        continue;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '(' && text_[pos_] != ')') {
        ++pos_;
      }
      Sexp atom;
      atom.atom = std::string(text_.substr(start, pos_ - start));
      for (char ch : atom.atom) {
        if (std::isupper(static_cast<unsigned char>(ch))) {
          errors_.push_back("token '" + atom.atom + "' is not lowercase");
          break;
        }
      }
      list.items.push_back(std::move(atom));
    }
  }

  void fail(const std::string& msg) {
    if (!failed_) errors_.push_back(msg);
    failed_ = true;
  }

  std::string_view text_;
  std::vector<std::string>& errors_;
  std::size_t pos_ = 0;
  bool failed_ = false;
};

bool head_is(const Sexp& s, std::string_view head) {
  return s.is_list && !s.items.empty() && !s.items[0].is_list && s.items[0].atom == head;
}

// Names in a typed list "a b - t c - u" (types dropped).
std::vector<std::string> typed_names(const std::vector<Sexp>& items, std::size_t from,
                                     std::vector<std::string>& errors, const std::set<std::string>& types) {
  std::vector<std::string> names;
  for (std::size_t i = from; i < items.size(); ++i) {
    if (items[i].is_list) {
      errors.push_back("unexpected list in typed list");
      continue;
    }
    if (items[i].atom == "-") {
      if (i + 1 >= items.size() || items[i + 1].is_list || !types.contains(items[i + 1].atom)) {
        errors.push_back("unknown type in typed list");
      }
      ++i;
      continue;
    }
    names.push_back(items[i].atom);
  }
  return names;
}

struct DomainInfo {
  std::string name;
  std::set<std::string> types;
  std::set<std::string> constants;
  std::map<std::string, std::size_t> predicates;
  std::map<std::string, std::size_t> functions;
};

class FormulaChecker {
 public:
  FormulaChecker(const DomainInfo& info, std::set<std::string> terms, std::vector<std::string>& errors,
                 std::string where)
      : info_(info), terms_(std::move(terms)), errors_(errors), where_(std::move(where)) {}

  void atom(const Sexp& s) {
    if (!s.is_list || s.items.empty() || s.items[0].is_list) {
      error("malformed atom");
      return;
    }
    const std::string& pred = s.items[0].atom;
    auto it = info_.predicates.find(pred);
    if (it == info_.predicates.end()) {
      error("undeclared predicate '" + pred + "'");
      return;
    }
    if (it->second != s.items.size() - 1) {
      error("predicate '" + pred + "' expects " + std::to_string(it->second) + " arguments");
    }
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      if (s.items[i].is_list || !terms_.contains(s.items[i].atom)) {
        error("unknown term in '" + pred + "'");
      }
    }
  }

  void fluent(const Sexp& s) {
    if (!s.is_list || s.items.empty() || s.items[0].is_list || !info_.functions.contains(s.items[0].atom)) {
      error("undeclared function");
      return;
    }
    if (info_.functions.at(s.items[0].atom) != s.items.size() - 1) error("function arity mismatch");
  }

  void number(const Sexp& s) {
    if (s.is_list) {
      error("expected number");
      return;
    }
    char* end = nullptr;
    std::strtod(s.atom.c_str(), &end);
    if (end == s.atom.c_str() || *end != '\0') error("expected number, got '" + s.atom + "'");
  }

  // and / not / atom, plus numeric updates when allowed.
  void formula(const Sexp& s, bool effect, bool init) {
    if (head_is(s, "and") && !init) {
      for (std::size_t i = 1; i < s.items.size(); ++i) formula(s.items[i], effect, init);
    } else if (head_is(s, "not") && !init) {
      if (s.items.size() != 2) error("'not' takes one argument");
      else atom(s.items[1]);
    } else if (head_is(s, "increase") && effect) {
      if (s.items.size() != 3) {
        error("'increase' takes two arguments");
        return;
      }
      fluent(s.items[1]);
      number(s.items[2]);
    } else if (head_is(s, "=") && init) {
      if (s.items.size() != 3) {
        error("'=' takes two arguments");
        return;
      }
      fluent(s.items[1]);
      number(s.items[2]);
    } else {
      atom(s);
    }
  }

 private:
  void error(const std::string& msg) { errors_.push_back(where_ + ": " + msg); }

  const DomainInfo& info_;
  std::set<std::string> terms_;
  std::vector<std::string>& errors_;
  std::string where_;
};

std::optional<DomainInfo> read_domain(std::string_view text, std::vector<std::string>& errors) {
  SexpParser parser(text, errors);
  const auto root = parser.parse_document();
  if (!root) return std::nullopt;
  DomainInfo info;
  if (!head_is(*root, "define") || root->items.size() < 2 || !head_is(root->items[1], "domain") ||
      root->items[1].items.size() != 2) {
    errors.push_back("expected (define (domain <name>) ...)");
    return std::nullopt;
  }
  info.name = root->items[1].items[1].atom;

  static const std::set<std::string> kSections{":requirements", ":types", ":constants",
                                               ":predicates", ":functions", ":action"};
  std::vector<const Sexp*> actions;
  for (std::size_t i = 2; i < root->items.size(); ++i) {
    const Sexp& sec = root->items[i];
    if (!sec.is_list || sec.items.empty() || sec.items[0].is_list || !kSections.contains(sec.items[0].atom)) {
      errors.push_back("unknown domain section");
      continue;
    }
    const std::string& head = sec.items[0].atom;
    if (head == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        if (sec.items[k].atom != ":typing" && sec.items[k].atom != ":fluents") {
          errors.push_back("unsupported requirement '" + sec.items[k].atom + "'");
        }
      }
    } else if (head == ":types") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) info.types.insert(sec.items[k].atom);
    } else if (head == ":constants") {
      for (const auto& c : typed_names(sec.items, 1, errors, info.types)) info.constants.insert(c);
    } else if (head == ":predicates" || head == ":functions") {
      auto& table = head == ":predicates" ? info.predicates : info.functions;
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Sexp& decl = sec.items[k];
        if (!decl.is_list || decl.items.empty() || decl.items[0].is_list) {
          errors.push_back("malformed declaration in " + head);
          continue;
        }
        const auto vars = typed_names(decl.items, 1, errors, info.types);
        if (!table.emplace(decl.items[0].atom, vars.size()).second) {
          errors.push_back("duplicate declaration '" + decl.items[0].atom + "'");
        }
      }
    } else {
      actions.push_back(&sec);
    }
  }

  std::set<std::string> action_names;
  for (const Sexp* act : actions) {
    if (act->items.size() != 8 || act->items[1].is_list || act->items[2].atom != ":parameters" ||
        act->items[4].atom != ":precondition" || act->items[6].atom != ":effect" ||
        !act->items[3].is_list) {
      errors.push_back("malformed action");
      continue;
    }
    const std::string& name = act->items[1].atom;
    if (!action_names.insert(name).second) errors.push_back("duplicate action '" + name + "'");
    std::set<std::string> terms = info.constants;
    for (const auto& v : typed_names(act->items[3].items, 0, errors, info.types)) {
      if (v.empty() || v[0] != '?') errors.push_back(name + ": parameter '" + v + "' is not a variable");
      terms.insert(v);
    }
    FormulaChecker check(info, terms, errors, name);
    check.formula(act->items[5], false, false);
    check.formula(act->items[7], true, false);
  }
  return info;
}

}  // namespace

std::vector<std::string> check_domain(std::string_view text) {
  std::vector<std::string> errors;
  read_domain(text, errors);
  return errors;
}

std::vector<std::string> check_problem(std::string_view problem_text, std::string_view domain_text) {
  std::vector<std::string> errors;
  std::vector<std::string> domain_errors;
  const auto info = read_domain(domain_text, domain_errors);
  if (!info) {
    errors.push_back("domain does not parse");
    return errors;
  }
  SexpParser parser(problem_text, errors);
  const auto root = parser.parse_document();
  if (!root) return errors;
  if (!head_is(*root, "define") || root->items.size() != 7 || !head_is(root->items[1], "problem") ||
      !head_is(root->items[2], ":domain") || !head_is(root->items[3], ":objects") ||
      !head_is(root->items[4], ":init") || !head_is(root->items[5], ":goal") ||
      !head_is(root->items[6], ":metric")) {
    errors.push_back("expected (define (problem ..) (:domain ..) (:objects ..) (:init ..) (:goal ..) (:metric ..))");
    return errors;
  }
  if (root->items[2].items.size() != 2 || root->items[2].items[1].atom != info->name) {
    errors.push_back("problem refers to a different domain than '" + info->name + "'");
  }
  std::set<std::string> terms = info->constants;
  for (const auto& o : typed_names(root->items[3].items, 1, errors, info->types)) terms.insert(o);
  FormulaChecker check(*info, terms, errors, "problem");
  for (std::size_t i = 1; i < root->items[4].items.size(); ++i) check.formula(root->items[4].items[i], false, true);
  if (root->items[5].items.size() != 2) errors.push_back("goal takes one formula");
  else check.formula(root->items[5].items[1], false, false);
  const Sexp& metric = root->items[6];
  if (metric.items.size() != 3 || metric.items[1].atom != "minimize") {
    errors.push_back("metric must minimize");
  } else {
    check.fluent(metric.items[2]);
  }
  return errors;
}

// ---------------------------------------------------------------------------
// Plans

std::string plan_line(const ActionInstance& a) {
  const auto robot = [](RobotMask m) { return robot_sym(m == robot_bit(0) ? 0 : 1); };
  const auto grounded = [](const SubAction& s) {
    return config_sym(static_cast<std::size_t>(s.ply), static_cast<std::size_t>(s.config));
  };
  const SubAction& x = a.sub[0];
  const SubAction& y = a.sub[1];
  switch (a.kind) {
    case ActionKind::kPick: return "(pick-" + grounded(x) + " " + robot(x.robots) + ")";
    case ActionKind::kPlace: return "(place-" + grounded(x) + " " + robot(x.robots) + ")";
    case ActionKind::kDrive: return "(drive " + robot(x.robots) + ")";
    case ActionKind::kTeamPick: return "(team-pick-" + grounded(x) + " r1 r2)";
    case ActionKind::kTeamPlace: return "(team-place-" + grounded(x) + " r1 r2)";
    case ActionKind::kTeamDrive: return "(team-drive r1 r2)";
    case ActionKind::kParPickPlace:
      return "(par-pick-" + grounded(x) + "-place-" + grounded(y) + " " + robot(x.robots) + " " +
             robot(y.robots) + ")";
    case ActionKind::kParPlaceDrive:
      return "(par-place-" + grounded(x) + "-drive " + robot(x.robots) + " " + robot(y.robots) + ")";
    case ActionKind::kParPickDrive:
      return "(par-pick-" + grounded(x) + "-drive " + robot(x.robots) + " " + robot(y.robots) + ")";
    case ActionKind::kParDriveDrive:
      return "(par-drive-drive " + robot(x.robots) + " " + robot(y.robots) + ")";
  }
  return "";
}

std::string serialize_plan(const Schedule& schedule) {
  std::string out;
  for (const ActionInstance& a : schedule.actions) {
    out += format_number(a.t_start) + ": " + plan_line(a) + "\n";
  }
  return out;
}

namespace {

struct ParsedName {
  ActionKind kind;
  std::array<int, 2> ply{-1, -1};
  std::array<int, 2> config{-1, -1};
};

std::size_t arity(ActionKind kind) {
  return kind == ActionKind::kPick || kind == ActionKind::kPlace || kind == ActionKind::kDrive ? 1 : 2;
}

std::optional<ParsedName> parse_name(const std::string& name) {
  static const std::regex kAtomic(R"(^(pick|place|team-pick|team-place)-p(\d+)-c(\d+)$)");
  static const std::regex kPickPlace(R"(^par-pick-p(\d+)-c(\d+)-place-p(\d+)-c(\d+)$)");
  static const std::regex kWithDrive(R"(^par-(pick|place)-p(\d+)-c(\d+)-drive$)");
  std::smatch m;
  const auto num = [&](std::size_t i) {
    const std::string s = m[i].str();
    return s.size() > 6 ? -2 : std::stoi(s);
  };
  if (name == "drive") return ParsedName{ActionKind::kDrive};
  if (name == "team-drive") return ParsedName{ActionKind::kTeamDrive};
  if (name == "par-drive-drive") return ParsedName{ActionKind::kParDriveDrive};
  if (std::regex_match(name, m, kAtomic)) {
    static const std::map<std::string, ActionKind> kinds{{"pick", ActionKind::kPick},
                                                          {"place", ActionKind::kPlace},
                                                          {"team-pick", ActionKind::kTeamPick},
                                                          {"team-place", ActionKind::kTeamPlace}};
    return ParsedName{kinds.at(m[1].str()), {num(2), -1}, {num(3), -1}};
  }
  if (std::regex_match(name, m, kPickPlace)) {
    return ParsedName{ActionKind::kParPickPlace, {num(1), num(3)}, {num(2), num(4)}};
  }
  if (std::regex_match(name, m, kWithDrive)) {
    const ActionKind k = m[1].str() == "pick" ? ActionKind::kParPickDrive : ActionKind::kParPlaceDrive;
    return ParsedName{k, {num(2), -1}, {num(3), -1}};
  }
  return std::nullopt;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ExternalPlan parse_plan(std::string_view text) {
  static const std::regex kLine(R"(^(?:\d+(?:\.\d+)?\s*:\s*)?\(\s*([^()\s]+)((?:\s+[^()\s]+)*)\s*\)\s*(?:\[[^\]]*\])?$)");
  ExternalPlan plan;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = lower(trim(raw));
    if (line.empty() || line[0] == ';') continue;
    std::smatch m;
    if (!std::regex_match(line, m, kLine)) {
      throw PlanSyntaxError("line " + std::to_string(line_no) + ": expected '(action args...)'");
    }
    PlanStep step;
    step.action = m[1].str();
    step.line = line_no;
    std::istringstream args(m[2].str());
    for (std::string a; args >> a;) step.args.push_back(a);
    const auto parsed = parse_name(step.action);
    if (!parsed) {
      throw UnknownAction("line " + std::to_string(line_no) + ": unknown action '" + step.action + "'");
    }
    if (step.args.size() != arity(parsed->kind)) {
      throw PlanSyntaxError("line " + std::to_string(line_no) + ": '" + step.action + "' takes " +
                            std::to_string(arity(parsed->kind)) + " argument(s)");
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

Schedule rehydrate(const ExternalPlan& plan, const PlanningModel& model) {
  const auto invalid = [](const PlanStep& step, const std::string& why) {
    return InvalidExternalPlan("line " + std::to_string(step.line) + ": " + why, {why});
  };
  const auto robot_of = [&](const PlanStep& step, const std::string& sym) -> std::size_t {
    if (sym == "r1") return 0;
    if (sym == "r2") return 1;
    throw invalid(step, "unknown robot '" + sym + "'");
  };

  std::vector<ActionInstance> actions;
  double t = 0.0;
  for (const PlanStep& step : plan.steps) {
    const auto name = parse_name(step.action);
    if (!name) throw UnknownAction("unknown action '" + step.action + "'");
    if (step.args.size() != arity(name->kind)) throw invalid(step, "wrong number of arguments");
    std::vector<std::size_t> robots;
    for (const auto& a : step.args) robots.push_back(robot_of(step, a));
    if (robots.size() == 2 && robots[0] == robots[1]) throw invalid(step, "both arguments name the same robot");

    // The grounding must exist in the emitted domain.
    const auto check_config = [&](int ply, int config, bool team) {
      if (ply < 0 || static_cast<std::size_t>(ply) >= model.ply_count() || config < 0 ||
          static_cast<std::size_t>(config) >= model.configs()[static_cast<std::size_t>(ply)].size() ||
          is_team_config(model, static_cast<std::size_t>(ply), static_cast<std::size_t>(config)) != team) {
        throw invalid(step, "action '" + step.action + "' is not in the domain");
      }
      return std::pair{static_cast<std::size_t>(ply), static_cast<std::size_t>(config)};
    };

    ActionInstance a;
    switch (name->kind) {
      case ActionKind::kPick: {
        auto [p, c] = check_config(name->ply[0], name->config[0], false);
        a = make_pick(robots[0], p, c);
        break;
      }
      case ActionKind::kPlace: {
        auto [p, c] = check_config(name->ply[0], name->config[0], false);
        a = make_place(robots[0], p, c);
        break;
      }
      case ActionKind::kDrive: a = make_drive(robots[0]); break;
      case ActionKind::kTeamPick: {
        auto [p, c] = check_config(name->ply[0], name->config[0], true);
        a = make_team_pick(p, c);
        break;
      }
      case ActionKind::kTeamPlace: {
        auto [p, c] = check_config(name->ply[0], name->config[0], true);
        a = make_team_place(p, c);
        break;
      }
      case ActionKind::kTeamDrive: a = make_team_drive(); break;
      case ActionKind::kParPickPlace: {
        auto [p, c] = check_config(name->ply[0], name->config[0], false);
        auto [q, d] = check_config(name->ply[1], name->config[1], false);
        if (p == q) throw invalid(step, "action '" + step.action + "' is not in the domain");
        a = make_parallel(make_pick(robots[0], p, c), make_place(robots[1], q, d));
        break;
      }
      case ActionKind::kParPlaceDrive: {
        auto [p, c] = check_config(name->ply[0], name->config[0], false);
        a = make_parallel(make_place(robots[0], p, c), make_drive(robots[1]));
        break;
      }
      case ActionKind::kParPickDrive: {
        auto [p, c] = check_config(name->ply[0], name->config[0], false);
        a = make_parallel(make_pick(robots[0], p, c), make_drive(robots[1]));
        break;
      }
      case ActionKind::kParDriveDrive:
        a = make_parallel(make_drive(robots[0]), make_drive(robots[1]));
        break;
    }
    for (std::size_t k = 0; k < a.sub_count; ++k) {
      const SubAction& s = a.sub[k];
      if (s.ply >= 0 && model.config_robots(static_cast<std::size_t>(s.ply), static_cast<std::size_t>(s.config)) != s.robots) {
        throw invalid(step, "configuration in '" + step.action + "' belongs to another robot");
      }
    }
    a = model.timed(a, t);
    t = a.t_end;
    actions.push_back(a);
  }

  const auto violations = model.validate(actions);
  if (!violations.empty()) {
    std::vector<std::string> messages;
    std::string summary;
    for (const Violation& v : violations) {
      messages.push_back(v.category + ": " + v.message);
      if (summary.find(v.category) == std::string::npos) summary += (summary.empty() ? "" : ", ") + v.category;
    }
    throw InvalidExternalPlan("plan rejected (" + summary + ")", std::move(messages));
  }
  return Schedule{std::move(actions), t};
}

}  // namespace plyplan
