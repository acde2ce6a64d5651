#include "plyplan/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "plyplan/errors.hpp"

namespace plyplan {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kSequential: return "sequential";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kOptimal: return "optimal";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "sequential") return Strategy::kSequential;
  if (name == "greedy") return Strategy::kGreedy;
  if (name == "optimal") return Strategy::kOptimal;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

PlanningModel make_model(const Plybook& book, const CellLayout& cell) {
  DependencyMatrix deps = build_dependency_matrix(book, cell.thresholds.overlap_eps_m2);
  ConfigTable configs = assign_book(book, cell);
  return PlanningModel(book, std::move(deps), std::move(configs), cell);
}

Schedule make_schedule(const PlanningModel& model, std::vector<ActionInstance> actions) {
  WorldState s = model.initial_state();
  for (ActionInstance& a : actions) {
    a = model.timed(a, s.time);
    s = model.apply(s, a);
  }
  return Schedule{std::move(actions), s.time};
}

std::size_t parallel_count(const Schedule& s) {
  return static_cast<std::size_t>(std::count_if(s.actions.begin(), s.actions.end(),
                                                [](const ActionInstance& a) { return is_composite(a.kind); }));
}

namespace {

constexpr double kTol = 1e-9;

void require_configs(const PlanningModel& model) {
  for (std::size_t p = 0; p < model.ply_count(); ++p) {
    if (model.configs()[p].empty()) {
      throw NoFeasibleConfiguration("ply '" + model.book().plies[p].id + "' has no gripper configuration");
    }
  }
}

std::uint64_t all_plies(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

Schedule schedule_sequential(const PlanningModel& model) {
  require_configs(model);
  const std::size_t n = model.ply_count();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.book().plies[a].layer < model.book().plies[b].layer;
  });

  std::vector<ActionInstance> actions;
  for (std::size_t p : order) {
    const auto& configs = model.configs()[p];
    std::size_t chosen = 0;
    std::optional<std::size_t> chosen_robot;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      const RobotMask m = model.config_robots(p, c);
      if (m == kBothRobots) continue;
      const std::size_t r = m == robot_bit(0) ? 0 : 1;
      if (!chosen_robot || model.robot_id(r) < model.robot_id(*chosen_robot)) {
        chosen = c;
        chosen_robot = r;
      }
    }
    if (chosen_robot) {
      actions.push_back(make_pick(*chosen_robot, p, chosen));
      actions.push_back(make_place(*chosen_robot, p, chosen));
      actions.push_back(make_drive(*chosen_robot));
    } else {
      actions.push_back(make_team_pick(p, 0));
      actions.push_back(make_team_place(p, 0));
      actions.push_back(make_team_drive());
    }
  }
  return make_schedule(model, std::move(actions));
}

namespace {

std::string tie_break_key(const PlanningModel& model, const ActionInstance& a) {
  std::string key(to_string(a.kind));
  key += '|';
  for (const SubAction& s : a.subs()) {
    for (std::size_t r = 0; r < kRobotCount; ++r) {
      if (s.robots & robot_bit(r)) key += model.robot_id(r) + ",";
    }
    key += '|';
  }
  for (const SubAction& s : a.subs()) {
    if (s.ply >= 0) {
      key += model.book().plies[static_cast<std::size_t>(s.ply)].id;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "#%06d", s.config);
      key += buf;
    }
    key += '|';
  }
  return key;
}

// Pick shortlist: p may be picked now if all its predecessors are placed or
// held, and p may follow every held ply (successor matrix).
bool pick_allowed(const PlanningModel& model, const WorldState& s, std::size_t p) {
  std::uint64_t available = s.placed.bits();
  for (const auto& h : s.holding) {
    if (!h) continue;
    if (!model.deps().succ(h->ply, p)) return false;
    available |= std::uint64_t{1} << h->ply;
  }
  return (model.predecessor_bits(p) & ~available) == 0;
}

}  // namespace

Schedule schedule_greedy(const PlanningModel& model) {
  require_configs(model);
  WorldState s = model.initial_state();
  std::vector<ActionInstance> actions;
  std::vector<ActionInstance> candidates;
  while (!model.is_goal(s)) {
    candidates.clear();
    model.applicable_actions(s, candidates);
    const ActionInstance* best = nullptr;
    std::string best_key;
    for (const ActionInstance& a : candidates) {
      bool allowed = true;
      for (const SubAction& sub : a.subs()) {
        if (sub.op == Op::kPick) allowed = allowed && pick_allowed(model, s, static_cast<std::size_t>(sub.ply));
      }
      if (!allowed) continue;
      std::string key = tie_break_key(model, a);
      if (best != nullptr) {
        const bool ca = is_composite(a.kind);
        const bool cb = is_composite(best->kind);
        if (ca != cb) {
          if (!ca) continue;
        } else {
          const double da = model.duration(a);
          const double db = model.duration(*best);
          if (da < db - kTol) continue;
          if (std::abs(da - db) <= kTol && key >= best_key) continue;
        }
      }
      best = &a;
      best_key = std::move(key);
    }
    if (best == nullptr) {
      throw DeadEnd("greedy schedule stuck after " + std::to_string(actions.size()) + " actions with " +
                    std::to_string(s.placed.size()) + " plies placed");
    }
    actions.push_back(*best);
    s = model.apply(s, *best);
  }
  return Schedule{std::move(actions), s.time};
}

namespace {

struct StateKey {
  std::uint64_t placed = 0;
  std::uint64_t rest = 0;

  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept {
    std::uint64_t h = k.placed * 0x9E3779B97F4A7C15ULL ^ (k.rest + 0x7F4A7C15ULL + (k.placed << 6));
    h ^= h >> 29;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

StateKey encode(const WorldState& s) {
  StateKey k;
  k.placed = s.placed.bits();
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    std::uint64_t field = s.robot_at[r] == Location::kForm ? 1 : 0;
    if (s.holding[r]) {
      field |= 2u | (std::uint64_t{s.holding[r]->ply} << 2) | (std::uint64_t{s.holding[r]->config} << 8);
    }
    k.rest |= field << (32 * r);
  }
  return k;
}

WorldState decode(const StateKey& k) {
  WorldState s;
  for (std::size_t r = 0; r < kRobotCount; ++r) {
    const std::uint64_t field = (k.rest >> (32 * r)) & 0xFFFFFFFFu;
    s.robot_at[r] = (field & 1u) ? Location::kForm : Location::kTable;
    if (field & 2u) {
      s.holding[r] = Held{static_cast<std::uint16_t>((field >> 2) & 0x3F), static_cast<std::uint16_t>(field >> 8)};
    }
  }
  // PlySet has no raw setter; rebuild bit by bit.
  for (std::size_t p = 0; p < 64; ++p) {
    if ((k.placed >> p) & 1u) s.placed.insert(p);
  }
  return s;
}

// Longest dependency chain (in plies) starting at each ply.
std::vector<int> chain_lengths(const PlanningModel& model) {
  const auto& deps = model.deps();
  std::vector<int> chain(deps.n, 1);
  for (auto it = deps.order.rbegin(); it != deps.order.rend(); ++it) {
    for (std::size_t q = 0; q < deps.n; ++q) {
      if (deps.dep(*it, q)) chain[*it] = std::max(chain[*it], chain[q] + 1);
    }
  }
  return chain;
}

class LowerBound {
 public:
  explicit LowerBound(const PlanningModel& model) : model_(model), chain_(chain_lengths(model)) {
    const Durations& d = model.cell().durations;
    const std::size_t n = model.ply_count();
    fresh_work_.resize(n, std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t c = 0; c < model.configs()[p].size(); ++c) {
        const int k = std::popcount(static_cast<unsigned>(model.config_robots(p, c)));
        fresh_work_[p] = std::min(fresh_work_[p], (d.pick_s + d.place_s + d.drive_s) * k);
      }
    }
  }

  double operator()(const WorldState& s) const {
    const Durations& d = model_.cell().durations;
    const std::uint64_t unplaced = ~s.placed.bits() & all_plies(model_.ply_count());
    double work = 0.0;
    for (std::size_t r = 0; r < kRobotCount; ++r) {
      if (s.robot_at[r] == Location::kForm) work += d.drive_s;
    }
    if (unplaced == 0) return work > 0.0 ? d.drive_s : 0.0;

    std::uint64_t held = 0;
    for (std::size_t r = 0; r < kRobotCount; ++r) {
      if (!s.holding[r]) continue;
      const std::size_t p = s.holding[r]->ply;
      // A team-held ply appears in both hands; count each hand once.
      work += d.place_s + d.drive_s;
      held |= std::uint64_t{1} << p;
    }
    double critical = 0.0;
    std::size_t count = 0;
    for (std::uint64_t bits = unplaced; bits; bits &= bits - 1) {
      const auto p = static_cast<std::size_t>(std::countr_zero(bits));
      ++count;
      const bool is_held = (held >> p) & 1u;
      if (!is_held) work += fresh_work_[p];
      critical = std::max(critical, (is_held ? 0.0 : d.pick_s) + chain_[p] * d.place_s + d.drive_s);
    }
    const double serial = static_cast<double>(count) * d.place_s + d.drive_s + ((unplaced & held) ? 0.0 : d.pick_s);
    return std::max({critical, work / 2.0, serial});
  }

 private:
  const PlanningModel& model_;
  std::vector<int> chain_;
  std::vector<double> fresh_work_;
};

}  // namespace

double remaining_lower_bound(const PlanningModel& model, const WorldState& s) {
  return LowerBound(model)(s);
}

SearchResult schedule_optimal(const PlanningModel& model, const SearchOptions& options) {
  require_configs(model);
  const LowerBound bound(model);

  struct Node {
    StateKey key;
    double g;
    std::uint32_t parent;
  };
  struct Entry {
    double f;
    double g;
    std::uint64_t seq;
    std::uint32_t node;
  };
  // Lowest f first, then deepest g, then insertion order.
  const auto worse = [](const Entry& a, const Entry& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.seq > b.seq;
  };
  constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

  std::vector<Node> nodes;
  std::unordered_map<StateKey, std::uint32_t, StateKeyHash> index;
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  double incumbent_cost = std::numeric_limits<double>::infinity();
  std::vector<ActionInstance> incumbent;
  if (options.seed_with_greedy) {
    try {
      Schedule g = schedule_greedy(model);
      incumbent_cost = g.makespan;
      incumbent = std::move(g.actions);
    } catch (const DeadEnd&) {
    }
  }

  std::vector<ActionInstance> succ;
  const auto path_to = [&](std::uint32_t node) {
    std::vector<ActionInstance> path;
    while (nodes[node].parent != kNoParent) {
      const Node& child = nodes[node];
      const Node& parent = nodes[child.parent];
      const WorldState ps = decode(parent.key);
      bool found = false;
      for (const ActionInstance& a : model.applicable_actions(ps)) {
        if (std::abs(parent.g + model.duration(a) - child.g) > kTol) continue;
        if (encode(model.apply(ps, a)) == child.key) {
          path.push_back(a);
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("search tree reconstruction failed");
      node = child.parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  const WorldState root = model.initial_state();
  std::uint64_t generated = 1;
  std::uint64_t seq = 0;
  bool exhausted = false;
  nodes.push_back({encode(root), 0.0, kNoParent});
  index.emplace(nodes[0].key, 0);
  open.push({bound(root), 0.0, seq++, 0});

  while (!open.empty()) {
    const Entry e = open.top();
    if (e.f >= incumbent_cost - kTol) break;
    open.pop();
    if (e.g > nodes[e.node].g + kTol) continue;
    const WorldState s = decode(nodes[e.node].key);
    succ.clear();
    model.applicable_actions(s, succ);
    for (const ActionInstance& a : succ) {
      if (generated >= options.node_budget) {
        exhausted = true;
        break;
      }
      ++generated;
      const WorldState child = model.apply(s, a);
      const double g = e.g + model.duration(a);
      if (model.is_goal(child)) {
        if (g < incumbent_cost - kTol) {
          incumbent = path_to(e.node);
          incumbent.push_back(a);
          incumbent_cost = g;
        }
        continue;
      }
      const double f = g + bound(child);
      if (f >= incumbent_cost - kTol) continue;
      const StateKey key = encode(child);
      auto it = index.find(key);
      std::uint32_t id;
      if (it != index.end()) {
        if (nodes[it->second].g <= g + kTol) continue;
        id = it->second;
        nodes[id].g = g;
        nodes[id].parent = e.node;
      } else {
        id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back({key, g, e.node});
        index.emplace(key, id);
      }
      open.push({f, g, seq++, id});
    }
    if (exhausted) break;
  }

  if (incumbent_cost == std::numeric_limits<double>::infinity()) {
    if (exhausted) {
      throw BudgetExceeded("node budget of " + std::to_string(options.node_budget) +
                           " exhausted without a complete plan");
    }
    throw DeadEnd("no plan reaches the goal");
  }
  SearchResult result;
  result.schedule = make_schedule(model, std::move(incumbent));
  result.optimal = !exhausted;
  result.nodes_generated = generated;
  return result;
}

double brute_force_oracle(const PlanningModel& model) {
  if (model.ply_count() > kOracleMaxPlies) {
    throw InstanceTooLarge("oracle limited to " + std::to_string(kOracleMaxPlies) + " plies, got " +
                           std::to_string(model.ply_count()));
  }
  require_configs(model);
  std::unordered_map<StateKey, double, StateKeyHash> memo;
  const std::function<double(const WorldState&)> best = [&](const WorldState& s) -> double {
    if (model.is_goal(s)) return 0.0;
    const StateKey key = encode(s);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double value = std::numeric_limits<double>::infinity();
    for (const ActionInstance& a : model.applicable_actions(s)) {
      value = std::min(value, model.duration(a) + best(model.apply(s, a)));
    }
    memo.emplace(key, value);
    return value;
  };
  const double result = best(model.initial_state());
  if (!std::isfinite(result)) throw DeadEnd("no plan reaches the goal");
  return result;
}

}  // namespace plyplan
