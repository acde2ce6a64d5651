#include "plyplan/dependency.hpp"

#include <queue>
#include <tuple>

#include "plyplan/errors.hpp"
#include "plyplan/geometry.hpp"
#include "plyplan/json_format.hpp"

namespace plyplan {

BoolMatrix transitive_closure(const BoolMatrix& relation) {
  BoolMatrix closure = relation;
  const std::size_t n = relation.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!closure(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (closure(k, j)) closure.set(i, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (closure(i, i)) throw CyclicDependency("ply index " + std::to_string(i) + " lies on a cycle");
  }
  return closure;
}

DependencyMatrix build_dependency_matrix(const Plybook& book, double overlap_eps) {
  const std::size_t n = book.size();
  DependencyMatrix m;
  m.n = n;
  m.dep = BoolMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Ply& a = book.plies[i];
      const Ply& b = book.plies[j];
      if (overlap_area(a.polygon, b.polygon) <= overlap_eps) continue;
      if (a.layer < b.layer) {
        m.dep.set(i, j);
      } else if (b.layer < a.layer) {
        m.dep.set(j, i);
      }
    }
  }
  m.closure = transitive_closure(m.dep);
  m.succ = BoolMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.succ.set(i, j, i != j && !m.closure(j, i));
    }
  }

  // Kahn's algorithm, smallest layer first.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) indegree[j] += m.dep(i, j) ? 1 : 0;
  }
  using Entry = std::tuple<int, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.emplace(book.plies[i].layer, i);
  }
  while (!ready.empty()) {
    const std::size_t i = std::get<1>(ready.top());
    ready.pop();
    m.order.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (m.dep(i, j) && --indegree[j] == 0) ready.emplace(book.plies[j].layer, j);
    }
  }
  if (m.order.size() != n) throw CyclicDependency("no topological order exists");
  return m;
}

std::vector<std::size_t> predecessors(const DependencyMatrix& m, std::size_t j) {
  if (j >= m.n) {
    throw IndexOutOfRange("ply index " + std::to_string(j) + " >= " + std::to_string(m.n));
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.n; ++i) {
    if (m.closure(i, j)) out.push_back(i);
  }
  return out;
}

namespace {

Json matrix_json(const BoolMatrix& b) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < b.size(); ++j) row.push_back(b(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string dependency_to_json(const DependencyMatrix& m) {
  return canonical_dump(Json{{"n", m.n},
                             {"dep", matrix_json(m.dep)},
                             {"closure", matrix_json(m.closure)},
                             {"succ", matrix_json(m.succ)},
                             {"order", m.order}});
}

}  // namespace plyplan
