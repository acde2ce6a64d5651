#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plyplan/model.hpp"

namespace plyplan {

// Dense square Boolean matrix.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  explicit BoolMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value = true) { bits_[i * n_ + j] = value ? 1 : 0; }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Precedence between plies, indexed by position in Plybook::plies.
//   dep(i, j)     ply i must be placed before ply j (overlap + stacking)
//   closure       transitive closure of dep
//   succ(i, j)    j may be placed immediately after i: i != j and !closure(j, i)
//   order         a topological order, ties broken by layer
struct DependencyMatrix {
  std::size_t n = 0;
  BoolMatrix dep;
  BoolMatrix closure;
  BoolMatrix succ;
  std::vector<std::size_t> order;

  friend bool operator==(const DependencyMatrix&, const DependencyMatrix&) = default;
};

DependencyMatrix build_dependency_matrix(const Plybook& book, double overlap_eps);

// Warshall's algorithm. Throws CyclicDependency if the result has a self loop.
BoolMatrix transitive_closure(const BoolMatrix& relation);

// Indices i with closure(i, j), ascending. Throws IndexOutOfRange.
std::vector<std::size_t> predecessors(const DependencyMatrix& m, std::size_t j);

// {"n", "dep", "closure", "succ", "order"} in canonical JSON.
std::string dependency_to_json(const DependencyMatrix& m);

}  // namespace plyplan
