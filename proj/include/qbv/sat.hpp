#pragma once

#include <cstdint>
#include <vector>

#include "qbv/errors.hpp"

namespace qbv {

// CNF over positive variable indices; a literal is a signed index.
struct Cnf {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return ++nvars; }
  void add_clause(std::vector<int> lits);
  void add_unit(int a) { add_clause({a}); }
  void add_binary(int a, int b) { add_clause({a, b}); }
  void add_ternary(int a, int b, int c) { add_clause({a, b, c}); }
};

enum class SatStatus { Sat, Unsat, ResourceOut };

struct SatResult {
  SatStatus status = SatStatus::ResourceOut;
  // model[v] for v in 1..nvars; meaningful only when status == Sat.
  std::vector<bool> model;
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
};

struct SatOptions {
  uint64_t conflict_budget = UINT64_MAX;
  uint64_t seed = 0;
};

// Conflict-driven clause learning with two-watched-literal propagation,
// first-UIP learning, exponential VSIDS activities, phase saving and
// Luby restarts. Deterministic for a fixed seed.
SatResult sat_solve(const Cnf& cnf, const SatOptions& opts = {});

}  // namespace qbv
