#include "qbv/sat.hpp"

#include <algorithm>
#include <cmath>

namespace qbv {

void Cnf::add_clause(std::vector<int> lits) {
  if (lits.empty())
    throw PreconditionError("empty clause added to CNF");
  for (int l : lits)
    if (l == 0 || std::abs(l) > nvars)
      throw PreconditionError("clause literal out of range");
  clauses.push_back(std::move(lits));
}

namespace {

using Lit = int;  // signed external literal

inline int lit_index(Lit l) {
  // 2*var for positive, 2*var+1 for negative
  int v = std::abs(l);
  return 2 * v + (l < 0 ? 1 : 0);
}

struct Clause {
  std::vector<Lit> lits;
  bool learnt = false;
};

enum : uint8_t { kUndef = 2 };

struct Solver {
  int nvars;
  std::vector<Clause> clauses;
  std::vector<std::vector<int>> watches;  // lit index -> clause ids
  std::vector<uint8_t> assign;            // var -> 0/1/kUndef
  std::vector<uint8_t> phase;             // saved phases
  std::vector<int> level;                 // var -> decision level
  std::vector<int> reason;                // var -> clause id or -1
  std::vector<Lit> trail;
  std::vector<size_t> trail_lim;
  size_t qhead = 0;
  std::vector<double> activity;
  double var_inc = 1.0;
  const double var_decay = 0.95;
  std::vector<uint8_t> seen;
  uint64_t conflicts = 0, decisions = 0, propagations = 0;
  uint64_t rng_state;

  explicit Solver(const Cnf& cnf, uint64_t seed)
      : nvars(cnf.nvars),
        watches(2 * cnf.nvars + 2),
        assign(cnf.nvars + 1, kUndef),
        phase(cnf.nvars + 1, 0),
        level(cnf.nvars + 1, 0),
        reason(cnf.nvars + 1, -1),
        activity(cnf.nvars + 1, 0.0),
        seen(cnf.nvars + 1, 0),
        rng_state(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull) {}

  uint64_t next_rand() {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return rng_state;
  }

  uint8_t value(Lit l) const {
    uint8_t a = assign[std::abs(l)];
    if (a == kUndef) return kUndef;
    return (l > 0) == (a == 1) ? 1 : 0;
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(Lit l, int why) {
    int v = std::abs(l);
    assign[v] = l > 0 ? 1 : 0;
    phase[v] = assign[v];
    level[v] = decision_level();
    reason[v] = why;
    trail.push_back(l);
  }

  void attach(int ci) {
    const Clause& c = clauses[ci];
    watches[lit_index(-c.lits[0])].push_back(ci);
    watches[lit_index(-c.lits[1])].push_back(ci);
  }

  // Returns conflicting clause id or -1.
  int propagate() {
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      ++propagations;
      auto& ws = watches[lit_index(p)];
      size_t keep = 0;
      for (size_t i = 0; i < ws.size(); ++i) {
        int ci = ws[i];
        Clause& c = clauses[ci];
        // Make sure the falsified literal sits at position 1.
        if (c.lits[0] == -p) std::swap(c.lits[0], c.lits[1]);
        if (value(c.lits[0]) == 1) {
          ws[keep++] = ci;  // satisfied by the other watch
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches[lit_index(-c.lits[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        // Unit or conflicting.
        ws[keep++] = ci;
        if (value(c.lits[0]) == 0) {
          for (size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          return ci;
        }
        enqueue(c.lits[0], ci);
      }
      ws.resize(keep);
    }
    return -1;
  }

  void bump(int v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (int i = 1; i <= nvars; ++i) activity[i] *= 1e-100;
      var_inc *= 1e-100;
    }
  }

  // First-UIP conflict analysis; returns the learnt clause with the
  // asserting literal first and the backtrack level.
  std::pair<std::vector<Lit>, int> analyze(int confl) {
    std::vector<Lit> learnt{0};  // slot for the asserting literal
    int counter = 0;
    Lit p = 0;
    size_t idx = trail.size();
    int ci = confl;
    for (;;) {
      const Clause& c = clauses[ci];
      for (size_t k = (p == 0 ? 0 : 1); k < c.lits.size(); ++k) {
        Lit q = c.lits[k];
        int v = std::abs(q);
        if (seen[v] || level[v] == 0) continue;
        seen[v] = 1;
        bump(v);
        if (level[v] == decision_level())
          ++counter;
        else
          learnt.push_back(q);
      }
      // Next literal on the trail to resolve on.
      for (;;) {
        p = trail[--idx];
        if (seen[std::abs(p)]) break;
      }
      seen[std::abs(p)] = 0;
      if (--counter == 0) break;
      ci = reason[std::abs(p)];
    }
    learnt[0] = -p;

    int back = 0;
    if (learnt.size() > 1) {
      size_t max_i = 1;
      for (size_t i = 2; i < learnt.size(); ++i)
        if (level[std::abs(learnt[i])] > level[std::abs(learnt[max_i])])
          max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      back = level[std::abs(learnt[1])];
    }
    for (Lit q : learnt) seen[std::abs(q)] = 0;
    return {learnt, back};
  }

  void backtrack(int to_level) {
    while (static_cast<int>(trail_lim.size()) > to_level) {
      size_t lim = trail_lim.back();
      trail_lim.pop_back();
      while (trail.size() > lim) {
        int v = std::abs(trail.back());
        assign[v] = kUndef;
        reason[v] = -1;
        trail.pop_back();
      }
    }
    qhead = trail.size();
  }

  int pick_branch() {
    int best = 0;
    double best_act = -1.0;
    for (int v = 1; v <= nvars; ++v) {
      if (assign[v] != kUndef) continue;
      if (activity[v] > best_act) {
        best_act = activity[v];
        best = v;
      }
    }
    return best;
  }
};

// Sequence 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ... (0-based index).
uint64_t luby(uint64_t x) {
  uint64_t size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return uint64_t{1} << seq;
}

}  // namespace

SatResult sat_solve(const Cnf& cnf, const SatOptions& opts) {
  SatResult result;
  Solver s(cnf, opts.seed);

  // Load clauses: dedupe literals, drop tautologies, queue units.
  std::vector<Lit> units;
  for (const auto& in : cnf.clauses) {
    std::vector<Lit> lits = in;
    std::sort(lits.begin(), lits.end(),
              [](Lit a, Lit b) { return std::abs(a) != std::abs(b)
                                            ? std::abs(a) < std::abs(b)
                                            : a < b; });
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    bool taut = false;
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) taut = true;
    if (taut) continue;
    if (lits.size() == 1) {
      units.push_back(lits[0]);
      continue;
    }
    s.clauses.push_back(Clause{std::move(lits), false});
    s.attach(static_cast<int>(s.clauses.size()) - 1);
  }
  for (Lit u : units) {
    if (s.value(u) == 0) {
      result.status = SatStatus::Unsat;
      return result;
    }
    if (s.value(u) == kUndef) s.enqueue(u, -1);
  }
  if (s.propagate() != -1) {
    result.status = SatStatus::Unsat;
    return result;
  }

  uint64_t restart_round = 0;
  uint64_t restart_limit = 64 * luby(restart_round);
  uint64_t conflicts_at_restart = 0;

  for (;;) {
    int confl = s.propagate();
    if (confl != -1) {
      ++s.conflicts;
      if (s.decision_level() == 0) {
        result.status = SatStatus::Unsat;
        result.conflicts = s.conflicts;
        result.decisions = s.decisions;
        result.propagations = s.propagations;
        return result;
      }
      if (s.conflicts > opts.conflict_budget) {
        result.status = SatStatus::ResourceOut;
        result.conflicts = s.conflicts;
        result.decisions = s.decisions;
        result.propagations = s.propagations;
        return result;
      }
      auto [learnt, back] = s.analyze(confl);
      s.backtrack(back);
      if (learnt.size() == 1) {
        s.enqueue(learnt[0], -1);
      } else {
        s.clauses.push_back(Clause{learnt, true});
        int ci = static_cast<int>(s.clauses.size()) - 1;
        s.attach(ci);
        s.enqueue(learnt[0], ci);
      }
      s.var_inc /= s.var_decay;
      continue;
    }

    if (s.conflicts - conflicts_at_restart >= restart_limit) {
      conflicts_at_restart = s.conflicts;
      restart_limit = 64 * luby(++restart_round);
      s.backtrack(0);
      continue;
    }

    int v = s.pick_branch();
    if (v == 0) {
      result.status = SatStatus::Sat;
      result.model.assign(cnf.nvars + 1, false);
      for (int i = 1; i <= cnf.nvars; ++i) result.model[i] = s.assign[i] == 1;
      result.conflicts = s.conflicts;
      result.decisions = s.decisions;
      result.propagations = s.propagations;
      return result;
    }
    ++s.decisions;
    s.trail_lim.push_back(s.trail.size());
    // Saved phase with an occasional seeded flip for tie variety.
    bool pol = s.phase[v] == 1;
    if ((s.next_rand() & 127) == 0) pol = !pol;
    s.enqueue(pol ? v : -v, -1);
  }
}

}  // namespace qbv
