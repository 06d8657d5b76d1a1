#pragma once

// Brute-force CTL semantics for tiny systems, independent of the fixpoint
// checker. From each state it enumerates every path of size()+1 states; by
// pigeonhole each one repeats a state, and cutting it at the first repeat
// gives a lasso (a prefix plus a cycle). Every state formula of the form
// E/A applied to X, F, G or U has a witness or counterexample among these
// lassos, so E means "some lasso" and A means "every lasso".

#include <functional>
#include <vector>

#include "nhs/abstraction.h"
#include "nhs/ctl.h"
#include "nhs/random.h"
#include "test_fixtures.h"

namespace nhs::testing {

struct Lasso {
  std::vector<std::size_t> states;  // positions 0..j-1
  std::size_t loop = 0;             // position the last one returns to
};

inline void enumerate_lassos(const TransitionSystem& ts, std::vector<std::size_t>& path,
                             std::vector<Lasso>& out) {
  const std::size_t last = path.back();
  for (std::size_t next = 0; next < ts.size(); ++next) {
    if (!ts.edge(last, next)) continue;
    std::size_t seen = path.size();
    for (std::size_t p = 0; p < path.size(); ++p) {
      if (path[p] == next) seen = p;
    }
    if (seen < path.size()) {
      out.push_back({path, seen});
    } else {
      path.push_back(next);
      enumerate_lassos(ts, path, out);
      path.pop_back();
    }
  }
}

inline std::vector<Lasso> lassos_from(const TransitionSystem& ts, std::size_t s) {
  std::vector<Lasso> out;
  std::vector<std::size_t> path{s};
  enumerate_lassos(ts, path, out);
  return out;
}

inline StateSet oracle_sat(const TransitionSystem& ts, const CtlFormula& f) {
  using Kind = CtlFormula::Kind;
  const std::size_t n = ts.size();
  StateSet out(n, false);
  switch (f.kind()) {
    case Kind::kAtom:
      if (f.atom() <= static_cast<int>(ts.num_cells())) out[f.atom() - 1] = true;
      return out;
    case Kind::kExit:
      if (ts.has_sink()) out[ts.sink()] = true;
      return out;
    case Kind::kTrue:
      return StateSet(n, true);
    case Kind::kNot: {
      const StateSet a = oracle_sat(ts, f.lhs());
      for (std::size_t s = 0; s < n; ++s) out[s] = !a[s];
      return out;
    }
    case Kind::kAnd:
    case Kind::kOr: {
      const StateSet a = oracle_sat(ts, f.lhs()), b = oracle_sat(ts, f.rhs());
      for (std::size_t s = 0; s < n; ++s) {
        out[s] = f.kind() == Kind::kAnd ? (a[s] && b[s]) : (a[s] || b[s]);
      }
      return out;
    }
    default:
      break;
  }

  const StateSet a = oracle_sat(ts, f.lhs());
  const bool binary = f.kind() == Kind::kEU || f.kind() == Kind::kAU;
  const StateSet b = binary ? oracle_sat(ts, f.rhs()) : StateSet(n, false);
  // Path formula evaluated on a lasso from position 0.
  std::function<bool(const Lasso&)> holds;
  switch (f.kind()) {
    case Kind::kEX: case Kind::kAX:
      holds = [&](const Lasso& l) {
        return a[l.states.size() > 1 ? l.states[1] : l.states[l.loop]];
      };
      break;
    case Kind::kEF: case Kind::kAF:
      holds = [&](const Lasso& l) {
        for (std::size_t s : l.states) if (a[s]) return true;
        return false;
      };
      break;
    case Kind::kEG: case Kind::kAG:
      holds = [&](const Lasso& l) {
        for (std::size_t s : l.states) if (!a[s]) return false;
        return true;
      };
      break;
    default:  // until: the first ψ position, with φ everywhere before it
      holds = [&](const Lasso& l) {
        for (std::size_t s : l.states) {
          if (b[s]) return true;
          if (!a[s]) return false;
        }
        return false;
      };
  }
  const bool universal = f.kind() == Kind::kAX || f.kind() == Kind::kAF ||
                         f.kind() == Kind::kAG || f.kind() == Kind::kAU;
  for (std::size_t s = 0; s < n; ++s) {
    const auto lassos = lassos_from(ts, s);
    bool any = false, all = true;
    for (const Lasso& l : lassos) {
      const bool h = holds(l);
      any = any || h;
      all = all && h;
    }
    out[s] = universal ? all : any;
  }
  return out;
}

// Random total system with 1..max_states states (the last one a sink when
// `sink` is set); cells are vertical strips of the unit square.
inline TransitionSystem random_system(Rng& rng, std::size_t max_states, bool sink) {
  const std::size_t size = 1 + rng.next() % max_states;
  const std::size_t cells = sink && size > 1 ? size - 1 : size;
  const bool has_sink = size > cells;
  std::vector<Box> strips;
  for (std::size_t i = 0; i < cells; ++i) {
    strips.push_back(box({double(i) / cells, 0.0}, {double(i + 1) / cells, 1.0}));
  }
  const double density = 0.2 + 0.5 * rng.uniform();
  std::vector<std::uint8_t> rel(size * size, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < size; ++j) {
      rel[i * size + j] = rng.uniform() < density;
      any = any || rel[i * size + j];
    }
    if (!any) rel[i * size + rng.next() % size] = 1;
  }
  if (has_sink) rel[size * size - 1] = 1;
  return TransitionSystem(WorkingZone(unit_square()), strips, has_sink, rel);
}

// Random formula of nesting depth <= depth over the system's atoms.
inline CtlFormula random_formula(Rng& rng, const TransitionSystem& ts, int depth) {
  using F = CtlFormula;
  if (depth == 0 || rng.uniform() < 0.2) {
    const std::size_t pick = rng.next() % (ts.num_cells() + 2);
    if (pick < ts.num_cells()) return F::Atom(static_cast<int>(pick) + 1);
    if (pick == ts.num_cells() && ts.has_sink()) return F::Exit();
    return F::True();
  }
  const auto sub = [&] { return random_formula(rng, ts, depth - 1); };
  switch (rng.next() % 11) {
    case 0: return F::Not(sub());
    case 1: return F::And(sub(), sub());
    case 2: return F::Or(sub(), sub());
    case 3: return F::EX(sub());
    case 4: return F::AX(sub());
    case 5: return F::EF(sub());
    case 6: return F::AF(sub());
    case 7: return F::EG(sub());
    case 8: return F::AG(sub());
    case 9: return F::EU(sub(), sub());
    default: return F::AU(sub(), sub());
  }
}

}  // namespace nhs::testing
