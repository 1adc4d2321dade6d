#pragma once

#include "torex/cohomology.hpp"
#include "torex/windows.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace torex {

// rk(N)! Vol(Delta): the required size of a full strong exceptional
// collection (the rank of K-theory).
inline Int expected_count(const StackyFan& fan) {
  Rat vol = normalized_volume(fan);
  if (denominator(vol) != 1)
    throw NonIntegralCount("normalized volume is not an integer");
  return numerator(vol);
}

// An exact complex of line-bundle twists: anchored at a class E, the terms
// are E - sum_{i in J} E_i over the stored subsets. Exactness needs the
// support to avoid every cone of the fan.
struct KoszulMove {
  enum class Kind { full, arc };
  struct Term {
    std::uint32_t subset;
    int sign;  // (-1)^(number of divisor factors)
  };
  Kind kind;
  std::uint32_t support;
  std::vector<Term> terms;

  bool operator==(const KoszulMove& o) const {
    return support == o.support &&
           [&] {
             if (terms.size() != o.terms.size()) return false;
             for (std::size_t i = 0; i < terms.size(); ++i)
               if (terms[i].subset != o.terms[i].subset || terms[i].sign != o.terms[i].sign)
                 return false;
             return true;
           }();
  }
};

// One full Koszul move per minimal non-face, plus the three-term arc moves
// of the dimension-two construction whenever the two arc supports share no
// face of the fan.
inline std::vector<KoszulMove> koszul_moves(const StackyFan& fan) {
  FanDiagnostics diag = validate(fan);
  if (!diag.ok()) throw InvalidFan("koszul_moves: " + diag.problems.front());
  std::vector<KoszulMove> moves;
  for (std::uint32_t R : minimal_nonfaces(fan)) {
    KoszulMove m;
    m.kind = KoszulMove::Kind::full;
    m.support = R;
    std::uint32_t s = R;
    while (true) {
      m.terms.push_back({s, __builtin_popcount(s) % 2 == 0 ? 1 : -1});
      if (s == 0) break;
      s = (s - 1) & R;
    }
    std::sort(m.terms.begin(), m.terms.end(),
              [](const KoszulMove::Term& a, const KoszulMove::Term& b) {
                return a.subset < b.subset;
              });
    moves.push_back(std::move(m));
  }
  if (fan.d == 2 && fan.n() >= 4 && rays_clockwise_convex(fan)) {
    SimplicialComplexOnRays cx = fan_complex(fan);
    std::size_t n = fan.n();
    for (const CrossingLabel& lb : crossing_diagonal_facets(n)) {
      auto arc_mask = [&](int a, int b) {
        std::uint32_t m = 0;
        for (int t = a; t != b; t = (t + 1) % int(n)) m |= std::uint32_t(1) << t;
        return m;
      };
      std::uint32_t A = arc_mask(lb.j1, lb.i2), B = arc_mask(lb.j2, lb.i1);
      bool ok = true;
      for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = 0; b < n && ok; ++b) {
          if (!((A >> a) & 1) || !((B >> b) & 1)) continue;
          std::uint32_t pair = (std::uint32_t(1) << a) | (std::uint32_t(1) << b);
          if (cx.has(pair)) ok = false;  // common zero on the stack
        }
      if (!ok) continue;
      KoszulMove m;
      m.kind = KoszulMove::Kind::arc;
      m.support = A | B;
      m.terms = {{0, 1}, {A, -1}, {B, -1}, {A | B, 1}};
      std::sort(m.terms.begin(), m.terms.end(),
                [](const KoszulMove::Term& a, const KoszulMove::Term& b) {
                  return a.subset < b.subset;
                });
      moves.push_back(std::move(m));
    }
  }
  // arc moves on two singleton arcs coincide with full pair moves
  std::vector<KoszulMove> unique;
  for (const auto& m : moves) {
    bool dup = false;
    for (const auto& u : unique) dup = dup || u == m;
    if (!dup) unique.push_back(m);
  }
  return unique;
}

struct VerifyReport {
  bool passed = true;
  std::vector<PicClass> classes;
  std::vector<std::vector<Int>> h0;                // h^0(L_j - L_i)
  std::vector<std::vector<bool>> strongly_acyclic; // difference L_j - L_i
  struct Violation {
    std::size_t from, to, degree;
    Int dim;
  };
  std::vector<Violation> violations;
};

// Full-cohomology strong exceptionality check: every ordered pair must have
// vanishing higher cohomology of the difference. Strong acyclicity is
// recorded separately and never used as a shortcut.
inline VerifyReport verify_strong_exceptional(const PicardGroup& pic,
                                              const std::vector<PicClass>& classes) {
  CohomologyEngine engine(pic);
  VerifyReport rep;
  rep.classes = classes;
  std::size_t m = classes.size();
  rep.h0.assign(m, std::vector<Int>(m, Int(0)));
  rep.strongly_acyclic.assign(m, std::vector<bool>(m, false));
  std::map<PicClass, CohomologyTable> cache;
  std::map<PicClass, bool> strong_cache;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      PicClass diff = pic.sub(classes[j], classes[i]);
      auto it = cache.find(diff);
      if (it == cache.end()) it = cache.emplace(diff, engine.cohomology(diff)).first;
      const CohomologyTable& t = it->second;
      rep.h0[i][j] = t.dims[0];
      for (std::size_t p = 1; p < t.dims.size(); ++p)
        if (t.dims[p] != 0) {
          rep.passed = false;
          rep.violations.push_back({i, j, p, t.dims[p]});
        }
      auto st = strong_cache.find(diff);
      if (st == strong_cache.end())
        st = strong_cache.emplace(diff, engine.is_strongly_acyclic(pic.real_of(diff))).first;
      rep.strongly_acyclic[i][j] = st->second;
    }
  return rep;
}

// Topological sort by nonzero Hom spaces, smallest class first among the
// available ones; a two-way Hom between distinct classes is an error.
inline std::vector<PicClass> hom_order_from_table(const std::vector<PicClass>& classes,
                                                  const std::vector<std::vector<Int>>& h0) {
  std::size_t m = classes.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (h0[i][j] > 0 && h0[j][i] > 0)
        throw HomCycle("nonzero Hom in both directions between distinct classes");
  std::vector<bool> placed(m, false);
  std::vector<PicClass> out;
  for (std::size_t round = 0; round < m; ++round) {
    std::size_t best = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (placed[j]) continue;
      bool source = true;
      for (std::size_t i = 0; i < m; ++i)
        if (!placed[i] && i != j && h0[i][j] > 0) source = false;
      if (!source) continue;
      if (best == m || classes[j] < classes[best]) best = j;
    }
    if (best == m) throw HomCycle("Hom relation contains a directed cycle");
    placed[best] = true;
    out.push_back(classes[best]);
  }
  return out;
}

inline std::vector<PicClass> hom_order(const PicardGroup& pic,
                                       const std::vector<PicClass>& classes) {
  VerifyReport rep = verify_strong_exceptional(pic, classes);
  return hom_order_from_table(classes, rep.h0);
}

struct ExceptionalCollection {
  std::vector<PicClass> classes;  // ordered compatibly with the Hom order
  WindowKind kind;
  WindowP window;
  RatVec shift;
  Int expected = 0;
  bool count_check = false;
  std::optional<VerifyReport> report;
};

// Window kind for a fan: rank one or two in any dimension, anything in
// dimension two.
inline WindowKind window_kind_for(const PicardGroup& pic) {
  if (pic.rank() == 1) return WindowKind::rank1;
  if (pic.rank() == 2) return WindowKind::rank2;
  if (pic.fan().d == 2) return WindowKind::delpezzo;
  throw UnsupportedShape("no window construction for rank >= 3 in dimension >= 3");
}

// Classes seen through the shifted window, sorted by the f functional
// (ties broken lexicographically). Nonzero Hom spaces only point up the f
// values, so this order is compatible with the Hom partial order.
inline ExceptionalCollection build_collection(const StackyFan& fan, unsigned seed = 0) {
  if (classify(fan) != FanClass::Fano) throw NotFano("collections need a Fano fan");
  PicardGroup pic(fan);
  ExceptionalCollection col;
  col.kind = window_kind_for(pic);
  col.window = build_window(pic, col.kind);
  GenericShift s = generic_shift(pic, col.window, seed);
  col.shift = s.p;
  col.classes = classes_in(pic, s.p, col.window);
  std::stable_sort(col.classes.begin(), col.classes.end(),
                   [&](const PicClass& a, const PicClass& b) {
                     Rat fa = dot(col.window.f_row, to_rat(a.free));
                     Rat fb = dot(col.window.f_row, to_rat(b.free));
                     if (fa != fb) return fa < fb;
                     return a < b;
                   });
  col.expected = expected_count(fan);
  col.count_check = Int(col.classes.size()) == col.expected;
  return col;
}

struct ClosureTrace {
  struct Step {
    PicClass added;
    std::size_t move_index;
    PicClass anchor;
  };
  std::vector<PicClass> window_classes;
  std::vector<PicClass> start;
  std::vector<Step> steps;
  bool complete = false;
};

// The region swept in the fullness argument: |f(x - p)| <= f_bound
// intersected with p + scale * (window about its own center).
inline HPolyhedron closure_window(const PicardGroup& pic, const WindowP& window,
                                  const RatVec& p, const Rat& f_bound = Rat(3, 2),
                                  const Rat& scale = Rat(3)) {
  HPolyhedron region = shift(scale_about(window.polytope, scale, window.center), p);
  Rat fp = dot(window.f_row, p);
  region.ineqs.push_back({window.f_row, f_bound + fp});
  region.ineqs.push_back({vec_neg(window.f_row), f_bound - fp});
  return region;
}

// Fixpoint of the one-step Koszul derivations inside a bounded window:
// whenever all but one term of a move instance are known and the missing
// one lies in the window, it becomes known. Anchors range over every class
// that can place some term inside the window, so no derivation is missed.
inline ClosureTrace closure(const PicardGroup& pic, const std::vector<PicClass>& start,
                            const HPolyhedron& window_region) {
  std::vector<KoszulMove> moves = koszul_moves(pic.fan());
  ClosureTrace trace;
  for (const IntVec& x : lattice_points(window_region))
    for (const PicClass& c : pic.torsion_fiber(x)) trace.window_classes.push_back(c);
  std::sort(trace.window_classes.begin(), trace.window_classes.end());
  std::set<PicClass> window_set(trace.window_classes.begin(), trace.window_classes.end());

  trace.start = start;
  std::set<PicClass> known(start.begin(), start.end());

  // precompute term offset classes and the anchor pool
  std::vector<std::vector<PicClass>> offsets(moves.size());
  std::set<PicClass> anchors;
  for (std::size_t mi = 0; mi < moves.size(); ++mi) {
    for (const auto& term : moves[mi].terms) {
      IntVec divisor(pic.n(), Int(0));
      for (std::size_t i = 0; i < pic.n(); ++i)
        if ((term.subset >> i) & 1) divisor[i] = -1;
      offsets[mi].push_back(pic.class_of(divisor));
    }
    for (const PicClass& w : window_set)
      for (const PicClass& off : offsets[mi]) anchors.insert(pic.sub(w, off));
  }

  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t mi = 0; mi < moves.size(); ++mi)
      for (const PicClass& anchor : anchors) {
        std::size_t missing = offsets[mi].size();
        bool usable = true;
        for (std::size_t t = 0; t < offsets[mi].size() && usable; ++t) {
          PicClass term = pic.add(anchor, offsets[mi][t]);
          if (known.count(term)) continue;
          if (missing != offsets[mi].size()) usable = false;  // two unknowns
          missing = t;
        }
        if (!usable || missing == offsets[mi].size()) continue;
        PicClass unknown = pic.add(anchor, offsets[mi][missing]);
        if (!window_set.count(unknown)) continue;
        known.insert(unknown);
        trace.steps.push_back({unknown, mi, anchor});
        grew = true;
      }
  }
  trace.complete = true;
  for (const PicClass& c : trace.window_classes)
    trace.complete = trace.complete && known.count(c) > 0;
  return trace;
}

// Re-runs the recorded derivations from the start set, checking each step
// is justified at the moment it fires; returns the final known set.
inline std::set<PicClass> replay_closure(const PicardGroup& pic, const ClosureTrace& trace) {
  std::vector<KoszulMove> moves = koszul_moves(pic.fan());
  SimplicialComplexOnRays cx = fan_complex(pic.fan());
  std::set<PicClass> known(trace.start.begin(), trace.start.end());
  for (const auto& step : trace.steps) {
    const KoszulMove& m = moves.at(step.move_index);
    if (cx.has(m.support)) throw TorexError("replay: move support is a face of the fan");
    std::size_t unknown_terms = 0;
    bool added_is_term = false;
    for (const auto& term : m.terms) {
      IntVec divisor(pic.n(), Int(0));
      for (std::size_t i = 0; i < pic.n(); ++i)
        if ((term.subset >> i) & 1) divisor[i] = -1;
      PicClass t = pic.add(step.anchor, pic.class_of(divisor));
      if (!known.count(t)) {
        ++unknown_terms;
        added_is_term = added_is_term || t == step.added;
      }
    }
    if (unknown_terms != 1 || !added_is_term)
      throw TorexError("replay: a recorded derivation is not justified");
    known.insert(step.added);
  }
  return known;
}

}  // namespace torex
