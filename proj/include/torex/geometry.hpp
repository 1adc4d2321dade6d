#pragma once

#include "torex/linalg.hpp"
#include "torex/numeric.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace torex {

// Rational polyhedron in inequality form, a.x <= c per row. Strict rows are
// not stored here; strictness enters through the mask arguments below.
struct HPolyhedron {
  struct Ineq {
    RatVec a;
    Rat c;
  };
  std::size_t dim = 0;
  std::vector<Ineq> ineqs;
};

// center + sum of [-g_i, g_i] (symmetric mode) or center + sum of [0, g_i].
struct Zonotope {
  std::size_t dim = 0;
  RatVec center;
  std::vector<RatVec> generators;
  bool symmetric = true;
};

struct Facet {
  IntVec normal;  // primitive integer, outward
  Rat offset;     // normal.x <= offset is tight on the facet
};

namespace lpdetail {

struct Row {
  IntVec a;  // primitive integer normal (possibly zero only transiently)
  Rat c;
  bool strict;
};

// Scale to a primitive integer normal preserving orientation. Returns false
// when the row is an immediate contradiction (0 <= c fails), true otherwise;
// trivially true rows come back with empty normal and should be dropped.
inline bool normalize_row(const RatVec& a, const Rat& c, bool strict, std::optional<Row>& out) {
  bool all_zero = true;
  for (const auto& x : a)
    if (x != 0) { all_zero = false; break; }
  if (all_zero) {
    out.reset();
    if (c > 0) return true;
    if (c == 0 && !strict) return true;
    return false;
  }
  Int lcm_den = 1;
  for (const auto& q : a) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(q));
  IntVec w(a.size());
  Int g = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    w[i] = numerator(a[i]) * (lcm_den / denominator(a[i]));
    g = boost::multiprecision::gcd(g, w[i]);
  }
  for (auto& x : w) x /= g;
  Rat scale = Rat(lcm_den, g);  // positive
  out = Row{std::move(w), c * scale, strict};
  return true;
}

class System {
 public:
  explicit System(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  bool contradiction() const { return contradiction_; }
  const std::vector<Row>& rows() const { return rows_; }

  void add(const RatVec& a, const Rat& c, bool strict) {
    if (contradiction_) return;
    std::optional<Row> row;
    if (!normalize_row(a, c, strict, row)) {
      contradiction_ = true;
      return;
    }
    if (!row) return;
    auto it = index_.find(row->a);
    if (it == index_.end()) {
      index_.emplace(row->a, rows_.size());
      rows_.push_back(*row);
    } else {
      Row& kept = rows_[it->second];
      if (row->c < kept.c || (row->c == kept.c && row->strict && !kept.strict)) {
        kept.c = row->c;
        kept.strict = row->strict;
      }
    }
  }

  void add_eq(const RatVec& a, const Rat& c) {
    add(a, c, false);
    add(vec_neg(a), -c, false);
  }

  // Fourier-Motzkin step removing variable k (the coordinate stays in place,
  // pinned to coefficient zero in every surviving row).
  System eliminate(std::size_t k) const {
    System next(dim_);
    if (contradiction_) {
      next.contradiction_ = true;
      return next;
    }
    std::vector<const Row*> pos, neg;
    for (const Row& r : rows_) {
      if (r.a[k] > 0)
        pos.push_back(&r);
      else if (r.a[k] < 0)
        neg.push_back(&r);
      else
        next.add(to_rat(r.a), r.c, r.strict);
    }
    for (const Row* p : pos)
      for (const Row* n : neg) {
        Rat pk(p->a[k]), nk(-n->a[k]);
        RatVec a(dim_);
        for (std::size_t j = 0; j < dim_; ++j) a[j] = nk * Rat(p->a[j]) + pk * Rat(n->a[j]);
        next.add(a, nk * p->c + pk * n->c, p->strict || n->strict);
        if (next.contradiction_) return next;
      }
    return next;
  }

  // Eliminates every variable not in `keep`, cheapest-looking variable first.
  System project(const std::vector<bool>& keep) const {
    System cur = *this;
    while (!cur.contradiction_) {
      std::size_t best = dim_;
      std::size_t best_cost = 0;
      for (std::size_t k = 0; k < dim_; ++k) {
        if (keep[k]) continue;
        std::size_t np = 0, nn = 0, nz = 0;
        for (const Row& r : cur.rows_) {
          if (r.a[k] > 0) ++np;
          else if (r.a[k] < 0) ++nn;
        }
        (void)nz;
        if (np + nn == 0) continue;
        std::size_t cost = np * nn;
        if (best == dim_ || cost < best_cost) {
          best = k;
          best_cost = cost;
        }
      }
      if (best == dim_) break;
      cur = cur.eliminate(best);
    }
    return cur;
  }

  bool feasible() const {
    std::vector<bool> keep(dim_, false);
    System done = project(keep);
    return !done.contradiction();
  }

  struct Interval {
    bool empty = false;
    std::optional<Rat> lo, hi;
    bool lo_strict = false, hi_strict = false;
  };

  // Exact projection of the solution set onto coordinate k.
  Interval interval(std::size_t k) const {
    std::vector<bool> keep(dim_, false);
    keep[k] = true;
    System proj = project(keep);
    Interval out;
    if (proj.contradiction()) {
      out.empty = true;
      return out;
    }
    for (const Row& r : proj.rows()) {
      if (r.a[k] == 0) continue;
      Rat bound = r.c / Rat(r.a[k]);
      if (r.a[k] > 0) {
        if (!out.hi || bound < *out.hi) {
          out.hi = bound;
          out.hi_strict = r.strict;
        } else if (bound == *out.hi && r.strict) {
          out.hi_strict = true;
        }
      } else {
        if (!out.lo || bound > *out.lo) {
          out.lo = bound;
          out.lo_strict = r.strict;
        } else if (bound == *out.lo && r.strict) {
          out.lo_strict = true;
        }
      }
    }
    if (out.lo && out.hi &&
        (*out.lo > *out.hi || (*out.lo == *out.hi && (out.lo_strict || out.hi_strict))))
      out.empty = true;
    return out;
  }

 private:
  std::size_t dim_;
  bool contradiction_ = false;
  std::vector<Row> rows_;
  std::map<IntVec, std::size_t> index_;
};

inline System system_of(const HPolyhedron& p, const std::vector<bool>& strict_mask = {}) {
  System sys(p.dim);
  for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
    bool strict = i < strict_mask.size() && strict_mask[i];
    sys.add(p.ineqs[i].a, p.ineqs[i].c, strict);
  }
  return sys;
}

enum class LpStatus { optimal, infeasible, unbounded };

struct LpValue {
  LpStatus status = LpStatus::optimal;
  Rat value;
};

// Dense exact simplex for max obj.x over {A x <= c}, x free. Two phases
// with Bland's rule, so it terminates on every input. Free variables are
// split into positive parts; Fourier-Motzkin stays in charge of strict
// systems, this handles the coordinate-extreme queries cheaply.
class Simplex {
 public:
  Simplex(const std::vector<HPolyhedron::Ineq>& ineqs, std::size_t dim)
      : dim_(dim), m_(ineqs.size()), structural_(2 * dim + ineqs.size()) {
    rows_.assign(m_, RatVec(structural_ + 1, Rat(0)));
    basis_.assign(m_, -1);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) {
        rows_[i][j] = ineqs[i].a[j];
        rows_[i][dim_ + j] = -ineqs[i].a[j];
      }
      rows_[i][2 * dim_ + i] = 1;
      rows_[i][structural_] = ineqs[i].c;
      if (ineqs[i].c < 0)
        for (auto& x : rows_[i]) x = -x;
      else
        basis_[i] = int(2 * dim_ + i);
    }
  }

  LpValue maximize(const RatVec& obj) {
    if (!phase_one_done_) {
      if (!phase_one()) return {LpStatus::infeasible, Rat(0)};
      phase_one_done_ = true;
    }
    rows_ = feasible_rows_;
    basis_ = feasible_basis_;
    RatVec cost(structural_, Rat(0));
    for (std::size_t j = 0; j < dim_; ++j) {
      cost[j] = obj[j];
      cost[dim_ + j] = -obj[j];
    }
    if (!run(cost, structural_)) return {LpStatus::unbounded, Rat(0)};
    Rat value = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && std::size_t(basis_[i]) < structural_)
        value += cost[basis_[i]] * rows_[i].back();
    return {LpStatus::optimal, value};
  }

 private:
  // price the cost vector against the current basis into a reduced-cost row
  RatVec reduced_costs(const RatVec& cost, std::size_t ncols) const {
    RatVec z(ncols + 1, Rat(0));
    for (std::size_t j = 0; j < cost.size(); ++j) z[j] = -cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < 0 || std::size_t(basis_[i]) >= cost.size()) continue;
      const Rat& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) {
        std::size_t col = j == ncols ? rows_[i].size() - 1 : j;
        z[j] += cb * rows_[i][col];
      }
    }
    return z;
  }

  void pivot(std::size_t row, std::size_t col, RatVec& z, std::size_t ncols) {
    Rat inv = rows_[row][col];
    for (auto& x : rows_[row]) x /= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row || rows_[i][col] == 0) continue;
      Rat f = rows_[i][col];
      for (std::size_t j = 0; j < rows_[i].size(); ++j) rows_[i][j] -= f * rows_[row][j];
    }
    if (z[col] != 0) {
      Rat f = z[col];
      for (std::size_t j = 0; j < ncols; ++j) z[j] -= f * rows_[row][j];
      z[ncols] -= f * rows_[row].back();
    }
    basis_[row] = int(col);
  }

  // Bland's rule steps until optimal; false means unbounded.
  bool run(const RatVec& cost, std::size_t ncols) {
    RatVec z = reduced_costs(cost, ncols);
    while (true) {
      std::size_t enter = ncols;
      for (std::size_t j = 0; j < ncols; ++j)
        if (z[j] < 0) { enter = j; break; }
      if (enter == ncols) return true;
      std::size_t leave = m_;
      Rat best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rat ratio = rows_[i].back() / rows_[i][enter];
        if (leave == m_ || ratio < best ||
            (ratio == best && basis_[i] < basis_[leave]))
          leave = i, best = ratio;
      }
      if (leave == m_) return false;
      pivot(leave, enter, z, ncols);
    }
  }

  bool phase_one() {
    // artificial columns for the rows that lost their slack basis
    std::vector<std::size_t> artificial_of(m_, SIZE_MAX);
    std::size_t extra = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < 0) artificial_of[i] = extra++;
    std::size_t ncols = structural_ + extra;
    for (std::size_t i = 0; i < m_; ++i) {
      RatVec wide(ncols + 1, Rat(0));
      for (std::size_t j = 0; j < structural_; ++j) wide[j] = rows_[i][j];
      wide[ncols] = rows_[i][structural_];
      if (artificial_of[i] != SIZE_MAX) {
        wide[structural_ + artificial_of[i]] = 1;
        basis_[i] = int(structural_ + artificial_of[i]);
      }
      rows_[i] = std::move(wide);
    }
    RatVec cost(ncols, Rat(0));
    for (std::size_t j = structural_; j < ncols; ++j) cost[j] = -1;  // max -sum(artificials)
    if (!run(cost, ncols)) return false;  // cannot happen: phase 1 is bounded
    Rat total = 0;
    for (std::size_t i = 0; i < m_; ++i)
      if (std::size_t(basis_[i]) >= structural_) total += rows_[i].back();
    if (total != 0) return false;
    // pivot any degenerate artificial out, or drop its redundant row
    for (std::size_t i = 0; i < m_; ++i) {
      if (std::size_t(basis_[i]) < structural_) continue;
      std::size_t col = structural_;
      for (std::size_t j = 0; j < structural_; ++j)
        if (rows_[i][j] != 0) { col = j; break; }
      if (col == structural_) {
        basis_[i] = -2;  // redundant zero row, ignore from here on
        continue;
      }
      RatVec dummy(ncols + 1, Rat(0));
      pivot(i, col, dummy, ncols);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      RatVec narrow(structural_ + 1, Rat(0));
      for (std::size_t j = 0; j < structural_; ++j) narrow[j] = rows_[i][j];
      narrow[structural_] = rows_[i][ncols];
      rows_[i] = std::move(narrow);
    }
    feasible_rows_ = rows_;
    feasible_basis_ = basis_;
    return true;
  }

  std::size_t dim_, m_, structural_;
  std::vector<RatVec> rows_;
  std::vector<int> basis_;
  std::vector<RatVec> feasible_rows_;
  std::vector<int> feasible_basis_;
  bool phase_one_done_ = false;
};

}  // namespace lpdetail

// Exact maximum of a linear objective over the polyhedron.
inline lpdetail::LpValue lp_maximize(const HPolyhedron& p, const RatVec& objective) {
  lpdetail::Simplex simplex(p.ineqs, p.dim);
  return simplex.maximize(objective);
}

// Exact feasibility of the mixed strict / non-strict system.
inline bool lp_feasible(const HPolyhedron& p, const std::vector<bool>& strict_mask = {}) {
  return lpdetail::system_of(p, strict_mask).feasible();
}

inline bool contains(const HPolyhedron& p, const RatVec& x, bool strict = false) {
  if (x.size() != p.dim) throw TorexError("contains: dimension mismatch");
  for (const auto& q : p.ineqs) {
    Rat v = dot(q.a, x);
    if (strict ? !(v < q.c) : !(v <= q.c)) return false;
  }
  return true;
}

inline HPolyhedron shift(const HPolyhedron& p, const RatVec& by) {
  HPolyhedron out = p;
  for (auto& q : out.ineqs) q.c += dot(q.a, by);
  return out;
}

// Scales the polyhedron about a center: {center + s*(x - center) : x in P}.
inline HPolyhedron scale_about(const HPolyhedron& p, const Rat& s, const RatVec& center) {
  if (s <= 0) throw TorexError("scale_about: positive factor required");
  HPolyhedron out = p;
  for (auto& q : out.ineqs) {
    Rat at_center = dot(q.a, center);
    q.c = at_center + s * (q.c - at_center);
  }
  return out;
}

inline Zonotope minkowski_scale(const Zonotope& z, const Rat& lambda) {
  Zonotope out = z;
  for (auto& x : out.center) x *= lambda;
  for (auto& g : out.generators)
    for (auto& x : g) x *= lambda;
  return out;
}

// All integer points of a bounded polyhedron, in lexicographic order. The
// bounding box comes from per-coordinate LP extremes, then exact membership
// filters the box.
inline std::vector<IntVec> lattice_points(const HPolyhedron& p) {
  std::vector<Int> lo(p.dim), hi(p.dim);
  if (p.dim <= 2) {
    // Fourier-Motzkin cannot blow up in two variables and skips the
    // simplex setup cost, which matters on the small hot systems
    lpdetail::System sys = lpdetail::system_of(p);
    for (std::size_t k = 0; k < p.dim; ++k) {
      auto iv = sys.interval(k);
      if (iv.empty) return {};
      if (!iv.lo || !iv.hi)
        throw UnboundedPolyhedron("lattice_points: polyhedron has a recession ray");
      lo[k] = rat_ceil(*iv.lo);
      hi[k] = rat_floor(*iv.hi);
    }
  } else {
    lpdetail::Simplex simplex(p.ineqs, p.dim);
    for (std::size_t k = 0; k < p.dim; ++k) {
      RatVec obj(p.dim, Rat(0));
      obj[k] = 1;
      lpdetail::LpValue top = simplex.maximize(obj);
      if (top.status == lpdetail::LpStatus::infeasible) return {};
      obj[k] = -1;
      lpdetail::LpValue bottom = simplex.maximize(obj);
      if (top.status == lpdetail::LpStatus::unbounded ||
          bottom.status == lpdetail::LpStatus::unbounded)
        throw UnboundedPolyhedron("lattice_points: polyhedron has a recession ray");
      hi[k] = rat_floor(top.value);
      lo[k] = rat_ceil(-bottom.value);
    }
  }
  for (std::size_t k = 0; k < p.dim; ++k)
    if (lo[k] > hi[k]) return {};
  // clear denominators once so the box filter runs on integers
  std::vector<IntVec> rows;
  IntVec rhs;
  for (const auto& q : p.ineqs) {
    Int lcm_den = denominator(q.c);
    for (const auto& x : q.a) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(x));
    IntVec row(p.dim);
    for (std::size_t j = 0; j < p.dim; ++j)
      row[j] = numerator(q.a[j]) * (lcm_den / denominator(q.a[j]));
    rows.push_back(std::move(row));
    rhs.push_back(numerator(q.c) * (lcm_den / denominator(q.c)));
  }
  std::vector<IntVec> out;
  IntVec x = lo;
  while (true) {
    bool inside = true;
    for (std::size_t r = 0; r < rows.size() && inside; ++r) {
      Int s = 0;
      for (std::size_t j = 0; j < p.dim; ++j) s += rows[r][j] * x[j];
      inside = s <= rhs[r];
    }
    if (inside) out.push_back(x);
    std::size_t k = p.dim;
    while (k-- > 0) {
      if (x[k] < hi[k]) {
        ++x[k];
        for (std::size_t j = k + 1; j < p.dim; ++j) x[j] = lo[j];
        break;
      }
      if (k == 0) return out;
    }
  }
}

namespace lpdetail {

// Offset of the supporting hyperplane of z in direction u.
inline Rat zonotope_support(const Zonotope& z, const IntVec& u) {
  Rat s = dot(to_rat(u), z.center);
  for (const auto& g : z.generators) {
    Rat d = dot(to_rat(u), g);
    if (z.symmetric)
      s += (d < 0) ? -d : d;
    else if (d > 0)
      s += d;
  }
  return s;
}

}  // namespace lpdetail

// Irredundant facet list of a full-dimensional zonotope. Facet hyperplanes
// of a zonotope are exactly the linear hyperplanes spanned by generators,
// so candidates come from (dim-1)-subsets of generators of full rank.
inline std::vector<Facet> zonotope_facets(const Zonotope& z) {
  std::size_t m = z.dim;
  if (m == 0) throw DegenerateZonotope("zonotope in a zero-dimensional space");
  RatMatrix gens(z.generators.size(), m);
  for (std::size_t i = 0; i < z.generators.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) gens(i, j) = z.generators[i][j];
  if (rational_rank(gens) != m)
    throw DegenerateZonotope("generators do not span the ambient space");

  std::map<IntVec, bool> seen;
  std::vector<IntVec> normals;
  auto consider = [&](const std::vector<std::size_t>& subset) {
    RatMatrix sub(subset.size(), m);
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = 0; j < m; ++j) sub(i, j) = z.generators[subset[i]][j];
    RatMatrix kernel = nullspace(sub);
    if (kernel.cols() != 1) return;  // subset does not span a hyperplane
    IntVec u = primitive_integer(kernel.col(0));
    if (!seen.emplace(u, true).second) return;
    normals.push_back(u);
  };
  // all (m-1)-subsets of generators
  std::size_t n = z.generators.size();
  if (m == 1) {
    consider({});
  } else {
    std::vector<std::size_t> subset(m - 1);
    auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
      if (depth == m - 1) {
        consider(subset);
        return;
      }
      for (std::size_t i = start; i + (m - 1 - depth) <= n; ++i) {
        subset[depth] = i;
        self(self, i + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);
  }

  std::vector<Facet> out;
  for (const IntVec& u : normals) {
    out.push_back(Facet{u, lpdetail::zonotope_support(z, u)});
    out.push_back(Facet{vec_neg(u), lpdetail::zonotope_support(z, vec_neg(u))});
  }
  std::sort(out.begin(), out.end(), [](const Facet& a, const Facet& b) {
    if (a.normal != b.normal) return a.normal < b.normal;
    return a.offset < b.offset;
  });
  return out;
}

inline HPolyhedron zonotope_hull(const Zonotope& z) {
  HPolyhedron p;
  p.dim = z.dim;
  for (const Facet& f : zonotope_facets(z)) p.ineqs.push_back({to_rat(f.normal), f.offset});
  return p;
}

// Vertices of the zonotope, as the subset/sign sums admitting a strictly
// supporting functional; exact and deterministic, fine at n <= 10.
inline std::vector<RatVec> zonotope_vertices(const Zonotope& z) {
  std::size_t n = z.generators.size();
  if (n > 16) throw TorexError("zonotope_vertices: too many generators");
  std::vector<RatVec> verts;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    lpdetail::System sys(z.dim);
    bool possible = true;
    for (std::size_t i = 0; i < n && possible; ++i) {
      // u.g_i > 0 for chosen sign, < 0 otherwise; zero generators break both
      RatVec a = (mask >> i) & 1 ? vec_neg(z.generators[i]) : z.generators[i];
      if (is_zero_vec(a)) possible = false;
      sys.add(a, Rat(0), true);
    }
    if (!possible || !sys.feasible()) continue;
    RatVec v = z.center;
    for (std::size_t i = 0; i < n; ++i) {
      bool take = (mask >> i) & 1;
      if (z.symmetric)
        v = take ? vec_add(v, z.generators[i]) : vec_sub(v, z.generators[i]);
      else if (take)
        v = vec_add(v, z.generators[i]);
    }
    verts.push_back(std::move(v));
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

// True iff the points, in the given order, walk clockwise once around a
// strictly convex polygon (no repeats, no collinear adjacent triples).
inline bool convex_cyclic_check(const std::vector<RatVec>& pts) {
  std::size_t n = pts.size();
  if (n < 3) return false;
  for (const auto& p : pts)
    if (p.size() != 2) throw TorexError("convex_cyclic_check: 2D points required");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pts[i] == pts[j]) return false;

  // monotone chain hull, counterclockwise
  std::vector<RatVec> sorted = pts;
  std::sort(sorted.begin(), sorted.end());
  auto cross = [](const RatVec& o, const RatVec& a, const RatVec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<RatVec> hull;
  for (int pass = 0; pass < 2; ++pass) {
    std::size_t base = hull.size();
    for (const auto& p : sorted) {
      while (hull.size() >= base + 2 &&
             cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= 0)
        hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(sorted.begin(), sorted.end());
  }
  if (hull.size() != n) return false;  // some point not a strict hull vertex

  // the input order must be a rotation of the hull traversed clockwise
  std::vector<RatVec> cw(hull.rbegin(), hull.rend());
  std::size_t start = 0;
  while (start < n && !(cw[start] == pts[0])) ++start;
  if (start == n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!(cw[(start + i) % n] == pts[i])) return false;
  return true;
}

}  // namespace torex
