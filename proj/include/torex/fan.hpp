#pragma once

#include "torex/geometry.hpp"
#include "torex/linalg.hpp"
#include "torex/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace torex {

// Complete simplicial fan with a chosen lattice point on every ray.
struct StackyFan {
  std::size_t d = 0;                       // rank of the lattice N
  std::vector<IntVec> rays;                // the chosen points v_i
  std::vector<std::vector<int>> max_cones; // index sets of size d
  bool trusted_complete = false;           // required input flag for d > 3
  std::string name;

  std::size_t n() const { return rays.size(); }
};

// Subsets of ray indices closed under inclusion; the empty face is always
// present. Faces are bitmasks over the n rays.
struct SimplicialComplexOnRays {
  std::size_t n = 0;
  std::set<std::uint32_t> faces;

  bool has(std::uint32_t mask) const { return faces.count(mask) > 0; }
};

struct FanDiagnostics {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

enum class FanClass { Fano, NefFano, Neither };

namespace fandetail {

inline Rat cross2(const IntVec& a, const IntVec& b) {
  return Rat(a[0] * b[1] - a[1] * b[0]);
}

// 0 for the closed upper half plane starting at the positive x axis,
// 1 for the lower half; ties broken so the order is a strict total order
// on distinct directions.
inline int angular_half(const IntVec& v) {
  if (v[1] > 0) return 0;
  if (v[1] < 0) return 1;
  return v[0] > 0 ? 0 : 1;
}

// Counterclockwise angular order on nonzero 2D lattice vectors.
inline bool angle_less(const IntVec& a, const IntVec& b) {
  int ha = angular_half(a), hb = angular_half(b);
  if (ha != hb) return ha < hb;
  Rat c = cross2(a, b);
  if (c != 0) return c > 0;
  return false;
}

inline std::vector<int> sorted_cone(std::vector<int> c) {
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace fandetail

// Lists every violated fan invariant; an empty report means the fan is a
// valid complete simplicial stacky fan (completeness checked for d <= 3,
// trusted via the input flag for larger d).
inline FanDiagnostics validate(const StackyFan& fan) {
  FanDiagnostics diag;
  auto bad = [&](const std::string& s) { diag.problems.push_back(s); };

  if (fan.d == 0) {
    bad("lattice rank d must be positive");
    return diag;
  }
  std::size_t n = fan.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (fan.rays[i].size() != fan.d) bad("ray " + std::to_string(i) + " has wrong length");
    else if (is_zero_vec(fan.rays[i])) bad("ray " + std::to_string(i) + " is zero");
  }
  if (!diag.ok()) return diag;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (fan.rays[i] == fan.rays[j])
        bad("rays " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  std::set<std::vector<int>> cone_set;
  for (const auto& cone : fan.max_cones) {
    if (cone.size() != fan.d) {
      bad("a max cone does not have d rays");
      continue;
    }
    bool in_range = true;
    std::set<int> uniq;
    for (int idx : cone) {
      if (idx < 0 || std::size_t(idx) >= n) in_range = false;
      uniq.insert(idx);
    }
    if (!in_range || uniq.size() != fan.d) {
      bad("a max cone has out-of-range or repeated indices");
      continue;
    }
    if (!cone_set.insert(fandetail::sorted_cone(cone)).second) bad("duplicate max cone");
    IntMatrix m(fan.d, fan.d);
    std::size_t r = 0;
    for (int idx : cone) {
      for (std::size_t j = 0; j < fan.d; ++j) m(r, j) = fan.rays[idx][j];
      ++r;
    }
    if (determinant(m) == 0) {
      std::string s = "non-simplicial cone {";
      for (int idx : cone) s += std::to_string(idx) + " ";
      s.back() = '}';
      bad(s);
    }
  }
  if (!diag.ok()) return diag;
  if (fan.max_cones.empty()) {
    bad("fan has no max cones");
    return diag;
  }

  if (fan.d == 1) {
    if (n != 2 || fan.max_cones.size() != 2)
      bad("a complete fan in rank one has exactly two rays and two cones");
    else if (fan.rays[0][0] * fan.rays[1][0] >= 0)
      bad("rank-one fan rays must have opposite signs");
    else {
      std::set<int> covered;
      for (const auto& c : fan.max_cones) covered.insert(c[0]);
      if (covered.size() != 2) bad("rank-one fan cones must cover both rays");
    }
    return diag;
  }

  if (fan.d <= 3) {
    // ridge counting: every (d-1)-face of a max cone lies in exactly two cones
    std::map<std::vector<int>, int> ridge_count;
    for (const auto& cone : fan.max_cones)
      for (std::size_t drop = 0; drop < cone.size(); ++drop) {
        std::vector<int> ridge;
        for (std::size_t j = 0; j < cone.size(); ++j)
          if (j != drop) ridge.push_back(cone[j]);
        ++ridge_count[fandetail::sorted_cone(ridge)];
      }
    for (const auto& [ridge, count] : ridge_count)
      if (count != 2) {
        std::string s = "incomplete fan: ridge {";
        for (int idx : ridge) s += std::to_string(idx) + " ";
        s.back() = '}';
        bad(s + " lies in " + std::to_string(count) + " cones");
      }
  } else if (!fan.trusted_complete) {
    bad("completeness is only verified for d <= 3; set trusted_complete for larger d");
  }

  if (fan.d == 2 && diag.ok()) {
    // exact angular coverage: cones are consecutive pairs of the angular
    // sort and every angular gap is under half a turn
    std::vector<int> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return fandetail::angle_less(fan.rays[a], fan.rays[b]);
    });
    std::set<std::vector<int>> expected;
    bool gaps_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      int a = order[i], b = order[(i + 1) % n];
      expected.insert(fandetail::sorted_cone({a, b}));
      if (fandetail::cross2(fan.rays[a], fan.rays[b]) <= 0) gaps_ok = false;
    }
    if (!gaps_ok) bad("incomplete fan: an angular gap of at least a half turn");
    if (expected != cone_set) bad("max cones are not the angularly adjacent ray pairs");
  }
  return diag;
}

namespace fandetail {

// 0 (or x) lies in the relative interior of conv(points) iff it is a convex
// combination with all weights strictly positive; exact via the LP core.
inline bool point_in_relint_hull(const std::vector<IntVec>& points, const RatVec& x) {
  std::size_t n = points.size(), d = x.size();
  lpdetail::System sys(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVec a(n, Rat(0));
    a[i] = -1;
    sys.add(a, Rat(0), true);  // lambda_i > 0
  }
  RatVec ones(n, Rat(1));
  sys.add_eq(ones, Rat(1));
  for (std::size_t j = 0; j < d; ++j) {
    RatVec a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Rat(points[i][j]);
    sys.add_eq(a, x[j]);
  }
  return sys.feasible();
}

inline bool point_in_hull(const std::vector<IntVec>& points, const RatVec& x) {
  std::size_t n = points.size(), d = x.size();
  lpdetail::System sys(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVec a(n, Rat(0));
    a[i] = -1;
    sys.add(a, Rat(0), false);
  }
  RatVec ones(n, Rat(1));
  sys.add_eq(ones, Rat(1));
  for (std::size_t j = 0; j < d; ++j) {
    RatVec a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Rat(points[i][j]);
    sys.add_eq(a, x[j]);
  }
  return sys.feasible();
}

inline bool affinely_spanning(const std::vector<IntVec>& points, std::size_t d) {
  if (points.empty()) return d == 0;
  RatMatrix rel(points.size() - 1, d);
  for (std::size_t i = 1; i < points.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) rel(i - 1, j) = Rat(points[i][j] - points[0][j]);
  return rational_rank(rel) == d;
}

}  // namespace fandetail

// Fano: the rays are exactly the vertices of their convex hull and 0 is
// interior. NefFano: the rays all lie on the hull boundary (not necessarily
// vertices) and 0 is interior.
inline FanClass classify(const StackyFan& fan) {
  FanDiagnostics diag = validate(fan);
  if (!diag.ok()) throw InvalidFan("classify: " + diag.problems.front());
  std::size_t d = fan.d;
  RatVec origin(d, Rat(0));
  if (!fandetail::affinely_spanning(fan.rays, d) ||
      !fandetail::point_in_relint_hull(fan.rays, origin))
    return FanClass::Neither;

  bool all_vertices = true, all_boundary = true;
  for (std::size_t i = 0; i < fan.n(); ++i) {
    std::vector<IntVec> others;
    for (std::size_t j = 0; j < fan.n(); ++j)
      if (j != i) others.push_back(fan.rays[j]);
    if (fandetail::point_in_hull(others, to_rat(fan.rays[i]))) all_vertices = false;
    if (fandetail::point_in_relint_hull(fan.rays, to_rat(fan.rays[i]))) all_boundary = false;
  }
  if (all_vertices) return FanClass::Fano;
  if (all_boundary) return FanClass::NefFano;
  return FanClass::Neither;
}

// Face fan of conv(points) for a simplicial polytope with 0 interior.
// A d-subset spans a facet iff its affine hyperplane has every other point
// strictly on the origin side.
inline StackyFan face_fan_from_points(const std::vector<IntVec>& points,
                                      const std::string& name = "") {
  if (points.empty()) throw NotSimplicial("no points given");
  std::size_t d = points[0].size(), n = points.size();
  for (const auto& p : points)
    if (p.size() != d || is_zero_vec(p))
      throw NotSimplicial("points must be nonzero lattice vectors of equal length");
  if (n < d + 1) throw NotSimplicial("too few points to enclose the origin");

  StackyFan fan;
  fan.d = d;
  fan.rays = points;
  fan.name = name;
  fan.trusted_complete = true;  // complete by construction

  std::vector<int> subset(d);
  std::vector<bool> on_some_facet(n, false);
  auto consider = [&]() {
    // affine hyperplane u.x = c through the subset, as the kernel of
    // (v_t, -1) stacked rows
    RatMatrix m(d, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m(i, j) = Rat(points[subset[i]][j]);
      m(i, d) = Rat(-1);
    }
    RatMatrix kernel = nullspace(m);
    if (kernel.cols() != 1) return;  // affinely dependent subset
    RatVec uc = kernel.col(0);
    Rat c = uc[d];
    if (c == 0) {
      // hyperplane through the origin: supporting would put 0 on the boundary
      bool pos = false, neg = false;
      for (std::size_t j = 0; j < n; ++j) {
        Rat s = 0;
        for (std::size_t t = 0; t < d; ++t) s += uc[t] * Rat(points[j][t]);
        if (s > 0) pos = true;
        if (s < 0) neg = true;
      }
      if (!pos || !neg) throw OriginNotInterior("a candidate facet hyperplane passes through 0");
      return;
    }
    if (c < 0)
      for (auto& x : uc) x = -x;
    c = uc[d];
    bool facet = true;
    bool touching = false;
    for (std::size_t j = 0; j < n; ++j) {
      bool in_subset = false;
      for (int s : subset) in_subset = in_subset || std::size_t(s) == j;
      if (in_subset) continue;
      Rat s = 0;
      for (std::size_t t = 0; t < d; ++t) s += uc[t] * Rat(points[j][t]);
      if (s > c) { facet = false; break; }
      if (s == c) touching = true;
    }
    if (!facet) return;
    if (touching) throw NotSimplicial("a facet contains more than d points");
    std::vector<int> cone(subset);
    std::sort(cone.begin(), cone.end());
    fan.max_cones.push_back(cone);
    for (int s : cone) on_some_facet[s] = true;
  };
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == d) {
      consider();
      return;
    }
    for (std::size_t i = start; i + (d - depth) <= n; ++i) {
      subset[depth] = int(i);
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);

  if (fan.max_cones.empty()) throw OriginNotInterior("no facet has the origin strictly inside");
  for (std::size_t i = 0; i < n; ++i)
    if (!on_some_facet[i])
      throw NotSimplicial("point " + std::to_string(i) + " is not a vertex of the hull");
  std::sort(fan.max_cones.begin(), fan.max_cones.end());
  FanDiagnostics diag = validate(fan);
  if (!diag.ok()) throw NotSimplicial("face fan is invalid: " + diag.problems.front());
  return fan;
}

// True when the rays, in stored order, walk clockwise around a convex
// polygon; the dimension-two window builders insist on this order.
inline bool rays_clockwise_convex(const StackyFan& fan) {
  if (fan.d != 2) return false;
  std::vector<RatVec> pts;
  for (const auto& v : fan.rays) pts.push_back(to_rat(v));
  return convex_cyclic_check(pts);
}

// Reorders the rays of a dimension-two Fano fan clockwise (starting from the
// angularly largest ray) and rebuilds the face fan. Returns the fan and
// whether a reorder was necessary.
inline std::pair<StackyFan, bool> ensure_clockwise(const StackyFan& fan) {
  if (fan.d != 2) throw NotDimTwo("clockwise order only applies to d = 2");
  if (rays_clockwise_convex(fan)) return {fan, false};
  std::vector<int> order(fan.n());
  for (std::size_t i = 0; i < fan.n(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return fandetail::angle_less(fan.rays[a], fan.rays[b]);
  });
  std::reverse(order.begin(), order.end());  // clockwise
  std::vector<IntVec> rays;
  for (int idx : order) rays.push_back(fan.rays[idx]);
  StackyFan out = face_fan_from_points(rays, fan.name);
  if (!rays_clockwise_convex(out))
    throw NotSimplicial("rays are not in convex position");
  return {out, true};
}

inline SimplicialComplexOnRays supp_complex(const StackyFan& fan, const IntVec& r) {
  if (r.size() != fan.n()) throw TorexError("supp_complex: grading vector length mismatch");
  SimplicialComplexOnRays cx;
  cx.n = fan.n();
  cx.faces.insert(0);
  std::uint32_t nonneg = 0;
  for (std::size_t i = 0; i < fan.n(); ++i)
    if (r[i] >= 0) nonneg |= std::uint32_t(1) << i;
  for (const auto& cone : fan.max_cones) {
    std::uint32_t cm = 0;
    for (int idx : cone) cm |= std::uint32_t(1) << idx;
    std::uint32_t m = cm & nonneg;
    std::uint32_t s = m;
    while (true) {
      cx.faces.insert(s);
      if (s == 0) break;
      s = (s - 1) & m;
    }
  }
  return cx;
}

inline SimplicialComplexOnRays c_complex(const StackyFan& fan, std::uint32_t index_set) {
  IntVec r(fan.n());
  for (std::size_t i = 0; i < fan.n(); ++i)
    r[i] = ((index_set >> i) & 1) ? 0 : -1;
  return supp_complex(fan, r);
}

// The full fan complex: every subset of every max cone.
inline SimplicialComplexOnRays fan_complex(const StackyFan& fan) {
  IntVec zeros(fan.n(), Int(0));
  return supp_complex(fan, zeros);
}

// Inclusion-minimal index sets contained in no cone. Any nonface of size
// d+1 contains a minimal one, so the search stops there.
inline std::vector<std::uint32_t> minimal_nonfaces(const StackyFan& fan) {
  SimplicialComplexOnRays cx = fan_complex(fan);
  std::vector<std::uint32_t> out;
  std::size_t n = fan.n();
  std::vector<int> subset;
  auto rec = [&](auto&& self, std::size_t start, std::size_t size, std::uint32_t mask) -> void {
    if (size == 0) {
      if (cx.has(mask)) return;
      for (int idx : subset)
        if (!cx.has(mask & ~(std::uint32_t(1) << idx))) return;  // smaller nonface inside
      out.push_back(mask);
      return;
    }
    for (std::size_t i = start; i + size <= n; ++i) {
      subset.push_back(int(i));
      self(self, i + 1, size - 1, mask | (std::uint32_t(1) << i));
      subset.pop_back();
    }
  };
  for (std::size_t size = 1; size <= fan.d + 1 && size <= n; ++size)
    rec(rec, 0, size, 0);
  std::sort(out.begin(), out.end());
  return out;
}

// d! times the Euclidean volume of conv(rays), exactly: each max cone
// contributes the absolute determinant of its rays.
inline Rat normalized_volume(const StackyFan& fan) {
  FanClass cls = classify(fan);
  if (cls == FanClass::Neither) throw NotFano("normalized_volume needs a (nef-)Fano fan");
  Int total = 0;
  for (const auto& cone : fan.max_cones) {
    IntMatrix m(fan.d, fan.d);
    for (std::size_t i = 0; i < fan.d; ++i)
      for (std::size_t j = 0; j < fan.d; ++j) m(i, j) = fan.rays[cone[i]][j];
    total += abs(determinant(m));
  }
  return Rat(total);
}

inline std::uint32_t full_mask(std::size_t n) {
  return n >= 32 ? ~std::uint32_t(0) : (std::uint32_t(1) << n) - 1;
}

}  // namespace torex
