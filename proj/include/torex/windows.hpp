#pragma once

#include "torex/cohomology.hpp"
#include "torex/picard.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace torex {

// A facet label of the vertex zonotope or its enclosing zonotope: four
// indices in clockwise cyclic order. The subset I = [i1,j1) u [i2,j2)
// decomposes into two arcs; {i1,i2} and {j1,j2} are the crossing diagonals.
struct CrossingLabel {
  int i1, j1, i2, j2;

  bool operator==(const CrossingLabel& o) const {
    return i1 == o.i1 && j1 == o.j1 && i2 == o.i2 && j2 == o.j2;
  }
  bool operator<(const CrossingLabel& o) const {
    return std::tie(i1, j1, i2, j2) < std::tie(o.i1, o.j1, o.i2, o.j2);
  }

  std::uint32_t arc_mask(std::size_t n) const {
    std::uint32_t m = 0;
    for (int t = i1; t != j1; t = (t + 1) % int(n)) m |= std::uint32_t(1) << t;
    for (int t = i2; t != j2; t = (t + 1) % int(n)) m |= std::uint32_t(1) << t;
    return m;
  }

  std::array<int, 4> quad() const { return {i1, j1, i2, j2}; }
};

// All ordered pairs of crossing diagonals of the cyclic n-gon: every
// 4-subset a<b<c<d crosses (a,c) with (b,d) and contributes the two labels
// (a,b,c,d) and (b,c,d,a).
inline std::vector<CrossingLabel> crossing_diagonal_facets(std::size_t n) {
  std::vector<CrossingLabel> out;
  if (n < 4) return out;
  for (int a = 0; a < int(n); ++a)
    for (int b = a + 1; b < int(n); ++b)
      for (int c = b + 1; c < int(n); ++c)
        for (int d = c + 1; d < int(n); ++d) {
          out.push_back({a, b, c, d});
          out.push_back({b, c, d, a});
        }
  std::sort(out.begin(), out.end());
  return out;
}

// The edge directions t_i = v_i - v_{i-1}, the convexity weights phi, and
// the solved points t-hat with t-hat_{i+1} - t-hat_i = E-hat_i and
// sum phi_i t-hat_i = 0.
struct HatT {
  std::vector<IntVec> t;
  RatVec phi;
  std::vector<RatVec> that;
};

struct DelPezzoGeometry {
  PicHat hat;
  std::vector<RatVec> ehat;  // images of the divisor classes, dim k-1
  HatT t;
  Zonotope q;     // convex hull of the E-hat subset sums
  Zonotope phat;  // Minkowski sum of the [-t-hat_i, t-hat_i]
};

namespace windetail {

inline void require_del_pezzo_input(const PicardGroup& pic) {
  const StackyFan& fan = pic.fan();
  if (fan.d != 2) throw NotDimTwo("this construction needs a two-dimensional fan");
  if (classify(fan) != FanClass::Fano) throw NotFano("this construction needs a Fano fan");
  if (!rays_clockwise_convex(fan))
    throw InvalidFan("rays must be listed clockwise; apply ensure_clockwise first");
}

inline std::vector<RatVec> ehat_points(const PicardGroup& pic, const PicHat& hat) {
  std::vector<RatVec> ehat;
  for (std::size_t i = 0; i < pic.n(); ++i)
    ehat.push_back(hat_of(hat, pic, pic.basis_class(i)));
  return ehat;
}

// Arc decomposition of a nonempty proper subset of Z/n: pairs (start, end)
// with the arc running clockwise from start to end-1.
inline std::vector<std::pair<int, int>> cyclic_arcs(std::uint32_t I, std::size_t n) {
  std::vector<std::pair<int, int>> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    bool here = (I >> i) & 1;
    bool prev = (I >> ((i + n - 1) % n)) & 1;
    if (!here || prev) continue;
    int end = int(i);
    while ((I >> end) & 1) end = (end + 1) % int(n);
    arcs.push_back({int(i), end});
  }
  return arcs;
}

}  // namespace windetail

// Connected components of the one-skeleton; vertices are the singleton
// faces of the complex.
inline std::size_t connected_components(const SimplicialComplexOnRays& cx) {
  std::vector<std::size_t> root(cx.n, 0);
  for (std::size_t i = 0; i < cx.n; ++i) root[i] = i;
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::vector<bool> vertex(cx.n, false);
  for (std::uint32_t f : cx.faces) {
    int bits = __builtin_popcount(f);
    if (bits == 1) vertex[__builtin_ctz(f)] = true;
    if (bits != 2) continue;
    std::size_t a = __builtin_ctz(f);
    std::size_t b = __builtin_ctz(f & (f - 1));
    root[find(a)] = find(b);
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < cx.n; ++i)
    if (vertex[i]) roots.insert(find(i));
  return roots.size();
}

// Subsets labeling the vertices of Q: nonempty proper I whose complex C_I
// is disconnected.
inline std::vector<std::uint32_t> q_vertex_subsets(const StackyFan& fan) {
  std::vector<std::uint32_t> out;
  std::uint32_t full = full_mask(fan.n());
  for (std::uint32_t I = 1; I < full; ++I)
    if (connected_components(c_complex(fan, I)) >= 2) out.push_back(I);
  return out;
}

// The zonotope sum of [0, E-hat_i], recentered at the origin.
inline Zonotope build_Q(const PicardGroup& pic) {
  windetail::require_del_pezzo_input(pic);
  PicHat hat = pic_hat(pic);
  std::vector<RatVec> ehat = windetail::ehat_points(pic, hat);
  Zonotope q;
  q.dim = hat.k - 1;
  q.center.assign(q.dim, Rat(0));
  q.symmetric = true;
  for (const RatVec& e : ehat) q.generators.push_back(vec_scale(Rat(1, 2), e));
  return q;
}

// Builds t, phi and the t-hat points; phi defaults to the dual-polytope
// weights det(v_i, v_{i-1}) scaled to total one.
inline DelPezzoGeometry del_pezzo_geometry(const PicardGroup& pic,
                                           const std::optional<RatVec>& phi_in = std::nullopt) {
  windetail::require_del_pezzo_input(pic);
  const StackyFan& fan = pic.fan();
  std::size_t n = fan.n();
  DelPezzoGeometry g;
  g.hat = pic_hat(pic);
  g.ehat = windetail::ehat_points(pic, g.hat);

  for (std::size_t i = 0; i < n; ++i)
    g.t.t.push_back(vec_sub(fan.rays[i], fan.rays[(i + n - 1) % n]));

  RatVec phi;
  if (phi_in) {
    phi = *phi_in;
    if (phi.size() != n) throw PhiNotConvex("phi needs one weight per ray");
    Rat total = 0;
    for (const auto& x : phi) {
      if (x <= 0) throw PhiNotConvex("phi weights must be positive");
      total += x;
    }
    for (auto& x : phi) x /= total;
  } else {
    Rat total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const IntVec& a = fan.rays[i];
      const IntVec& b = fan.rays[(i + n - 1) % n];
      Rat det(a[0] * b[1] - a[1] * b[0]);
      if (det <= 0) throw PhiNotConvex("rays are not in clockwise position");
      phi.push_back(det);
      total += det;
    }
    for (auto& x : phi) x /= total;
  }
  std::vector<RatVec> scaled;
  for (std::size_t i = 0; i < n; ++i)
    scaled.push_back(vec_scale(Rat(1) / phi[i], to_rat(g.t.t[i])));
  if (!convex_cyclic_check(scaled))
    throw PhiNotConvex("the scaled edge vectors are not in convex position");
  g.t.phi = phi;

  // t-hat_i = t-hat_0 + sum of E-hat up to i; the phi relation pins t-hat_0
  std::size_t hdim = g.hat.k - 1;
  std::vector<RatVec> cumulative{RatVec(hdim, Rat(0))};
  for (std::size_t i = 0; i + 1 < n; ++i)
    cumulative.push_back(vec_add(cumulative.back(), g.ehat[i]));
  RatVec weighted(hdim, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    weighted = vec_add(weighted, vec_scale(phi[i], cumulative[i]));
  RatVec t0 = vec_neg(weighted);
  for (std::size_t i = 0; i < n; ++i) g.t.that.push_back(vec_add(t0, cumulative[i]));

  g.q = build_Q(pic);
  g.phat.dim = hdim;
  g.phat.center.assign(hdim, Rat(0));
  g.phat.symmetric = true;
  g.phat.generators = g.t.that;
  return g;
}

inline std::pair<HatT, Zonotope> build_P_hat(const PicardGroup& pic,
                                             const std::optional<RatVec>& phi = std::nullopt) {
  DelPezzoGeometry g = del_pezzo_geometry(pic, phi);
  return {g.t, g.phat};
}

namespace windetail {

// Primitive-normal facet of the zonotope z whose tight generator signs are
// prescribed: zero on zero_set, positive on pos, negative on neg. Fails
// (nullopt) when the zero set does not cut a hyperplane or a sign clashes.
inline std::optional<Facet> facet_with_signs(const Zonotope& z, const std::vector<RatVec>& gens,
                                             const std::vector<int>& zero_set,
                                             const std::vector<int>& pos,
                                             const std::vector<int>& neg) {
  RatMatrix m(zero_set.size(), z.dim);
  for (std::size_t i = 0; i < zero_set.size(); ++i)
    for (std::size_t j = 0; j < z.dim; ++j) m(i, j) = gens[zero_set[i]][j];
  RatMatrix kernel = nullspace(m);
  if (kernel.cols() != 1) return std::nullopt;
  IntVec u = primitive_integer(kernel.col(0));
  auto sign_of = [&](int i) {
    Rat s = dot(to_rat(u), gens[i]);
    return s == 0 ? 0 : (s > 0 ? 1 : -1);
  };
  int orient = 0;
  for (int i : pos) {
    int s = sign_of(i);
    if (s == 0) return std::nullopt;
    if (orient == 0) orient = s;
    if (s != orient) return std::nullopt;
  }
  for (int i : neg) {
    int s = sign_of(i);
    if (s == 0 || s == orient) return std::nullopt;
  }
  if (orient < 0) u = vec_neg(u);
  return Facet{u, lpdetail::zonotope_support(z, u)};
}

}  // namespace windetail

// The facet of Q named by a crossing label: the supporting normal is
// positive on the diagonal {i1,i2}, negative on {j1,j2}, zero elsewhere.
inline std::optional<Facet> q_facet_of_label(const DelPezzoGeometry& g, const CrossingLabel& lb) {
  std::size_t n = g.ehat.size();
  std::vector<int> zero, pos{lb.i1, lb.i2}, neg{lb.j1, lb.j2};
  for (int i = 0; i < int(n); ++i)
    if (i != lb.i1 && i != lb.i2 && i != lb.j1 && i != lb.j2) zero.push_back(i);
  return windetail::facet_with_signs(g.q, g.ehat, zero, pos, neg);
}

// The facet of P-hat named by a crossing label: positive on the arc ends,
// negative on the arc starts, zero on the remaining t-hat directions.
inline std::optional<Facet> phat_facet_of_label(const DelPezzoGeometry& g,
                                                const CrossingLabel& lb) {
  std::size_t n = g.t.that.size();
  std::vector<int> zero, pos{lb.j1, lb.j2}, neg{lb.i1, lb.i2};
  for (int i = 0; i < int(n); ++i)
    if (i != lb.i1 && i != lb.i2 && i != lb.j1 && i != lb.j2) zero.push_back(i);
  return windetail::facet_with_signs(g.phat, g.t.that, zero, pos, neg);
}

inline RatVec ehat_sum(const DelPezzoGeometry& g, std::uint32_t I) {
  RatVec s(g.hat.k - 1, Rat(0));
  for (std::size_t i = 0; i < g.ehat.size(); ++i)
    if ((I >> i) & 1) s = vec_add(s, g.ehat[i]);
  return s;
}

struct MidpointCertificate {
  bool passed = true;
  std::vector<std::string> failures;
  std::size_t q_vertex_count = 0;
  std::size_t phat_facet_count = 0;

  void fail(const std::string& what) {
    passed = false;
    failures.push_back(what);
  }
};

// Verifies the midpoint correspondence between Q and P-hat:
//  (a) every disconnected-subset point E-hat_I is the midpoint of a
//      genuine face of P-hat labeled by the arc decomposition of I,
//  (b) facet midpoints of P-hat biject with the two-component subsets,
//  (c) Q sits inside P-hat,
//  (d) no forbidden-cone image meets the interior of P-hat, certified by
//      an explicit separating functional per subset.
inline MidpointCertificate midpoint_certificate(const PicardGroup& pic,
                                                const DelPezzoGeometry& g) {
  const StackyFan& fan = pic.fan();
  std::size_t n = fan.n(), hdim = g.hat.k - 1;
  MidpointCertificate cert;

  std::vector<std::uint32_t> vertex_subsets = q_vertex_subsets(fan);
  // the geometric vertex set of Q must be exactly the E-hat_I points
  {
    auto verts = zonotope_vertices(g.q);
    cert.q_vertex_count = verts.size();
    std::set<RatVec> expected;
    for (std::uint32_t I : vertex_subsets) expected.insert(ehat_sum(g, I));
    std::set<RatVec> got(verts.begin(), verts.end());
    if (expected != got) cert.fail("vertex set of Q differs from the disconnected-subset points");
  }

  auto subset_string = [](std::uint32_t I) {
    std::string s = "{";
    for (int i = 0; i < 32; ++i)
      if ((I >> i) & 1) s += std::to_string(i) + ",";
    s.back() = '}';
    return s;
  };

  for (std::uint32_t I : vertex_subsets) {
    auto arcs = windetail::cyclic_arcs(I, n);
    RatVec midpoint(hdim, Rat(0));
    std::vector<int> starts, ends;
    for (auto [a, b] : arcs) {
      starts.push_back(a);
      ends.push_back(b);
      midpoint = vec_add(midpoint, vec_sub(g.t.that[b], g.t.that[a]));
    }
    if (midpoint != ehat_sum(g, I)) {
      cert.fail("arc midpoint identity fails for " + subset_string(I));
      continue;
    }
    // support + separation: u vanishing on the free t-hats, positive on the
    // arc ends, negative on the starts, and weakly signed on the E-hats so
    // the forbidden cone stays beyond the supporting hyperplane
    lpdetail::System sys(hdim);
    std::set<int> tagged(starts.begin(), starts.end());
    tagged.insert(ends.begin(), ends.end());
    for (std::size_t k = 0; k < n; ++k)
      if (!tagged.count(int(k))) sys.add_eq(g.t.that[k], Rat(0));
    for (int e : ends) sys.add(vec_neg(g.t.that[e]), Rat(0), true);  // u.that_e > 0
    for (int s : starts) sys.add(g.t.that[s], Rat(0), true);         // u.that_s < 0
    for (std::size_t i = 0; i < n; ++i) {
      if ((I >> i) & 1)
        sys.add(vec_neg(g.ehat[i]), Rat(0), false);  // u.ehat_i >= 0
      else
        sys.add(g.ehat[i], Rat(0), false);  // u.ehat_i <= 0
    }
    if (!sys.feasible())
      cert.fail("no separating support functional at " + subset_string(I));
  }

  // facet midpoints of P-hat are the two-component subsets, bijectively
  auto facets = zonotope_facets(g.phat);
  cert.phat_facet_count = facets.size();
  std::set<std::uint32_t> two_component;
  for (std::uint32_t I : vertex_subsets)
    if (connected_components(c_complex(fan, I)) == 2) two_component.insert(I);
  std::set<std::uint32_t> seen;
  for (const Facet& f : facets) {
    std::vector<int> pos, neg;
    for (std::size_t k = 0; k < n; ++k) {
      Rat s = dot(to_rat(f.normal), g.t.that[k]);
      if (s > 0) pos.push_back(int(k));
      if (s < 0) neg.push_back(int(k));
    }
    if (pos.size() != 2 || neg.size() != 2) {
      cert.fail("a facet of P-hat is not cut out by two crossing diagonals");
      continue;
    }
    // clockwise interleaving start, end, start, end
    std::vector<std::pair<int, int>> tagged;  // (index, +1 end / -1 start)
    for (int e : pos) tagged.push_back({e, +1});
    for (int s : neg) tagged.push_back({s, -1});
    std::sort(tagged.begin(), tagged.end());
    if (tagged[0].second == tagged[1].second || tagged[1].second == tagged[2].second ||
        tagged[2].second == tagged[3].second) {
      cert.fail("facet signs of P-hat do not interleave");
      continue;
    }
    int first_start = tagged[0].second == -1 ? 0 : 1;
    CrossingLabel lb{tagged[first_start].first, tagged[first_start + 1].first,
                     tagged[first_start + 2].first,
                     first_start + 3 < 4 ? tagged[first_start + 3].first : tagged[0].first};
    std::uint32_t I = lb.arc_mask(n);
    RatVec midpoint(hdim, Rat(0));
    for (int e : pos) midpoint = vec_add(midpoint, g.t.that[e]);
    for (int s : neg) midpoint = vec_sub(midpoint, g.t.that[s]);
    if (midpoint != ehat_sum(g, I)) {
      cert.fail("facet midpoint is not the expected vertex of Q");
      continue;
    }
    if (!two_component.count(I)) {
      cert.fail("facet midpoint labels a subset without exactly two components");
      continue;
    }
    seen.insert(I);
  }
  // each facet names one subset and the opposite facet its complement, so
  // the correspondence is one-to-one
  if (seen.size() != facets.size() || seen != two_component)
    cert.fail("facets of P-hat do not biject with the two-component subsets");

  // Q inside P-hat
  {
    auto verts = zonotope_vertices(g.q);
    for (const RatVec& v : verts)
      for (const Facet& f : facets)
        if (dot(to_rat(f.normal), v) > f.offset) {
          cert.fail("a vertex of Q escapes P-hat");
          break;
        }
  }
  return cert;
}

struct MovingLemmaResult {
  bool ok = true;
  std::string witness;
  operator bool() const { return ok; }
};

// Checks the facet-shift containments for one labeled facet of P-hat: the
// four arc shifts of the relative interior land strictly inside, and the
// full shift by -2 E-hat_I lands exactly on the opposite facet. Relative
// interiors are certified on the midpoint plus the 1%-contracted extreme
// points, which is exact and sufficient for convex bodies.
inline MovingLemmaResult moving_lemma_check(const DelPezzoGeometry& g, const CrossingLabel& lb) {
  std::size_t n = g.t.that.size(), hdim = g.hat.k - 1;
  auto facet = phat_facet_of_label(g, lb);
  if (!facet) return {false, "label does not cut a facet of P-hat"};

  RatVec midpoint = vec_sub(vec_add(g.t.that[lb.j1], g.t.that[lb.j2]),
                            vec_add(g.t.that[lb.i1], g.t.that[lb.i2]));
  std::vector<int> free_idx;
  for (int k = 0; k < int(n); ++k)
    if (k != lb.i1 && k != lb.i2 && k != lb.j1 && k != lb.j2) free_idx.push_back(k);

  auto arc_sum = [&](int a, int b) {
    RatVec s(hdim, Rat(0));
    for (int t = a; t != b; t = (t + 1) % int(n)) s = vec_add(s, g.ehat[t]);
    return s;
  };
  std::vector<RatVec> shifts{vec_scale(Rat(-2), arc_sum(lb.i1, lb.j1)),
                             vec_scale(Rat(-2), arc_sum(lb.i2, lb.j2)),
                             vec_scale(Rat(2), arc_sum(lb.j1, lb.i2)),
                             vec_scale(Rat(2), arc_sum(lb.j2, lb.i1))};

  auto facets = zonotope_facets(g.phat);
  auto strictly_inside = [&](const RatVec& x) {
    for (const Facet& f : facets)
      if (!(dot(to_rat(f.normal), x) < f.offset)) return false;
    return true;
  };

  for (std::size_t s = 0; s < shifts.size(); ++s) {
    RatVec target_mid = vec_add(midpoint, shifts[s]);
    if (!strictly_inside(target_mid))
      return {false, "shift " + std::to_string(s) + " moves the midpoint out of the interior"};
    for (std::size_t mask = 0; mask < (std::size_t(1) << free_idx.size()); ++mask) {
      RatVec x = midpoint;
      for (std::size_t b = 0; b < free_idx.size(); ++b) {
        const RatVec& gvec = g.t.that[free_idx[b]];
        x = ((mask >> b) & 1) ? vec_add(x, gvec) : vec_sub(x, gvec);
      }
      // contract 1% toward the midpoint, then shift
      RatVec contracted = vec_add(midpoint, vec_scale(Rat(99, 100), vec_sub(x, midpoint)));
      if (!strictly_inside(vec_add(contracted, shifts[s])))
        return {false, "shift " + std::to_string(s) + " pushes a contracted vertex outside"};
    }
  }

  // the shift by -2 E-hat_I carries the facet onto the opposite one exactly
  RatVec ehat_I = ehat_sum(g, lb.arc_mask(n));
  if (ehat_I != midpoint) return {false, "E-hat_I is not the facet midpoint"};
  RatVec opposite = vec_sub(midpoint, vec_scale(Rat(2), ehat_I));
  if (opposite != vec_neg(midpoint)) return {false, "opposite facet midpoint mismatch"};
  IntVec flipped = vec_neg(facet->normal);
  Rat tight = dot(to_rat(flipped), opposite);
  for (int k : free_idx) {
    Rat d = dot(to_rat(flipped), g.t.that[k]);
    tight += d < 0 ? -d : d;
  }
  bool found = false;
  for (const Facet& f : facets)
    found = found || (f.normal == flipped && f.offset == tight);
  if (!found) return {false, "opposite facet is missing from P-hat"};
  return {};
}

enum class WindowKind { rank1, rank2, delpezzo };

// The window polytope in the free coordinates of Pic_R, together with the
// functional data used to build it.
struct WindowP {
  WindowKind kind;
  HPolyhedron polytope;  // dim k
  RatVec f_row;          // f as a functional on the free coordinates
  RatVec center;         // center of symmetry of the window
};

inline WindowP build_window(const PicardGroup& pic, WindowKind kind,
                            const DelPezzoGeometry* geom = nullptr) {
  std::size_t k = pic.rank();
  WindowP w;
  w.kind = kind;
  w.polytope.dim = k;
  w.center.assign(k, Rat(0));
  RatVec f = f_functional(pic);
  w.f_row = pic.functional_on_free(f);

  if (kind == WindowKind::rank1) {
    if (k != 1) throw KindMismatch("rank1 window needs Picard rank one");
    Int deg_k = canonical_class(pic).free[0];
    // closed segment [deg K + 1/2, 1/2]: its lattice degrees are exactly
    // [deg K + 1, 0] and its boundary never meets the lattice
    w.polytope.ineqs.push_back({{Rat(1)}, Rat(1, 2)});
    w.polytope.ineqs.push_back({{Rat(-1)}, -(Rat(deg_k) + Rat(1, 2))});
    w.center = {Rat(deg_k + 1) / 2};
    return w;
  }
  if (kind == WindowKind::rank2) {
    if (k != 2) throw KindMismatch("rank2 window needs Picard rank two");
    AlphaFunctional a = alpha_functional(pic);
    RatVec alpha_row = pic.functional_on_free(to_rat(a.alpha));
    Rat bound = 0;
    for (int i : a.plus) bound += Rat(a.alpha[i]);
    bound /= 2;
    w.polytope.ineqs.push_back({w.f_row, Rat(1, 2)});
    w.polytope.ineqs.push_back({vec_neg(w.f_row), Rat(1, 2)});
    w.polytope.ineqs.push_back({alpha_row, bound});
    w.polytope.ineqs.push_back({vec_neg(alpha_row), bound});
    return w;
  }
  // del Pezzo: |f| <= 1/2 and the hat image confined to half of P-hat
  if (pic.fan().d != 2) throw KindMismatch("delpezzo window needs a two-dimensional fan");
  DelPezzoGeometry local;
  if (!geom) {
    local = del_pezzo_geometry(pic);
    geom = &local;
  }
  w.polytope.ineqs.push_back({w.f_row, Rat(1, 2)});
  w.polytope.ineqs.push_back({vec_neg(w.f_row), Rat(1, 2)});
  for (const Facet& f2 : zonotope_facets(geom->phat)) {
    RatVec row(k, Rat(0));
    for (std::size_t r = 0; r < geom->hat.proj.rows(); ++r)
      for (std::size_t c = 0; c < k; ++c) row[c] += Rat(f2.normal[r]) * geom->hat.proj(r, c);
    w.polytope.ineqs.push_back({row, f2.offset / 2});
  }
  return w;
}

struct GenericShift {
  RatVec p;
  int attempt = 0;
  std::size_t checked_points = 0;
};

// A rational shift certified generic: no class of Pic lies on any facet
// hyperplane of p + window, checked exactly over a slightly inflated copy.
// Candidate classes are enumerated once from a padded window that covers
// every attempted shift.
inline GenericShift generic_shift(const PicardGroup& pic, const WindowP& window,
                                  unsigned seed) {
  std::size_t k = pic.rank();
  HPolyhedron padded = scale_about(window.polytope, Rat(9, 8), window.center);
  for (auto& q : padded.ineqs) {
    Rat l1 = 0;
    for (const auto& x : q.a) l1 += (x < 0 ? -x : x);
    q.c += l1 / 4;  // covers every shift with |p_j| <= 1/4
  }
  std::vector<IntVec> candidates = lattice_points(padded);
  HPolyhedron inflated = scale_about(window.polytope, Rat(9, 8), window.center);

  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-16, 16);
  const int max_attempts = 64;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    RatVec p(k, Rat(0));
    if (attempt > 0)
      for (auto& x : p) x = Rat(num(rng), 64);
    bool clean = true;
    std::size_t count = 0;
    for (const IntVec& x : candidates) {
      RatVec rel = vec_sub(to_rat(x), p);
      if (!contains(inflated, rel)) continue;
      ++count;
      for (const auto& ineq : window.polytope.ineqs) {
        if (dot(ineq.a, rel) == ineq.c) { clean = false; break; }
      }
      if (!clean) break;
    }
    if (clean) return {p, attempt, count};
  }
  throw GenericityFailure("no generic shift found within the retry budget");
}

// All classes whose free image lies strictly inside p + window, times every
// torsion value, in lexicographic order.
inline std::vector<PicClass> classes_in(const PicardGroup& pic, const RatVec& p,
                                        const WindowP& window) {
  HPolyhedron shifted = shift(window.polytope, p);
  std::vector<PicClass> out;
  for (const IntVec& x : lattice_points(shifted)) {
    if (!contains(shifted, to_rat(x), true)) {
      // on the boundary: the shift was not generic after all
      throw NonGenericShift("a class lies on the window boundary");
    }
    for (const PicClass& c : pic.torsion_fiber(x)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The four boundary segments of the rank-2 parallelogram, named as in the
// moving argument: theta_plus and theta_minus tile the side alpha = +c,
// their negatives the opposite side.
struct ThetaSegments {
  RatVec q_plus, q_minus;                     // centers (images of +-1/2 sums)
  std::pair<RatVec, RatVec> theta_plus;       // on alpha = +c
  std::pair<RatVec, RatVec> theta_minus;      // on alpha = +c
  std::pair<RatVec, RatVec> theta_plus_opp;   // -theta_minus... on alpha = -c
  std::pair<RatVec, RatVec> theta_minus_opp;  // -theta_plus
};

inline ThetaSegments rank2_theta_segments(const PicardGroup& pic) {
  if (pic.rank() != 2) throw NotRankTwo("theta segments need rank two");
  RatVec f = f_functional(pic);
  RatVec f_row = pic.functional_on_free(f);
  AlphaFunctional a = alpha_functional(pic);
  RatVec alpha_row = pic.functional_on_free(to_rat(a.alpha));
  Rat c = 0;
  for (int i : a.plus) c += Rat(a.alpha[i]);
  c /= 2;

  auto solve_point = [&](const Rat& fval, const Rat& aval) {
    RatMatrix m(2, 2);
    m(0, 0) = f_row[0];
    m(0, 1) = f_row[1];
    m(1, 0) = alpha_row[0];
    m(1, 1) = alpha_row[1];
    auto x = solve_rational(m, {fval, aval});
    if (!x) throw TorexError("f and alpha are not independent");
    return *x;
  };

  RatVec qp(2, Rat(0)), qm(2, Rat(0));
  {
    IntVec div_p(pic.n(), Int(0)), div_m(pic.n(), Int(0));
    for (int i : a.plus) div_p[i] = 1;
    for (int i : a.minus) div_m[i] = 1;
    RatMatrix proj = pic.real_projection();
    qp = vec_scale(Rat(1, 2), proj.apply(to_rat(div_p)));
    qm = vec_scale(Rat(-1, 2), proj.apply(to_rat(div_m)));
  }

  Rat f_qp = dot(f_row, qp);
  Rat split = 2 * f_qp - Rat(1, 2);  // boundary between theta_minus and theta_plus
  ThetaSegments seg;
  seg.q_plus = qp;
  seg.q_minus = qm;
  seg.theta_plus = {solve_point(split, c), solve_point(Rat(1, 2), c)};
  seg.theta_minus = {solve_point(Rat(-1, 2), c), solve_point(split, c)};
  seg.theta_plus_opp = {vec_neg(seg.theta_minus.first), vec_neg(seg.theta_minus.second)};
  seg.theta_minus_opp = {vec_neg(seg.theta_plus.first), vec_neg(seg.theta_plus.second)};
  return seg;
}

}  // namespace torex
