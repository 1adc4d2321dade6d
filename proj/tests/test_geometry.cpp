#include "torex/geometry.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace torex;

namespace {

HPolyhedron interval_poly(const Rat& lo, const Rat& hi) {
  HPolyhedron p;
  p.dim = 1;
  p.ineqs.push_back({{Rat(1)}, hi});
  p.ineqs.push_back({{Rat(-1)}, -lo});
  return p;
}

HPolyhedron square(const Rat& r) {
  HPolyhedron p;
  p.dim = 2;
  p.ineqs.push_back({{Rat(1), Rat(0)}, r});
  p.ineqs.push_back({{Rat(-1), Rat(0)}, r});
  p.ineqs.push_back({{Rat(0), Rat(1)}, r});
  p.ineqs.push_back({{Rat(0), Rat(-1)}, r});
  return p;
}

RatVec pt(int x, int y) { return {Rat(x), Rat(y)}; }

}  // namespace

TEST_CASE("lp_feasible on one-variable systems") {
  HPolyhedron p;
  p.dim = 1;
  p.ineqs.push_back({{Rat(1)}, Rat(1)});
  p.ineqs.push_back({{Rat(-1)}, Rat(-2)});  // x >= 2 contradicts x <= 1
  REQUIRE_FALSE(lp_feasible(p));

  HPolyhedron q;
  q.dim = 1;
  q.ineqs.push_back({{Rat(1)}, Rat(1)});
  REQUIRE(lp_feasible(q, {true}));
}

TEST_CASE("strict inequalities matter exactly on the boundary") {
  HPolyhedron p;
  p.dim = 2;
  p.ineqs.push_back({{Rat(1), Rat(1)}, Rat(1)});
  p.ineqs.push_back({{Rat(-1), Rat(-1)}, Rat(-1)});  // x + y == 1
  REQUIRE(lp_feasible(p));
  REQUIRE_FALSE(lp_feasible(p, {true, false}));
}

TEST_CASE("lattice points of a square") {
  auto pts = lattice_points(square(Rat(1)));
  REQUIRE(pts.size() == 9);
  REQUIRE(pts.front() == IntVec{-1, -1});
  REQUIRE(pts.back() == IntVec{1, 1});
}

TEST_CASE("lattice points of a shifted interval") {
  auto pts = lattice_points(interval_poly(Rat(1, 10), Rat(29, 10)));
  REQUIRE(pts == std::vector<IntVec>{{1}, {2}});
}

TEST_CASE("lattice points of an empty polyhedron") {
  auto pts = lattice_points(interval_poly(Rat(2), Rat(1)));
  REQUIRE(pts.empty());
}

TEST_CASE("unbounded polyhedra are rejected") {
  HPolyhedron p;
  p.dim = 2;
  p.ineqs.push_back({{Rat(1), Rat(0)}, Rat(1)});
  p.ineqs.push_back({{Rat(0), Rat(1)}, Rat(1)});
  REQUIRE_THROWS_AS(lattice_points(p), UnboundedPolyhedron);
}

TEST_CASE("lattice points agree with box filtering") {
  HPolyhedron tri;
  tri.dim = 2;
  tri.ineqs.push_back({{Rat(-1), Rat(0)}, Rat(0)});
  tri.ineqs.push_back({{Rat(0), Rat(-1)}, Rat(0)});
  tri.ineqs.push_back({{Rat(2), Rat(3)}, Rat(7)});
  auto got = lattice_points(tri);
  auto want = oracles::lattice_points_brute(tri, 8);
  REQUIRE(got == want);

  HPolyhedron sq = shift(square(Rat(3, 2)), {Rat(1, 3), Rat(-1, 7)});
  REQUIRE(lattice_points(sq) == oracles::lattice_points_brute(sq, 8));
}

TEST_CASE("contains and shift") {
  HPolyhedron sq = square(Rat(1));
  REQUIRE(contains(sq, pt(0, 0), true));
  REQUIRE(contains(sq, pt(1, 0)));
  REQUIRE_FALSE(contains(sq, pt(1, 0), true));
  HPolyhedron moved = shift(interval_poly(Rat(-1), Rat(0)), {Rat(1)});
  REQUIRE(contains(moved, {Rat(1)}));
  REQUIRE_FALSE(contains(moved, {Rat(-1)}));
}

TEST_CASE("minkowski_scale halves vertices") {
  Zonotope z{2, pt(0, 0), {pt(1, 0), pt(0, 1)}, true};
  Zonotope h = minkowski_scale(z, Rat(1, 2));
  auto v = zonotope_vertices(h);
  REQUIRE(v.size() == 4);
  for (const auto& p : v) {
    REQUIRE(abs(p[0]) == Rat(1, 2));
    REQUIRE(abs(p[1]) == Rat(1, 2));
  }
}

TEST_CASE("zonotope facets of the unit square") {
  Zonotope z{2, pt(0, 0), {pt(1, 0), pt(0, 1)}, true};
  auto facets = zonotope_facets(z);
  REQUIRE(facets.size() == 4);
  for (const auto& f : facets) REQUIRE(f.offset == 1);
}

TEST_CASE("degenerate zonotopes are rejected") {
  Zonotope z{2, pt(0, 0), {pt(1, 1), pt(2, 2)}, true};
  REQUIRE_THROWS_AS(zonotope_facets(z), DegenerateZonotope);
}

TEST_CASE("zonotope facets agree with the sign-combination hull") {
  std::mt19937 rng(20260810);
  std::uniform_int_distribution<int> entry(-3, 3);
  int done = 0;
  while (done < 50) {
    std::size_t dim = 1 + done % 3;
    std::size_t gens = dim + 1 + (done % 2);
    if (dim == 3) gens = std::min<std::size_t>(gens, 4);
    Zonotope z;
    z.dim = dim;
    z.symmetric = (done % 2) == 0;
    z.center.assign(dim, Rat(0));
    for (std::size_t i = 0; i < dim; ++i) z.center[i] = Rat(entry(rng), 2);
    for (std::size_t g = 0; g < gens; ++g) {
      RatVec v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = entry(rng);
      z.generators.push_back(v);
    }
    RatMatrix m(gens, dim);
    for (std::size_t i = 0; i < gens; ++i)
      for (std::size_t j = 0; j < dim; ++j) m(i, j) = z.generators[i][j];
    if (rational_rank(m) != dim) continue;  // brute hull needs full dimension too
    auto got = zonotope_facets(z);
    auto want = oracles::hull_facets_brute(oracles::zonotope_sign_points(z), dim);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].normal == want[i].normal);
      REQUIRE(got[i].offset == want[i].offset);
    }
    ++done;
  }
}

TEST_CASE("zonotope vertices match the facet structure") {
  Zonotope z{2, pt(0, 0), {pt(1, 0), pt(0, 1), pt(1, 1)}, true};
  auto verts = zonotope_vertices(z);
  REQUIRE(verts.size() == 6);  // hexagon
  auto facets = zonotope_facets(z);
  for (const auto& v : verts) {
    std::size_t tight = 0;
    for (const auto& f : facets) {
      Rat s = dot(to_rat(f.normal), v);
      REQUIRE(s <= f.offset);
      if (s == f.offset) ++tight;
    }
    REQUIRE(tight >= 2);
  }
}

TEST_CASE("convex_cyclic_check accepts the clockwise pentagon") {
  std::vector<RatVec> pent{pt(0, 1), pt(1, 1), pt(1, 0), pt(0, -1), pt(-1, 0)};
  REQUIRE(convex_cyclic_check(pent));
  std::vector<RatVec> edge_vectors{pt(1, 1), pt(1, 0), pt(0, -1), pt(-1, -1), pt(-1, 1)};
  REQUIRE(convex_cyclic_check(edge_vectors));
}

TEST_CASE("convex_cyclic_check rejections") {
  // collinear triple
  REQUIRE_FALSE(convex_cyclic_check({pt(0, 0), pt(1, 0), pt(2, 0), pt(1, 1)}));
  // counterclockwise order
  REQUIRE_FALSE(convex_cyclic_check({pt(-1, 0), pt(0, -1), pt(1, 0), pt(0, 1)}));
  // pentagram order revisits the hull out of order
  REQUIRE_FALSE(convex_cyclic_check({pt(0, 2), pt(1, -2), pt(-2, 1), pt(2, 1), pt(-1, -2)}));
  // repeated point
  REQUIRE_FALSE(convex_cyclic_check({pt(0, 1), pt(1, 0), pt(0, 1)}));
  REQUIRE_FALSE(convex_cyclic_check({pt(0, 1), pt(1, 0)}));
}

TEST_CASE("simplex extremes agree with Fourier-Motzkin projections") {
  std::mt19937 rng(2025);
  std::uniform_int_distribution<int> entry(-4, 4);
  int done = 0;
  while (done < 60) {
    std::size_t dim = 1 + done % 3;
    HPolyhedron p;
    p.dim = dim;
    std::uniform_int_distribution<std::size_t> nrows(dim + 1, dim + 5);
    std::size_t rows = nrows(rng);
    for (std::size_t i = 0; i < rows; ++i) {
      RatVec a(dim);
      bool zero = true;
      for (auto& x : a) {
        x = entry(rng);
        zero = zero && x == 0;
      }
      if (zero) a[0] = 1;
      p.ineqs.push_back({a, Rat(entry(rng))});
    }
    lpdetail::System sys = lpdetail::system_of(p);
    lpdetail::Simplex simplex(p.ineqs, dim);
    for (std::size_t k = 0; k < dim; ++k) {
      auto iv = sys.interval(k);
      RatVec obj(dim, Rat(0));
      obj[k] = 1;
      auto top = simplex.maximize(obj);
      obj[k] = -1;
      auto bottom = simplex.maximize(obj);
      if (iv.empty) {
        REQUIRE(top.status == lpdetail::LpStatus::infeasible);
        continue;
      }
      if (iv.hi) {
        REQUIRE(top.status == lpdetail::LpStatus::optimal);
        REQUIRE(top.value == *iv.hi);
      } else {
        REQUIRE(top.status == lpdetail::LpStatus::unbounded);
      }
      if (iv.lo) {
        REQUIRE(bottom.status == lpdetail::LpStatus::optimal);
        REQUIRE(-bottom.value == *iv.lo);
      } else {
        REQUIRE(bottom.status == lpdetail::LpStatus::unbounded);
      }
    }
    ++done;
  }
}

TEST_CASE("scale_about fixes the center") {
  HPolyhedron sq = square(Rat(1));
  HPolyhedron big = scale_about(shift(sq, pt(2, 2)), Rat(3), pt(2, 2));
  REQUIRE(contains(big, pt(5, 5)));
  REQUIRE_FALSE(contains(big, {Rat(51, 10), Rat(2)}));
}
