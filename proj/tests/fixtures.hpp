#pragma once

#include "torex/fan.hpp"

#include <random>

namespace fixtures {

using torex::Int;
using torex::IntVec;
using torex::StackyFan;

// F_A: the projective line.
inline StackyFan p1() {
  StackyFan f;
  f.d = 1;
  f.rays = {{Int(1)}, {Int(-1)}};
  f.max_cones = {{0}, {1}};
  f.name = "P1";
  return f;
}

// F_B: the weighted projective line with weights 2 and 3.
inline StackyFan p23() {
  StackyFan f;
  f.d = 1;
  f.rays = {{Int(3)}, {Int(-2)}};
  f.max_cones = {{0}, {1}};
  f.name = "P(2,3)";
  return f;
}

// F_T: rays (2) and (-2); the Picard group picks up Z/2 torsion.
inline StackyFan z2line() {
  StackyFan f;
  f.d = 1;
  f.rays = {{Int(2)}, {Int(-2)}};
  f.max_cones = {{0}, {1}};
  f.name = "Z2-line";
  return f;
}

// F_C: the projective plane.
inline StackyFan p2() {
  StackyFan f;
  f.d = 2;
  f.rays = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
  f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
  f.name = "P2";
  return f;
}

// F_D: P1 x P1 with the rays in clockwise order.
inline StackyFan p1xp1() {
  StackyFan f;
  f.d = 2;
  f.rays = {{Int(0), Int(1)}, {Int(1), Int(0)}, {Int(0), Int(-1)}, {Int(-1), Int(0)}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  f.name = "P1xP1";
  return f;
}

// F_E: the pentagon fixture.
inline StackyFan pentagon() {
  StackyFan f;
  f.d = 2;
  f.rays = {{Int(0), Int(1)}, {Int(1), Int(1)}, {Int(1), Int(0)},
            {Int(0), Int(-1)}, {Int(-1), Int(0)}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}};
  f.name = "pentagon";
  return f;
}

// P1 x P2, a rank-two fan in dimension three.
inline StackyFan p1xp2() {
  StackyFan f;
  f.d = 3;
  f.rays = {{Int(1), Int(0), Int(0)},  {Int(-1), Int(0), Int(0)},
            {Int(0), Int(1), Int(0)},  {Int(0), Int(0), Int(1)},
            {Int(0), Int(-1), Int(-1)}};
  f.max_cones = {{0, 2, 3}, {0, 3, 4}, {0, 2, 4}, {1, 2, 3}, {1, 3, 4}, {1, 2, 4}};
  f.name = "P1xP2";
  return f;
}

// Random convex lattice polygon with n vertices in clockwise order and the
// origin strictly inside; retries until the sampled points qualify.
inline StackyFan random_polygon_fan(std::mt19937& rng, std::size_t n, int radius = 4) {
  std::uniform_int_distribution<int> coord(-radius, radius);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    std::vector<IntVec> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({Int(coord(rng)), Int(coord(rng))});
    bool zero = false;
    for (const auto& p : pts) zero = zero || torex::is_zero_vec(p);
    if (zero) continue;
    // clockwise angular sort around the origin
    std::sort(pts.begin(), pts.end(), [&](const IntVec& a, const IntVec& b) {
      return torex::fandetail::angle_less(a, b);
    });
    std::reverse(pts.begin(), pts.end());
    std::vector<torex::RatVec> rpts;
    for (const auto& p : pts) rpts.push_back(torex::to_rat(p));
    if (!torex::convex_cyclic_check(rpts)) continue;
    // origin strictly inside: every clockwise edge turns negatively around 0
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i)
      inside = inside && torex::fandetail::cross2(pts[i], pts[(i + 1) % n]) < 0;
    if (!inside) continue;
    StackyFan f = torex::face_fan_from_points(pts, "random-" + std::to_string(n) + "gon");
    if (torex::classify(f) == torex::FanClass::Fano) return f;
  }
  throw std::runtime_error("random_polygon_fan: sampling failed");
}

}  // namespace fixtures
