#pragma once

#include "torex/fan.hpp"
#include "torex/geometry.hpp"
#include "torex/picard.hpp"

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace torex {

// Homology over Q of the augmented chain complex in which a face J sits in
// degree |J| and the empty face in degree 0, so h_k equals the standard
// reduced homology in degree k-1. This convention is what makes the two
// boundary cases match: the full fan complex contributes to H^0 through
// h_d, and the empty complex contributes to H^d through h_0.
inline std::vector<long> homology_dims(const SimplicialComplexOnRays& cx) {
  std::size_t max_size = 0;
  for (std::uint32_t f : cx.faces)
    max_size = std::max<std::size_t>(max_size, __builtin_popcount(f));
  std::vector<std::vector<std::uint32_t>> level(max_size + 1);
  std::vector<std::map<std::uint32_t, std::size_t>> index(max_size + 1);
  for (std::uint32_t f : cx.faces) {
    std::size_t k = __builtin_popcount(f);
    index[k].emplace(f, level[k].size());
    level[k].push_back(f);
  }
  // boundary ranks; boundary_rank[k] = rank of C_k -> C_{k-1}
  std::vector<std::size_t> boundary_rank(max_size + 2, 0);
  for (std::size_t k = 1; k <= max_size; ++k) {
    if (level[k].empty() || level[k - 1].empty()) continue;
    IntMatrix d(level[k - 1].size(), level[k].size());
    for (std::size_t col = 0; col < level[k].size(); ++col) {
      std::uint32_t face = level[k][col];
      int position = 0;
      for (std::size_t v = 0; v < cx.n; ++v) {
        std::uint32_t bit = std::uint32_t(1) << v;
        if (!(face & bit)) continue;
        std::uint32_t sub = face & ~bit;
        auto it = index[k - 1].find(sub);
        if (it != index[k - 1].end())
          d(it->second, col) = (position % 2 == 0) ? 1 : -1;
        ++position;
      }
    }
    boundary_rank[k] = rational_rank(d);
  }
  std::vector<long> h(max_size + 1, 0);
  for (std::size_t k = 0; k <= max_size; ++k)
    h[k] = long(level[k].size()) - long(boundary_rank[k]) - long(boundary_rank[k + 1]);
  return h;
}

inline bool has_nontrivial_homology(const SimplicialComplexOnRays& cx) {
  for (long x : homology_dims(cx))
    if (x != 0) return true;
  return false;
}

// All index sets I (including the empty and the full set) whose complex C_I
// carries homology; these index every cohomology contribution.
inline std::vector<std::uint32_t> non_acyclic_subsets(const StackyFan& fan) {
  if (fan.n() > 20) throw TooManyRays("non_acyclic_subsets scans 2^n subsets; n > 20");
  std::vector<std::uint32_t> out;
  std::uint32_t full = full_mask(fan.n());
  for (std::uint32_t I = 0;; ++I) {
    if (has_nontrivial_homology(c_complex(fan, I))) out.push_back(I);
    if (I == full) break;
  }
  return out;
}

struct CohomologyTable {
  std::vector<Int> dims;  // h^0 .. h^d
  struct Witness {
    std::uint32_t index_set;
    IntVec w;            // lattice parameter of the representative r0 + rho*(w)
    std::size_t degree;  // homology degree k, contributing to H^{d-k}
    long multiplicity;
  };
  std::vector<Witness> contributions;

  Int euler_characteristic() const {
    Int chi = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) chi += (p % 2 == 0) ? dims[p] : -dims[p];
    return chi;
  }
};

// Translated orthant in Pic_R whose lattice points carry the potentially
// non-vanishing cohomology indexed by I.
struct ForbiddenCone {
  std::uint32_t index_set;          // proper subset with non-acyclic C_I
  RatVec apex;                      // image of -sum_{i not in I} E_i
  std::vector<RatVec> generators;   // +E_i images on I, -E_i images off I
};

// Shared computation for line-bundle cohomology over one Picard group:
// the non-acyclic subsets with their homology, and per-subset boundedness
// certificates for the representative polyhedra.
class CohomologyEngine {
 public:
  explicit CohomologyEngine(const PicardGroup& pic) : pic_(&pic) {
    const StackyFan& fan = pic.fan();
    for (std::uint32_t I : non_acyclic_subsets(fan)) {
      homologies_.emplace_back(I, homology_dims(c_complex(fan, I)));
      certify_bounded(I);
    }
  }

  const PicardGroup& pic() const { return *pic_; }

  const std::vector<std::pair<std::uint32_t, std::vector<long>>>& non_acyclic() const {
    return homologies_;
  }

  CohomologyTable cohomology(const PicClass& L) const {
    return cohomology_of_divisor(pic_->representative(L));
  }

  // Same computation from an explicit divisor vector; the table only
  // depends on its class.
  CohomologyTable cohomology_of_divisor(const IntVec& r0) const {
    const StackyFan& fan = pic_->fan();
    CohomologyTable table;
    table.dims.assign(fan.d + 1, Int(0));
    for (const auto& [I, h] : homologies_) {
      std::vector<IntVec> ws = representative_parameters(r0, I);
      for (const IntVec& w : ws)
        for (std::size_t k = 0; k < h.size(); ++k) {
          if (h[k] == 0) continue;
          std::size_t p = fan.d - k;
          table.dims[p] += h[k];
          table.contributions.push_back({I, w, k, h[k]});
        }
    }
    return table;
  }

  bool is_acyclic(const PicClass& L) const {
    const StackyFan& fan = pic_->fan();
    std::uint32_t full = full_mask(fan.n());
    IntVec r0 = pic_->representative(L);
    for (const auto& [I, h] : homologies_) {
      if (I == full) continue;  // proper subsets only: those feed p >= 1
      if (!representative_parameters(r0, I).empty()) return false;
    }
    return true;
  }

  std::vector<ForbiddenCone> forbidden_cones() const {
    const StackyFan& fan = pic_->fan();
    RatMatrix proj = pic_->real_projection();
    std::uint32_t full = full_mask(fan.n());
    std::vector<ForbiddenCone> cones;
    for (const auto& [I, h] : homologies_) {
      if (I == full) continue;
      ForbiddenCone cone;
      cone.index_set = I;
      RatVec q(fan.n(), Rat(0));
      for (std::size_t i = 0; i < fan.n(); ++i)
        if (!((I >> i) & 1)) q[i] = -1;
      cone.apex = proj.apply(q);
      for (std::size_t i = 0; i < fan.n(); ++i) {
        RatVec col = proj.col(i);
        cone.generators.push_back(((I >> i) & 1) ? col : vec_neg(col));
      }
      cones.push_back(std::move(cone));
    }
    return cones;
  }

  // Exact membership test against every forbidden cone for a real point of
  // Pic_R given in free coordinates. Per-coordinate support bounds of each
  // cone reject most points before the LP runs.
  bool is_strongly_acyclic(const RatVec& x) const {
    if (cones_.empty()) {
      cones_ = forbidden_cones();
      std::size_t k = pic_->rank();
      for (const ForbiddenCone& cone : cones_) {
        std::vector<int> bound(k, 0);  // +1: x_j <= apex_j, -1: x_j >= apex_j
        for (std::size_t j = 0; j < k; ++j) {
          bool no_up = true, no_down = true;
          for (const auto& g : cone.generators) {
            if (g[j] > 0) no_up = false;
            if (g[j] < 0) no_down = false;
          }
          bound[j] = no_up ? 1 : (no_down ? -1 : 0);
        }
        cone_bounds_.push_back(std::move(bound));
      }
    }
    for (std::size_t c = 0; c < cones_.size(); ++c) {
      bool possible = true;
      for (std::size_t j = 0; j < cone_bounds_[c].size() && possible; ++j) {
        if (cone_bounds_[c][j] > 0 && x[j] > cones_[c].apex[j]) possible = false;
        if (cone_bounds_[c][j] < 0 && x[j] < cones_[c].apex[j]) possible = false;
      }
      if (possible && cone_contains(cones_[c], x)) return false;
    }
    return true;
  }

  static bool cone_contains(const ForbiddenCone& cone, const RatVec& x) {
    std::size_t n = cone.generators.size(), k = cone.apex.size();
    lpdetail::System sys(n);
    for (std::size_t i = 0; i < n; ++i) {
      RatVec a(n, Rat(0));
      a[i] = -1;
      sys.add(a, Rat(0), false);  // lambda_i >= 0
    }
    for (std::size_t c = 0; c < k; ++c) {
      RatVec a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = cone.generators[i][c];
      sys.add_eq(a, x[c] - cone.apex[c]);
    }
    return sys.feasible();
  }

 private:
  // Integer w with r0_i + v_i.w >= 0 on I and <= -1 off I.
  std::vector<IntVec> representative_parameters(const IntVec& r0, std::uint32_t I) const {
    const StackyFan& fan = pic_->fan();
    HPolyhedron p;
    p.dim = fan.d;
    for (std::size_t i = 0; i < fan.n(); ++i) {
      RatVec a(fan.d);
      if ((I >> i) & 1) {
        for (std::size_t j = 0; j < fan.d; ++j) a[j] = Rat(-fan.rays[i][j]);
        p.ineqs.push_back({a, Rat(r0[i])});
      } else {
        for (std::size_t j = 0; j < fan.d; ++j) a[j] = Rat(fan.rays[i][j]);
        p.ineqs.push_back({a, Rat(-1 - r0[i])});
      }
    }
    return lattice_points(p);
  }

  // The recession cone {v_i.w >= 0 on I, <= 0 off I} must be the origin,
  // otherwise the configuration would carry infinite-dimensional cohomology
  // and the input cannot be a complete fan.
  void certify_bounded(std::uint32_t I) const {
    const StackyFan& fan = pic_->fan();
    for (std::size_t j = 0; j < fan.d; ++j)
      for (int sign : {1, -1}) {
        lpdetail::System sys(fan.d);
        for (std::size_t i = 0; i < fan.n(); ++i) {
          RatVec a = to_rat(fan.rays[i]);
          if ((I >> i) & 1) a = vec_neg(a);
          sys.add(a, Rat(0), false);
        }
        RatVec dir(fan.d, Rat(0));
        dir[j] = -sign;
        sys.add(dir, Rat(-1), false);  // sign * w_j >= 1
        if (sys.feasible())
          throw NonProperConfiguration(
              "representative polyhedron has a recession ray; fan is not proper");
      }
  }

  const PicardGroup* pic_;
  std::vector<std::pair<std::uint32_t, std::vector<long>>> homologies_;
  mutable std::vector<ForbiddenCone> cones_;
  mutable std::vector<std::vector<int>> cone_bounds_;
};

inline CohomologyTable cohomology(const PicardGroup& pic, const PicClass& L) {
  return CohomologyEngine(pic).cohomology(L);
}

inline bool is_acyclic(const PicardGroup& pic, const PicClass& L) {
  return CohomologyEngine(pic).is_acyclic(L);
}

inline std::vector<ForbiddenCone> forbidden_cones(const PicardGroup& pic) {
  return CohomologyEngine(pic).forbidden_cones();
}

inline bool is_strongly_acyclic(const PicardGroup& pic, const RatVec& x) {
  return CohomologyEngine(pic).is_strongly_acyclic(x);
}

inline bool is_strongly_acyclic(const PicardGroup& pic, const PicClass& L) {
  return CohomologyEngine(pic).is_strongly_acyclic(pic.real_of(L));
}

}  // namespace torex
