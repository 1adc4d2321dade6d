#pragma once

#include "torex/fan.hpp"
#include "torex/geometry.hpp"
#include "torex/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torex {

// A line bundle class O(sum r_i E_i) in canonical coordinates: a free part
// in Z^k and torsion residues reduced modulo the invariant factors.
struct PicClass {
  IntVec free;
  IntVec torsion;

  bool operator==(const PicClass& o) const { return free == o.free && torsion == o.torsion; }
  bool operator!=(const PicClass& o) const { return !(*this == o); }
  bool operator<(const PicClass& o) const {
    if (free != o.free) return free < o.free;
    return torsion < o.torsion;
  }
};

// Pic of the stack: the cokernel of the n x d matrix whose rows are the
// rays, together with the maps between divisor vectors and classes.
class PicardGroup {
 public:
  explicit PicardGroup(const StackyFan& fan) : fan_(fan) {
    FanDiagnostics diag = validate(fan);
    if (!diag.ok()) throw InvalidFan("picard_group: " + diag.problems.front());
    IntMatrix rays(fan.n(), fan.d);
    for (std::size_t i = 0; i < fan.n(); ++i)
      for (std::size_t j = 0; j < fan.d; ++j) rays(i, j) = fan.rays[i][j];
    group_ = cokernel(rays);
  }

  const StackyFan& fan() const { return fan_; }
  std::size_t n() const { return fan_.n(); }
  std::size_t rank() const { return group_.free_rank(); }
  const std::vector<Int>& torsion() const { return group_.torsion(); }
  Int torsion_order() const { return group_.torsion_order(); }

  PicClass class_of(const IntVec& r) const {
    GroupElem e = group_.project(r);
    return PicClass{e.free, e.torsion};
  }

  IntVec representative(const PicClass& c) const {
    return group_.section(GroupElem{c.free, c.torsion});
  }

  PicClass zero() const {
    return PicClass{IntVec(rank(), Int(0)), IntVec(torsion().size(), Int(0))};
  }

  PicClass basis_class(std::size_t i) const {
    IntVec e(n(), Int(0));
    e[i] = 1;
    return class_of(e);
  }

  PicClass add(const PicClass& a, const PicClass& b) const {
    PicClass c{vec_add(a.free, b.free), vec_add(a.torsion, b.torsion)};
    reduce(c);
    return c;
  }
  PicClass sub(const PicClass& a, const PicClass& b) const {
    PicClass c{vec_sub(a.free, b.free), vec_sub(a.torsion, b.torsion)};
    reduce(c);
    return c;
  }
  PicClass neg(const PicClass& a) const { return sub(zero(), a); }

  // The linear map Q^n -> Q^k on real points.
  RatMatrix real_projection() const { return group_.real_projection(); }

  // Real image of a class: torsion dies after tensoring with R.
  RatVec real_of(const PicClass& c) const { return to_rat(c.free); }

  // A functional given by values (r_1..r_n) on the divisors E_i descends to
  // the free coordinates whenever it kills the relations; this returns the
  // induced row vector on Q^k.
  RatVec functional_on_free(const RatVec& values) const {
    if (values.size() != n()) throw TorexError("functional_on_free: length mismatch");
    RatVec out(rank());
    for (std::size_t j = 0; j < rank(); ++j) {
      IntVec unit(rank(), Int(0));
      unit[j] = 1;
      IntVec rep = group_.section(GroupElem{unit, IntVec(torsion().size(), Int(0))});
      Rat s = 0;
      for (std::size_t i = 0; i < n(); ++i) s += values[i] * Rat(rep[i]);
      out[j] = s;
    }
    return out;
  }

  // All classes sharing a given free part, one per torsion value.
  std::vector<PicClass> torsion_fiber(const IntVec& free) const {
    std::vector<PicClass> out;
    IntVec t(torsion().size(), Int(0));
    while (true) {
      out.push_back(PicClass{free, t});
      std::size_t i = 0;
      for (; i < t.size(); ++i) {
        if (t[i] + 1 < torsion()[i]) {
          ++t[i];
          for (std::size_t j = 0; j < i; ++j) t[j] = 0;
          break;
        }
      }
      if (i == t.size()) break;
    }
    return out;
  }

 private:
  void reduce(PicClass& c) const {
    for (std::size_t i = 0; i < c.torsion.size(); ++i) {
      c.torsion[i] %= torsion()[i];
      if (c.torsion[i] < 0) c.torsion[i] += torsion()[i];
    }
  }

  StackyFan fan_;
  FGAbelianGroup group_;
};

inline PicardGroup picard_group(const StackyFan& fan) { return PicardGroup(fan); }

// K = -sum E_i.
inline PicClass canonical_class(const PicardGroup& pic) {
  return pic.class_of(IntVec(pic.n(), Int(-1)));
}

// Positive rationals r_i with sum 1 and sum r_i v_i = 0, chosen as the
// max-min solution of the feasibility polytope with lexicographic
// tie-breaking, so the result is deterministic and well-centered.
inline RatVec f_functional(const PicardGroup& pic) {
  const StackyFan& fan = pic.fan();
  std::size_t n = fan.n(), d = fan.d;
  std::size_t t_var = n;  // auxiliary variable: the minimum of the r_i
  lpdetail::System sys(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    RatVec a(n + 1, Rat(0));
    a[t_var] = 1;
    a[i] = -1;
    sys.add(a, Rat(0), false);  // t <= r_i
  }
  RatVec ones(n + 1, Rat(1));
  ones[t_var] = 0;
  sys.add_eq(ones, Rat(1));
  for (std::size_t j = 0; j < d; ++j) {
    RatVec a(n + 1, Rat(0));
    for (std::size_t i = 0; i < n; ++i) a[i] = Rat(fan.rays[i][j]);
    sys.add_eq(a, Rat(0));
  }
  auto top = sys.interval(t_var);
  if (top.empty || !top.hi || *top.hi <= 0)
    throw NoInteriorRelation("no positive relation among the rays");
  RatVec pinned(n + 1, Rat(0));
  pinned[t_var] = 1;
  sys.add_eq(pinned, *top.hi);
  RatVec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto iv = sys.interval(i);
    if (iv.empty || !iv.lo) throw NoInteriorRelation("f functional collapsed");
    r[i] = *iv.lo;
    RatVec a(n + 1, Rat(0));
    a[i] = 1;
    sys.add_eq(a, r[i]);
  }
  return r;
}

struct AlphaFunctional {
  IntVec alpha;             // primitive integer, first entry positive
  std::vector<int> plus;    // I_+ (alpha_i > 0)
  std::vector<int> minus;   // I_- (alpha_i < 0)
};

// The unique-up-to-scale relation with sum alpha_i = 0 and
// sum alpha_i v_i = 0 on a rank-two Fano fan; every entry is nonzero.
inline AlphaFunctional alpha_functional(const PicardGroup& pic) {
  if (pic.rank() != 2) throw NotRankTwo("alpha functional needs Picard rank two");
  const StackyFan& fan = pic.fan();
  std::size_t n = fan.n(), d = fan.d;
  RatMatrix m(d + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(0, i) = 1;
    for (std::size_t j = 0; j < d; ++j) m(j + 1, i) = Rat(fan.rays[i][j]);
  }
  RatMatrix kernel = nullspace(m);
  if (kernel.cols() != 1) throw NotRankTwo("relation space is not one-dimensional");
  IntVec alpha = primitive_integer(kernel.col(0));
  AlphaFunctional a;
  a.alpha = alpha;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] == 0)
      throw ZeroAlphaEntry("alpha vanishes on ray " + std::to_string(i) +
                           "; the polytope is not simplicial");
    (alpha[i] > 0 ? a.plus : a.minus).push_back(int(i));
  }
  if (a.plus.size() < 2 || a.minus.size() < 2)
    throw InvalidFan("alpha sign classes must have at least two rays each");
  return a;
}

// Quotient of Pic_R by the span of the canonical class, with a chosen
// section. Coordinates: drop the pivot coordinate of K.
struct PicHat {
  std::size_t k = 0;        // rank of Pic
  std::size_t pivot = 0;    // dropped coordinate
  RatMatrix proj;           // (k-1) x k, kernel spanned by K
  RatMatrix lift;           // k x (k-1) section, proj * lift = id

  RatVec operator()(const RatVec& x) const { return proj.apply(x); }
};

inline PicHat pic_hat(const PicardGroup& pic) {
  std::size_t k = pic.rank();
  if (k < 2) throw RankTooLow("Pic-hat needs rank at least two");
  RatVec kappa = pic.real_of(canonical_class(pic));
  std::size_t pivot = k;
  for (std::size_t j = 0; j < k; ++j)
    if (kappa[j] != 0) { pivot = j; break; }
  if (pivot == k) throw RankTooLow("canonical class vanishes in Pic_R");
  PicHat hat;
  hat.k = k;
  hat.pivot = pivot;
  hat.proj = RatMatrix(k - 1, k);
  hat.lift = RatMatrix(k, k - 1);
  std::size_t row = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == pivot) continue;
    hat.proj(row, j) = 1;
    hat.proj(row, pivot) = -kappa[j] / kappa[pivot];
    hat.lift(j, row) = 1;
    ++row;
  }
  return hat;
}

inline RatVec hat_of(const PicHat& hat, const RatVec& x) { return hat.proj.apply(x); }

inline RatVec hat_of(const PicHat& hat, const PicardGroup& pic, const PicClass& c) {
  return hat.proj.apply(pic.real_of(c));
}

}  // namespace torex
