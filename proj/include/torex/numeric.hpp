#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace torex {

// Exact arithmetic only: every quantity in the library is an arbitrary
// precision integer or rational. No floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

struct TorexError : std::runtime_error {
  explicit TorexError(const std::string& what) : std::runtime_error(what) {}
};

#define TOREX_DEFINE_ERROR(name)                                          \
  struct name : TorexError {                                              \
    explicit name(const std::string& what) : TorexError(what) {}          \
  }

TOREX_DEFINE_ERROR(UnboundedPolyhedron);
TOREX_DEFINE_ERROR(DegenerateZonotope);
TOREX_DEFINE_ERROR(InvalidFan);
TOREX_DEFINE_ERROR(NotSimplicial);
TOREX_DEFINE_ERROR(OriginNotInterior);
TOREX_DEFINE_ERROR(NotFano);
TOREX_DEFINE_ERROR(NotRankTwo);
TOREX_DEFINE_ERROR(ZeroAlphaEntry);
TOREX_DEFINE_ERROR(RankTooLow);
TOREX_DEFINE_ERROR(NoInteriorRelation);
TOREX_DEFINE_ERROR(TooManyRays);
TOREX_DEFINE_ERROR(NonProperConfiguration);
TOREX_DEFINE_ERROR(NotDimTwo);
TOREX_DEFINE_ERROR(PhiNotConvex);
TOREX_DEFINE_ERROR(KindMismatch);
TOREX_DEFINE_ERROR(GenericityFailure);
TOREX_DEFINE_ERROR(NonGenericShift);
TOREX_DEFINE_ERROR(UnsupportedShape);
TOREX_DEFINE_ERROR(NonIntegralCount);
TOREX_DEFINE_ERROR(HomCycle);
TOREX_DEFINE_ERROR(UnsupportedDimension);

#undef TOREX_DEFINE_ERROR

inline Int rat_floor(const Rat& q) {
  Int n = numerator(q), d = denominator(q);  // d > 0 by invariant
  Int t = n / d;
  if (t * d > n) --t;
  return t;
}

inline Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

inline Rat to_rat(const Int& n) { return Rat(n); }

inline RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

template <typename T>
std::vector<T> vec_add(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw TorexError("vector size mismatch");
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <typename T>
std::vector<T> vec_sub(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw TorexError("vector size mismatch");
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <typename T>
std::vector<T> vec_neg(const std::vector<T>& a) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

template <typename T, typename S>
std::vector<T> vec_scale(const S& c, const std::vector<T>& a) {
  std::vector<T> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = T(c) * a[i];
  return r;
}

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw TorexError("vector size mismatch");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const RatVec& a, const IntVec& b) { return dot(a, to_rat(b)); }

template <typename T>
bool is_zero_vec(const std::vector<T>& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

// Clears denominators and divides by the content, so the result is an
// integer vector with gcd 1. The sign is fixed to make the first nonzero
// entry positive; a zero vector is returned unchanged.
inline IntVec primitive_integer(const RatVec& v) {
  Int lcm_den = 1;
  for (const auto& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(q));
  IntVec w(v.size());
  Int g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = numerator(v[i]) * (lcm_den / denominator(v[i]));
    g = boost::multiprecision::gcd(g, w[i]);
  }
  if (g == 0) return w;
  Int sign = 0;
  for (const auto& x : w)
    if (x != 0) { sign = (x > 0) ? 1 : -1; break; }
  g *= sign;
  for (auto& x : w) x /= g;
  return w;
}

inline std::string rat_string(const Rat& q) {
  std::string s = numerator(q).str();
  if (denominator(q) != 1) s += "/" + denominator(q).str();
  return s;
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int num(s.substr(0, slash)), den(s.substr(slash + 1));
  if (den == 0) throw TorexError("rational with zero denominator: " + s);
  return Rat(num, den);
}

}  // namespace torex
