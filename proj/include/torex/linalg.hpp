#pragma once

#include "torex/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace torex {

// Dense row-major matrix over an exact scalar type.
template <typename T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw TorexError("ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw TorexError("matmul shape mismatch");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw TorexError("matvec shape mismatch");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

inline RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

// Fraction-free (Bareiss) determinant of a square integer matrix.
inline Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw TorexError("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1, sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// U*M*V = D with U, V unimodular and D diagonal whose nonzero entries
// d_1 | d_2 | ... are the invariant factors. Pivot choice is the minimal
// nonzero absolute value (row-major tie break), which keeps entry growth
// tame at the matrix sizes this library sees.
struct SnfResult {
  IntMatrix u, u_inv;    // rows x rows
  IntMatrix v, v_inv;    // cols x cols
  IntMatrix d;           // rows x cols, diagonal
  std::vector<Int> invariant_factors;
};

namespace detail {

// g = gcd(a,b) together with s*a + t*b = g.
inline void extended_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
  Int old_r = a, r = b, old_s = 1, s_ = 0, old_t = 0, t_ = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r; old_r = r; r = tmp;
    tmp = old_s - q * s_; old_s = s_; s_ = tmp;
    tmp = old_t - q * t_; old_t = t_; t_ = tmp;
  }
  if (old_r < 0) { old_r = -old_r; old_s = -old_s; old_t = -old_t; }
  g = old_r; s = old_s; t = old_t;
}

struct SnfOps {
  IntMatrix& a;
  IntMatrix& u;
  IntMatrix& u_inv;
  IntMatrix& v;
  IntMatrix& v_inv;

  void row_sub(std::size_t i, std::size_t j, const Int& q) {  // row_i -= q*row_j
    for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) -= q * a(j, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(i, k) -= q * u(j, k);
    for (std::size_t k = 0; k < u_inv.rows(); ++k) u_inv(k, j) += q * u_inv(k, i);
  }
  void col_sub(std::size_t i, std::size_t j, const Int& q) {  // col_i -= q*col_j
    for (std::size_t k = 0; k < a.rows(); ++k) a(k, i) -= q * a(k, j);
    for (std::size_t k = 0; k < v.rows(); ++k) v(k, i) -= q * v(k, j);
    for (std::size_t k = 0; k < v_inv.cols(); ++k) v_inv(j, k) += q * v_inv(i, k);
  }
  void row_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < u.cols(); ++k) std::swap(u(i, k), u(j, k));
    for (std::size_t k = 0; k < u_inv.rows(); ++k) std::swap(u_inv(k, i), u_inv(k, j));
  }
  void col_swap(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < a.rows(); ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < v.rows(); ++k) std::swap(v(k, i), v(k, j));
    for (std::size_t k = 0; k < v_inv.cols(); ++k) std::swap(v_inv(i, k), v_inv(j, k));
  }
  void row_neg(std::size_t i) {
    for (std::size_t k = 0; k < a.cols(); ++k) a(i, k) = -a(i, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(i, k) = -u(i, k);
    for (std::size_t k = 0; k < u_inv.rows(); ++k) u_inv(k, i) = -u_inv(k, i);
  }

  // [row_i; row_j] <- X [row_i; row_j] with det(X) = 1; the inverse
  // transform is applied to the columns of u_inv.
  void row_transform(std::size_t i, std::size_t j, const Int x[2][2]) {
    auto apply_rows = [&](IntMatrix& m) {
      for (std::size_t k = 0; k < m.cols(); ++k) {
        Int a0 = m(i, k), a1 = m(j, k);
        m(i, k) = x[0][0] * a0 + x[0][1] * a1;
        m(j, k) = x[1][0] * a0 + x[1][1] * a1;
      }
    };
    apply_rows(a);
    apply_rows(u);
    for (std::size_t k = 0; k < u_inv.rows(); ++k) {  // cols scaled by X^{-1} on the right
      Int c0 = u_inv(k, i), c1 = u_inv(k, j);
      u_inv(k, i) = c0 * x[1][1] - c1 * x[1][0];
      u_inv(k, j) = -c0 * x[0][1] + c1 * x[0][0];
    }
  }

  // [col_i, col_j] <- [col_i, col_j] Y with det(Y) = 1.
  void col_transform(std::size_t i, std::size_t j, const Int y[2][2]) {
    auto apply_cols = [&](IntMatrix& m) {
      for (std::size_t k = 0; k < m.rows(); ++k) {
        Int a0 = m(k, i), a1 = m(k, j);
        m(k, i) = a0 * y[0][0] + a1 * y[1][0];
        m(k, j) = a0 * y[0][1] + a1 * y[1][1];
      }
    };
    apply_cols(a);
    apply_cols(v);
    for (std::size_t k = 0; k < v_inv.cols(); ++k) {  // rows scaled by Y^{-1} on the left
      Int r0 = v_inv(i, k), r1 = v_inv(j, k);
      v_inv(i, k) = y[1][1] * r0 - y[0][1] * r1;
      v_inv(j, k) = -y[1][0] * r0 + y[0][0] * r1;
    }
  }
};

}  // namespace detail

inline SnfResult smith_normal_form(const IntMatrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  SnfResult res;
  res.u = IntMatrix::identity(rows);
  res.u_inv = IntMatrix::identity(rows);
  res.v = IntMatrix::identity(cols);
  res.v_inv = IntMatrix::identity(cols);
  IntMatrix a = m;
  detail::SnfOps ops{a, res.u, res.u_inv, res.v, res.v_inv};

  auto diagonalize = [&]() {
    std::size_t t = 0;
    while (t < rows && t < cols) {
      // minimal |nonzero| pivot in the trailing submatrix
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a(i, j) != 0 &&
              (pi == rows || abs(a(i, j)) < abs(a(pi, pj))))
            pi = i, pj = j;
      if (pi == rows) break;  // trailing submatrix is zero
      ops.row_swap(t, pi);
      ops.col_swap(t, pj);
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i) {
          if (a(i, t) == 0) continue;
          Int q = a(i, t) / a(t, t);
          ops.row_sub(i, t, q);
          if (a(i, t) != 0) {  // remainder smaller than pivot; promote it
            ops.row_swap(t, i);
            dirty = true;
          }
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (a(t, j) == 0) continue;
          Int q = a(t, j) / a(t, t);
          ops.col_sub(j, t, q);
          if (a(t, j) != 0) {
            ops.col_swap(t, j);
            dirty = true;
          }
        }
      }
      if (a(t, t) < 0) ops.row_neg(t);
      ++t;
    }
    return t;  // rank
  };

  std::size_t r = diagonalize();
  // Enforce d_i | d_{i+1} by replacing each violating pair with
  // (gcd, lcm) through a determinant-one 2x2 transform on each side.
  // Every fix strictly shrinks a prefix product, so this terminates.
  bool chain_dirty = true;
  while (chain_dirty) {
    chain_dirty = false;
    for (std::size_t i = 0; i + 1 < r; ++i) {
      Int di = a(i, i), dj = a(i + 1, i + 1);
      if (dj % di == 0) continue;
      Int g, s, t;
      detail::extended_gcd(di, dj, g, s, t);
      Int x[2][2] = {{s, t}, {-dj / g, di / g}};
      Int y[2][2] = {{1, -t * dj / g}, {1, s * di / g}};
      ops.row_transform(i, i + 1, x);
      ops.col_transform(i, i + 1, y);
      if (a(i, i) < 0) ops.row_neg(i);
      if (a(i + 1, i + 1) < 0) ops.row_neg(i + 1);
      chain_dirty = true;
    }
  }

  res.d = a;
  for (std::size_t i = 0; i < r; ++i) res.invariant_factors.push_back(a(i, i));
  return res;
}

// Canonical coordinates of an element of a finitely generated abelian group:
// a free part in Z^k and torsion residues reduced modulo the invariant factors.
struct GroupElem {
  IntVec free;
  IntVec torsion;

  bool operator==(const GroupElem& o) const { return free == o.free && torsion == o.torsion; }
  bool operator<(const GroupElem& o) const {
    if (free != o.free) return free < o.free;
    return torsion < o.torsion;
  }
};

// Cokernel Z^n / (column span of M), presented by canonical coordinates.
// project kills exactly the integer column span and is surjective;
// section picks a representative with project(section(x)) == x.
class FGAbelianGroup {
 public:
  FGAbelianGroup() = default;

  explicit FGAbelianGroup(const IntMatrix& m) : ambient_(m.rows()) {
    SnfResult snf = smith_normal_form(m);
    std::size_t r = snf.invariant_factors.size();
    free_rank_ = ambient_ - r;
    for (std::size_t i = 0; i < r; ++i)
      if (snf.invariant_factors[i] > 1) {
        torsion_.push_back(snf.invariant_factors[i]);
        torsion_rows_.push_back(i);
      }
    u_ = snf.u;
    u_inv_ = snf.u_inv;
    rank_ = r;
    // canonical sign for the free functionals: first nonzero entry positive
    for (std::size_t i = r; i < ambient_; ++i) {
      for (std::size_t j = 0; j < ambient_; ++j) {
        if (u_(i, j) == 0) continue;
        if (u_(i, j) < 0) {
          for (std::size_t k = 0; k < ambient_; ++k) {
            u_(i, k) = -u_(i, k);
            u_inv_(k, i) = -u_inv_(k, i);
          }
        }
        break;
      }
    }
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  Int torsion_order() const {
    Int o = 1;
    for (const auto& d : torsion_) o *= d;
    return o;
  }

  GroupElem project(const IntVec& x) const {
    if (x.size() != ambient_) throw TorexError("project: wrong ambient dimension");
    IntVec y = u_.apply(x);
    GroupElem e;
    e.free.assign(y.begin() + rank_, y.end());
    for (std::size_t t = 0; t < torsion_.size(); ++t) {
      Int m = y[torsion_rows_[t]] % torsion_[t];
      if (m < 0) m += torsion_[t];
      e.torsion.push_back(m);
    }
    return e;
  }

  IntVec section(const GroupElem& e) const {
    if (e.free.size() != free_rank_ || e.torsion.size() != torsion_.size())
      throw TorexError("section: wrong coordinate shape");
    IntVec y(ambient_, 0);
    for (std::size_t t = 0; t < torsion_.size(); ++t) y[torsion_rows_[t]] = e.torsion[t];
    for (std::size_t i = 0; i < free_rank_; ++i) y[rank_ + i] = e.free[i];
    return u_inv_.apply(y);
  }

  // The free functionals as a rational (k x n) matrix: the linear map
  // Q^n -> Q^k induced on the real points of the group.
  RatMatrix real_projection() const {
    RatMatrix p(free_rank_, ambient_);
    for (std::size_t i = 0; i < free_rank_; ++i)
      for (std::size_t j = 0; j < ambient_; ++j) p(i, j) = Rat(u_(rank_ + i, j));
    return p;
  }

 private:
  std::size_t ambient_ = 0;
  std::size_t free_rank_ = 0;
  std::size_t rank_ = 0;
  std::vector<Int> torsion_;
  std::vector<std::size_t> torsion_rows_;  // rows of u_ giving torsion residues
  IntMatrix u_, u_inv_;
};

inline FGAbelianGroup cokernel(const IntMatrix& m) { return FGAbelianGroup(m); }

// Exact Gaussian elimination; returns the solution of A x = b with free
// variables pinned to zero under the leftmost-pivot rule, or nothing when
// the system is inconsistent.
inline std::optional<RatVec> solve_rational(const RatMatrix& a_in, const RatVec& b_in) {
  if (b_in.size() != a_in.rows()) throw TorexError("solve: shape mismatch");
  RatMatrix a = a_in;
  RatVec b = b_in;
  std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < cols && rank < rows; ++j) {
    std::size_t p = rank;
    while (p < rows && a(p, j) == 0) ++p;
    if (p == rows) continue;
    if (p != rank) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(rank, k), a(p, k));
      std::swap(b[rank], b[p]);
    }
    Rat inv = a(rank, j);
    for (std::size_t k = j; k < cols; ++k) a(rank, k) /= inv;
    b[rank] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a(i, j) == 0) continue;
      Rat f = a(i, j);
      for (std::size_t k = j; k < cols; ++k) a(i, k) -= f * a(rank, k);
      b[i] -= f * b[rank];
    }
    pivot_col.push_back(j);
    ++rank;
  }
  for (std::size_t i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVec x(cols, Rat(0));
  for (std::size_t i = 0; i < rank; ++i) x[pivot_col[i]] = b[i];
  return x;
}

inline std::size_t rational_rank(const RatMatrix& m_in) {
  RatMatrix a = m_in;
  std::size_t rows = a.rows(), cols = a.cols(), rank = 0;
  for (std::size_t j = 0; j < cols && rank < rows; ++j) {
    std::size_t p = rank;
    while (p < rows && a(p, j) == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(rank, k), a(p, k));
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a(i, j) == 0) continue;
      Rat f = a(i, j) / a(rank, j);
      for (std::size_t k = j; k < cols; ++k) a(i, k) -= f * a(rank, k);
    }
    ++rank;
  }
  return rank;
}

inline std::size_t rational_rank(const IntMatrix& m) { return rational_rank(to_rat(m)); }

// Basis of {x : M x = 0}, one column per free variable, with the free
// variable set to 1 and the other free variables to 0.
inline RatMatrix nullspace(const RatMatrix& m_in) {
  RatMatrix a = m_in;
  std::size_t rows = a.rows(), cols = a.cols(), rank = 0;
  std::vector<std::size_t> pivot_of_col(cols, SIZE_MAX);
  for (std::size_t j = 0; j < cols && rank < rows; ++j) {
    std::size_t p = rank;
    while (p < rows && a(p, j) == 0) ++p;
    if (p == rows) continue;
    if (p != rank)
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(rank, k), a(p, k));
    Rat inv = a(rank, j);
    for (std::size_t k = j; k < cols; ++k) a(rank, k) /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a(i, j) == 0) continue;
      Rat f = a(i, j);
      for (std::size_t k = j; k < cols; ++k) a(i, k) -= f * a(rank, k);
    }
    pivot_of_col[j] = rank;
    ++rank;
  }
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < cols; ++j)
    if (pivot_of_col[j] == SIZE_MAX) free_cols.push_back(j);
  RatMatrix basis(cols, free_cols.size());
  for (std::size_t t = 0; t < free_cols.size(); ++t) {
    std::size_t f = free_cols[t];
    basis(f, t) = 1;
    for (std::size_t j = 0; j < cols; ++j) {
      if (pivot_of_col[j] == SIZE_MAX) continue;
      basis(j, t) = -a(pivot_of_col[j], f);
    }
  }
  return basis;
}

}  // namespace torex
