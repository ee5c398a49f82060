#pragma once

// Dense exact-rational linear algebra: RREF, solving, nullspaces, the
// Moore–Penrose pseudo-inverse via full-rank factorization, and unnormalized
// Gram–Schmidt.  Sizes here are fiber dimensions (binomial(n,k) at most), so
// dense Gaussian elimination is entirely adequate.

#include <optional>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(int rows, int cols)
      : rows_(rows), cols_(cols), a_(rows, std::vector<Rat>(cols, Rat(0))) {}

  static RatMat identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& operator()(int i, int j) { return a_[i][j]; }
  const Rat& operator()(int i, int j) const { return a_[i][j]; }

  RatMat transpose() const {
    RatMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = a_[i][j];
    return t;
  }

  friend RatMat operator*(const RatMat& x, const RatMat& y) {
    if (x.cols_ != y.rows_) throw InvalidInput("matrix product shape mismatch");
    RatMat r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  friend RatMat operator+(const RatMat& x, const RatMat& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw InvalidInput("matrix sum shape mismatch");
    RatMat r = x;
    for (int i = 0; i < x.rows_; ++i)
      for (int j = 0; j < x.cols_; ++j) r(i, j) += y(i, j);
    return r;
  }

  friend RatMat operator-(const RatMat& x, const RatMat& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw InvalidInput("matrix difference shape mismatch");
    RatMat r = x;
    for (int i = 0; i < x.rows_; ++i)
      for (int j = 0; j < x.cols_; ++j) r(i, j) -= y(i, j);
    return r;
  }

  std::vector<Rat> apply(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != cols_)
      throw InvalidInput("matrix apply shape mismatch");
    std::vector<Rat> r(rows_, Rat(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (a_[i][j] != 0) r[i] += a_[i][j] * v[j];
    return r;
  }

  bool operator==(const RatMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  bool is_zero() const {
    for (auto& row : a_)
      for (auto& x : row)
        if (x != 0) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<std::vector<Rat>> a_;
};

struct Rref {
  RatMat mat;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

inline Rref rref(RatMat m) {
  Rref out;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Rat inv = Rat(1) / m(r, c);
    for (int j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rat f = m(i, c);
      for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.mat = std::move(m);
  return out;
}

// Columns spanning ker(m).
inline std::vector<std::vector<Rat>> nullspace(const RatMat& m) {
  Rref r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : r.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    std::vector<Rat> v(m.cols(), Rat(0));
    v[c] = 1;
    for (int i = 0; i < r.rank(); ++i) v[r.pivot_cols[i]] = -r.mat(i, c);
    basis.push_back(std::move(v));
  }
  return basis;
}

// One solution of m x = b, or nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve(const RatMat& m,
                                             const std::vector<Rat>& b) {
  if (static_cast<int>(b.size()) != m.rows())
    throw InvalidInput("solve shape mismatch");
  RatMat aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  Rref r = rref(aug);
  for (int c : r.pivot_cols)
    if (c == m.cols()) return std::nullopt;
  std::vector<Rat> x(m.cols(), Rat(0));
  for (int i = 0; i < r.rank(); ++i) x[r.pivot_cols[i]] = r.mat(i, m.cols());
  return x;
}

// Inverse of a square nonsingular matrix.
inline RatMat inverse(const RatMat& m) {
  if (m.rows() != m.cols()) throw InvalidInput("inverse of non-square matrix");
  int n = m.rows();
  RatMat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  Rref r = rref(aug);
  if (r.rank() != n || r.pivot_cols.back() >= n)
    throw InvalidInput("inverse of singular matrix");
  RatMat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = r.mat(i, n + j);
  return inv;
}

// Moore–Penrose pseudo-inverse via full-rank factorization m = C F where C
// collects the pivot columns and F the RREF rows: m+ = F^T (F F^T)^-1
// (C^T C)^-1 C^T.  All four Penrose identities hold exactly.
inline RatMat pseudo_inverse(const RatMat& m) {
  Rref r = rref(m);
  int rank = r.rank();
  if (rank == 0) return RatMat(m.cols(), m.rows());
  RatMat c(m.rows(), rank), f(rank, m.cols());
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < m.rows(); ++i) c(i, j) = m(i, r.pivot_cols[j]);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < m.cols(); ++j) f(i, j) = r.mat(i, j);
  RatMat ct = c.transpose(), ft = f.transpose();
  return ft * inverse(f * ft) * inverse(ct * c) * ct;
}

// Orthogonal projector onto the column space of m (standard inner product).
inline RatMat column_space_projector(const RatMat& m) {
  return m * pseudo_inverse(m);
}

// Unnormalized Gram–Schmidt: returns orthogonal vectors spanning the same
// space (zero vectors dropped) plus their squared norms.
struct OrthoBasis {
  std::vector<std::vector<Rat>> vecs;
  std::vector<Rat> norm_sq;
};

inline OrthoBasis gram_schmidt(const std::vector<std::vector<Rat>>& in) {
  OrthoBasis out;
  for (auto v : in) {
    for (size_t j = 0; j < out.vecs.size(); ++j) {
      Rat dot = 0;
      for (size_t i = 0; i < v.size(); ++i) dot += v[i] * out.vecs[j][i];
      if (dot == 0) continue;
      Rat f = dot / out.norm_sq[j];
      for (size_t i = 0; i < v.size(); ++i) v[i] -= f * out.vecs[j][i];
    }
    Rat ns = 0;
    for (auto& x : v) ns += x * x;
    if (ns != 0) {
      out.vecs.push_back(std::move(v));
      out.norm_sq.push_back(ns);
    }
  }
  return out;
}

}  // namespace carnot
