#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library except to convert between value types.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "quasicomb/lattice.hpp"

namespace oracle {

using QMat = std::vector<std::vector<mpq_class>>;  // row-major
using QVec = std::vector<mpq_class>;

inline QMat to_qmat(const quasicomb::RMatrix& m) {
  QMat out(m.rows, QVec(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[i][j] = m(i, j).rational();
  return out;
}

inline quasicomb::RMatrix to_rmatrix(const QMat& m) {
  quasicomb::RMatrix out(static_cast<int>(m.size()), static_cast<int>(m[0].size()));
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out(i, j) = quasicomb::Real(m[i][j]);
  return out;
}

inline quasicomb::Vec to_vec(const QVec& v) {
  quasicomb::Vec out;
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

inline quasicomb::Vec int_vec(const std::vector<long>& v) {
  quasicomb::Vec out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Solves A x = b for square A by Gauss-Jordan over Q; nullopt if singular.
inline std::optional<QVec> solve(QMat a, QVec b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      mpq_class f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

inline mpq_class det(QMat a) {
  const std::size_t n = a.size();
  mpq_class d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      mpq_class f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

// p lies in the lattice spanned by the columns of the square basis b.
inline bool in_lattice(const QMat& b, const QVec& p) {
  auto x = solve(b, p);
  if (!x) return false;
  for (const auto& v : *x)
    if (v.get_den() != 1) return false;
  return true;
}

// All points of (1/den) Z^d inside [-half, half]^d, in lexicographic order.
inline void for_each_grid_point(int d, long half, long den, const std::function<void(const QVec&)>& fn) {
  std::vector<long> idx(d, -half * den);
  QVec p(d);
  while (true) {
    for (int i = 0; i < d; ++i) p[i] = mpq_class(idx[i], den);
    for (auto& x : p) x.canonicalize();
    fn(p);
    int pos = d - 1;
    while (pos >= 0 && ++idx[pos] > half * den) idx[pos--] = -half * den;
    if (pos < 0) return;
  }
}

// Random invertible d x d matrix with entries num/den, num in [lo, hi].
inline QMat random_basis(std::mt19937_64& rng, int d, int lo, int hi, int max_den = 1) {
  std::uniform_int_distribution<int> num(lo, hi);
  std::uniform_int_distribution<int> den(1, max_den);
  while (true) {
    QMat m(d, QVec(d));
    for (auto& row : m)
      for (auto& x : row) {
        x = mpq_class(num(rng), den(rng));
        x.canonicalize();
      }
    if (det(m) != 0) return m;
  }
}

inline double gaussian_lattice_sum(const QMat& basis, double a, const std::vector<double>& c,
                                   int reach) {
  // Σ over integer coordinates in [-reach, reach]^d of e^{-πa|Bn - c|²}.
  const int d = static_cast<int>(basis.size());
  std::vector<int> n(d, -reach);
  double s = 0;
  while (true) {
    double r2 = 0;
    for (int i = 0; i < d; ++i) {
      double x = -c[i];
      for (int j = 0; j < d; ++j) x += basis[i][j].get_d() * n[j];
      r2 += x * x;
    }
    s += std::exp(-std::numbers::pi * a * r2);
    int pos = 0;
    while (pos < d && ++n[pos] > reach) n[pos++] = -reach;
    if (pos == d) return s;
  }
}

}  // namespace oracle

namespace oracle {

struct SyntheticCoset {
  QMat basis;  // integer, square
  QVec offset;
};

// Random integer-lattice cosets with small determinants and the union of
// their points in [-half, half]^d, found by scanning the integer grid.
inline std::vector<SyntheticCoset> random_cosets(std::mt19937_64& rng, int d, int count) {
  std::vector<SyntheticCoset> out;
  std::uniform_int_distribution<int> diag(1, 4), off(0, 3), shear(0, 2);
  for (int j = 0; j < count; ++j) {
    SyntheticCoset c;
    c.basis = QMat(d, QVec(d));
    for (int i = 0; i < d; ++i) {
      c.basis[i][i] = diag(rng);
      for (int k = 0; k < i; ++k) c.basis[i][k] = shear(rng);
    }
    c.offset = QVec(d);
    for (auto& x : c.offset) x = off(rng);
    out.push_back(std::move(c));
  }
  return out;
}

inline bool in_union(const std::vector<SyntheticCoset>& cs, const QVec& p) {
  for (const auto& c : cs) {
    QVec q = p;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= c.offset[i];
    if (in_lattice(c.basis, q)) return true;
  }
  return false;
}

inline std::vector<std::vector<double>> union_points(const std::vector<SyntheticCoset>& cs, int d,
                                                     long half) {
  std::vector<std::vector<double>> pts;
  for_each_grid_point(d, half, 1, [&](const QVec& p) {
    if (!in_union(cs, p)) return;
    std::vector<double> x;
    for (const auto& v : p) x.push_back(v.get_d());
    pts.push_back(std::move(x));
  });
  return pts;
}

}  // namespace oracle
