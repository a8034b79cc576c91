#include "quasicomb/intmat.hpp"

#include <stdexcept>
#include <utility>

namespace quasicomb {

IMatrix IMatrix::identity(int n) {
  IMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

namespace {

// (col_a, col_b) <- (p*col_a + q*col_b, r*col_a + s*col_b), determinant ps - qr = +-1.
void combine_columns(IMatrix& m, int a, int b, const mpz_class& p, const mpz_class& q,
                     const mpz_class& r, const mpz_class& s) {
  for (int i = 0; i < m.rows; ++i) {
    mpz_class x = m(i, a);
    mpz_class y = m(i, b);
    m(i, a) = p * x + q * y;
    m(i, b) = r * x + s * y;
  }
}

void swap_columns(IMatrix& m, int a, int b) {
  for (int i = 0; i < m.rows; ++i) std::swap(m(i, a), m(i, b));
}

void negate_column(IMatrix& m, int a) {
  for (int i = 0; i < m.rows; ++i) m(i, a) = -m(i, a);
}

// col_a -= f * col_b
void axpy_column(IMatrix& m, int a, int b, const mpz_class& f) {
  for (int i = 0; i < m.rows; ++i) m(i, a) -= f * m(i, b);
}

mpz_class floor_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

}  // namespace

ColumnHnf column_hnf(const IMatrix& input) {
  IMatrix a = input;
  IMatrix u = IMatrix::identity(a.cols);
  std::vector<int> pivots;
  int col = 0;
  for (int i = 0; i < a.rows && col < a.cols; ++i) {
    for (int j = col + 1; j < a.cols; ++j) {
      if (a(i, j) == 0) continue;
      if (a(i, col) == 0) {
        swap_columns(a, col, j);
        swap_columns(u, col, j);
        continue;
      }
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a(i, col).get_mpz_t(),
                 a(i, j).get_mpz_t());
      mpz_class x = a(i, col) / g;
      mpz_class y = a(i, j) / g;
      // [s -y; t x] has determinant s*x + t*y = 1.
      combine_columns(a, col, j, s, t, -y, x);
      combine_columns(u, col, j, s, t, -y, x);
    }
    if (a(i, col) == 0) continue;
    if (a(i, col) < 0) {
      negate_column(a, col);
      negate_column(u, col);
    }
    for (int j = 0; j < col; ++j) {
      mpz_class f = floor_div(a(i, j), a(i, col));
      if (f != 0) {
        axpy_column(a, j, col, f);
        axpy_column(u, j, col, f);
      }
    }
    pivots.push_back(i);
    ++col;
  }
  ColumnHnf out;
  out.basis = IMatrix(a.rows, col);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < col; ++j) out.basis(i, j) = a(i, j);
  out.pivot_rows = std::move(pivots);
  out.transform = std::move(u);
  return out;
}

IMatrix integer_kernel(const IMatrix& a) {
  ColumnHnf h = column_hnf(a);
  const int r = h.rank();
  IMatrix k(a.cols, a.cols - r);
  for (int i = 0; i < a.cols; ++i)
    for (int j = r; j < a.cols; ++j) k(i, j - r) = h.transform(i, j);
  return k;
}

std::optional<std::vector<mpz_class>> solve_echelon(const ColumnHnf& h,
                                                    std::span<const mpz_class> b) {
  const IMatrix& m = h.basis;
  if (static_cast<int>(b.size()) != m.rows) throw std::invalid_argument("solve_echelon size");
  const int r = h.rank();
  std::vector<mpz_class> x(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    int row = h.pivot_rows[j];
    mpz_class rest = b[row];
    for (int c = 0; c < j; ++c) rest -= m(row, c) * x[c];
    if (!mpz_divisible_p(rest.get_mpz_t(), m(row, j).get_mpz_t())) return std::nullopt;
    mpz_divexact(x[j].get_mpz_t(), rest.get_mpz_t(), m(row, j).get_mpz_t());
  }
  for (int i = 0; i < m.rows; ++i) {
    mpz_class s = 0;
    for (int c = 0; c < r; ++c) s += m(i, c) * x[c];
    if (s != b[i]) return std::nullopt;
  }
  return x;
}

IMatrix imatmul(const IMatrix& a, const IMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("imatmul size mismatch");
  IMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

mpz_class idet(const IMatrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("idet of non-square matrix");
  // Fraction-free Bareiss elimination.
  IMatrix m = a;
  const int n = m.rows;
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace quasicomb
