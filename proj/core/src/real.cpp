#include "quasicomb/real.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace quasicomb {

Real::Real(const mpq_class& q) : exact_(true), q_(q), f_(0.0) {
  q_.canonicalize();
  f_ = q_.get_d();
}

Real Real::rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return Real(mpq_class(num, den));
}

Real Real::numeric(double v) {
  Real r;
  r.exact_ = false;
  r.q_ = 0;
  r.f_ = v;
  return r;
}

Real Real::parse(std::string_view text) {
  std::string s(text);
  auto is_rational_text = [&] {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool digits = false;
    bool slash = false;
    for (; i < s.size(); ++i) {
      if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits = true;
      } else if (s[i] == '/' && !slash && digits) {
        slash = true;
        digits = false;
      } else {
        return false;
      }
    }
    return digits;
  };
  if (is_rational_text()) {
    if (s[0] == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    return Real(q);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number: " + s);
  return numeric(v);
}

const mpq_class& Real::rational() const {
  if (!exact_) throw std::logic_error("Real::rational() on a numeric value");
  return q_;
}

bool Real::is_integer() const {
  if (exact_) return q_.get_den() == 1;
  return std::isfinite(f_) && std::floor(f_) == f_;
}

int Real::sign() const {
  if (exact_) return sgn(q_);
  return (f_ > 0) - (f_ < 0);
}

Real Real::floor() const {
  if (exact_) {
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return Real(z);
  }
  return numeric(std::floor(f_));
}

Real Real::abs() const { return sign() < 0 ? -*this : *this; }

Real Real::operator-() const {
  if (exact_) return Real(mpq_class(-q_));
  return numeric(-f_);
}

Real& Real::operator+=(const Real& o) {
  if (exact_ && o.exact_) {
    q_ += o.q_;
    f_ = q_.get_d();
  } else {
    *this = numeric(f_ + o.f_);
  }
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (exact_ && o.exact_) {
    q_ -= o.q_;
    f_ = q_.get_d();
  } else {
    *this = numeric(f_ - o.f_);
  }
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (exact_ && o.exact_) {
    q_ *= o.q_;
    f_ = q_.get_d();
  } else {
    *this = numeric(f_ * o.f_);
  }
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (exact_ && o.exact_) {
    q_ /= o.q_;
    f_ = q_.get_d();
  } else {
    *this = numeric(f_ / o.f_);
  }
  return *this;
}

bool operator==(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) return a.q_ == b.q_;
  return a.f_ == b.f_;
}

std::strong_ordering operator<=>(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  if (a.f_ < b.f_) return std::strong_ordering::less;
  if (a.f_ > b.f_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Real::to_string() const {
  if (exact_) return q_.get_str();
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f_);
  return std::string(buf, ptr);
}

bool near(const Real& a, const Real& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  double x = a.to_double();
  double y = b.to_double();
  double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
  return std::fabs(x - y) <= tol * scale;
}

bool is_exact(std::span<const Real> v) {
  return std::all_of(v.begin(), v.end(), [](const Real& r) { return r.is_exact(); });
}

Vec vec_add(std::span<const Real> a, std::span<const Real> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  Vec out(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vec vec_sub(std::span<const Real> a, std::span<const Real> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  Vec out(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

Vec vec_scale(std::span<const Real> a, const Real& s) {
  Vec out(a.begin(), a.end());
  for (auto& x : out) x *= s;
  return out;
}

Vec vec_neg(std::span<const Real> a) {
  Vec out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(-x);
  return out;
}

Real dot(std::span<const Real> a, std::span<const Real> b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
  Real s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> to_doubles(std::span<const Real> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

Vec from_doubles(std::span<const double> v) {
  Vec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(Real::numeric(x));
  return out;
}

Vec zeros(int dim) { return Vec(static_cast<std::size_t>(dim)); }

bool near(std::span<const Real> a, std::span<const Real> b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], tol)) return false;
  return true;
}

bool lex_less(std::span<const Real> a, std::span<const Real> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string to_string(std::span<const Real> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

RMatrix RMatrix::identity(int n) {
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Real(1);
  return m;
}

RMatrix RMatrix::from_rows(const std::vector<std::vector<Real>>& rows) {
  if (rows.empty()) return {};
  RMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i) {
    if (static_cast<int>(rows[i].size()) != m.cols)
      throw std::invalid_argument("ragged matrix rows");
    for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vec RMatrix::column(int j) const {
  Vec c(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
  return c;
}

bool RMatrix::is_exact() const { return quasicomb::is_exact(data); }

RMatrix RMatrix::transpose() const {
  RMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vec RMatrix::apply(std::span<const Real> x) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("matrix/vector size mismatch");
  Vec out(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out[i] += (*this)(i, j) * x[j];
  return out;
}

RMatrix matmul(const RMatrix& a, const RMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul size mismatch");
  RMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a(i, k).is_zero()) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

namespace {

// Partial pivoting on magnitude; for exact input any nonzero pivot is exact anyway.
int pick_pivot(const RMatrix& a, int col) {
  int best = -1;
  double best_mag = -1.0;
  for (int r = col; r < a.rows; ++r) {
    if (a(r, col).is_zero()) continue;
    double mag = std::fabs(a(r, col).to_double());
    if (mag > best_mag) {
      best_mag = mag;
      best = r;
    }
  }
  return best;
}

}  // namespace

RMatrix inverse(const RMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse of non-square matrix");
  const int n = m.rows;
  RMatrix a = m;
  RMatrix inv = RMatrix::identity(n);
  for (int c = 0; c < n; ++c) {
    int p = pick_pivot(a, c);
    if (p < 0) throw std::domain_error("singular matrix");
    if (p != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(p, j), a(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    Real piv = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      Real f = a(r, c);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

Real determinant(const RMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
  const int n = m.rows;
  RMatrix a = m;
  Real det(1);
  for (int c = 0; c < n; ++c) {
    int p = pick_pivot(a, c);
    if (p < 0) return Real(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (a(r, c).is_zero()) continue;
      Real f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace quasicomb
