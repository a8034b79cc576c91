#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace quasicomb {

/// A real number that is either an exact rational or a double.
///
/// Arithmetic between two exact values stays exact; anything touching a
/// double degrades to a double. This is what lets one data model hold both
/// rational lattices and the irrational frequencies (1/sqrt(5), sqrt(2), ...)
/// that show up in practice.
class Real {
 public:
  Real() : exact_(true), q_(0), f_(0.0) {}
  Real(int v) : exact_(true), q_(v), f_(v) {}
  Real(long v) : exact_(true), q_(v), f_(static_cast<double>(v)) {}
  explicit Real(const mpq_class& q);
  explicit Real(const mpz_class& z) : Real(mpq_class(z)) {}

  static Real rational(long num, long den);
  static Real numeric(double v);
  /// Parses "p/q", "p", or a decimal/float literal (the latter becomes numeric).
  static Real parse(std::string_view text);

  bool is_exact() const { return exact_; }
  /// Throws std::logic_error when the value is numeric.
  const mpq_class& rational() const;
  double to_double() const { return f_; }

  bool is_zero() const { return exact_ ? sgn(q_) == 0 : f_ == 0.0; }
  bool is_integer() const;
  int sign() const;

  Real floor() const;
  Real abs() const;

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  /// Exact comparison when both sides are exact, double comparison otherwise.
  friend bool operator==(const Real& a, const Real& b);
  friend std::strong_ordering operator<=>(const Real& a, const Real& b);

  /// "p/q" (or "p") for exact values, shortest round-trip decimal otherwise.
  std::string to_string() const;

 private:
  bool exact_;
  mpq_class q_;
  double f_;
};

/// |a - b| <= tol * max(1, |a|, |b|); exact equality when both are exact.
bool near(const Real& a, const Real& b, double tol = 1e-12);

using Vec = std::vector<Real>;
/// A point of R^d. Exact when every coordinate is exact.
using Point = Vec;

bool is_exact(std::span<const Real> v);
Vec vec_add(std::span<const Real> a, std::span<const Real> b);
Vec vec_sub(std::span<const Real> a, std::span<const Real> b);
Vec vec_scale(std::span<const Real> a, const Real& s);
Vec vec_neg(std::span<const Real> a);
Real dot(std::span<const Real> a, std::span<const Real> b);
std::vector<double> to_doubles(std::span<const Real> v);
Vec from_doubles(std::span<const double> v);
Vec zeros(int dim);
bool near(std::span<const Real> a, std::span<const Real> b, double tol = 1e-12);
/// Lexicographic order using Real's ordering.
bool lex_less(std::span<const Real> a, std::span<const Real> b);
std::string to_string(std::span<const Real> v);

/// Dense row-major matrix of Reals.
struct RMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Real> data;

  RMatrix() = default;
  RMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
  static RMatrix identity(int n);
  /// Builds a matrix from rows; every row must have the same length.
  static RMatrix from_rows(const std::vector<std::vector<Real>>& rows);

  Real& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Real& operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  Vec column(int j) const;
  bool is_exact() const;
  RMatrix transpose() const;
  Vec apply(std::span<const Real> x) const;
  friend bool operator==(const RMatrix&, const RMatrix&) = default;
};

RMatrix matmul(const RMatrix& a, const RMatrix& b);
/// Gaussian elimination with exact pivots when possible. Throws on singular input.
RMatrix inverse(const RMatrix& m);
Real determinant(const RMatrix& m);

}  // namespace quasicomb
