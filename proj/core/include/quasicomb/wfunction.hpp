#pragma once

#include <complex>
#include <span>
#include <vector>

#include "quasicomb/real.hpp"

namespace quasicomb {

using Complex = std::complex<double>;

/// One exponential a * e^{2πi<t, s>}.
struct WTerm {
  Complex amp;
  Vec freq;
};

/// Finite trigonometric sum Σ a_n e^{2πi<t, s_n>}.
///
/// Terms are kept sorted by frequency (lexicographic), with no repeated
/// frequency and no exactly-zero amplitude. Exact frequencies are merged on
/// exact equality, numeric ones within 1e-12.
class WFunction {
 public:
  static constexpr double kFrequencyTol = 1e-12;

  explicit WFunction(int dim = 0) : dim_(dim) {}
  WFunction(int dim, std::vector<WTerm> terms);

  static WFunction constant(int dim, Complex c);
  static WFunction exponential(Vec freq, Complex amp = 1.0);

  int dim() const { return dim_; }
  const std::vector<WTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Σ |a_n|.
  double norm() const;
  /// Amplitude of the zero frequency (0 when absent).
  Complex constant_term() const;

  Complex operator()(std::span<const double> t) const;
  /// Evaluation at an exact point reduces exact phases modulo 1 first.
  Complex operator()(const Point& t) const;

  /// Drops terms whose amplitude magnitude is <= tol.
  WFunction pruned(double tol) const;

 private:
  void normalize();

  int dim_;
  std::vector<WTerm> terms_;
};

WFunction w_add(const WFunction& f, const WFunction& g);
WFunction w_scale(const WFunction& f, Complex c);
/// Product; frequencies add and amplitudes convolve.
WFunction w_mul(const WFunction& f, const WFunction& g);
/// f(t + shift) = Σ a_n e^{2πi<shift, s_n>} e^{2πi<t, s_n>}.
WFunction w_translate(const WFunction& f, std::span<const Real> shift);
/// Point evaluation, same as f(t).
Complex w_eval(const WFunction& f, std::span<const double> t);

/// Result of the constructive reciprocal.
struct Reciprocal {
  WFunction g;
  int order = 0;           ///< highest power of the Neumann series kept
  double error_bound = 0;  ///< certified bound on sup |g - 1/f|
};

/// Constructive reciprocal of f around its dominant constant c:
/// g = (1/c) Σ_{n>=0} (-(f - c)/c)^n, truncated once sup |g - 1/f| and
/// sup |f g - 1| are both certified below `tol`. Requires ||f - c||_W < |c|
/// (NotDominated otherwise).
Reciprocal w_reciprocal(const WFunction& f, Complex c, double tol);

bool near(const WFunction& a, const WFunction& b, double tol = 1e-12);

}  // namespace quasicomb
