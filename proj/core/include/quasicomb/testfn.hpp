#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "quasicomb/distribution.hpp"

namespace quasicomb {

/// Polynomial Σ p_n u^n with complex coefficients, keyed by multi-index.
using Poly = std::map<MultiIndex, Complex>;

/// p(x - c) e^{-πa|x - c|²} e^{2πi<x, b>}.
struct Atom {
  Poly poly;
  double width = 1.0;  ///< a > 0
  std::vector<double> center;
  std::vector<double> modulation;
};

/// Finite sum of atoms. Closed under Fourier transform, derivatives,
/// multiplication by monomials, translation and modulation.
class TestFunction {
 public:
  explicit TestFunction(int dim = 1) : dim_(dim) {}
  TestFunction(int dim, std::vector<Atom> atoms);

  /// e^{-πa|x - c|²} e^{2πi<x, b>}; empty c / b mean zero.
  static TestFunction gaussian(int dim, double a = 1.0, std::vector<double> c = {},
                               std::vector<double> b = {});
  /// Product of Hermite functions H_{n_i}(√(2π) x_i) e^{-π x_i²}; an
  /// eigenfunction of the transform with eigenvalue (-i)^{|n|}.
  static TestFunction hermite(const MultiIndex& n);

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Complex operator()(std::span<const double> x) const;

  /// Σ|p_n| ρ^{|n|} e^{-πaρ²}: bounds |atom(x)| whenever |x - c| = ρ.
  double atom_envelope(std::size_t atom, double rho) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

TestFunction operator+(const TestFunction& a, const TestFunction& b);
TestFunction scale(const TestFunction& f, Complex c);

/// φ̂(y) = ∫ φ(x) e^{-2πi<x,y>} dx in closed form.
TestFunction fourier_testfn(const TestFunction& f);
/// φ̌(y) = ∫ φ(x) e^{2πi<x,y>} dx.
TestFunction inverse_fourier_testfn(const TestFunction& f);
/// D^k φ.
TestFunction derivative(const TestFunction& f, const MultiIndex& k);
/// x^m φ(x).
TestFunction times_monomial(const TestFunction& f, const MultiIndex& m);
/// φ(x - t).
TestFunction translate(const TestFunction& f, std::span<const double> t);
/// e^{2πi<x, beta>} φ(x).
TestFunction modulate(const TestFunction& f, std::span<const double> beta);
/// φ(-x).
TestFunction reflect(const TestFunction& f);

}  // namespace quasicomb
