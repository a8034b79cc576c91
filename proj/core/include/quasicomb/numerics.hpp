#pragma once

#include <complex>
#include <vector>

#include "quasicomb/distribution.hpp"
#include "quasicomb/testfn.hpp"

namespace quasicomb {

/// Value of a pairing with a certified bound on |value - exact|.
struct PairResult {
  Complex value;
  double error_bound = 0;  ///< tail bound plus floating rounding bound
  double tail_bound = 0;   ///< part of error_bound due to truncated lattice sums
  double radius = 0;       ///< largest truncation radius used
  std::size_t points = 0;  ///< support points summed
};

/// ⟨f, φ⟩ with ⟨D^k δ_λ, φ⟩ = (-1)^{|k|} D^kφ(λ).
///
/// Coset terms are summed over a ball whose radius is grown until the
/// certified Gaussian tail (from lattice point counts via determinant and
/// covering radius) is below `tail_tol`. Point terms are finite sums and
/// dense terms are paired in closed form. Throws NonconvergentTail if the
/// required ball would hold more than `max_points` lattice points.
PairResult pair(const CombDistribution& f, const TestFunction& phi, double tail_tol = 1e-12,
                double max_points = 5e7);

struct PoissonResult {
  bool ok = false;
  PairResult lhs;  ///< Σ_{λ∈L} φ(λ)
  PairResult rhs;  ///< |det L|^{-1} Σ_{γ∈L*} φ̂(γ)
  double residual = 0;
};

/// Checks Σ_{λ∈L} φ(λ) = |det L|^{-1} Σ_{γ∈L*} φ̂(γ); ok iff |lhs - rhs| < tol.
PoissonResult poisson_check(const Lattice& lattice, const TestFunction& phi, double tol);

struct SmoothedSample {
  std::vector<double> t;
  PairResult direct;    ///< Σ_λ p(λ) ψ(t - λ)
  PairResult spectral;  ///< Σ_γ q(γ) ψ̂(γ) e^{2πi<t,γ>} over the spectrum
  double discrepancy = 0;
};

/// (ψ ⋆ μ)(t) computed directly and through fourier(μ). μ must be a measure
/// (no derivative terms; UnsupportedTerm otherwise).
std::vector<SmoothedSample> smoothed_transform_samples(const CombDistribution& mu,
                                                       const TestFunction& psi,
                                                       const std::vector<std::vector<double>>& ts,
                                                       double tail_tol = 1e-12);

struct AlmostPeriodOptions {
  double lo = 0.0;
  double hi = 50.0;
  double pitch = 0.01;             ///< τ grid step
  std::vector<double> direction;   ///< scan direction, required when d > 1
  double sample_span = 20.0;       ///< samples t lie in [0, span]^d
  double sample_pitch = 0.05;      ///< grid step (d = 1) or span/count (d > 1)
};

/// ε-almost periods found on the τ grid. Discrepancy is the max of
/// |g(t + τv) - g(t)| over the sample set, which is a lower estimate of the
/// true sup; `bounds` holds the certified upper bound Σ|a_n||e^{2πi τ<v,s_n>} - 1|.
struct AlmostPeriodReport {
  double epsilon = 0;
  double lo = 0;
  double hi = 0;
  double pitch = 0;
  double sample_span = 0;
  double sample_pitch = 0;
  std::size_t sample_count = 0;
  std::vector<double> direction;
  std::vector<double> periods;
  std::vector<double> discrepancies;
  std::vector<double> bounds;
  /// Largest gap between consecutive reported periods (infinity when fewer than 2).
  double max_gap = 0;
};

AlmostPeriodReport almost_periods(const WFunction& g, double epsilon,
                                  const AlmostPeriodOptions& options = {});

}  // namespace quasicomb
