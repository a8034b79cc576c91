#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "quasicomb/lattice.hpp"
#include "quasicomb/wfunction.hpp"

namespace quasicomb {

using MultiIndex = std::vector<int>;

int order(const MultiIndex& k);
MultiIndex zero_index(int dim);
MultiIndex unit_index(int dim, int axis);

/// Finite point list with complex weights.
struct PointSupport {
  std::vector<Point> points;
  std::vector<Complex> weights;
};

/// Marks a term that is a smooth function rather than a point mass:
/// D^k [ y^m W(y) ]. Produced by transforming finite point sets.
struct DenseSupport {};

using Support = std::variant<Coset, PointSupport, DenseSupport>;

/// One summand of a comb distribution.
///
/// Coset support:  Σ_{λ ∈ coset} λ^m W(λ) D^k δ_λ
/// Point support:  Σ_i w_i λ_i^m W(λ_i) D^k δ_{λ_i}
/// Dense:          D^k [ y^m W(y) ]
struct CombTerm {
  Support support;
  MultiIndex m;
  MultiIndex k;
  WFunction coeff;

  bool is_coset() const { return std::holds_alternative<Coset>(support); }
  bool is_points() const { return std::holds_alternative<PointSupport>(support); }
  bool is_dense() const { return std::holds_alternative<DenseSupport>(support); }
  const Coset& coset() const { return std::get<Coset>(support); }
  const PointSupport& points() const { return std::get<PointSupport>(support); }
};

/// Finite sum of comb terms, stored in canonical form:
///  - coset terms: full-rank support with reduced offset, W frequencies
///    reduced modulo the dual lattice into the centred cell (the amplitude
///    picks up the matching phase), equal (support, m, k) merged;
///  - point terms: λ^m W(λ) absorbed into the weights (m = 0, W = 1),
///    points sorted and merged per k, zero weights dropped;
///  - dense terms expanded to Σ_m y^m W_m(y) (derivatives carried out on
///    each exponential) and merged per m.
/// Terms are ordered coset < points < dense, then by support, m, k.
class CombDistribution {
 public:
  explicit CombDistribution(int dim = 1) : dim_(dim) {}
  CombDistribution(int dim, std::vector<CombTerm> terms);

  int dim() const { return dim_; }
  const std::vector<CombTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Largest derivative order ‖k‖ (0 when empty).
  int K() const;
  /// Largest monomial order ‖m‖ (0 when empty).
  int M() const;

  /// Σ_{λ ∈ coset} D^k δ_λ.
  static CombDistribution comb(const Coset& c, const MultiIndex& k = {});

 private:
  int dim_;
  std::vector<CombTerm> terms_;
};

CombDistribution operator+(const CombDistribution& a, const CombDistribution& b);
CombDistribution scale(const CombDistribution& f, Complex c);
/// D^k applied to every term.
CombDistribution apply_derivative(const CombDistribution& f, const MultiIndex& k);
/// Point reflection x -> -x.
CombDistribution reflect(const CombDistribution& f);

/// Structural comparison with amplitude / coordinate tolerance.
bool near(const CombDistribution& a, const CombDistribution& b, double tol = 1e-9);

/// μ_k: the terms carrying D^k, with the derivative removed.
CombDistribution component_measure(const CombDistribution& f, const MultiIndex& k);

/// Total coefficient of D^k δ_λ (0 when λ is not a support point).
Complex coefficient_at(const CombDistribution& f, const Point& lambda, const MultiIndex& k);

/// Coefficients p_k(λ) of every support point with |λ| <= radius.
struct SupportSample {
  std::vector<double> point;
  std::map<MultiIndex, Complex> coeffs;
};
std::vector<SupportSample> sample_support(const CombDistribution& f, double radius);

struct CoefficientReport {
  double radius = 0;
  std::size_t points = 0;
  double min_sum = 0;  ///< min over λ of Σ_k |p_k(λ)|
  double max_sum = 0;
  std::vector<double> argmin_sum;
  bool has_ratio = false;
  double min_ratio = 0;  ///< min over λ of max_k |p_k(λ)| (1 + |λ|)^{-h(k)}
  double max_ratio = 0;
  std::vector<std::vector<double>> zeros;  ///< points with all p_k(λ) = 0 (|.| <= 1e-12)
  std::size_t below_c = 0;                 ///< points with Σ_k |p_k| < c
  std::size_t above_C = 0;                 ///< points with Σ_k |p_k| > C
  std::size_t ratio_below_c = 0;           ///< points with a nonzero ratio below c
  std::size_t ratio_above_C = 0;
  bool violates() const { return below_c + above_C + ratio_below_c + ratio_above_C > 0; }
};

struct CoefficientBounds {
  std::optional<double> c;
  std::optional<double> C;
  /// Growth exponents h(k); enables the ratio statistics when nonempty.
  std::map<MultiIndex, double> h;
};

/// Coefficient statistics over the support inside the ball B(0, radius).
CoefficientReport check_coefficient_bounds(const CombDistribution& f, double radius,
                                           const CoefficientBounds& bounds = {});

/// Least-squares slope of log Σ_{|λ|<=r} Σ_k |p_k(λ)| against log r.
/// Needs >= 3 increasing radii; throws DegenerateData when the partial sums
/// do not vary.
double growth_exponent(const CombDistribution& f, const std::vector<double>& radii);

}  // namespace quasicomb
