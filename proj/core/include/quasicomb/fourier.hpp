#pragma once

#include <optional>
#include <vector>

#include "quasicomb/coset_ring.hpp"
#include "quasicomb/distribution.hpp"

namespace quasicomb {

/// Fourier transform with kernel e^{-2πi<x,y>}, term by term:
///   δ_{L+τ}      -> |det L|^{-1} e^{-2πi<τ,y>} δ_{L*}
///   D^k g        -> (2πi y)^k ĝ
///   x_j g        -> (i/2π) ∂_j ĝ
///   e^{2πi<x,β>} g -> ĝ(y - β)
/// with y^k D^m δ expanded back into the term algebra by Leibniz' rule.
/// Finite point sets become dense terms; dense terms become point sets.
CombDistribution fourier(const CombDistribution& f);

/// Inverse transform (kernel e^{+2πi<x,y>}); inverse_fourier(fourier(f)) == f.
CombDistribution inverse_fourier(const CombDistribution& f);

/// Support description of fourier(f), without coefficients.
struct SpectrumSupport {
  int dim = 0;
  std::vector<Coset> cosets;
  std::vector<Point> points;
  /// True when a finite point set contributes a dense (non-discrete) part.
  bool dense = false;

  bool empty() const { return cosets.empty() && points.empty() && !dense; }
  /// Union of the cosets as an expression; nullopt when there are none.
  std::optional<CosetExpression> expression() const;
};

SpectrumSupport spectrum_support(const CombDistribution& f);

}  // namespace quasicomb
