#include "quasicomb/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace quasicomb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every multi-index j with 0 <= j <= bound componentwise.
void for_each_below(const MultiIndex& bound, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex j(bound.size(), 0);
  while (true) {
    fn(j);
    std::size_t pos = 0;
    while (pos < j.size() && ++j[pos] > bound[pos]) j[pos++] = 0;
    if (pos == j.size()) return;
  }
}

// Leibniz factor of y^k D^m δ_ζ on D^{m-j} δ_ζ, without the y^{k-j} part:
// C(m, j) (-1)^{|j|} k! / (k - j)!.
double leibniz_factor(const MultiIndex& m, const MultiIndex& k, const MultiIndex& j) {
  double r = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    r *= binomial(m[i], j[i]);
    for (int t = 0; t < j[i]; ++t) r *= static_cast<double>(k[i] - t);
    if (j[i] % 2 != 0) r = -r;
  }
  return r;
}

MultiIndex min_index(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::min(a[i], b[i]);
  return r;
}

MultiIndex minus(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double monomial(const Point& x, const MultiIndex& m) {
  double v = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int p = 0; p < m[i]; ++p) v *= x[i].to_double();
  return v;
}

// e^{2πi<a,b>}, reducing exact phases modulo 1.
Complex phase(const Vec& a, const Vec& b) {
  double turns;
  if (is_exact(a) && is_exact(b)) {
    Real p = dot(a, b);
    turns = (p - p.floor()).to_double();
  } else {
    turns = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) turns += a[i].to_double() * b[i].to_double();
    turns -= std::floor(turns);
  }
  return std::polar(1.0, kTwoPi * turns);
}

Complex ipow(Complex base, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

// sign = -1 for the forward transform, +1 for the inverse.
CombDistribution transform(const CombDistribution& f, int sign) {
  const int d = f.dim();
  const double sg = static_cast<double>(sign);
  // Exchange constants: x_j -> mono * ∂_j, D_j -> deriv * y_j.
  const Complex mono = -sg * kI / kTwoPi;  // forward i/2π, inverse -i/2π
  const Complex deriv = -sg * kTwoPi * kI;  // forward 2πi, inverse -2πi
  std::vector<CombTerm> out;

  for (const auto& t : f.terms()) {
    if (t.is_coset()) {
      const Coset& c = t.coset();
      const Lattice& lat = c.lattice();
      Lattice dl = dual(lat);
      const double inv_det = 1.0 / lat.det_abs().to_double();
      const Complex consts = inv_det * ipow(mono, order(t.m)) * ipow(deriv, order(t.k));
      Vec tau = c.offset();
      Vec wfreq = sign < 0 ? vec_neg(tau) : tau;
      MultiIndex jmax = min_index(t.m, t.k);
      for (const auto& w : t.coeff.terms()) {
        // Support L* ± s. Writing ζ = η ± s with η ∈ L*, the comb phase
        // e^{∓2πi<τ,η>} becomes e^{2πi<τ,s>} e^{∓2πi<τ,ζ>} on every ζ.
        Vec shift = sign < 0 ? w.freq : vec_neg(w.freq);
        Coset support(dl, shift);
        Complex amp = w.amp * consts * phase(tau, w.freq);
        for_each_below(jmax, [&](const MultiIndex& j) {
          double lf = leibniz_factor(t.m, t.k, j);
          if (lf == 0.0) return;
          WFunction coeff = WFunction::exponential(wfreq, amp * lf);
          out.push_back(CombTerm{support, minus(t.k, j), minus(t.m, j), std::move(coeff)});
        });
      }
    } else if (t.is_points()) {
      // Σ w D^k δ_λ  ->  (deriv y)^k Σ w e^{2πi<y, sign λ>}  (a dense term).
      const auto& ps = t.points();
      std::vector<WTerm> wt;
      Complex consts = ipow(deriv, order(t.k));
      for (std::size_t i = 0; i < ps.points.size(); ++i) {
        Vec freq = sign < 0 ? vec_neg(ps.points[i]) : ps.points[i];
        wt.push_back(WTerm{ps.weights[i] * consts, std::move(freq)});
      }
      out.push_back(CombTerm{DenseSupport{}, t.k, zero_index(d), WFunction(d, std::move(wt))});
    } else {
      // D^k [y^m e^{2πi<y,s>}] -> (deriv x)^k (mono D)^m δ_{-sign s}, then Leibniz.
      Complex consts = ipow(deriv, order(t.k)) * ipow(mono, order(t.m));
      MultiIndex jmax = min_index(t.m, t.k);
      for (const auto& w : t.coeff.terms()) {
        Point at = sign < 0 ? w.freq : vec_neg(w.freq);
        for_each_below(jmax, [&](const MultiIndex& j) {
          double lf = leibniz_factor(t.m, t.k, j);
          if (lf == 0.0) return;
          Complex weight = w.amp * consts * lf * monomial(at, minus(t.k, j));
          out.push_back(CombTerm{PointSupport{{at}, {weight}}, zero_index(d), minus(t.m, j),
                                 WFunction::constant(d, 1.0)});
        });
      }
    }
  }
  return CombDistribution(d, std::move(out));
}

}  // namespace

CombDistribution fourier(const CombDistribution& f) { return transform(f, -1); }

CombDistribution inverse_fourier(const CombDistribution& f) { return transform(f, +1); }

std::optional<CosetExpression> SpectrumSupport::expression() const {
  if (cosets.empty()) return std::nullopt;
  std::vector<CosetExpression> leaves;
  for (const auto& c : cosets) leaves.push_back(CosetExpression::leaf(c));
  if (leaves.size() == 1) return leaves.front();
  return CosetExpression::set_union(std::move(leaves));
}

SpectrumSupport spectrum_support(const CombDistribution& f) {
  SpectrumSupport s;
  s.dim = f.dim();
  for (const auto& t : f.terms()) {
    if (t.is_coset()) {
      Lattice dl = dual(t.coset().lattice());
      for (const auto& w : t.coeff.terms()) {
        Coset c(dl, w.freq);
        bool seen = false;
        for (const auto& e : s.cosets)
          if ((e.is_exact() && c.is_exact()) ? e == c : near(e, c, 1e-12)) seen = true;
        if (!seen) s.cosets.push_back(std::move(c));
      }
    } else if (t.is_points()) {
      s.dense = true;
    } else {
      for (const auto& w : t.coeff.terms()) s.points.push_back(w.freq);
    }
  }
  std::sort(s.cosets.begin(), s.cosets.end(), coset_less);
  std::sort(s.points.begin(), s.points.end(),
            [](const Point& a, const Point& b) { return lex_less(a, b); });
  return s;
}

}  // namespace quasicomb
