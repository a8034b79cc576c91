#include "quasicomb/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quasicomb/errors.hpp"

namespace quasicomb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int kind(const CombTerm& t) { return static_cast<int>(t.support.index()); }

bool same_point(const Point& a, const Point& b) {
  if (is_exact(a) && is_exact(b)) return a == b;
  return near(std::span<const Real>(a), std::span<const Real>(b), 1e-12);
}

bool same_coset(const Coset& a, const Coset& b) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return near(a, b, 1e-12);
}

double monomial(std::span<const double> x, const MultiIndex& m) {
  double v = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int p = 0; p < m[i]; ++p) v *= x[i];
  return v;
}

// Frequencies reduced modulo the dual of the support lattice:
// on λ ∈ L + τ, e^{2πi<λ, s>} = e^{2πi<τ, β>} e^{2πi<λ, s - β>} for β ∈ L*.
WFunction reduce_frequencies(const Coset& support, const WFunction& w) {
  const Lattice& lat = support.lattice();
  if (!lat.is_full_rank() || w.empty()) return w;
  Lattice dl = dual(lat);
  std::vector<WTerm> out;
  out.reserve(w.terms().size());
  for (const auto& t : w.terms()) {
    Vec s = reduce_centered(dl, t.freq);
    Vec beta = vec_sub(t.freq, s);
    Complex amp = t.amp;
    bool moved = std::any_of(beta.begin(), beta.end(), [](const Real& r) { return !r.is_zero(); });
    if (moved) {
      double turns;
      if (is_exact(beta) && is_exact(support.offset())) {
        Real p = dot(support.offset(), beta);
        turns = (p - p.floor()).to_double();
      } else {
        turns = 0.0;
        for (std::size_t i = 0; i < beta.size(); ++i)
          turns += support.offset()[i].to_double() * beta[i].to_double();
        turns -= std::floor(turns);
      }
      amp *= std::polar(1.0, kTwoPi * turns);
    }
    out.push_back(WTerm{amp, std::move(s)});
  }
  return WFunction(w.dim(), std::move(out));
}

bool index_less(const MultiIndex& a, const MultiIndex& b) { return a < b; }

bool term_less(const CombTerm& a, const CombTerm& b) {
  if (kind(a) != kind(b)) return kind(a) < kind(b);
  if (a.is_coset()) {
    if (coset_less(a.coset(), b.coset())) return true;
    if (coset_less(b.coset(), a.coset())) return false;
  }
  if (a.m != b.m) return index_less(a.m, b.m);
  return index_less(a.k, b.k);
}

PointSupport merge_points(std::vector<std::pair<Point, Complex>> items) {
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& x, const auto& y) { return lex_less(x.first, y.first); });
  PointSupport out;
  for (auto& [p, w] : items) {
    if (!out.points.empty() && same_point(out.points.back(), p)) {
      out.weights.back() += w;
      continue;
    }
    out.points.push_back(std::move(p));
    out.weights.push_back(w);
  }
  PointSupport kept;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (out.weights[i] == Complex(0.0, 0.0)) continue;
    kept.points.push_back(std::move(out.points[i]));
    kept.weights.push_back(out.weights[i]);
  }
  return kept;
}

double falling(int n, int j) {
  double r = 1.0;
  for (int t = 0; t < j; ++t) r *= n - t;
  return r;
}

// D^k [y^m W(y)] = Σ_j C(k,j) m!/(m-j)! y^{m-j} (D^{k-j} W)(y), with
// D^{k-j} e^{2πi<y,s>} = (2πi s)^{k-j} e^{2πi<y,s>}. Returns (m - j, W_j) pairs.
std::vector<std::pair<MultiIndex, WFunction>> expand_dense(const CombTerm& t) {
  const int d = static_cast<int>(t.m.size());
  std::vector<std::pair<MultiIndex, WFunction>> out;
  MultiIndex j(d, 0), jmax(d);
  for (int i = 0; i < d; ++i) jmax[i] = std::min(t.m[i], t.k[i]);
  while (true) {
    double c = 1.0;
    MultiIndex rest(d), mon(d);
    for (int i = 0; i < d; ++i) {
      c *= falling(t.k[i], j[i]) / falling(j[i], j[i]) * falling(t.m[i], j[i]);
      rest[i] = t.k[i] - j[i];
      mon[i] = t.m[i] - j[i];
    }
    std::vector<WTerm> wt;
    for (const auto& w : t.coeff.terms()) {
      Complex a = w.amp * c;
      for (int i = 0; i < d; ++i)
        for (int p = 0; p < rest[i]; ++p) a *= Complex(0.0, kTwoPi * w.freq[i].to_double());
      if (a != Complex(0.0, 0.0)) wt.push_back(WTerm{a, w.freq});
    }
    out.emplace_back(std::move(mon), WFunction(d, std::move(wt)));
    int pos = 0;
    while (pos < d && ++j[pos] > jmax[pos]) j[pos++] = 0;
    if (pos == d) break;
  }
  return out;
}

void check_index(int dim, const MultiIndex& k, const char* what) {
  check_dim(dim, static_cast<int>(k.size()), what);
  for (int v : k)
    if (v < 0) throw std::invalid_argument(std::string(what) + ": negative multi-index entry");
}

}  // namespace

int order(const MultiIndex& k) {
  int s = 0;
  for (int v : k) s += v;
  return s;
}

MultiIndex zero_index(int dim) { return MultiIndex(static_cast<std::size_t>(dim), 0); }

MultiIndex unit_index(int dim, int axis) {
  MultiIndex k = zero_index(dim);
  k.at(static_cast<std::size_t>(axis)) = 1;
  return k;
}

CombDistribution::CombDistribution(int dim, std::vector<CombTerm> input) : dim_(dim) {
  std::vector<CombTerm> cosets;
  std::map<MultiIndex, std::vector<std::pair<Point, Complex>>> points;
  std::vector<CombTerm> dense;

  for (auto& t : input) {
    if (t.m.empty()) t.m = zero_index(dim);
    if (t.k.empty()) t.k = zero_index(dim);
    check_index(dim, t.m, "CombTerm monomial");
    check_index(dim, t.k, "CombTerm derivative");
    if (t.coeff.dim() != dim) {
      if (t.coeff.dim() == 0 && t.coeff.empty()) t.coeff = WFunction(dim);
      else check_dim(dim, t.coeff.dim(), "CombTerm coefficient");
    }
    if (t.is_coset()) {
      const Coset& c = t.coset();
      check_dim(dim, c.dim(), "CombTerm support");
      if (!c.lattice().is_full_rank())
        throw UnsupportedTerm("coset supports must be full rank");
      WFunction w = reduce_frequencies(c, t.coeff);
      auto it = std::find_if(cosets.begin(), cosets.end(), [&](const CombTerm& u) {
        return u.m == t.m && u.k == t.k && same_coset(u.coset(), c);
      });
      if (it != cosets.end()) it->coeff = w_add(it->coeff, w);
      else cosets.push_back(CombTerm{t.support, t.m, t.k, std::move(w)});
    } else if (t.is_points()) {
      const PointSupport& ps = t.points();
      if (!ps.weights.empty() && ps.weights.size() != ps.points.size())
        throw std::invalid_argument("point support: weights and points differ in length");
      auto& bucket = points[t.k];
      for (std::size_t i = 0; i < ps.points.size(); ++i) {
        const Point& p = ps.points[i];
        check_dim(dim, static_cast<int>(p.size()), "point support");
        std::vector<double> x = to_doubles(p);
        Complex w = ps.weights.empty() ? Complex(1.0) : ps.weights[i];
        w *= monomial(x, t.m) * t.coeff(p);
        bucket.emplace_back(p, w);
      }
    } else {
      for (auto& [m, w] : expand_dense(t)) {
        auto it = std::find_if(dense.begin(), dense.end(),
                               [&](const CombTerm& u) { return u.m == m; });
        if (it != dense.end()) it->coeff = w_add(it->coeff, w);
        else dense.push_back(CombTerm{DenseSupport{}, m, zero_index(dim), std::move(w)});
      }
    }
  }

  for (auto& t : cosets)
    if (!t.coeff.empty()) terms_.push_back(std::move(t));
  for (auto& [k, items] : points) {
    PointSupport ps = merge_points(std::move(items));
    if (ps.points.empty()) continue;
    terms_.push_back(CombTerm{std::move(ps), zero_index(dim), k, WFunction::constant(dim, 1.0)});
  }
  for (auto& t : dense)
    if (!t.coeff.empty()) terms_.push_back(std::move(t));
  std::stable_sort(terms_.begin(), terms_.end(), term_less);
}

int CombDistribution::K() const {
  int k = 0;
  for (const auto& t : terms_) k = std::max(k, order(t.k));
  return k;
}

int CombDistribution::M() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, order(t.m));
  return m;
}

CombDistribution CombDistribution::comb(const Coset& c, const MultiIndex& k) {
  const int d = c.dim();
  return CombDistribution(d, {CombTerm{c, zero_index(d), k.empty() ? zero_index(d) : k,
                                       WFunction::constant(d, 1.0)}});
}

CombDistribution operator+(const CombDistribution& a, const CombDistribution& b) {
  check_dim(a.dim(), b.dim(), "distribution sum");
  std::vector<CombTerm> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return CombDistribution(a.dim(), std::move(terms));
}

CombDistribution scale(const CombDistribution& f, Complex c) {
  std::vector<CombTerm> terms = f.terms();
  for (auto& t : terms) {
    if (t.is_points()) {
      for (auto& w : std::get<PointSupport>(t.support).weights) w *= c;
    } else {
      t.coeff = w_scale(t.coeff, c);
    }
  }
  return CombDistribution(f.dim(), std::move(terms));
}

CombDistribution apply_derivative(const CombDistribution& f, const MultiIndex& k) {
  check_index(f.dim(), k, "apply_derivative");
  std::vector<CombTerm> terms = f.terms();
  for (auto& t : terms)
    for (std::size_t i = 0; i < k.size(); ++i) t.k[i] += k[i];
  return CombDistribution(f.dim(), std::move(terms));
}

CombDistribution reflect(const CombDistribution& f) {
  const int d = f.dim();
  std::vector<CombTerm> terms;
  for (const auto& t : f.terms()) {
    std::vector<WTerm> wt = t.coeff.terms();
    for (auto& w : wt) w.freq = vec_neg(w.freq);
    WFunction w(d, std::move(wt));
    double sign = ((order(t.m) + order(t.k)) % 2 == 0) ? 1.0 : -1.0;
    if (t.is_coset()) {
      Coset c(t.coset().lattice(), vec_neg(t.coset().offset()));
      terms.push_back(CombTerm{std::move(c), t.m, t.k, w_scale(w, sign)});
    } else if (t.is_points()) {
      PointSupport ps = t.points();
      for (auto& p : ps.points) p = vec_neg(p);
      for (auto& x : ps.weights) x *= sign;
      terms.push_back(CombTerm{std::move(ps), t.m, t.k, w});
    } else {
      terms.push_back(CombTerm{DenseSupport{}, t.m, t.k, w_scale(w, sign)});
    }
  }
  return CombDistribution(d, std::move(terms));
}

bool near(const CombDistribution& a, const CombDistribution& b, double tol) {
  if (a.dim() != b.dim() || a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& x = a.terms()[i];
    const auto& y = b.terms()[i];
    if (kind(x) != kind(y) || x.m != y.m || x.k != y.k) return false;
    if (x.is_coset() && !near(x.coset(), y.coset(), tol)) return false;
    if (x.is_points()) {
      const auto& px = x.points();
      const auto& py = y.points();
      if (px.points.size() != py.points.size()) return false;
      for (std::size_t j = 0; j < px.points.size(); ++j) {
        if (!near(std::span<const Real>(px.points[j]), std::span<const Real>(py.points[j]), tol))
          return false;
        double s = std::max({1.0, std::abs(px.weights[j]), std::abs(py.weights[j])});
        if (std::abs(px.weights[j] - py.weights[j]) > tol * s) return false;
      }
    }
    if (!near(x.coeff, y.coeff, tol)) return false;
  }
  return true;
}

CombDistribution component_measure(const CombDistribution& f, const MultiIndex& k) {
  check_index(f.dim(), k, "component_measure");
  std::vector<CombTerm> terms;
  for (const auto& t : f.terms()) {
    if (t.k != k) continue;
    CombTerm u = t;
    u.k = zero_index(f.dim());
    terms.push_back(std::move(u));
  }
  return CombDistribution(f.dim(), std::move(terms));
}

Complex coefficient_at(const CombDistribution& f, const Point& lambda, const MultiIndex& k) {
  check_dim(f.dim(), static_cast<int>(lambda.size()), "coefficient_at");
  std::vector<double> x = to_doubles(lambda);
  Complex total = 0.0;
  for (const auto& t : f.terms()) {
    if (t.k != k) continue;
    if (t.is_coset()) {
      if (!t.coset().contains(lambda)) continue;
      total += monomial(x, t.m) * t.coeff(lambda);
    } else if (t.is_points()) {
      const auto& ps = t.points();
      for (std::size_t i = 0; i < ps.points.size(); ++i)
        if (same_point(ps.points[i], lambda)) total += ps.weights[i];
    }
  }
  return total;
}

std::vector<SupportSample> sample_support(const CombDistribution& f, double radius) {
  const int d = f.dim();
  std::map<std::vector<long long>, std::size_t> index;
  std::vector<SupportSample> out;
  auto slot = [&](std::span<const double> p) -> SupportSample& {
    std::vector<long long> key(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) key[i] = std::llround(p[i] * 1e9);
    auto [it, fresh] = index.try_emplace(std::move(key), out.size());
    if (fresh) out.push_back(SupportSample{std::vector<double>(p.begin(), p.end()), {}});
    return out[it->second];
  };
  const double r2 = radius * radius * (1.0 + 1e-12);
  std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  for (const auto& t : f.terms()) {
    if (t.is_coset()) {
      for_each_in_ball(t.coset(), origin, radius, [&](std::span<const double> p) {
        double n2 = 0.0;
        for (double v : p) n2 += v * v;
        if (n2 > r2) return;
        Complex c = monomial(p, t.m) * t.coeff(p);
        slot(p).coeffs[t.k] += c;
      });
    } else if (t.is_points()) {
      const auto& ps = t.points();
      for (std::size_t i = 0; i < ps.points.size(); ++i) {
        std::vector<double> p = to_doubles(ps.points[i]);
        double n2 = 0.0;
        for (double v : p) n2 += v * v;
        if (n2 > r2) continue;
        slot(p).coeffs[t.k] += ps.weights[i];
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SupportSample& a, const SupportSample& b) { return a.point < b.point; });
  return out;
}

CoefficientReport check_coefficient_bounds(const CombDistribution& f, double radius,
                                           const CoefficientBounds& bounds) {
  if (!(radius > 0)) throw std::invalid_argument("check_coefficient_bounds: radius must be > 0");
  CoefficientReport rep;
  rep.radius = radius;
  rep.has_ratio = !bounds.h.empty();
  auto samples = sample_support(f, radius);
  rep.points = samples.size();
  bool first = true;
  bool first_ratio = true;
  for (const auto& s : samples) {
    double sum = 0.0;
    for (const auto& [k, c] : s.coeffs) sum += std::abs(c);
    double norm = 0.0;
    for (double v : s.point) norm += v * v;
    norm = std::sqrt(norm);
    if (sum <= 1e-12) rep.zeros.push_back(s.point);
    if (first || sum < rep.min_sum) {
      rep.min_sum = sum;
      rep.argmin_sum = s.point;
    }
    if (first || sum > rep.max_sum) rep.max_sum = sum;
    first = false;
    if (bounds.c && sum < *bounds.c) ++rep.below_c;
    if (bounds.C && sum > *bounds.C) ++rep.above_C;
    if (rep.has_ratio && sum > 1e-12) {
      double ratio = 0.0;
      for (const auto& [k, c] : s.coeffs) {
        auto it = bounds.h.find(k);
        double h = it == bounds.h.end() ? 0.0 : it->second;
        ratio = std::max(ratio, std::abs(c) * std::pow(1.0 + norm, -h));
      }
      if (first_ratio || ratio < rep.min_ratio) rep.min_ratio = ratio;
      if (first_ratio || ratio > rep.max_ratio) rep.max_ratio = ratio;
      first_ratio = false;
      if (bounds.c && ratio < *bounds.c) ++rep.ratio_below_c;
      if (bounds.C && ratio > *bounds.C) ++rep.ratio_above_C;
    }
  }
  return rep;
}

double growth_exponent(const CombDistribution& f, const std::vector<double>& radii) {
  if (radii.size() < 3) throw DegenerateData("growth_exponent needs at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw DegenerateData("growth_exponent: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw DegenerateData("growth_exponent: radii must be increasing");
  }
  auto samples = sample_support(f, radii.back());
  std::vector<double> sums(radii.size(), 0.0);
  for (const auto& s : samples) {
    double weight = 0.0;
    for (const auto& [k, c] : s.coeffs) weight += std::abs(c);
    double n2 = 0.0;
    for (double v : s.point) n2 += v * v;
    for (std::size_t i = 0; i < radii.size(); ++i)
      if (n2 <= radii[i] * radii[i] * (1.0 + 1e-12)) sums[i] += weight;
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (sums[i] <= 0) continue;
    xs.push_back(std::log(radii[i]));
    ys.push_back(std::log(sums[i]));
  }
  bool varies = false;
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (std::fabs(ys[i] - ys[0]) > 1e-12) varies = true;
  if (xs.size() < 2 || !varies)
    throw DegenerateData("growth_exponent: partial sums do not vary with the radius");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace quasicomb
