#include "quasicomb/wfunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quasicomb/errors.hpp"

namespace quasicomb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool same_frequency(const Vec& a, const Vec& b) {
  return near(std::span<const Real>(a), std::span<const Real>(b), WFunction::kFrequencyTol);
}

Complex unit_phase(double turns) {
  double frac = turns - std::floor(turns);
  return std::polar(1.0, kTwoPi * frac);
}

// Fractional part of <t, s> with exact arithmetic when both are exact.
double phase_turns(std::span<const Real> t, std::span<const Real> s) {
  if (is_exact(t) && is_exact(s)) {
    Real p = dot(t, s);
    return (p - p.floor()).to_double();
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) acc += t[i].to_double() * s[i].to_double();
  return acc;
}

// Drops the smallest terms of f while their combined magnitude stays within
// `budget`.
WFunction prune_mass(const WFunction& f, double budget) {
  std::vector<WTerm> terms = f.terms();
  std::vector<std::size_t> order(terms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(terms[a].amp) < std::abs(terms[b].amp); });
  std::vector<bool> drop(terms.size(), false);
  double spent = 0.0;
  for (std::size_t i : order) {
    double m = std::abs(terms[i].amp);
    if (spent + m > budget) break;
    spent += m;
    drop[i] = true;
  }
  std::vector<WTerm> kept;
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (!drop[i]) kept.push_back(std::move(terms[i]));
  return WFunction(f.dim(), std::move(kept));
}

}  // namespace

WFunction::WFunction(int dim, std::vector<WTerm> terms) : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) check_dim(dim_, static_cast<int>(t.freq.size()), "WFunction");
  normalize();
}

void WFunction::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const WTerm& a, const WTerm& b) { return lex_less(a.freq, b.freq); });
  std::vector<WTerm> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    // Numeric frequencies can sort slightly out of order around near-ties;
    // look back a few entries for a match.
    bool done = false;
    for (std::size_t k = merged.size(); k-- > 0 && merged.size() - k <= 4;) {
      if (same_frequency(merged[k].freq, t.freq)) {
        merged[k].amp += t.amp;
        if (!merged[k].freq.empty() && !is_exact(merged[k].freq) && is_exact(t.freq))
          merged[k].freq = t.freq;
        done = true;
        break;
      }
    }
    if (!done) merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const WTerm& t) { return t.amp == Complex(0.0, 0.0); });
  terms_ = std::move(merged);
}

WFunction WFunction::constant(int dim, Complex c) {
  return WFunction(dim, {WTerm{c, zeros(dim)}});
}

WFunction WFunction::exponential(Vec freq, Complex amp) {
  int d = static_cast<int>(freq.size());
  return WFunction(d, {WTerm{amp, std::move(freq)}});
}

double WFunction::norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.amp);
  return s;
}

Complex WFunction::constant_term() const {
  Vec z = zeros(dim_);
  for (const auto& t : terms_)
    if (same_frequency(t.freq, z)) return t.amp;
  return 0.0;
}

Complex WFunction::operator()(std::span<const double> t) const {
  check_dim(dim_, static_cast<int>(t.size()), "WFunction eval");
  Complex s = 0.0;
  for (const auto& term : terms_) {
    double turns = 0.0;
    for (int i = 0; i < dim_; ++i) turns += t[i] * term.freq[i].to_double();
    s += term.amp * unit_phase(turns);
  }
  return s;
}

Complex WFunction::operator()(const Point& t) const {
  check_dim(dim_, static_cast<int>(t.size()), "WFunction eval");
  Complex s = 0.0;
  for (const auto& term : terms_) s += term.amp * unit_phase(phase_turns(t, term.freq));
  return s;
}

WFunction WFunction::pruned(double tol) const {
  std::vector<WTerm> kept;
  for (const auto& t : terms_)
    if (std::abs(t.amp) > tol) kept.push_back(t);
  return WFunction(dim_, std::move(kept));
}

WFunction w_add(const WFunction& f, const WFunction& g) {
  check_dim(f.dim(), g.dim(), "w_add");
  std::vector<WTerm> terms = f.terms();
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return WFunction(f.dim(), std::move(terms));
}

WFunction w_scale(const WFunction& f, Complex c) {
  std::vector<WTerm> terms = f.terms();
  for (auto& t : terms) t.amp *= c;
  return WFunction(f.dim(), std::move(terms));
}

WFunction w_mul(const WFunction& f, const WFunction& g) {
  check_dim(f.dim(), g.dim(), "w_mul");
  std::vector<WTerm> terms;
  terms.reserve(f.terms().size() * g.terms().size());
  for (const auto& a : f.terms())
    for (const auto& b : g.terms()) terms.push_back(WTerm{a.amp * b.amp, vec_add(a.freq, b.freq)});
  return WFunction(f.dim(), std::move(terms));
}

WFunction w_translate(const WFunction& f, std::span<const Real> shift) {
  check_dim(f.dim(), static_cast<int>(shift.size()), "w_translate");
  std::vector<WTerm> terms = f.terms();
  for (auto& t : terms) t.amp *= unit_phase(phase_turns(shift, t.freq));
  return WFunction(f.dim(), std::move(terms));
}

Complex w_eval(const WFunction& f, std::span<const double> t) { return f(t); }

Reciprocal w_reciprocal(const WFunction& f, Complex c, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("w_reciprocal: tolerance must be positive");
  if (c == Complex(0.0, 0.0)) throw NotDominated("w_reciprocal: centre c must be nonzero");
  const int d = f.dim();
  // h = f - c, u = -h / c, 1/f = (1/c) Σ u^n.
  WFunction h = w_add(f, WFunction::constant(d, -c));
  WFunction u = w_scale(h, -1.0 / c);
  const double q = u.norm();
  if (!(q < 1.0))
    throw NotDominated("w_reciprocal: ||f - c||_W = " + std::to_string(h.norm()) +
                       " is not below |c| = " + std::to_string(std::abs(c)));
  const double inv_c = 1.0 / std::abs(c);
  const double fnorm = std::max(1.0, f.norm());
  // Each power may shed up to `budget` of W-mass, smallest terms first. With
  // about `order` powers the shed mass adds at most tol/4 to sup |f g - 1|.
  const double target = tol * (1.0 - q) / (2.0 * inv_c * fnorm);
  const double order = q > 0.0 ? std::max(1.0, std::ceil(std::log(target) / std::log(q))) : 1.0;
  const double budget = tol * (1.0 - q) / (4.0 * inv_c * fnorm * order);

  WFunction sum = WFunction::constant(d, 1.0);
  WFunction power = WFunction::constant(d, 1.0);
  double carried = 0.0;        // bound on ||u^n - kept n-th power||_W
  double dropped_total = 0.0;  // Σ of those bounds over kept powers
  int n = 0;
  while (true) {
    // Remaining tail (1/|c|) Σ_{m>n} q^m plus accumulated truncation error.
    double tail = inv_c * std::pow(q, n + 1) / (1.0 - q);
    double err = tail + inv_c * dropped_total;
    if (err * fnorm < tol || q == 0.0) {
      Reciprocal r;
      r.g = w_scale(sum, 1.0 / c);
      r.order = n;
      r.error_bound = err;
      return r;
    }
    if (n > 100000) throw NotDominated("w_reciprocal: series failed to converge");
    ++n;
    WFunction next = w_mul(power, u);
    double before = next.norm();
    power = prune_mass(next, budget);
    double removed = std::max(0.0, before - power.norm());
    // Error in the previous power propagates through one multiplication by u.
    carried = carried * q + removed;
    dropped_total += carried;
    sum = w_add(sum, power);
  }
}

bool near(const WFunction& a, const WFunction& b, double tol) {
  if (a.dim() != b.dim() || a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& x = a.terms()[i];
    const auto& y = b.terms()[i];
    if (!near(std::span<const Real>(x.freq), std::span<const Real>(y.freq), tol)) return false;
    double scale = std::max({1.0, std::abs(x.amp), std::abs(y.amp)});
    if (std::abs(x.amp - y.amp) > tol * scale) return false;
  }
  return true;
}

}  // namespace quasicomb
