#include "quasicomb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quasicomb/errors.hpp"
#include "quasicomb/fourier.hpp"
#include "quasicomb/parallel.hpp"

namespace quasicomb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Per-contribution evaluation error (exp, polar, polynomial) relative to the
// contribution's magnitude; generous against a handful of ulps.
constexpr double kEvalRel = 1e-14;

// Neumaier compensated sum of complex values, tracking Σ|x|.
struct Accumulator {
  Complex sum = 0.0;
  Complex comp = 0.0;
  double abs_sum = 0.0;
  std::size_t count = 0;

  static void add_part(double& s, double& c, double x) {
    double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  void add(Complex x) {
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    add_part(sr, cr, x.real());
    add_part(si, ci, x.imag());
    sum = {sr, si};
    comp = {cr, ci};
    abs_sum += std::abs(x);
    ++count;
  }
  Complex value() const { return sum + comp; }
  double rounding_bound() const {
    return (kEvalRel + 4.0 * kEps) * abs_sum + 2.0 * kEps * std::abs(value());
  }
};

double ball_volume(int d, double r) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Certified bound for Σ_{λ ∈ coset, |λ| > R} |λ|^{|m|} ||W|| |ψ(λ)|.
class TailModel {
 public:
  TailModel(const Coset& c, const MultiIndex& m, double wnorm, const TestFunction& psi)
      : d_(c.dim()), mdeg_(order(m)), wnorm_(wnorm) {
    det_ = c.lattice().det_abs().to_double();
    mu_ = covering_radius_bound(c.lattice());
    for (const auto& at : psi.atoms()) {
      AtomEnv e;
      e.cnorm = norm(at.center);
      e.width = at.width;
      for (const auto& [n, v] : at.poly) {
        std::size_t deg = static_cast<std::size_t>(order(n));
        if (e.coef.size() <= deg) e.coef.resize(deg + 1, 0.0);
        e.coef[deg] += std::abs(v);
      }
      max_center_ = std::max(max_center_, e.cnorm);
      atoms_.push_back(std::move(e));
    }
  }

  double max_center() const { return max_center_; }
  double count(double r) const { return ball_volume(d_, r + mu_) / det_; }

  double tail(double R) const {
    if (atoms_.empty() || wnorm_ == 0.0) return 0.0;
    const double h = 0.25;
    double total = 0.0;
    double prev = -1.0;
    double prev_ratio = std::numeric_limits<double>::infinity();
    for (int n = 0; n < 200000; ++n) {
      double r1 = R + n * h;
      double r2 = r1 + h;
      double b = shell(r1, r2);
      total += b;
      if (b == 0.0) return total;
      if (prev > 0.0) {
        double ratio = b / prev;
        // Past the peak the shell bounds decay faster than geometrically with
        // ratio <= 1/2, so the remainder is at most b.
        if (ratio <= 0.5 && ratio <= prev_ratio) return total + b;
        prev_ratio = ratio;
      }
      prev = b;
    }
    return std::numeric_limits<double>::infinity();
  }

 private:
  struct AtomEnv {
    double cnorm = 0;
    double width = 1;
    std::vector<double> coef;
  };

  // All points with r1 < |λ| <= r2 (counted generously by the whole ball).
  double shell(double r1, double r2) const {
    double env = 0.0;
    for (const auto& a : atoms_) {
      double far = r2 + a.cnorm;
      double nearest = std::max(0.0, r1 - a.cnorm);
      double p = 0.0;
      double pw = 1.0;
      for (double c : a.coef) {
        p += c * pw;
        pw *= far;
      }
      env += p * std::exp(-kPi * a.width * nearest * nearest);
    }
    return count(r2) * std::pow(r2, mdeg_) * wnorm_ * env;
  }

  int d_;
  int mdeg_;
  double wnorm_;
  double det_ = 1;
  double mu_ = 0;
  double max_center_ = 0;
  std::vector<AtomEnv> atoms_;
};

double monomial(std::span<const double> x, const MultiIndex& m) {
  double v = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int p = 0; p < m[i]; ++p) v *= x[i];
  return v;
}

void pair_coset_term(const CombTerm& t, const TestFunction& phi, double budget, double max_points,
                     PairResult& out, Accumulator& acc) {
  const Coset& c = t.coset();
  const int d = c.dim();
  TestFunction psi = derivative(phi, t.k);
  const double sign = order(t.k) % 2 == 0 ? 1.0 : -1.0;
  TailModel model(c, t.m, t.coeff.norm(), psi);
  double R = model.max_center() + 0.5;
  double tail = model.tail(R);
  while (tail > budget) {
    R = R * 1.25 + 0.5;
    if (model.count(R) > max_points)
      throw NonconvergentTail("pairing needs more than " + std::to_string(max_points) +
                              " lattice points for tail tolerance " + std::to_string(budget));
    tail = model.tail(R);
  }
  std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  for_each_in_ball(c, origin, R, [&](std::span<const double> p) {
    Complex v = sign * monomial(p, t.m) * t.coeff(p) * psi(p);
    acc.add(v);
  });
  out.tail_bound += tail;
  out.radius = std::max(out.radius, R);
}

}  // namespace

PairResult pair(const CombDistribution& f, const TestFunction& phi, double tail_tol,
                double max_points) {
  if (!(tail_tol > 0)) throw std::invalid_argument("pair: tail tolerance must be positive");
  check_dim(f.dim(), phi.dim(), "pair");
  std::size_t coset_terms = 0;
  for (const auto& t : f.terms())
    if (t.is_coset()) ++coset_terms;
  const double budget = tail_tol / static_cast<double>(std::max<std::size_t>(1, coset_terms));

  PairResult out;
  Accumulator acc;
  for (const auto& t : f.terms()) {
    if (t.is_coset()) {
      pair_coset_term(t, phi, budget, max_points, out, acc);
    } else if (t.is_points()) {
      TestFunction psi = derivative(phi, t.k);
      const double sign = order(t.k) % 2 == 0 ? 1.0 : -1.0;
      const auto& ps = t.points();
      for (std::size_t i = 0; i < ps.points.size(); ++i) {
        std::vector<double> x = to_doubles(ps.points[i]);
        acc.add(sign * ps.weights[i] * psi(x));
      }
    } else {
      // ⟨D^k[y^m W], φ⟩ = (-1)^{|k|} Σ a_s F^{-1}[y^m D^k φ](s).
      TestFunction chi = inverse_fourier_testfn(times_monomial(derivative(phi, t.k), t.m));
      const double sign = order(t.k) % 2 == 0 ? 1.0 : -1.0;
      for (const auto& w : t.coeff.terms()) {
        std::vector<double> s = to_doubles(w.freq);
        acc.add(sign * w.amp * chi(s));
      }
    }
  }
  out.value = acc.value();
  out.points = acc.count;
  out.error_bound = out.tail_bound + acc.rounding_bound();
  return out;
}

PoissonResult poisson_check(const Lattice& lattice, const TestFunction& phi, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("poisson_check: tolerance must be positive");
  PoissonResult r;
  const double tail_tol = tol / 10.0;
  r.lhs = pair(CombDistribution::comb(Coset(lattice)), phi, tail_tol);
  CombDistribution dual_comb =
      scale(CombDistribution::comb(Coset(dual(lattice))), 1.0 / lattice.det_abs().to_double());
  r.rhs = pair(dual_comb, fourier_testfn(phi), tail_tol);
  r.residual = std::abs(r.lhs.value - r.rhs.value);
  r.ok = r.residual < tol;
  return r;
}

std::vector<SmoothedSample> smoothed_transform_samples(const CombDistribution& mu,
                                                       const TestFunction& psi,
                                                       const std::vector<std::vector<double>>& ts,
                                                       double tail_tol) {
  check_dim(mu.dim(), psi.dim(), "smoothed_transform_samples");
  for (const auto& t : mu.terms())
    if (order(t.k) != 0)
      throw UnsupportedTerm("smoothed_transform_samples expects a measure (no derivative terms)");
  CombDistribution spectrum = fourier(mu);
  TestFunction mirrored = reflect(psi);
  std::vector<SmoothedSample> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    check_dim(mu.dim(), static_cast<int>(ts[i].size()), "sample point");
    // ψ(t - x) as a function of x, and its inverse transform e^{2πi<t,y>} ψ̂(y).
    TestFunction kernel = translate(mirrored, ts[i]);
    SmoothedSample s;
    s.t = ts[i];
    s.direct = pair(mu, kernel, tail_tol);
    s.spectral = pair(spectrum, inverse_fourier_testfn(kernel), tail_tol);
    s.discrepancy = std::abs(s.direct.value - s.spectral.value);
    out[i] = std::move(s);
  });
  return out;
}

AlmostPeriodReport almost_periods(const WFunction& g, double epsilon,
                                  const AlmostPeriodOptions& opt) {
  if (!(epsilon > 0)) throw std::invalid_argument("almost_periods: epsilon must be positive");
  if (!(opt.pitch > 0) || !(opt.sample_pitch > 0) || !(opt.sample_span >= 0))
    throw std::invalid_argument("almost_periods: pitches must be positive");
  if (!(opt.hi >= opt.lo)) throw std::invalid_argument("almost_periods: empty window");
  const int d = g.dim();
  std::vector<double> v = opt.direction;
  if (v.empty()) {
    if (d != 1) throw std::invalid_argument("almost_periods: a scan direction is required for d > 1");
    v = {1.0};
  }
  check_dim(d, static_cast<int>(v.size()), "almost_periods direction");

  AlmostPeriodReport rep;
  rep.epsilon = epsilon;
  rep.lo = opt.lo;
  rep.hi = opt.hi;
  rep.pitch = opt.pitch;
  rep.sample_span = opt.sample_span;
  rep.sample_pitch = opt.sample_pitch;
  rep.direction = v;

  // Sample set: a uniform grid for d = 1, Halton points in [0, span]^d otherwise.
  const std::size_t nsamples = static_cast<std::size_t>(std::floor(opt.sample_span / opt.sample_pitch + 1e-9)) + 1;
  std::vector<std::vector<double>> samples(nsamples, std::vector<double>(static_cast<std::size_t>(d)));
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::size_t j = 0; j < nsamples; ++j) {
    if (d == 1) {
      samples[j][0] = static_cast<double>(j) * opt.sample_pitch;
      continue;
    }
    for (int i = 0; i < d; ++i) {
      int base = primes[i % 12];
      double f = 1.0, r = 0.0;
      for (std::size_t n = j + 1; n > 0; n /= static_cast<std::size_t>(base)) {
        f /= base;
        r += f * static_cast<double>(n % static_cast<std::size_t>(base));
      }
      samples[j][i] = r * opt.sample_span;
    }
  }
  rep.sample_count = nsamples;

  const auto& terms = g.terms();
  const std::size_t nt = terms.size();
  std::vector<Complex> base(nsamples * nt);
  std::vector<double> along(nt);
  for (std::size_t n = 0; n < nt; ++n) {
    std::vector<double> s = to_doubles(terms[n].freq);
    double a = 0.0;
    for (int i = 0; i < d; ++i) a += v[i] * s[i];
    along[n] = a;
    for (std::size_t j = 0; j < nsamples; ++j) {
      double turns = 0.0;
      for (int i = 0; i < d; ++i) turns += samples[j][i] * s[i];
      base[j * nt + n] = terms[n].amp * std::polar(1.0, kTwoPi * (turns - std::floor(turns)));
    }
  }

  const std::size_t ntau = static_cast<std::size_t>(std::floor((opt.hi - opt.lo) / opt.pitch + 1e-9)) + 1;
  std::vector<double> disc(ntau, 0.0);
  std::vector<double> bound(ntau, 0.0);
  parallel_for(ntau, [&](std::size_t i) {
    const double tau = opt.lo + static_cast<double>(i) * opt.pitch;
    std::vector<Complex> c(nt);
    double b = 0.0;
    for (std::size_t n = 0; n < nt; ++n) {
      double turns = tau * along[n];
      c[n] = std::polar(1.0, kTwoPi * (turns - std::floor(turns))) - 1.0;
      b += std::abs(terms[n].amp) * std::abs(c[n]);
    }
    bound[i] = b;
    double worst = 0.0;
    if (b > 0.0) {
      for (std::size_t j = 0; j < nsamples; ++j) {
        Complex s = 0.0;
        for (std::size_t n = 0; n < nt; ++n) s += base[j * nt + n] * c[n];
        worst = std::max(worst, std::abs(s));
        if (worst >= epsilon) break;
      }
    }
    disc[i] = worst;
  });

  for (std::size_t i = 0; i < ntau; ++i) {
    if (disc[i] >= epsilon) continue;
    rep.periods.push_back(opt.lo + static_cast<double>(i) * opt.pitch);
    rep.discrepancies.push_back(disc[i]);
    rep.bounds.push_back(bound[i]);
  }
  if (rep.periods.size() < 2) {
    rep.max_gap = std::numeric_limits<double>::infinity();
  } else {
    rep.max_gap = 0.0;
    for (std::size_t i = 1; i < rep.periods.size(); ++i)
      rep.max_gap = std::max(rep.max_gap, rep.periods[i] - rep.periods[i - 1]);
  }
  return rep;
}

}  // namespace quasicomb
