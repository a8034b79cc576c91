// Acceptance run: one PASS/FAIL line per criterion. Reference values come
// from direct computations written here, not from the library under test.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "quasicomb/coset_ring.hpp"
#include "quasicomb/detect.hpp"
#include "quasicomb/fourier.hpp"
#include "quasicomb/numerics.hpp"

using namespace quasicomb;
using Clock = std::chrono::steady_clock;

namespace {

const double kPi = std::numbers::pi;
const Complex kI(0, 1);

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %-40s %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- Gaussians

// φ(x) = e^{-πa|x-c|²} e^{2πi<x,b>} and its transform
// φ̂(y) = a^{-d/2} e^{-π|y-b|²/a} e^{-2πi<y-b,c>}.
struct Gaussian {
  double a;
  std::vector<double> c, b;

  Complex value(const std::vector<double>& x) const {
    double r2 = 0, ph = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      r2 += (x[i] - c[i]) * (x[i] - c[i]);
      ph += x[i] * b[i];
    }
    return std::exp(-kPi * a * r2) * std::polar(1.0, 2 * kPi * ph);
  }
  Complex hat(const std::vector<double>& y) const {
    double r2 = 0, ph = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      r2 += (y[i] - b[i]) * (y[i] - b[i]);
      ph += (y[i] - b[i]) * c[i];
    }
    return std::pow(a, -0.5 * y.size()) * std::exp(-kPi * r2 / a) * std::polar(1.0, -2 * kPi * ph);
  }
  TestFunction build() const { return TestFunction::gaussian(static_cast<int>(c.size()), a, c, b); }
};

// Visits B n for every integer n with |(B n)_i - center_i| <= r on all
// coordinates. B must be triangular: `lower` means B[i][j] = 0 for j > i.
void for_each_triangular(const std::vector<std::vector<double>>& B, bool lower,
                         const std::vector<double>& center, double r,
                         const std::function<void(const std::vector<double>&)>& visit) {
  const int d = static_cast<int>(B.size());
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = lower ? i : d - 1 - i;
  std::vector<long> n(d, 0);
  std::vector<double> x(d);
  std::function<void(int)> rec = [&](int level) {
    if (level == d) {
      for (int i = 0; i < d; ++i) {
        x[i] = 0;
        for (int j = 0; j < d; ++j) x[i] += B[i][j] * n[j];
      }
      visit(x);
      return;
    }
    int i = order[level];
    double partial = 0;
    for (int l = 0; l < level; ++l) partial += B[i][order[l]] * n[order[l]];
    double piv = B[i][i];
    double lo = (center[i] - r - partial) / piv, hi = (center[i] + r - partial) / piv;
    if (lo > hi) std::swap(lo, hi);
    for (long k = static_cast<long>(std::ceil(lo)); k <= static_cast<long>(std::floor(hi)); ++k) {
      n[i] = k;
      rec(level + 1);
    }
  };
  rec(0);
}

// The library's canonical basis must generate the same lattice as the raw one.
bool same_lattice(const oracle::QMat& raw, const oracle::QMat& other) {
  const std::size_t d = raw.size();
  for (int pass = 0; pass < 2; ++pass) {
    const auto& A = pass == 0 ? raw : other;
    const auto& Bm = pass == 0 ? other : raw;
    for (std::size_t j = 0; j < d; ++j) {
      oracle::QVec col(d);
      for (std::size_t i = 0; i < d; ++i) col[i] = Bm[i][j];
      if (!oracle::in_lattice(A, col)) return false;
    }
  }
  return true;
}

std::vector<std::vector<double>> to_double(const oracle::QMat& m) {
  std::vector<std::vector<double>> out(m.size(), std::vector<double>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) out[i][j] = m[i][j].get_d();
  return out;
}

// Transpose of the inverse, over Q.
oracle::QMat inverse_transpose(const oracle::QMat& m) {
  const std::size_t d = m.size();
  oracle::QMat out(d, oracle::QVec(d));
  for (std::size_t j = 0; j < d; ++j) {
    oracle::QVec e(d, 0);
    e[j] = 1;
    auto col = *oracle::solve(m, e);  // column j of m^{-1}
    for (std::size_t i = 0; i < d; ++i) out[j][i] = col[i];
  }
  return out;
}

// ---------------------------------------------------------------- Hermite

// h_n(x) = H_n(√(2π) x) e^{-πx²}, physicists' H_n.
double hermite_fn(int n, double x) {
  double z = std::sqrt(2 * kPi) * x;
  double h0 = 1, h1 = 2 * z;
  if (n == 0) return std::exp(-kPi * x * x);
  for (int k = 1; k < n; ++k) {
    double h2 = 2 * z * h1 - 2 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1 * std::exp(-kPi * x * x);
}

// ψ(x) = h_{n1}(x1 - c1) h_{n2}(x2 - c2); ψ̂(y) = e^{-2πi<y,c>} (-i)^{n1+n2} h_n(y).
struct ShiftedHermite {
  int n1, n2;
  double c1, c2;
  Complex hat(double y1, double y2) const {
    return std::polar(1.0, -2 * kPi * (y1 * c1 + y2 * c2)) * std::pow(-kI, n1 + n2) *
           hermite_fn(n1, y1) * hermite_fn(n2, y2);
  }
  TestFunction build() const {
    std::vector<double> c = {c1, c2};
    return translate(TestFunction::hermite({n1, n2}), c);
  }
};

// Σ_{x ∈ Z², |x_i| <= R} w(x) g(x).
Complex z2_sum(const std::function<Complex(int, int)>& g, const std::function<double(int, int)>& w,
               int R = 14) {
  Complex s = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) s += w(a, b) * g(a, b);
  return s;
}

// ---------------------------------------------------------------- integer lattices

// Membership in an integer lattice via the adjugate: p ∈ B Z^d iff adj(B) p ≡ 0 mod det B.
struct IntLattice {
  int d;
  std::vector<std::vector<long>> adj;
  long det;

  explicit IntLattice(const std::vector<std::vector<long>>& B) : d(static_cast<int>(B.size())) {
    adj.assign(d, std::vector<long>(d));
    if (d == 1) {
      adj[0][0] = 1;
      det = B[0][0];
    } else if (d == 2) {
      adj = {{B[1][1], -B[0][1]}, {-B[1][0], B[0][0]}};
      det = B[0][0] * B[1][1] - B[0][1] * B[1][0];
    } else {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          adj[i][j] = B[r0][c0] * B[r1][c1] - B[r0][c1] * B[r1][c0];
        }
      det = 0;
      for (int j = 0; j < 3; ++j) det += B[0][j] * adj[j][0];
    }
  }
  bool contains(const std::vector<long>& p) const {
    for (int i = 0; i < d; ++i) {
      long s = 0;
      for (int j = 0; j < d; ++j) s += adj[i][j] * p[j];
      if (s % det != 0) return false;
    }
    return true;
  }
};

void for_each_int_point(int d, long half, const std::function<void(const std::vector<long>&)>& fn) {
  std::vector<long> p(d, -half);
  while (true) {
    fn(p);
    int pos = 0;
    while (pos < d && ++p[pos] > half) p[pos++] = -half;
    if (pos == d) return;
  }
}

std::vector<std::vector<long>> scaled_integer(const oracle::QMat& m, long scale) {
  std::vector<std::vector<long>> out(m.size(), std::vector<long>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      mpq_class v = m[i][j] * scale;
      out[i][j] = v.get_num().get_si();
    }
  return out;
}

// ---------------------------------------------------------------- criteria

void criterion1() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-0.5, 0.5), width(0.6, 1.6);
  double worst_residual = 0, worst_oracle = 0;
  bool bases_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + trial % 3;
    oracle::QMat raw = oracle::random_basis(rng, d, -3, 3, 3);
    Lattice l = Lattice::canonicalize(oracle::to_rmatrix(raw));
    oracle::QMat B = oracle::to_qmat(l.basis());
    bases_ok = bases_ok && same_lattice(raw, B);
    Gaussian g{width(rng), std::vector<double>(d), std::vector<double>(d)};
    for (int i = 0; i < d; ++i) {
      g.c[i] = u(rng);
      g.b[i] = u(rng);
    }
    auto res = poisson_check(l, g.build(), 1e-8);
    worst_residual = std::max(worst_residual, res.residual);

    double r_direct = std::sqrt(40 / (kPi * g.a)) + 1;
    Complex lhs = 0;
    for_each_triangular(to_double(B), true, g.c, r_direct,
                        [&](const std::vector<double>& x) { lhs += g.value(x); });
    oracle::QMat D = inverse_transpose(B);
    double r_dual = std::sqrt(40 * g.a / kPi) + 1;
    Complex rhs = 0;
    for_each_triangular(to_double(D), false, g.b, r_dual,
                        [&](const std::vector<double>& y) { rhs += g.hat(y); });
    rhs /= std::fabs(oracle::det(B).get_d());
    worst_oracle = std::max({worst_oracle, std::abs(res.lhs.value - lhs), std::abs(res.rhs.value - rhs),
                             std::abs(lhs - rhs)});
  }
  double secs = seconds_since(t0);
  bool ok = bases_ok && worst_residual < 1e-8 && worst_oracle < 1e-8 && secs < 10;
  report(1, "Poisson comb identity", ok,
         fmt("max_residual=%.2e", worst_residual) + fmt(" max_oracle_diff=%.2e", worst_oracle) +
             fmt(" time=%.2fs", secs));
}

void criterion2() {
  auto t0 = Clock::now();
  const Coset z2(Lattice::integer(2));
  CombDistribution f(2, {CombTerm{z2, {1, 0}, {0, 0}, WFunction::constant(2, 1.0)}});
  CombDistribution ft = fourier(f);
  CombDistribution expect =
      scale(apply_derivative(CombDistribution::comb(z2), {1, 0}), kI / (2 * kPi));
  bool structural = near(ft, expect, 1e-12);
  std::vector<ShiftedHermite> phis = {
      {0, 0, 0.3, -0.1}, {1, 0, 0.0, 0.0}, {1, 2, 0.2, 0.4}, {2, 1, -0.35, 0.1}, {3, 0, 0.15, -0.25}};
  double worst = 0;
  for (const auto& p : phis) {
    Complex lhs = pair(ft, p.build()).value;
    Complex rhs = z2_sum([&](int a, int b) { return p.hat(a, b); }, [](int a, int) { return a; });
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  double secs = seconds_since(t0);
  bool ok = structural && worst < 1e-8 && secs < 1;
  report(2, "Unbounded-coefficient example", ok,
         std::string("structural=") + (structural ? "yes" : "no") + fmt(" max_residual=%.2e", worst) +
             fmt(" time=%.3fs", secs));
}

void criterion3() {
  const double alpha = 1 / std::sqrt(5.0);
  const Coset z2(Lattice::integer(2));
  WFunction w(2, {WTerm{-0.5 * kI, {Real::numeric(alpha), Real::numeric(0)}},
                  WTerm{0.5 * kI, {Real::numeric(-alpha), Real::numeric(0)}}});
  CombDistribution f(2, {CombTerm{z2, {0, 0}, {0, 0}, w}});
  CombDistribution ft = fourier(f);
  Vec a = {Real::numeric(alpha), Real::numeric(0)};
  CombDistribution expect =
      scale(CombDistribution::comb(Coset(Lattice::integer(2), a)), 1.0 / (2.0 * kI)) +
      scale(CombDistribution::comb(Coset(Lattice::integer(2), vec_neg(a))), -1.0 / (2.0 * kI));
  bool structural = near(ft, expect, 1e-12);
  std::vector<Gaussian> phis = {{1.0, {0, 0}, {0, 0}},
                                {0.7, {0.3, -0.2}, {0.1, 0.0}},
                                {1.3, {-0.4, 0.1}, {0.25, -0.3}},
                                {0.9, {0.05, 0.45}, {-0.2, 0.2}},
                                {1.6, {0.2, 0.2}, {0.4, 0.1}}};
  double worst = 0;
  for (const auto& g : phis) {
    Complex lhs = pair(ft, g.build()).value;
    Complex rhs = z2_sum([&](int x1, int x2) { return g.hat({double(x1), double(x2)}); },
                         [&](int x1, int) { return std::sin(2 * kPi * x1 / std::sqrt(5.0)); });
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  bool ok = structural && worst < 1e-8;
  report(3, "Sine-coefficient example", ok,
         std::string("structural=") + (structural ? "yes" : "no") + fmt(" max_residual=%.2e", worst));
}

std::vector<CombDistribution> parseval_corpus(std::mt19937_64& rng) {
  std::vector<CombDistribution> out;
  std::uniform_int_distribution<int> small(0, 1), num(-3, 3), den(1, 4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 24; ++i) {
    int d = 1 + i % 2;
    std::vector<CombTerm> terms;
    int nterms = 1 + i % 3;
    for (int t = 0; t < nterms; ++t) {
      MultiIndex m(d), k(d);
      for (int j = 0; j < d; ++j) {
        m[j] = small(rng);
        k[j] = small(rng);
      }
      if (i % 6 == 5 && t == 0) {
        PointSupport ps;
        for (int p = 0; p < 3; ++p) {
          Point x(d);
          for (auto& v : x) v = Real::rational(num(rng), den(rng));
          ps.points.push_back(x);
          ps.weights.push_back({u(rng), u(rng)});
        }
        terms.push_back(CombTerm{ps, zero_index(d), k, WFunction::constant(d, 1.0)});
        continue;
      }
      oracle::QMat b = oracle::random_basis(rng, d, -2, 2, 2);
      Vec off(d), freq(d);
      for (int j = 0; j < d; ++j) {
        off[j] = Real::rational(num(rng), den(rng));
        freq[j] = Real::rational(num(rng), den(rng));
      }
      WFunction w(d, {WTerm{{u(rng), u(rng)}, freq}, WTerm{{u(rng), 0}, Vec(d, Real(0))}});
      terms.push_back(CombTerm{Coset(Lattice::canonicalize(oracle::to_rmatrix(b)), off), m, k, w});
    }
    out.emplace_back(d, std::move(terms));
  }
  return out;
}

void criterion4() {
  std::mt19937_64 rng(1004);
  auto corpus = parseval_corpus(rng);
  std::uniform_real_distribution<double> u(-0.5, 0.5), width(0.7, 1.5);
  double worst_ratio = 0;
  int violations = 0, pairs = 0;
  for (const auto& f : corpus) {
    int d = f.dim();
    CombDistribution ft = fourier(f);
    for (int j = 0; j < 5; ++j) {
      std::vector<double> c(d), b(d);
      for (int i = 0; i < d; ++i) {
        c[i] = u(rng);
        b[i] = u(rng);
      }
      TestFunction phi = TestFunction::gaussian(d, width(rng), c, b);
      if (j % 2 == 1) phi = times_monomial(phi, unit_index(d, 0));
      auto lhs = pair(ft, phi);
      auto rhs = pair(f, fourier_testfn(phi));
      double diff = std::abs(lhs.value - rhs.value);
      double allowed = lhs.error_bound + rhs.error_bound;
      if (diff > allowed) ++violations;
      worst_ratio = std::max(worst_ratio, diff / allowed);
      ++pairs;
    }
  }
  bool ok = corpus.size() >= 20 && violations == 0;
  report(4, "Parseval law", ok,
         "distributions=" + std::to_string(corpus.size()) + " pairs=" + std::to_string(pairs) +
             " violations=" + std::to_string(violations) + fmt(" max_diff/bound=%.3f", worst_ratio));
}

struct RefLeaf {
  std::vector<std::vector<long>> basis;
  std::vector<long> offset;
};

struct RefExpr {
  CosetExpression::Op op;
  RefLeaf leaf;
  std::vector<RefExpr> args;
  std::vector<IntLattice> cache;

  bool contains(const std::vector<long>& p) {
    switch (op) {
      case CosetExpression::Op::Leaf: {
        if (cache.empty()) cache.emplace_back(leaf.basis);
        std::vector<long> q(p);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= leaf.offset[i];
        return cache[0].contains(q);
      }
      case CosetExpression::Op::Union:
        for (auto& a : args)
          if (a.contains(p)) return true;
        return false;
      case CosetExpression::Op::Intersection:
        for (auto& a : args)
          if (!a.contains(p)) return false;
        return true;
      case CosetExpression::Op::Difference:
        if (!args[0].contains(p)) return false;
        for (std::size_t i = 1; i < args.size(); ++i)
          if (args[i].contains(p)) return false;
        return true;
    }
    return false;
  }

  CosetExpression build() const {
    if (op == CosetExpression::Op::Leaf) {
      std::vector<std::vector<Real>> rows;
      for (const auto& r : leaf.basis) {
        rows.emplace_back();
        for (long v : r) rows.back().emplace_back(v);
      }
      Vec off;
      for (long v : leaf.offset) off.emplace_back(v);
      return CosetExpression::leaf(Coset(Lattice::canonicalize(RMatrix::from_rows(rows)), off));
    }
    std::vector<CosetExpression> sub;
    for (const auto& a : args) sub.push_back(a.build());
    return CosetExpression::make(op, std::move(sub));
  }
};

RefExpr random_expression(std::mt19937_64& rng, int d, int leaves) {
  std::uniform_int_distribution<int> diag(1, 4), shear(0, 3), off(0, 4), opd(0, 2);
  std::vector<RefExpr> pool;
  for (int i = 0; i < leaves; ++i) {
    RefLeaf leaf;
    leaf.basis.assign(d, std::vector<long>(d, 0));
    for (int r = 0; r < d; ++r) {
      leaf.basis[r][r] = diag(rng);
      for (int c = 0; c < r; ++c) leaf.basis[r][c] = shear(rng);
    }
    leaf.offset.resize(d);
    for (auto& v : leaf.offset) v = off(rng);
    pool.push_back(RefExpr{CosetExpression::Op::Leaf, leaf, {}, {}});
  }
  static const CosetExpression::Op ops[] = {CosetExpression::Op::Union,
                                            CosetExpression::Op::Difference,
                                            CosetExpression::Op::Intersection};
  while (pool.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 2);
    std::size_t i = pick(rng);
    RefExpr node{ops[opd(rng)], {}, {pool[i], pool[i + 1]}, {}};
    pool.erase(pool.begin() + static_cast<long>(i), pool.begin() + static_cast<long>(i) + 2);
    pool.insert(pool.begin() + static_cast<long>(i), node);
  }
  return pool.front();
}

void criterion5() {
  std::mt19937_64 rng(1005);
  long checked = 0, mismatches = 0;
  for (int trial = 0; trial < 10; ++trial) {
    int d = 1 + trial % 3;
    RefExpr ref = random_expression(rng, d, 2 + trial % 4);
    auto sys = normalize(ref.build());
    // The refinement lives inside Z^d (integer bases and offsets).
    for_each_int_point(d, 10, [&](const std::vector<long>& p) {
      Point pt;
      for (long v : p) pt.emplace_back(v);
      long want = ref.contains(p) ? 1 : 0;
      if (sys.indicator(pt) != want) ++mismatches;
      ++checked;
    });
  }
  report(5, "Coset-ring normalization", mismatches == 0,
         "points=" + std::to_string(checked) + " mismatches=" + std::to_string(mismatches));
}

void criterion6() {
  std::mt19937_64 rng(1006);
  int dual_fail = 0, inter_fail = 0, index_fail = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + trial % 3;
    Lattice l = Lattice::canonicalize(oracle::to_rmatrix(oracle::random_basis(rng, d, -3, 3, 3)));
    if (!(dual(dual(l)) == l)) ++dual_fail;
  }
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + trial % 3;
    oracle::QMat A = oracle::random_basis(rng, d, -3, 3, 2);
    oracle::QMat Bq = oracle::random_basis(rng, d, -3, 3, 2);
    Lattice c = intersect(Lattice::canonicalize(oracle::to_rmatrix(A)),
                          Lattice::canonicalize(oracle::to_rmatrix(Bq)));
    // Scale by 2 so every lattice lives in Z^d; the box [-12,12]^d becomes [-24,24]^d.
    IntLattice ia(scaled_integer(A, 2)), ib(scaled_integer(Bq, 2));
    IntLattice ic(scaled_integer(oracle::to_qmat(c.basis()), 2));
    bool ok = true;
    for_each_int_point(d, 24, [&](const std::vector<long>& p) {
      if ((ia.contains(p) && ib.contains(p)) != ic.contains(p)) ok = false;
    });
    if (!ok) ++inter_fail;
  }
  for (int trial = 0; trial < 50; ++trial) {
    int d = 1 + trial % 3;
    oracle::QMat L = oracle::random_basis(rng, d, -3, 3, 3);
    oracle::QMat M = oracle::random_basis(rng, d, -3, 3);
    oracle::QMat S(d, oracle::QVec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) S[i][j] += L[i][k] * M[k][j];
    Lattice lat = Lattice::canonicalize(oracle::to_rmatrix(L));
    Lattice sub = Lattice::canonicalize(oracle::to_rmatrix(S));
    mpq_class want = abs(oracle::det(M));
    mpq_class ratio = abs(oracle::det(S)) / abs(oracle::det(L));
    mpz_class idx = index_in(sub, lat);
    if (mpq_class(idx) != want || ratio != want) ++index_fail;
  }
  bool ok = dual_fail == 0 && inter_fail == 0 && index_fail == 0;
  report(6, "Lattice algebra oracles", ok,
         "dual_fail=" + std::to_string(dual_fail) + "/100 intersect_fail=" + std::to_string(inter_fail) +
             "/50 index_fail=" + std::to_string(index_fail) + "/50");
}

void criterion7() {
  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> u(-1, 1), mag(1.0, 2.0), q(0.3, 0.8), tw(-100, 100);
  const double tau = 1e-8;
  double worst = 0;
  int max_order = 0;
  std::size_t max_terms = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + trial % 2;
    Complex c = std::polar(mag(rng), kPi * u(rng));
    int n = 2 + trial % 3;
    double budget = q(rng) * std::abs(c);
    std::vector<double> raw_w(n);
    double total = 0;
    for (auto& v : raw_w) total += (v = 0.2 + std::fabs(u(rng)));
    struct T {
      Complex a;
      std::vector<double> s;
    };
    std::vector<T> terms = {{c, std::vector<double>(d, 0.0)}};
    for (int i = 0; i < n; ++i) {
      std::vector<double> s(d);
      for (auto& v : s) v = 3 * u(rng);
      terms.push_back({std::polar(budget * raw_w[i] / total, kPi * u(rng)), s});
    }
    std::vector<WTerm> wt;
    for (const auto& t : terms) wt.push_back(WTerm{t.a, from_doubles(t.s)});
    WFunction f(d, wt);
    auto r = w_reciprocal(f, c, tau);
    max_order = std::max(max_order, r.order);
    max_terms = std::max(max_terms, r.g.terms().size());
    for (int k = 0; k < 1000; ++k) {
      std::vector<double> x(d);
      for (auto& v : x) v = tw(rng);
      Complex fx = 0, gx = 0;
      for (const auto& t : terms) {
        double p = 0;
        for (int i = 0; i < d; ++i) p += t.s[i] * x[i];
        fx += t.a * std::polar(1.0, 2 * kPi * p);
      }
      for (const auto& t : r.g.terms()) {
        double p = 0;
        for (int i = 0; i < d; ++i) p += t.freq[i].to_double() * x[i];
        gx += t.amp * std::polar(1.0, 2 * kPi * p);
      }
      worst = std::max(worst, std::abs(fx * gx - 1.0));
    }
  }
  report(7, "Constructive W reciprocal", worst <= tau, fmt("sup|f*g-1|=%.2e", worst) + " tau=1e-08 max_order=" +
                                                   std::to_string(max_order) + " max_terms=" + std::to_string(max_terms));
}

void criterion8() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(1008);
  const int d = 2;
  const long half = 50;
  int exact = 0;
  std::string first_failure;
  for (int trial = 0; trial < 25; ++trial) {
    int J = 1 + trial % 3;
    auto truth = oracle::random_cosets(rng, d, J);
    std::vector<IntLattice> lat;
    for (const auto& c : truth) lat.emplace_back(scaled_integer(c.basis, 1));
    auto in_truth = [&](const std::vector<long>& p) {
      for (std::size_t j = 0; j < truth.size(); ++j) {
        std::vector<long> q(p);
        for (int i = 0; i < d; ++i) q[i] -= truth[j].offset[i].get_num().get_si();
        if (lat[j].contains(q)) return true;
      }
      return false;
    };
    std::vector<std::vector<double>> pts;
    for_each_int_point(d, half, [&](const std::vector<long>& p) {
      if (in_truth(p)) pts.push_back({double(p[0]), double(p[1])});
    });
    auto cloud = PointCloud::from_points(pts, {}, {-double(half), -double(half)},
                                         {double(half), double(half)});
    bool ok = true;
    try {
      auto fit = fit_cosets(cloud, 8, 1e-6);
      // Fitted cosets must be integral so the integer grid sees all their points.
      for (const auto& c : fit.cosets) {
        if (!c.is_exact() || c.lattice().denominator() != 1) ok = false;
        for (const auto& v : c.offset())
          if (!v.is_exact() || v.rational().get_den() != 1) ok = false;
      }
      if (ok)
        for_each_int_point(d, half, [&](const std::vector<long>& p) {
          Point pt = {Real(p[0]), Real(p[1])};
          bool fitted = false;
          for (const auto& c : fit.cosets) fitted = fitted || c.contains(pt);
          if (fitted != in_truth(p)) ok = false;
        });
    } catch (const Error& e) {
      ok = false;
      if (first_failure.empty()) first_failure = e.what();
    }
    if (ok) ++exact;
    else if (first_failure.empty()) first_failure = "trial " + std::to_string(trial);
  }
  double secs = seconds_since(t0);
  bool ok = exact == 25 && secs < 30;
  report(8, "Detection round trip", ok,
         "exact=" + std::to_string(exact) + "/25" + fmt(" time=%.2fs", secs) +
             (first_failure.empty() ? "" : " first_failure=" + first_failure));
}

// Least-squares slope of log(Σ |weights| in the ball) against log r, computed directly.
double direct_growth(const std::function<double(int, int)>& w, const std::vector<double>& radii) {
  std::vector<double> lx, ly;
  for (double r : radii) {
    double s = 0;
    int R = static_cast<int>(r);
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        if (a * a + b * b <= r * r) s += std::fabs(w(a, b));
    lx.push_back(std::log(r));
    ly.push_back(std::log(s));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= lx.size();
  my /= ly.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

void criterion9() {
  std::vector<double> radii = {10, 20, 40, 80};
  const Coset z2(Lattice::integer(2));
  double g0 = growth_exponent(CombDistribution::comb(z2), radii);
  double g1 = growth_exponent(
      CombDistribution(2, {CombTerm{z2, {1, 0}, {0, 0}, WFunction::constant(2, 1.0)}}), radii);
  double o0 = direct_growth([](int, int) { return 1.0; }, radii);
  double o1 = direct_growth([](int a, int) { return double(a); }, radii);
  bool ok = std::fabs(g0 - 2.0) <= 0.1 && std::fabs(g1 - 3.0) <= 0.15 && std::fabs(g0 - o0) < 1e-9 &&
            std::fabs(g1 - o1) < 1e-9;
  report(9, "Growth diagnostics", ok,
         fmt("comb=%.4f", g0) + fmt(" weighted=%.4f", g1) + fmt(" direct=(%.4f,", o0) + fmt(" %.4f)", o1));
}

void criterion10() {
  AlmostPeriodOptions opt;
  opt.lo = 0;
  opt.hi = 50;
  opt.pitch = 0.01;
  auto rep = almost_periods(WFunction::exponential({Real(1)}, 1.0), 0.1, opt);
  int missing = 0;
  for (int n = 0; n <= 50; ++n) {
    bool found = false;
    for (double p : rep.periods) found = found || std::fabs(p - n) < 1e-9;
    if (!found) ++missing;
  }
  // sup_t |g(t+τ) - g(t)| = |e^{2πiτ} - 1| for g = e^{2πit}.
  int false_hits = 0;
  for (double p : rep.periods)
    if (std::abs(std::polar(1.0, 2 * kPi * p) - 1.0) > 0.1 + 1e-12) ++false_hits;
  bool part1 = missing == 0 && false_hits == 0 && rep.max_gap <= 1 + opt.pitch;

  const double alpha = 1 / std::sqrt(5.0);
  WFunction sine(2, {WTerm{-0.5 * kI, {Real::numeric(alpha), Real::numeric(0)}},
                     WTerm{0.5 * kI, {Real::numeric(-alpha), Real::numeric(0)}}});
  AlmostPeriodOptions opt2;
  opt2.lo = 0;
  opt2.hi = 200;
  opt2.pitch = 0.01;
  opt2.direction = {1.0, 0.0};
  auto rep2 = almost_periods(sine, 0.5, opt2);
  bool part2 = !rep2.periods.empty() && std::isfinite(rep2.max_gap);
  report(10, "Almost-period diagnostics", part1 && part2,
         "missing_integers=" + std::to_string(missing) + fmt(" max_gap=%.3f", rep.max_gap) +
             " sine_periods=" + std::to_string(rep2.periods.size()) + fmt(" sine_max_gap=%.3f", rep2.max_gap));
}

}  // namespace

// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv) {
  const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    int id = std::atoi(argv[a]);
    if (id >= 1 && id <= static_cast<int>(criteria.size())) selected[id - 1] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "(exception)", false, e.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
