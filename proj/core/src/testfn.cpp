#include "quasicomb/testfn.hpp"

#include <cmath>
#include <numbers>

#include "quasicomb/errors.hpp"

namespace quasicomb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
const Complex kI(0.0, 1.0);

void poly_add(Poly& into, const MultiIndex& n, Complex c) {
  if (c == Complex(0.0, 0.0)) return;
  Complex& slot = into[n];
  slot += c;
  if (slot == Complex(0.0, 0.0)) into.erase(n);
}

Poly poly_scale(const Poly& p, Complex c) {
  Poly out;
  for (const auto& [n, v] : p) poly_add(out, n, v * c);
  return out;
}

Poly poly_sum(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [n, v] : b) poly_add(out, n, v);
  return out;
}

Poly poly_partial(const Poly& p, int j) {
  Poly out;
  for (const auto& [n, v] : p) {
    if (n[j] == 0) continue;
    MultiIndex m = n;
    m[j] -= 1;
    poly_add(out, m, v * static_cast<double>(n[j]));
  }
  return out;
}

Poly poly_times_var(const Poly& p, int j) {
  Poly out;
  for (const auto& [n, v] : p) {
    MultiIndex m = n;
    m[j] += 1;
    poly_add(out, m, v);
  }
  return out;
}

Complex poly_eval(const Poly& p, std::span<const double> u) {
  Complex s = 0.0;
  for (const auto& [n, v] : p) {
    double mono = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i)
      for (int e = 0; e < n[i]; ++e) mono *= u[i];
    s += v * mono;
  }
  return s;
}

double dotd(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> padded(std::vector<double> v, int dim) {
  if (v.empty()) v.assign(static_cast<std::size_t>(dim), 0.0);
  check_dim(dim, static_cast<int>(v.size()), "test function atom");
  return v;
}

// Transform of one atom (forward kernel e^{-2πi<x,y>}):
// p(u) e^{-πa|u|²} -> Q(η) e^{-π|η|²/a} with Q = Σ p_n (i/2π)^{|n|} T^n[a^{-d/2}],
// T_j Q = ∂_j Q - (2π/a) η_j Q; then centre b, modulation -c and the
// constant phase e^{2πi<c,b>}.
Atom transform_atom(const Atom& at, int dim) {
  const double a = at.width;
  Poly q;
  for (const auto& [n, coef] : at.poly) {
    Poly term{{zero_index(dim), Complex(std::pow(a, -0.5 * dim))}};
    for (int j = 0; j < dim; ++j)
      for (int e = 0; e < n[j]; ++e)
        term = poly_sum(poly_partial(term, j), poly_scale(poly_times_var(term, j), -kTwoPi / a));
    Complex factor = coef;
    for (int e = 0; e < order(n); ++e) factor *= kI / kTwoPi;
    q = poly_sum(q, poly_scale(term, factor));
  }
  Complex ph = std::polar(1.0, kTwoPi * dotd(at.center, at.modulation));
  Atom out;
  out.poly = poly_scale(q, ph);
  out.width = 1.0 / a;
  out.center = at.modulation;
  out.modulation = at.center;
  for (auto& v : out.modulation) v = -v;
  return out;
}

Atom reflect_atom(const Atom& at) {
  Atom out = at;
  out.poly.clear();
  for (const auto& [n, v] : at.poly) poly_add(out.poly, n, order(n) % 2 == 0 ? v : -v);
  for (auto& v : out.center) v = -v;
  for (auto& v : out.modulation) v = -v;
  return out;
}

}  // namespace

TestFunction::TestFunction(int dim, std::vector<Atom> atoms) : dim_(dim) {
  for (auto& at : atoms) {
    if (!(at.width > 0)) throw std::invalid_argument("test function atom width must be > 0");
    at.center = padded(std::move(at.center), dim);
    at.modulation = padded(std::move(at.modulation), dim);
    for (const auto& [n, v] : at.poly) check_dim(dim, static_cast<int>(n.size()), "atom polynomial");
    if (!at.poly.empty()) atoms_.push_back(std::move(at));
  }
}

TestFunction TestFunction::gaussian(int dim, double a, std::vector<double> c, std::vector<double> b) {
  Atom at;
  at.poly[zero_index(dim)] = 1.0;
  at.width = a;
  at.center = std::move(c);
  at.modulation = std::move(b);
  return TestFunction(dim, {std::move(at)});
}

TestFunction TestFunction::hermite(const MultiIndex& n) {
  const int dim = static_cast<int>(n.size());
  const double s = std::sqrt(kTwoPi);
  Poly p{{zero_index(dim), 1.0}};
  for (int j = 0; j < dim; ++j) {
    // H_0 = 1, H_1 = 2z, H_{k+1} = 2z H_k - 2k H_{k-1}, z = √(2π) x_j.
    std::vector<double> prev{1.0};
    std::vector<double> cur{1.0};
    if (n[j] >= 1) cur = {0.0, 2.0 * s};
    for (int k = 1; k < n[j]; ++k) {
      std::vector<double> next(cur.size() + 1, 0.0);
      for (std::size_t e = 0; e < cur.size(); ++e) next[e + 1] += 2.0 * s * cur[e];
      for (std::size_t e = 0; e < prev.size(); ++e) next[e] -= 2.0 * k * prev[e];
      prev = std::move(cur);
      cur = std::move(next);
    }
    Poly q;
    for (const auto& [m, v] : p)
      for (std::size_t e = 0; e < cur.size(); ++e) {
        MultiIndex mm = m;
        mm[j] += static_cast<int>(e);
        poly_add(q, mm, v * cur[e]);
      }
    p = std::move(q);
  }
  Atom at;
  at.poly = std::move(p);
  return TestFunction(dim, {std::move(at)});
}

Complex TestFunction::operator()(std::span<const double> x) const {
  check_dim(dim_, static_cast<int>(x.size()), "test function evaluation");
  Complex s = 0.0;
  std::vector<double> u(static_cast<std::size_t>(dim_));
  for (const auto& at : atoms_) {
    for (int i = 0; i < dim_; ++i) u[i] = x[i] - at.center[i];
    double r2 = dotd(u, u);
    double turns = dotd(x, at.modulation);
    s += poly_eval(at.poly, u) * std::exp(-kPi * at.width * r2) *
         std::polar(1.0, kTwoPi * (turns - std::floor(turns)));
  }
  return s;
}

double TestFunction::atom_envelope(std::size_t i, double rho) const {
  const Atom& at = atoms_.at(i);
  double s = 0.0;
  for (const auto& [n, v] : at.poly) s += std::abs(v) * std::pow(rho, order(n));
  return s * std::exp(-kPi * at.width * rho * rho);
}

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  check_dim(a.dim(), b.dim(), "test function sum");
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return TestFunction(a.dim(), std::move(atoms));
}

TestFunction scale(const TestFunction& f, Complex c) {
  std::vector<Atom> atoms = f.atoms();
  for (auto& at : atoms) at.poly = poly_scale(at.poly, c);
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction fourier_testfn(const TestFunction& f) {
  std::vector<Atom> atoms;
  for (const auto& at : f.atoms()) atoms.push_back(transform_atom(at, f.dim()));
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction inverse_fourier_testfn(const TestFunction& f) { return reflect(fourier_testfn(f)); }

TestFunction derivative(const TestFunction& f, const MultiIndex& k) {
  check_dim(f.dim(), static_cast<int>(k.size()), "derivative");
  std::vector<Atom> atoms = f.atoms();
  for (auto& at : atoms) {
    for (int j = 0; j < f.dim(); ++j)
      for (int e = 0; e < k[j]; ++e) {
        // ∂_j [P e^{-πa|u|²} e^{2πi<x,b>}] = (∂_j P - 2πa u_j P + 2πi b_j P) (...)
        Poly p = poly_partial(at.poly, j);
        p = poly_sum(p, poly_scale(poly_times_var(at.poly, j), -kTwoPi * at.width));
        p = poly_sum(p, poly_scale(at.poly, kTwoPi * kI * at.modulation[j]));
        at.poly = std::move(p);
      }
  }
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction times_monomial(const TestFunction& f, const MultiIndex& m) {
  check_dim(f.dim(), static_cast<int>(m.size()), "times_monomial");
  std::vector<Atom> atoms = f.atoms();
  for (auto& at : atoms) {
    // x_j = u_j + c_j.
    for (int j = 0; j < f.dim(); ++j)
      for (int e = 0; e < m[j]; ++e)
        at.poly = poly_sum(poly_times_var(at.poly, j), poly_scale(at.poly, at.center[j]));
  }
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction translate(const TestFunction& f, std::span<const double> t) {
  check_dim(f.dim(), static_cast<int>(t.size()), "translate");
  std::vector<Atom> atoms = f.atoms();
  for (auto& at : atoms) {
    double turns = dotd(t, at.modulation);
    at.poly = poly_scale(at.poly, std::polar(1.0, -kTwoPi * (turns - std::floor(turns))));
    for (int i = 0; i < f.dim(); ++i) at.center[i] += t[i];
  }
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction modulate(const TestFunction& f, std::span<const double> beta) {
  check_dim(f.dim(), static_cast<int>(beta.size()), "modulate");
  std::vector<Atom> atoms = f.atoms();
  for (auto& at : atoms)
    for (int i = 0; i < f.dim(); ++i) at.modulation[i] += beta[i];
  return TestFunction(f.dim(), std::move(atoms));
}

TestFunction reflect(const TestFunction& f) {
  std::vector<Atom> atoms;
  for (const auto& at : f.atoms()) atoms.push_back(reflect_atom(at));
  return TestFunction(f.dim(), std::move(atoms));
}

}  // namespace quasicomb
