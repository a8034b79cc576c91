#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

#include "cli.hpp"
#include "quasicomb/coset_ring.hpp"
#include "quasicomb/fourier.hpp"
#include "quasicomb/numerics.hpp"

namespace quasicomb::cli {

namespace {

using io::Json;

const double kPi = std::numbers::pi;

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

// Σ_{x ∈ Z², |x| <= r} w(x) ψ(x), summed directly.
Complex direct_sum(const TestFunction& psi, const std::function<double(int, int)>& w, int r) {
  Complex s = 0;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) {
      if (a * a + b * b > r * r) continue;
      std::vector<double> x = {static_cast<double>(a), static_cast<double>(b)};
      s += w(a, b) * psi(x);
    }
  return s;
}

ExampleResult poisson_gaussian() {
  const double tol = 1e-10;
  TestFunction phi = TestFunction::gaussian(2, 1.0, {0.3, -0.2}, {0.1, 0.25});
  auto res = poisson_check(Lattice::integer(2), phi, tol);
  Json rep{{"example", "poisson-gaussian"},
           {"lhs", complex_json(res.lhs.value)},
           {"rhs", complex_json(res.rhs.value)},
           {"residual", res.residual},
           {"tolerance", tol}};
  return {res.ok, rep};
}

ExampleResult unbounded() {
  const double tol = 1e-8;
  const Coset z2(Lattice::integer(2));
  CombDistribution f(2, {CombTerm{z2, {1, 0}, {0, 0}, WFunction::constant(2, 1.0)}});
  CombDistribution ft = fourier(f);
  CombDistribution expect =
      scale(apply_derivative(CombDistribution::comb(z2), {1, 0}), Complex(0, 1 / (2 * kPi)));
  bool structural = near(ft, expect);
  TestFunction phi = TestFunction::hermite({1, 2});
  Complex lhs = pair(ft, phi).value;
  Complex rhs = direct_sum(fourier_testfn(phi), [](int a, int) { return a; }, 12);
  double residual = std::abs(lhs - rhs);
  Json rep{{"example", "ex-unbounded"},
           {"structural_match", structural},
           {"lhs", complex_json(lhs)},
           {"rhs", complex_json(rhs)},
           {"residual", residual},
           {"tolerance", tol}};
  return {structural && residual < tol, rep};
}

ExampleResult sine() {
  const double tol = 1e-8;
  const double alpha = 1 / std::sqrt(5.0);
  const Coset z2(Lattice::integer(2));
  WFunction w(2, {WTerm{Complex(0, -0.5), {Real::numeric(alpha), Real::numeric(0)}},
                  WTerm{Complex(0, 0.5), {Real::numeric(-alpha), Real::numeric(0)}}});
  CombDistribution f(2, {CombTerm{z2, {0, 0}, {0, 0}, w}});
  CombDistribution ft = fourier(f);
  Vec a = {Real::numeric(alpha), Real::numeric(0)};
  CombDistribution expect =
      scale(CombDistribution::comb(Coset(Lattice::integer(2), a)), Complex(0, -0.5)) +
      scale(CombDistribution::comb(Coset(Lattice::integer(2), vec_neg(a))), Complex(0, 0.5));
  bool structural = near(ft, expect);
  TestFunction phi = TestFunction::gaussian(2, 0.8, {0.1, 0.0}, {0.2, -0.1});
  Complex lhs = pair(ft, phi).value;
  Complex rhs = direct_sum(
      fourier_testfn(phi), [&](int x1, int) { return std::sin(2 * kPi * x1 * alpha); }, 12);
  double residual = std::abs(lhs - rhs);
  Json rep{{"example", "ex-sine"},
           {"structural_match", structural},
           {"lhs", complex_json(lhs)},
           {"rhs", complex_json(rhs)},
           {"residual", residual},
           {"tolerance", tol}};
  return {structural && residual < tol, rep};
}

ExampleResult coset_split() {
  const double tol = 1e-10;
  auto even = Lattice::diagonal({Real(2), Real(2)});
  auto expr = CosetExpression::difference(CosetExpression::leaf(Coset(Lattice::integer(2))),
                                          {CosetExpression::leaf(Coset(even))});
  NormalizedSystem sys = normalize(expr);
  long mismatches = 0;
  for (long a = -10; a <= 10; ++a)
    for (long b = -10; b <= 10; ++b) {
      Point p = {Real(a), Real(b)};
      if (sys.indicator(p) != (membership(expr, p) ? 1 : 0)) ++mismatches;
    }
  // Comb identity: δ_{Z²} - δ_{2Z²} = Σ over the normalized cosets.
  TestFunction phi = TestFunction::gaussian(2, 0.5, {0.25, 0.4});
  Complex lhs = pair(CombDistribution::comb(Coset(Lattice::integer(2))), phi).value -
                pair(CombDistribution::comb(Coset(even)), phi).value;
  CombDistribution parts(2);
  for (const auto& c : sys.full_rank_cosets) parts = parts + CombDistribution::comb(c);
  Complex rhs = pair(parts, phi).value;
  double residual = std::abs(lhs - rhs);
  Json cosets = Json::array();
  for (const auto& c : sys.full_rank_cosets) cosets.push_back(io::encode(c));
  Json rep{{"example", "coset-split"},
           {"cosets", cosets},
           {"indicator_mismatches", mismatches},
           {"lhs", complex_json(lhs)},
           {"rhs", complex_json(rhs)},
           {"residual", residual},
           {"tolerance", tol}};
  bool ok = mismatches == 0 && sys.full_rank_cosets.size() == 3 && sys.residue.empty() &&
            residual < tol;
  return {ok, rep};
}

const std::map<std::string, std::function<ExampleResult()>>& table() {
  static const std::map<std::string, std::function<ExampleResult()>> t = {
      {"poisson-gaussian", poisson_gaussian},
      {"ex-unbounded", unbounded},
      {"ex-sine", sine},
      {"coset-split", coset_split},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : table()) n.push_back(k);
    return n;
  }();
  return names;
}

ExampleResult run_example(const std::string& name) {
  auto it = table().find(name);
  if (it == table().end()) throw std::out_of_range("unknown example '" + name + "'");
  return it->second();
}

}  // namespace quasicomb::cli
