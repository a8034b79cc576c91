#include <gtest/gtest.h>

#include <cmath>

#include "../oracles.hpp"
#include "quasicomb/distribution.hpp"

using namespace quasicomb;

namespace {

CombDistribution weighted_comb(int d, const MultiIndex& m) {
  return CombDistribution(
      d, {CombTerm{Coset(Lattice::integer(d)), m, zero_index(d), WFunction::constant(d, 1.0)}});
}

}  // namespace

TEST(Distribution, MultiIndexHelpers) {
  EXPECT_EQ(order({1, 0, 2}), 3);
  EXPECT_EQ(zero_index(3), (MultiIndex{0, 0, 0}));
  EXPECT_EQ(unit_index(2, 1), (MultiIndex{0, 1}));
}

TEST(Distribution, EqualTermsMerge) {
  auto c = CombDistribution::comb(Coset(Lattice::integer(2)));
  auto twice = c + c;
  ASSERT_EQ(twice.terms().size(), 1u);
  EXPECT_EQ(twice.terms()[0].coeff.constant_term(), Complex(2.0));
  EXPECT_TRUE((c + scale(c, -1.0)).empty());
}

TEST(Distribution, CoefficientsReduceModuloDualLattice) {
  // e^{2πi x (1 + 1/4)} equals e^{2πi x/4} on Z.
  WFunction w = WFunction::exponential({Real::rational(5, 4)}, 1.0);
  CombDistribution f(1, {CombTerm{Coset(Lattice::integer(1)), {0}, {0}, w}});
  WFunction expect = WFunction::exponential({Real::rational(1, 4)}, 1.0);
  EXPECT_TRUE(near(f.terms()[0].coeff, expect));
  // On the coset 1/2 + Z the reduction contributes a phase e^{2πi (1/2)(1)} = -1.
  CombDistribution g(1, {CombTerm{Coset(Lattice::integer(1), {Real::rational(1, 2)}), {0}, {0}, w}});
  EXPECT_NEAR(std::abs(g.terms()[0].coeff.terms()[0].amp - Complex(-1.0)), 0.0, 1e-15);
  for (long n = -3; n <= 3; ++n) {
    Point p = {Real::rational(2 * n + 1, 2)};
    EXPECT_NEAR(std::abs(coefficient_at(g, p, {0}) - w(p)), 0.0, 1e-12);
  }
}

TEST(Distribution, PointTermsAbsorbMonomialAndCoefficient) {
  PointSupport ps{{{Real(2)}, {Real(-1)}}, {1.0, {0.0, 1.0}}};
  CombDistribution f(1, {CombTerm{ps, {2}, {1}, WFunction::constant(1, 3.0)}});
  ASSERT_EQ(f.terms().size(), 1u);
  const auto& t = f.terms()[0];
  EXPECT_EQ(t.m, (MultiIndex{0}));
  EXPECT_EQ(coefficient_at(f, {Real(2)}, {1}), Complex(12.0));
  EXPECT_EQ(coefficient_at(f, {Real(-1)}, {1}), Complex(0.0, 3.0));
  EXPECT_EQ(coefficient_at(f, {Real(0)}, {1}), Complex(0.0));
}

TEST(Distribution, LowerRankCosetIsUnsupported) {
  RMatrix g(2, 1);
  g(0, 0) = Real(1);
  g(1, 0) = Real(0);
  EXPECT_THROW(CombDistribution::comb(Coset(Lattice::from_generators(g))), UnsupportedTerm);
}

TEST(Distribution, DerivativeAndReflection) {
  auto c = CombDistribution::comb(Coset(Lattice::integer(1), {Real::rational(1, 3)}));
  auto dc = apply_derivative(c, {2});
  EXPECT_EQ(dc.K(), 2);
  auto r = reflect(c);
  ASSERT_TRUE(r.terms()[0].is_coset());
  EXPECT_EQ(r.terms()[0].coset(), Coset(Lattice::integer(1), {Real::rational(2, 3)}));
  // Reflection flips the sign of a derivative of odd order.
  auto rd = reflect(apply_derivative(c, {1}));
  EXPECT_EQ(coefficient_at(rd, {Real::rational(-1, 3)}, {1}), Complex(-1.0));
}

TEST(Distribution, ComponentMeasure) {
  auto c = CombDistribution::comb(Coset(Lattice::integer(2)));
  auto f = c + apply_derivative(scale(c, 2.0), {1, 0});
  auto mu = component_measure(f, {1, 0});
  EXPECT_TRUE(near(mu, scale(c, 2.0)));
  EXPECT_TRUE(near(component_measure(f, {0, 0}), c));
}

TEST(Distribution, SampleSupportMatchesEnumeration) {
  auto f = weighted_comb(2, {1, 0});
  auto samples = sample_support(f, 3.0);
  std::size_t expected = 0;
  oracle::for_each_grid_point(2, 3, 1, [&](const oracle::QVec& p) {
    if (p[0].get_d() * p[0].get_d() + p[1].get_d() * p[1].get_d() <= 9.0) ++expected;
  });
  EXPECT_EQ(samples.size(), expected);
  for (const auto& s : samples) {
    auto it = s.coeffs.find({0, 0});
    Complex v = it == s.coeffs.end() ? Complex(0) : it->second;
    EXPECT_NEAR(std::abs(v - s.point[0]), 0.0, 1e-12);
  }
}

TEST(Distribution, CoefficientBoundsReport) {
  auto f = weighted_comb(2, {1, 0});
  CoefficientBounds b;
  b.c = 0.5;
  b.C = 10.0;
  b.h[{0, 0}] = 1.0;
  auto rep = check_coefficient_bounds(f, 4.0, b);
  EXPECT_DOUBLE_EQ(rep.min_sum, 0.0);
  EXPECT_DOUBLE_EQ(rep.max_sum, 4.0);
  EXPECT_FALSE(rep.zeros.empty());  // the axis x1 = 0
  EXPECT_GT(rep.below_c, 0u);
  EXPECT_TRUE(rep.violates());
  EXPECT_TRUE(rep.has_ratio);
  EXPECT_LE(rep.max_ratio, 1.0);
}

TEST(Distribution, GrowthExponentOfCombs) {
  std::vector<double> radii = {10, 20, 40, 80};
  EXPECT_NEAR(growth_exponent(CombDistribution::comb(Coset(Lattice::integer(2))), radii), 2.0, 0.1);
  EXPECT_NEAR(growth_exponent(weighted_comb(2, {1, 0}), radii), 3.0, 0.15);
  EXPECT_NEAR(growth_exponent(CombDistribution::comb(Coset(Lattice::integer(1))), radii), 1.0, 0.1);
  PointSupport one{{{Real(0), Real(0)}}, {1.0}};
  CombDistribution finite(2, {CombTerm{one, {0, 0}, {0, 0}, WFunction::constant(2, 1.0)}});
  EXPECT_THROW(growth_exponent(finite, radii), DegenerateData);
}
