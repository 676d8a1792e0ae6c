// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fieldlab/grassmann.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fieldlab;
using namespace fieldlab::grassmann;

namespace {

using E = GrassmannElement;

E random_element(const SpacePtr& sp, std::mt19937_64& rng) {
  // Small Gaussian integers keep every product exact in floating point.
  std::uniform_int_distribution<int> d(-3, 3);
  E e(sp);
  const Mask top = Mask{1} << sp->generators;
  for (Mask m = 0; m < top; ++m) e.add(m, cplx(d(rng), d(rng)));
  return e;
}

}  // namespace

TEST(Grassmann, BasicRelations) {
  const auto sp = GrassmannSpace::make(2);
  const auto t1 = E::generator(sp, 0), t2 = E::generator(sp, 1);
  EXPECT_TRUE((t1 * t2 + t2 * t1).is_zero());
  EXPECT_TRUE((t1 * t1).is_zero());
  const auto one = E::scalar(sp, 1.0);
  EXPECT_TRUE(((one + t1 * t2) * (one - t1 * t2)) == one);
  EXPECT_EQ((t2 * t1).coefficient(0b11), cplx(-1.0));
}

TEST(Grassmann, ExhaustiveGeneratorRelations) {
  for (int g : {1, 4, 8, 12}) {
    const auto sp = GrassmannSpace::make(g);
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const auto a = E::generator(sp, i), b = E::generator(sp, j);
        EXPECT_TRUE((a * b + b * a).is_zero()) << g << ' ' << i << ' ' << j;
      }
  }
}

TEST(Grassmann, AssociativeOnRandomElements) {
  const auto sp = GrassmannSpace::make(5);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_element(sp, rng), b = random_element(sp, rng), c = random_element(sp, rng);
    EXPECT_TRUE((a * b) * c == a * (b * c));
  }
}

TEST(Grassmann, SparseAboveDenseLimit) {
  const auto sp = GrassmannSpace::make(20);
  const auto a = E::monomial(sp, {19, 3});
  EXPECT_EQ(a.coefficient((Mask{1} << 3) | (Mask{1} << 19)), cplx(-1.0));
  EXPECT_TRUE((a * E::generator(sp, 3)).is_zero());
  EXPECT_THROW(GrassmannSpace::make(25), domain_error);
  EXPECT_THROW(GrassmannSpace::make(2, {1, 1}), domain_error);
}

TEST(Grassmann, ConjugationReversesOrder) {
  const auto sp = GrassmannSpace::make(4, {1, 0, 3, 2});
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_element(sp, rng), b = random_element(sp, rng);
    EXPECT_TRUE(conjugate(a * b) == conjugate(b) * conjugate(a));
    EXPECT_TRUE(conjugate(conjugate(a)) == a);
  }
  const auto m = E::monomial(sp, {0, 2}, cplx(0, 1));
  // (i theta_0 theta_2)^dagger = -i theta_3 theta_1 = i theta_1 theta_3.
  EXPECT_EQ(conjugate(m).coefficient(0b1010), cplx(0, 1));
}

TEST(Grassmann, BodySoulAndBerezin) {
  const auto sp = GrassmannSpace::make(3);
  const auto e = E::scalar(sp, 2.0) + E::monomial(sp, {0, 1, 2}, 5.0) + E::generator(sp, 1, 3.0);
  EXPECT_EQ(e.body(), cplx(2.0));
  EXPECT_EQ(e.soul().max_abs(), 5.0);
  EXPECT_EQ(berezin_top(e), cplx(5.0));
  EXPECT_EQ(berezin_top(E::monomial(sp, {2, 1, 0})), cplx(-1.0));
}

TEST(Grassmann, DumpFormat) {
  const auto sp = GrassmannSpace::make(3);
  const auto e = E::scalar(sp, 1.5) + E::monomial(sp, {0, 2}, cplx(-2.0, 0.5));
  EXPECT_EQ(dump_string(e), "1: 1.5+0i\nθ_{0}θ_{2}: -2+0.5i\n");
}

TEST(ToyField, OperatorsAnticommuteExactly) {
  for (int m = 1; m <= ToyFermionField::max_modes; ++m) {
    const ToyFermionField f(m);
    std::mt19937_64 rng(m);
    std::uniform_int_distribution<int> d(-4, 4);
    std::vector<cplx> cfg(m);
    for (auto& c : cfg) c = cplx(d(rng), d(rng));
    const auto values = f.grassmann_values(cfg);
    const auto psi = random_element(f.space(), rng);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) EXPECT_TRUE(anticommutator(values, i, j, psi).is_zero());
  }
}

TEST(ToyField, ComplexCounterexample) {
  EXPECT_EQ(complex_anticommutator({1.0, 1.0}, 0, 1, 1.0), cplx(2.0));
  EXPECT_NE(complex_anticommutator({2.0}, 0, 0, 1.0), cplx(0.0));
  // Same operator twice: psi_i psi_i = 0 on Grassmann values.
  const ToyFermionField f(2);
  const auto values = f.grassmann_values({cplx(1.0, 2.0), 3.0});
  EXPECT_TRUE(field_operator_action(values, 0, field_operator_action(values, 0, E::scalar(f.space(), 1.0)))
                  .is_zero());
}

TEST(ToyField, ValuesRoundTrip) {
  const ToyFermionField f(3);
  const std::vector<cplx> cfg{cplx(1, -1), 0.0, 2.5};
  EXPECT_EQ(f.complex_values(f.grassmann_values(cfg)), cfg);
  auto bad = f.grassmann_values(cfg);
  bad[1] = f.theta_bar(1);
  EXPECT_THROW(f.complex_values(bad), domain_error);
  EXPECT_THROW(ToyFermionField(7), domain_error);
}

TEST(ToyField, DensityHasNoBody) {
  for (int m = 1; m <= 3; ++m) {
    const ToyFermionField f(m);
    // Every nonzero configuration over {0, 1, i} per mode.
    const std::vector<cplx> choices{0.0, 1.0, cplx(0, 1)};
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 3;
    for (int code = 1; code < total; ++code) {
      std::vector<cplx> cfg(m);
      for (int i = 0, c = code; i < m; ++i, c /= 3) cfg[i] = choices[c % 3];
      const auto rho = f.density(f.grassmann_values(cfg));
      EXPECT_EQ(rho.body(), cplx(0.0));
      EXPECT_GT(rho.soul().max_abs(), 0.0);
    }
  }
}

TEST(ToyField, PathologyReport) {
  const ToyFermionField f(2);
  const auto values = f.grassmann_values({1.0, 0.0});
  const auto with_soul = density_pathology_report(f, values, f.theta(0));
  EXPECT_TRUE(with_soul.density_has_soul);
  EXPECT_TRUE(with_soul.amplitude_has_soul);
  EXPECT_EQ(with_soul.amplitude_body, cplx(0.0));
  const auto zero = density_pathology_report(f, f.grassmann_values({0.0, 0.0}), E(f.space()));
  EXPECT_FALSE(zero.density_has_soul);
  EXPECT_FALSE(zero.amplitude_has_soul);
  const auto j = to_json(with_soul);
  EXPECT_TRUE(j["density"]["has_soul"].get<bool>());
}

TEST(ToyField, PairedProbabilities) {
  const ToyFermionField f(3);
  const auto family = f.configuration_family();
  ASSERT_EQ(family.size(), 8u);
  // Eigenstates are orthonormal.
  for (const auto& a : family)
    for (const auto& b : family) {
      EXPECT_EQ(f.inner(f.eigenstate(a), f.eigenstate(b)), cplx(a == b ? 1.0 : 0.0));
    }
  const auto e = f.eigenstate(family[5]);
  for (const auto& c : family) EXPECT_EQ(paired_probability(f, e, c), c == family[5] ? 1.0 : 0.0);
  const auto sup = f.eigenstate(family[0]) + f.eigenstate(family[3]);
  EXPECT_NEAR(paired_probability(f, sup, family[0]), 0.5, 1e-15);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = f.random_functional(rng);
    double sum = 0.0;
    for (const auto& c : family) {
      const double p = paired_probability(f, psi, c);
      sum += p;
      EXPECT_NEAR(paired_probability(f, psi * std::exp(I * 0.7), c), p, 1e-14);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_THROW(paired_probability(f, E(f.space()), family[0]), domain_error);
  EXPECT_THROW(f.inner(f.theta(0), f.theta_bar(0)), domain_error);
  const ToyFermionField g(2);
  EXPECT_THROW(f.inner(f.eigenstate(family[1]), g.eigenstate({1.0, 0.0})), domain_error);
}
