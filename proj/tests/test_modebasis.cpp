// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fieldlab/modebasis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace fieldlab;

namespace {

std::vector<cplx> gaussian_samples(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& z : v) z = cplx(g(rng), g(rng));
  return v;
}

// Direct O(N^2) DFT used as an independent reference for the 1D transform.
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[j] * std::exp(-I * (2.0 * pi * double(k * j) / double(n)));
    out[k] = s / std::sqrt(double(n));
  }
  return out;
}

}  // namespace

TEST(ModeBasis, OneDimensionalWavevectors) {
  const auto b = ModeBasis::build(1, 2.0 * pi, 4);
  std::vector<double> ks;
  for (const auto& k : b.canonical_wavevectors()) ks.push_back(k.x());
  EXPECT_EQ(ks.size(), 4u);
  const std::vector<double> expected{-2, -1, 0, 1};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ks[i], expected[i], 1e-15);
}

TEST(ModeBasis, ScaledExtent) {
  const auto b = ModeBasis::build(1, pi, 4);
  const auto ks = b.canonical_wavevectors();
  const std::vector<double> expected{-4, -2, 0, 2};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(ks[i].x(), expected[i], 1e-14);
}

TEST(ModeBasis, ThreeDimensionalClosedUnderNegation) {
  const auto b = ModeBasis::build(3, 2.0 * pi, 4);
  const auto ks = b.canonical_wavevectors();
  EXPECT_EQ(ks.size(), 64u);
  std::set<std::array<long, 3>> seen;
  for (const auto& k : ks) seen.insert({std::lround(k.x()), std::lround(k.y()), std::lround(k.z())});
  EXPECT_EQ(seen.size(), 64u);
  // Negation is a bijection on the non-Nyquist modes; Nyquist modes map to themselves mod N.
  for (std::size_t m = 0; m < b.size(); ++m) {
    const std::size_t n = b.negated(m);
    EXPECT_EQ(b.negated(n), m);
    if (!b.is_nyquist(m)) {
      EXPECT_NEAR((b.wavevector(m) + b.wavevector(n)).norm(), 0.0, 1e-14);
    }
  }
}

TEST(ModeBasis, SpacingTimesPointsIsExtent) {
  for (int n : {4, 8, 16, 32}) {
    const auto b = ModeBasis::build(3, 7.3, n);
    EXPECT_DOUBLE_EQ(b.spacing() * n, 7.3);
    EXPECT_EQ(b.size(), static_cast<std::size_t>(n) * n * n);
  }
}

TEST(ModeBasis, RejectsBadParameters) {
  EXPECT_THROW(ModeBasis::build(2, 1.0, 8), domain_error);
  EXPECT_THROW(ModeBasis::build(1, 1.0, 5), domain_error);
  EXPECT_THROW(ModeBasis::build(1, 1.0, 2), domain_error);
  EXPECT_THROW(ModeBasis::build(1, 0.0, 8), domain_error);
  EXPECT_THROW(ModeBasis::build(3, -1.0, 8), domain_error);
}

TEST(ModeBasis, FlattenRoundTrip) {
  const auto b = ModeBasis::build(3, 1.0, 8);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.flatten(b.unflatten(i)), i);
  // x is the slowest axis.
  EXPECT_EQ(b.flatten({1, 0, 0}), 64u);
  EXPECT_EQ(b.flatten({0, 0, 1}), 1u);
}

TEST(ModeBasis, MatchesNaiveDft) {
  const auto b = ModeBasis::build(1, 3.0, 16);
  const auto x = gaussian_samples(16, 3);
  const auto fast = b.forward_copy(x);
  const auto slow = naive_dft(x);
  for (int i = 0; i < 16; ++i) EXPECT_LT(std::abs(fast[i] - slow[i]), 1e-13);
}

TEST(ModeBasis, PlaneWaveLandsOnItsMode) {
  const auto b = ModeBasis::build(3, 5.0, 8);
  const std::size_t target = b.flatten({1, 7, 2});  // mode numbers (1, -1, 2)
  const Vec3 k = b.wavevector(target);
  std::vector<cplx> f(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) f[i] = std::exp(I * k.dot(b.position(i)));
  const auto m = b.forward_copy(f);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double expected = i == target ? std::sqrt(double(b.size())) : 0.0;
    EXPECT_NEAR(std::abs(m[i]), expected, 1e-11);
  }
}

TEST(ModeBasis, RoundTripIdentity) {
  for (int dim : {1, 3}) {
    const auto b = ModeBasis::build(dim, 4.0, 16);
    const auto x = gaussian_samples(b.size(), 7);
    const auto back = b.inverse_copy(b.forward_copy(x));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += std::norm(back[i] - x[i]);
      den += std::norm(x[i]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-12);
  }
}

TEST(ModeBasis, Parseval) {
  const auto b = ModeBasis::build(3, 2.5, 8);
  const auto x = gaussian_samples(b.size(), 11);
  const auto m = b.forward_copy(x);
  double sx = 0.0, sm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::norm(x[i]);
    sm += std::norm(m[i]);
  }
  EXPECT_NEAR(sx / sm, 1.0, 1e-12);
}

TEST(ModeBasis, InterleavedComponentsTransformIndependently) {
  const auto b = ModeBasis::build(3, 1.0, 4);
  const auto a = gaussian_samples(b.size(), 1);
  const auto c = gaussian_samples(b.size(), 2);
  std::vector<cplx> both(2 * b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    both[2 * i] = a[i];
    both[2 * i + 1] = c[i];
  }
  b.forward(both, 2);
  const auto ma = b.forward_copy(a), mc = b.forward_copy(c);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_LT(std::abs(both[2 * i] - ma[i]), 1e-14);
    EXPECT_LT(std::abs(both[2 * i + 1] - mc[i]), 1e-14);
  }
  EXPECT_THROW(b.forward(std::span<cplx>(both.data(), 5), 2), domain_error);
}

TEST(Dispersion, Massive) {
  PhysicalConstants pc;
  EXPECT_DOUBLE_EQ(dispersion_massive(Vec3::Zero(), pc), 1.0);
  EXPECT_NEAR(dispersion_massive(Vec3(1, 0, 0), pc), std::sqrt(2.0), 1e-15);
  pc.mass = 0.0;
  EXPECT_NEAR(dispersion_massive(Vec3(3, 0, 0), pc), 3.0, 1e-15);
}

TEST(Dispersion, MassiveWithUnits) {
  const PhysicalConstants pc{1.3, 2.0, 0.7, 0.5};
  const Vec3 k(0.4, -1.1, 0.2);
  const double e = std::sqrt(std::pow(pc.mass * pc.c * pc.c, 2) + std::pow(pc.hbar * k.norm() * pc.c, 2));
  EXPECT_NEAR(dispersion_massive(k, pc), e / pc.hbar, 1e-14);
  EXPECT_GE(dispersion_massive(k, pc), pc.mass * pc.c * pc.c / pc.hbar);
}

TEST(Dispersion, Photon) {
  EXPECT_EQ(dispersion_photon(Vec3::Zero()), 0.0);
  EXPECT_DOUBLE_EQ(dispersion_photon(Vec3(2, 0, 0)), 2.0);
  EXPECT_DOUBLE_EQ(dispersion_photon(Vec3(3, 4, 0)), 5.0);
}

TEST(Dispersion, MasslessLimit) {
  PhysicalConstants pc;
  pc.mass = 1e-8;
  for (const Vec3& k : {Vec3(1, 0, 0), Vec3(0.3, 2.0, -1.0)}) {
    EXPECT_LT(std::abs(dispersion_massive(k, pc) / dispersion_photon(k, pc) - 1.0), 1e-6);
  }
}

TEST(PhysicalConstants, Validation) {
  EXPECT_NO_THROW(PhysicalConstants{}.validate());
  EXPECT_THROW((PhysicalConstants{0.0, 1.0, 1.0, 1.0}.validate()), domain_error);
  EXPECT_THROW((PhysicalConstants{1.0, 1.0, -1.0, 1.0}.validate()), domain_error);
}

TEST(Config, BasisFromJson) {
  const auto cfg = basis_from_json(nlohmann::json::parse(
      R"({"dim": 3, "extent": 6.0, "points_per_axis": 8, "constants": {"hbar": 2.0, "mass": 0.5}})"));
  EXPECT_EQ(cfg.basis.dim(), 3);
  EXPECT_EQ(cfg.basis.points_per_axis(), 8);
  EXPECT_DOUBLE_EQ(cfg.constants.hbar, 2.0);
  EXPECT_DOUBLE_EQ(cfg.constants.mass, 0.5);
  EXPECT_THROW(basis_from_json(nlohmann::json::parse(R"({"dim": 1, "extent": 1, "points_per_axis": 8, "x": 1})")),
               domain_error);
  EXPECT_THROW(constants_from_json(nlohmann::json::parse(R"({"c": -1})")), domain_error);
  EXPECT_EQ(basis_to_json(cfg.basis)["points_per_axis"], 8);
}
