// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fieldlab/fock.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace fieldlab;
using namespace fieldlab::fock;

namespace {

std::shared_ptr<const ModeSet> fermions(int n) {
  std::vector<double> w;
  for (int i = 0; i < n; ++i) w.push_back(1.0 + 0.5 * i);
  return std::make_shared<const ModeSet>(simple_fermionic_modes(w));
}

std::shared_ptr<const ModeSet> bosons(int n, int cap) {
  std::vector<double> w;
  for (int i = 0; i < n; ++i) w.push_back(1.0 + 0.5 * i);
  return std::make_shared<const ModeSet>(simple_bosonic_modes(w, cap));
}

std::shared_ptr<const ModeSet> pair_modes() {
  std::vector<Mode> m{{Vec3(1, 0, 0), 1, Species::electron, Branch::positive, 1.5},
                      {Vec3(-1, 0, 0), 1, Species::positron, Branch::positive, 1.5},
                      {Vec3(0, 1, 0), -1, Species::electron, Branch::positive, 1.2}};
  return std::make_shared<const ModeSet>(std::move(m), Statistics::fermionic);
}

}  // namespace

TEST(ModeSet, CanonicalOrderAndValidation) {
  std::vector<Mode> m{{Vec3(1, 0, 0), 1, Species::electron, Branch::positive, 1.0},
                      {Vec3(0, 0, 0), 1, Species::electron, Branch::negative, 1.0},
                      {Vec3(0, 0, 0), 1, Species::positron, Branch::positive, 1.0},
                      {Vec3(0, 0, 0), -1, Species::electron, Branch::positive, 1.0}};
  const ModeSet ms(m, Statistics::fermionic);
  EXPECT_EQ(ms[0].branch, Branch::negative);
  EXPECT_EQ(ms[1].k.x(), 0.0);
  EXPECT_EQ(ms[1].spin, -1);
  EXPECT_EQ(ms[2].k.x(), 1.0);
  EXPECT_EQ(ms[3].species, Species::positron);
  EXPECT_EQ(ms.n_max(), 1);
  m.push_back(m[0]);
  EXPECT_THROW(ModeSet(m, Statistics::fermionic), domain_error);
  EXPECT_THROW(ModeSet({{Vec3::Zero(), 0, Species::boson, Branch::positive, -1.0}}, Statistics::bosonic),
               domain_error);
  EXPECT_THROW(simple_bosonic_modes({1.0}, 0), domain_error);
}

TEST(Fock, CreationOnVacuum) {
  const auto ms = fermions(3);
  const auto one = create(FockState::vacuum(ms), 1);
  EXPECT_EQ(one.amplitude({0, 1, 0}), cplx(1.0));
  EXPECT_TRUE(one.is_physical());
  EXPECT_TRUE(annihilate(FockState::vacuum(ms), 0).is_zero());
  const auto bs = bosons(1, 5);
  auto s = FockState::vacuum(bs);
  for (int n = 1; n <= 3; ++n) s = create(s, 0);
  EXPECT_NEAR(s.amplitude({3}).real(), std::sqrt(6.0), 1e-15);
}

TEST(Fock, PauliExclusion) {
  const auto ms = fermions(4);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(create(create(FockState::vacuum(ms), i), i).is_zero());
  }
}

TEST(Fock, AntisymmetryExhaustive) {
  for (int n = 1; n <= 6; ++n) {
    const auto ms = fermions(n);
    for (const auto& occ : all_configurations(*ms)) {
      const auto s = FockState::basis_state(ms, occ);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const auto lhs = create(create(s, j), i);
          const auto rhs = create(create(s, i), j) * cplx(-1.0);
          EXPECT_EQ(lhs.distance(rhs), 0.0);
        }
    }
  }
}

TEST(Fock, JordanWignerSignByHand) {
  const auto ms = fermions(3);
  // a+_0 a+_2 |0> = |101>, a+_2 a+_0 |0> = -|101>.
  const auto v = FockState::vacuum(ms);
  EXPECT_EQ(create(create(v, 2), 0).amplitude({1, 0, 1}), cplx(1.0));
  EXPECT_EQ(create(create(v, 0), 2).amplitude({1, 0, 1}), cplx(-1.0));
  EXPECT_EQ(annihilate(FockState::basis_state(ms, {1, 1, 0}), 1).amplitude({1, 0, 0}), cplx(-1.0));
}

TEST(Fock, CanonicalRelationsAllSmallSpaces) {
  for (int n = 1; n <= 6; ++n) {
    const auto rf = check_canonical_relations(fermions(n));
    EXPECT_EQ(rf.mixed, 0.0);
    EXPECT_EQ(rf.annihilators, 0.0);
    EXPECT_EQ(rf.creators, 0.0);
    EXPECT_EQ(rf.states, std::size_t{1} << n);
  }
  for (int n = 1; n <= 4; ++n) {
    const auto rb = check_canonical_relations(bosons(n, 3));
    EXPECT_LT(rb.mixed, 1e-14);
    EXPECT_EQ(rb.annihilators, 0.0);
    EXPECT_LT(rb.creators, 1e-14);
    EXPECT_GT(rb.products, 0u);
  }
}

TEST(Fock, TruncationEnforced) {
  const auto bs = bosons(2, 2);
  const auto top = FockState::basis_state(bs, {2, 0});
  EXPECT_THROW(create(top, 0), truncation_error);
  EXPECT_THROW(FockState::basis_state(bs, {3, 0}), truncation_error);
  EXPECT_THROW(FockState::basis_state(bs, {1}), domain_error);
  EXPECT_THROW(create(top, 5), domain_error);
}

TEST(Fock, CapRaisingKeepsLowerAmplitudes) {
  // A state below the cap is represented identically for every larger cap.
  for (int cap = 2; cap <= 5; ++cap) {
    const auto bs = bosons(2, cap);
    const auto s = create(create(create(FockState::vacuum(bs), 0), 0), 1);
    EXPECT_NEAR(s.amplitude({2, 1}).real(), std::sqrt(2.0), 1e-15);
    EXPECT_EQ(s.amplitudes().size(), 1u);
  }
}

TEST(Fock, PhysicalStatesNormalize) {
  const auto ms = fermions(2);
  const auto s = FockState::physical(ms, {{{0, 0}, 3.0}, {{1, 0}, cplx(0, 4.0)}});
  EXPECT_TRUE(s.is_physical());
  EXPECT_NEAR(s.amplitude({1, 0}).imag(), 0.8, 1e-15);
  EXPECT_THROW(FockState::physical(ms, {{{0, 0}, 0.0}}), domain_error);
  EXPECT_THROW(FockState::vacuum(ms).inner(FockState::vacuum(fermions(3))), domain_error);
}

TEST(Sectors, VacuumPairAndMixture) {
  const auto ms = pair_modes();
  const auto v = FockState::vacuum(ms);
  EXPECT_EQ(sector_probabilities(v).at({0, 0}), 1.0);
  std::size_t e = 0, p = 0;
  for (std::size_t i = 0; i < ms->size(); ++i) ((*ms)[i].species == Species::positron ? p : e) = i;
  const auto pair = create(create(v, p), e);
  const auto probs = sector_probabilities(pair);
  ASSERT_EQ(probs.size(), 1u);
  EXPECT_EQ(probs.at({1, 1}), 1.0);
  const auto half = (v + create(v, e)) * cplx(1.0 / std::sqrt(2.0));
  const auto hp = sector_probabilities(half);
  EXPECT_NEAR(hp.at({0, 0}), 0.5, 1e-15);
  EXPECT_NEAR(hp.at({1, 0}), 0.5, 1e-15);
  EXPECT_EQ(sector_wavefunction(half, 1, 0).size(), 1u);
  EXPECT_TRUE(sector_wavefunction(half, 2, 0).empty());
}

TEST(Sectors, PositionAmplitudeAntisymmetric) {
  std::vector<Mode> m{{Vec3(1, 0, 0), 1, Species::electron, Branch::positive, 1.0},
                      {Vec3(0, 2, 0), 1, Species::electron, Branch::positive, 1.0},
                      {Vec3(0, 0, -1), 1, Species::electron, Branch::positive, 1.0}};
  const auto ms = std::make_shared<const ModeSet>(std::move(m), Statistics::fermionic);
  const auto s = FockState::basis_state(ms, {1, 1, 0});
  const Vec3 x1(0.3, -0.2, 0.9), x2(1.1, 0.5, -0.4);
  const cplx a = sector_position_amplitude(s, {x1, x2}, {}, 8.0);
  const cplx b = sector_position_amplitude(s, {x2, x1}, {}, 8.0);
  EXPECT_LT(std::abs(a + b), 1e-15);
  EXPECT_GT(std::abs(a), 1e-3);
  EXPECT_LT(std::abs(sector_position_amplitude(s, {x1, x1}, {}, 8.0)), 1e-15);
  // Slater determinant oracle.
  const auto f = [](const Vec3& k, const Vec3& x) { return std::exp(I * k.dot(x)) / std::sqrt(8.0); };
  const cplx det = f((*ms)[0].k, x1) * f((*ms)[1].k, x2) - f((*ms)[0].k, x2) * f((*ms)[1].k, x1);
  EXPECT_LT(std::abs(a - det / std::sqrt(2.0)), 1e-15);
}

TEST(Evolution, PhasesAndMagnitudes) {
  const auto ms = fermions(3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::map<Occupation, cplx> amps;
  for (const auto& occ : all_configurations(*ms)) amps[occ] = cplx(g(rng), g(rng));
  const auto s = FockState::physical(ms, amps);
  const auto t = evolve_fock(s, 1.3);
  for (const auto& [occ, a] : s.amplitudes()) {
    EXPECT_NEAR(std::abs(t.amplitude(occ)), std::abs(a), 1e-15);
    EXPECT_LT(std::abs(t.amplitude(occ) - a * std::exp(-I * configuration_energy(*ms, occ) * 1.3)), 1e-15);
  }
  EXPECT_NEAR(mean_energy(t), mean_energy(s), 1e-14);
  EXPECT_NEAR(configuration_energy(*ms, {1, 0, 1}), 1.0 + 2.0, 1e-15);
}

TEST(DiracSea, GroundHoleAndExcitation) {
  const PhysicalConstants pc;
  const std::vector<Vec3> ks{Vec3(0, 0, 0), Vec3(1, 0, 0)};
  const auto ms = std::make_shared<const ModeSet>(dirac_sea_modes(ks, pc));
  const auto ground = dirac_sea_ground(ms);
  ASSERT_EQ(ground.amplitudes().size(), 1u);
  EXPECT_EQ(occupation_string(ground.amplitudes().begin()->first), "1100");
  EXPECT_NEAR(relative_charge(ground), 0.0, 1e-15);
  EXPECT_NEAR(mean_energy(ground), 0.0, 1e-15);
  // Sea modes come first; mode 1 is the k = (1,0,0) sea mode.
  ASSERT_EQ((*ms)[1].branch, Branch::negative);
  const auto hole = make_hole(ground, 1);
  EXPECT_NEAR(relative_charge(hole), 1.0, 1e-15);
  EXPECT_NEAR(mean_energy(hole), std::sqrt(2.0), 1e-15);
  const auto pair = excite_hole(ground, 1, 2);
  EXPECT_NEAR(relative_charge(pair), 0.0, 1e-15);
  EXPECT_NEAR(mean_energy(pair), std::sqrt(2.0) + 1.0, 1e-15);
  EXPECT_GT(mean_energy(pair), 0.0);
  EXPECT_THROW(make_hole(hole, 1), domain_error);
  EXPECT_THROW(make_hole(ground, 2), domain_error);
  EXPECT_THROW(excite_hole(ground, 0, 1), domain_error);
  EXPECT_THROW(dirac_sea_ground(bosons(2, 2)), domain_error);
}

TEST(Serialization, CsvAndBinaryRoundTrip) {
  const auto ms = pair_modes();
  const auto s = FockState::physical(ms, {{{0, 0, 0}, cplx(0.3, -0.1)}, {{1, 1, 0}, cplx(-0.2, 0.7)},
                                          {{0, 1, 1}, cplx(0.1, 0.0)}});
  std::stringstream csv;
  write_csv(csv, s);
  const auto c = read_csv(csv);
  EXPECT_TRUE(c.modes() == *ms);
  EXPECT_EQ(c.distance(s), 0.0);
  std::stringstream bin;
  write_binary(bin, s);
  const auto b = read_binary(bin);
  EXPECT_TRUE(b.modes() == *ms);
  EXPECT_EQ(b.distance(s), 0.0);
  std::stringstream junk("XXXX");
  EXPECT_THROW(read_binary(junk), domain_error);
  std::stringstream bad_csv("#fock,bosonic\n");
  EXPECT_THROW(read_csv(bad_csv), domain_error);
  EXPECT_EQ(parse_occupation("01a"), (Occupation{0, 1, 10}));
}
