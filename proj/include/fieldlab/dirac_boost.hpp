// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/dirac.hpp"
#include "fieldlab/lorentz.hpp"

#include <vector>

namespace fieldlab::dirac {

/// Analytic superposition psi(t, x) = sum_j w_j exp(i(k_j.x - omega_j t)).
/// omega_j is signed: +E/hbar on the positive branch, -E/hbar on the negative.
struct PlaneWaveSum {
  struct Mode {
    Vec3 k = Vec3::Zero();
    double omega = 0.0;
    Spinor spinor = Spinor::Zero();
  };

  std::vector<Mode> modes;

  void add(const Vec3& k, Branch branch, Spin spin, cplx amplitude, const PhysicalConstants& pc) {
    const auto sp = plane_wave_spinors(k, pc);
    const double w = dispersion_massive(k, pc);
    modes.push_back({k, branch == Branch::positive ? w : -w,
                     sp[spinor_slot(branch, spin)].amplitude * amplitude});
  }

  Spinor evaluate(const Event& e) const {
    Spinor s = Spinor::Zero();
    for (const auto& m : modes) s += m.spinor * std::exp(I * (m.k.dot(e.x) - m.omega * e.t));
    return s;
  }

  /// Samples the superposition at the lattice sites at time t.
  SpinorField sample(const ModeBasis& basis, double t = 0.0) const {
    std::vector<Spinor> vals(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) vals[i] = evaluate({t, basis.position(i)});
    return SpinorField(basis, Representation::position, std::move(vals));
  }
};

/// (c rho^p, J^p) at one spacetime point.
inline FourVector probability_four_current(const Spinor& psi, const PhysicalConstants& pc) {
  const auto& dm = DiracMatrices::standard();
  FourVector j;
  j.time = pc.c * psi.squaredNorm();
  for (int a = 0; a < 3; ++a) j.space[a] = pc.c * psi.dot(dm.alpha[a] * psi).real();
  return j;
}

/// Spinor representation of the passive boost: S = cosh(eta/2) - sinh(eta/2) alpha.n.
inline Mat4 spinor_boost_matrix(const LorentzBoost& boost) {
  const auto& dm = DiracMatrices::standard();
  const double half = 0.5 * boost.rapidity();
  Mat4 an = Mat4::Zero();
  for (int a = 0; a < 3; ++a) an += dm.alpha[a] * boost.direction()[a];
  return Mat4::Identity() * std::cosh(half) - an * std::sinh(half);
}

/// The same field seen from a frame moving with velocity v:
/// psi'(x') = S psi(Lambda^{-1} x'), mode by mode.
inline PlaneWaveSum boost(const PlaneWaveSum& field, const Vec3& v, const PhysicalConstants& pc) {
  const LorentzBoost lb(v, pc.c);
  const Mat4 s = spinor_boost_matrix(lb);
  PlaneWaveSum out;
  for (const auto& m : field.modes) {
    const auto [omega, k] = lb.apply_wave(m.omega, m.k);
    out.modes.push_back({k, omega, s * m.spinor});
  }
  return out;
}

/// Max relative deviation between (c rho^p, J^p) evaluated from the boosted
/// superposition and the four-vector transform of the original densities,
/// over the given original-frame events.
inline double covariance_report(const PlaneWaveSum& field, const Vec3& v,
                                const PhysicalConstants& pc, const std::vector<Event>& events) {
  const LorentzBoost lb(v, pc.c);
  const PlaneWaveSum moved = boost(field, v, pc);
  std::vector<FourVector> computed, expected;
  for (const auto& e : events) {
    computed.push_back(probability_four_current(moved.evaluate(lb.apply(e)), pc));
    expected.push_back(lb.apply(probability_four_current(field.evaluate(e), pc)));
  }
  return four_vector_mismatch(computed, expected);
}

}  // namespace fieldlab::dirac
