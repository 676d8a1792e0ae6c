// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/types.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace fieldlab {

/// Spacetime point; `t` is coordinate time.
struct Event {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
};

/// Four-vector stored as (time component, spatial part), e.g. (c rho, J).
struct FourVector {
  double time = 0.0;
  Vec3 space = Vec3::Zero();
};

/**
 * Passive pure boost into a frame moving with velocity `v` relative to the
 * original one. Events, four-vectors and wave four-vectors transform with
 * the same matrix.
 */
class LorentzBoost {
 public:
  LorentzBoost(const Vec3& velocity, double c) : v_(velocity), c_(c) {
    if (!(c > 0.0)) throw domain_error("speed of light must be positive");
    const double speed = velocity.norm();
    if (!(speed < c)) throw domain_error("boost speed must be below c");
    beta_ = speed / c;
    gamma_ = 1.0 / std::sqrt(1.0 - beta_ * beta_);
    dir_ = speed > 0.0 ? Vec3(velocity / speed) : Vec3::UnitX();
    rapidity_ = std::atanh(beta_);
  }

  const Vec3& velocity() const { return v_; }
  const Vec3& direction() const { return dir_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  double rapidity() const { return rapidity_; }

  /// (x0, x) -> (x0', x') with x0 = c t style time component.
  FourVector apply(const FourVector& a) const {
    const double par = dir_.dot(a.space);
    FourVector out;
    out.time = gamma_ * (a.time - beta_ * par);
    out.space = a.space + ((gamma_ - 1.0) * par - gamma_ * beta_ * a.time) * dir_;
    return out;
  }

  Event apply(const Event& e) const {
    const FourVector r = apply(FourVector{c_ * e.t, e.x});
    return Event{r.time / c_, r.space};
  }

  Event inverse(const Event& e) const {
    const LorentzBoost back(-v_, c_);
    return back.apply(e);
  }

  /// Wave four-vector (omega, k): phase k.x - omega t is invariant.
  std::pair<double, Vec3> apply_wave(double omega, const Vec3& k) const {
    const FourVector r = apply(FourVector{omega / c_, k});
    return {r.time * c_, r.space};
  }

 private:
  Vec3 v_;
  double c_;
  double beta_ = 0.0;
  double gamma_ = 1.0;
  double rapidity_ = 0.0;
  Vec3 dir_;
};

/// max_i |a_i - b_i|_inf / max_i |b_i|_inf over paired four-vector samples.
inline double four_vector_mismatch(const std::vector<FourVector>& computed,
                                   const std::vector<FourVector>& expected) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < computed.size(); ++i) {
    const auto& a = computed[i];
    const auto& b = expected[i];
    diff = std::max(diff, std::abs(a.time - b.time));
    diff = std::max(diff, (a.space - b.space).cwiseAbs().maxCoeff());
    scale = std::max(scale, std::abs(b.time));
    scale = std::max(scale, b.space.cwiseAbs().maxCoeff());
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace fieldlab
