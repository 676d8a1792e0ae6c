// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/modebasis.hpp"
#include "fieldlab/types.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fieldlab::dirac {

/// Dirac representation: beta diagonal, alpha_i off-diagonal Pauli blocks,
/// sigma_i the block-diagonal spin matrices.
struct DiracMatrices {
  std::array<Mat4, 3> alpha;
  Mat4 beta;
  std::array<Mat4, 3> sigma;

  static const DiracMatrices& standard() {
    static const DiracMatrices m = [] {
      DiracMatrices d;
      std::array<Eigen::Matrix2cd, 3> pauli;
      pauli[0] << 0, 1, 1, 0;
      pauli[1] << 0, -I, I, 0;
      pauli[2] << 1, 0, 0, -1;
      for (int i = 0; i < 3; ++i) {
        d.alpha[i].setZero();
        d.alpha[i].topRightCorner<2, 2>() = pauli[i];
        d.alpha[i].bottomLeftCorner<2, 2>() = pauli[i];
        d.sigma[i].setZero();
        d.sigma[i].topLeftCorner<2, 2>() = pauli[i];
        d.sigma[i].bottomRightCorner<2, 2>() = pauli[i];
      }
      d.beta = Mat4::Identity();
      d.beta(2, 2) = -1.0;
      d.beta(3, 3) = -1.0;
      return d;
    }();
    return m;
  }
};

enum class Branch { positive, negative };
enum class Spin { up, down };

struct PlaneWaveSpinor {
  Vec3 k = Vec3::Zero();
  Branch branch = Branch::positive;
  Spin spin = Spin::up;
  Spinor amplitude = Spinor::Zero();
};

/// Single-mode Hamiltonian c alpha.(hbar k) + beta m c^2.
inline Mat4 hamiltonian(const Vec3& k, const PhysicalConstants& pc) {
  const auto& dm = DiracMatrices::standard();
  Mat4 h = dm.beta * pc.rest_energy();
  for (int i = 0; i < 3; ++i) h += dm.alpha[i] * (pc.c * pc.hbar * k[i]);
  return h;
}

/// E(k) = sqrt(m^2 c^4 + hbar^2 k^2 c^2).
inline double mode_energy(const Vec3& k, const PhysicalConstants& pc) {
  return pc.hbar * dispersion_massive(k, pc);
}

/// u(k, up), u(k, down), v(k, up), v(k, down); orthonormal eigenvectors of
/// hamiltonian(k) with eigenvalues +E, +E, -E, -E.
inline std::array<PlaneWaveSpinor, 4> plane_wave_spinors(const Vec3& k,
                                                          const PhysicalConstants& pc) {
  const double e = mode_energy(k, pc);
  const double mc2 = pc.rest_energy();
  const double norm = std::sqrt((e + mc2) / (2.0 * e));
  const Vec3 p = pc.c * pc.hbar * k / (e + mc2);
  // (sigma . p) applied to the two basis spinors
  const cplx s_up_0 = p.z(), s_up_1 = cplx(p.x(), p.y());
  const cplx s_dn_0 = cplx(p.x(), -p.y()), s_dn_1 = -p.z();

  std::array<PlaneWaveSpinor, 4> out;
  out[0] = {k, Branch::positive, Spin::up, Spinor(1.0, 0.0, s_up_0, s_up_1) * norm};
  out[1] = {k, Branch::positive, Spin::down, Spinor(0.0, 1.0, s_dn_0, s_dn_1) * norm};
  out[2] = {k, Branch::negative, Spin::up, Spinor(-s_up_0, -s_up_1, 1.0, 0.0) * norm};
  out[3] = {k, Branch::negative, Spin::down, Spinor(-s_dn_0, -s_dn_1, 0.0, 1.0) * norm};
  return out;
}

inline std::size_t spinor_slot(Branch b, Spin s) {
  return (b == Branch::positive ? 0u : 2u) + (s == Spin::up ? 0u : 1u);
}

enum class Representation { position, mode };

/**
 * Four-component complex field on a ModeBasis, held either as site values
 * (position) or as unitary-transform coefficients (mode). Conversions use
 * the basis transform and are mutually inverse.
 */
class SpinorField {
 public:
  SpinorField(ModeBasis basis, Representation rep, std::vector<Spinor> values)
      : basis_(std::move(basis)), rep_(rep), values_(std::move(values)) {
    if (values_.size() != basis_.size()) throw domain_error("spinor field size mismatch");
  }

  static SpinorField zeros(const ModeBasis& basis, Representation rep) {
    return SpinorField(basis, rep, std::vector<Spinor>(basis.size(), Spinor::Zero()));
  }

  const ModeBasis& basis() const { return basis_; }
  Representation representation() const { return rep_; }
  std::span<const Spinor> values() const { return values_; }
  const Spinor& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  SpinorField to_mode() const {
    if (rep_ == Representation::mode) return *this;
    SpinorField out = *this;
    basis_.forward(out.flat(), 4);
    out.rep_ = Representation::mode;
    return out;
  }

  SpinorField to_position() const {
    if (rep_ == Representation::position) return *this;
    SpinorField out = *this;
    basis_.inverse(out.flat(), 4);
    out.rep_ = Representation::position;
    return out;
  }

  SpinorField in(Representation rep) const {
    return rep == Representation::mode ? to_mode() : to_position();
  }

  /// Integral of psi^dagger psi.
  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : values_) s += v.squaredNorm();
    return s * basis_.cell_volume();
  }

  SpinorField operator+(const SpinorField& o) const { return combine(o, 1.0); }
  SpinorField operator-(const SpinorField& o) const { return combine(o, -1.0); }

  SpinorField operator*(cplx s) const {
    SpinorField out = *this;
    for (auto& v : out.values_) v *= s;
    return out;
  }

 private:
  std::span<cplx> flat() { return {reinterpret_cast<cplx*>(values_.data()), values_.size() * 4}; }

  SpinorField combine(const SpinorField& o, double sign) const {
    basis_.require_same(o.basis_);
    SpinorField rhs = o.in(rep_);
    SpinorField out = *this;
    for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i] += sign * rhs.values_[i];
    return out;
  }

  ModeBasis basis_;
  Representation rep_;
  std::vector<Spinor> values_;
};

/// Per-mode coefficients on (u up, u down, v up, v down).
using ModeCoefficients = std::vector<std::array<cplx, 4>>;

inline ModeCoefficients mode_coefficients(const SpinorField& field, const PhysicalConstants& pc) {
  const SpinorField m = field.to_mode();
  const auto& basis = m.basis();
  ModeCoefficients out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto sp = plane_wave_spinors(basis.wavevector(i), pc);
    for (std::size_t s = 0; s < 4; ++s) out[i][s] = sp[s].amplitude.dot(m[i]);
  }
  return out;
}

inline SpinorField from_mode_coefficients(const ModeBasis& basis, const ModeCoefficients& coeffs,
                                          const PhysicalConstants& pc) {
  if (coeffs.size() != basis.size()) throw domain_error("coefficient count mismatch");
  std::vector<Spinor> vals(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto sp = plane_wave_spinors(basis.wavevector(i), pc);
    Spinor v = Spinor::Zero();
    for (std::size_t s = 0; s < 4; ++s) v += coeffs[i][s] * sp[s].amplitude;
    vals[i] = v;
  }
  return SpinorField(basis, Representation::mode, std::move(vals));
}

/// Projection onto the positive (u) and negative (v) frequency subspaces,
/// returned in mode representation.
inline std::pair<SpinorField, SpinorField> split_frequencies(const SpinorField& field,
                                                             const PhysicalConstants& pc) {
  const SpinorField m = field.to_mode();
  const auto& basis = m.basis();
  std::vector<Spinor> plus(basis.size()), minus(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto sp = plane_wave_spinors(basis.wavevector(i), pc);
    plus[i] = sp[0].amplitude * sp[0].amplitude.dot(m[i]) +
              sp[1].amplitude * sp[1].amplitude.dot(m[i]);
    minus[i] = sp[2].amplitude * sp[2].amplitude.dot(m[i]) +
               sp[3].amplitude * sp[3].amplitude.dot(m[i]);
  }
  return {SpinorField(basis, Representation::mode, std::move(plus)),
          SpinorField(basis, Representation::mode, std::move(minus))};
}

/// Exact free evolution: positive-frequency coefficients pick up
/// e^{-iEt/hbar}, negative-frequency ones e^{+iEt/hbar}. Result in the
/// representation of the input.
inline SpinorField evolve_free(const SpinorField& field, double t, const PhysicalConstants& pc) {
  const Representation rep = field.representation();
  const SpinorField m = field.to_mode();
  const auto& basis = m.basis();
  std::vector<Spinor> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto sp = plane_wave_spinors(basis.wavevector(i), pc);
    const double w = mode_energy(basis.wavevector(i), pc) / pc.hbar;
    const cplx ph_pos = std::exp(-I * w * t);
    const cplx ph_neg = std::exp(I * w * t);
    Spinor v = Spinor::Zero();
    for (std::size_t s = 0; s < 4; ++s) {
      v += sp[s].amplitude * (sp[s].amplitude.dot(m[i]) * (s < 2 ? ph_pos : ph_neg));
    }
    out[i] = v;
  }
  return SpinorField(basis, Representation::mode, std::move(out)).in(rep);
}

/// H psi = i hbar d(psi)/dt for the free field, in position representation.
inline SpinorField apply_hamiltonian(const SpinorField& field, const PhysicalConstants& pc) {
  const SpinorField m = field.to_mode();
  const auto& basis = m.basis();
  std::vector<Spinor> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    out[i] = hamiltonian(basis.wavevector(i), pc) * m[i];
  }
  return SpinorField(basis, Representation::mode, std::move(out)).to_position();
}

/// Spectral gradient components d_x psi, d_y psi, d_z psi in position
/// representation. Nyquist modes are given zero derivative.
inline std::array<SpinorField, 3> spatial_gradient(const SpinorField& field) {
  const SpinorField m = field.to_mode();
  const auto& basis = m.basis();
  std::array<SpinorField, 3> out{SpinorField::zeros(basis, Representation::mode),
                                 SpinorField::zeros(basis, Representation::mode),
                                 SpinorField::zeros(basis, Representation::mode)};
  std::array<std::vector<Spinor>, 3> parts;
  for (auto& p : parts) p.assign(basis.size(), Spinor::Zero());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis.is_nyquist(i)) continue;
    const Vec3 k = basis.wavevector(i);
    for (int a = 0; a < 3; ++a) parts[a][i] = I * k[a] * m[i];
  }
  for (int a = 0; a < 3; ++a) {
    out[a] = SpinorField(basis, Representation::mode, std::move(parts[a])).to_position();
  }
  return out;
}

/// Fraction of the norm carried by Nyquist-plane modes.
inline double nyquist_fraction(const SpinorField& field) {
  const SpinorField m = field.to_mode();
  double top = 0.0, all = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m[i].squaredNorm();
    all += w;
    if (m.basis().is_nyquist(i)) top += w;
  }
  return all > 0.0 ? top / all : 0.0;
}

struct ProbabilityDensities {
  ScalarField rho;
  VectorField current;
};

/// rho^p = psi^dagger psi, J^p = c psi^dagger alpha psi.
inline ProbabilityDensities probability_densities(const SpinorField& field,
                                                  const PhysicalConstants& pc) {
  const SpinorField p = field.to_position();
  const auto& dm = DiracMatrices::standard();
  ProbabilityDensities out{ScalarField(p.size()), VectorField(p.size())};
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.rho[i] = p[i].squaredNorm();
    for (int a = 0; a < 3; ++a) out.current[i][a] = pc.c * p[i].dot(dm.alpha[a] * p[i]).real();
  }
  return out;
}

enum class ChargeConvention { standard, positron };

struct ChargeCurrent {
  ScalarField rho;
  VectorField current;
};

/**
 * Standard: rho = -e psi^dagger psi, J = -e c psi^dagger alpha psi.
 * Positron: the negative-frequency part contributes with opposite sign,
 * rho = -e (|psi+|^2 - |psi-|^2) and likewise for J.
 */
inline ChargeCurrent charge_current(const SpinorField& field, const PhysicalConstants& pc,
                                    ChargeConvention convention = ChargeConvention::standard) {
  const double e = pc.charge;
  if (convention == ChargeConvention::standard) {
    auto pd = probability_densities(field, pc);
    for (auto& r : pd.rho) r *= -e;
    for (auto& j : pd.current) j *= -e;
    return {std::move(pd.rho), std::move(pd.current)};
  }
  const auto [plus, minus] = split_frequencies(field, pc);
  const auto dp = probability_densities(plus, pc);
  const auto dn = probability_densities(minus, pc);
  ChargeCurrent out{ScalarField(dp.rho.size()), VectorField(dp.rho.size())};
  for (std::size_t i = 0; i < dp.rho.size(); ++i) {
    out.rho[i] = -e * (dp.rho[i] - dn.rho[i]);
    out.current[i] = -e * (dp.current[i] - dn.current[i]);
  }
  return out;
}

inline double integrate(const ScalarField& f, const ModeBasis& basis) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * basis.cell_volume();
}

inline Vec3 integrate(const VectorField& f, const ModeBasis& basis) {
  Vec3 s = Vec3::Zero();
  for (const auto& v : f) s += v;
  return s * basis.cell_volume();
}

struct GordonTerms {
  VectorField convection;
  VectorField spin;
  VectorField time_derivative;

  VectorField total() const {
    VectorField t(convection.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = convection[i] + spin[i] + time_derivative[i];
    return t;
  }
};

/**
 * Splits J = -e c psi^dagger alpha psi of a free field into
 *   (i e hbar / 2m) {psi^dagger beta grad psi - (grad psi^dagger) beta psi}
 *   - (e hbar / 2m) curl(psi^dagger beta sigma psi)
 *   + (i e hbar / 2mc) d/dt(psi^dagger beta alpha psi).
 * Spatial derivatives are spectral; d/dt psi = -(i/hbar) H psi.
 */
inline GordonTerms gordon_decompose(const SpinorField& field, const PhysicalConstants& pc,
                                    double nyquist_threshold = 1e-12) {
  if (nyquist_fraction(field) > nyquist_threshold) {
    throw domain_error("field occupies Nyquist modes; spectral derivatives are ambiguous");
  }
  const auto& dm = DiracMatrices::standard();
  const SpinorField psi = field.to_position();
  const auto grad = spatial_gradient(psi);
  const SpinorField hpsi = apply_hamiltonian(psi, pc);
  const double e = pc.charge, hbar = pc.hbar, m = pc.mass, c = pc.c;

  std::array<Mat4, 3> beta_sigma, beta_alpha;
  for (int a = 0; a < 3; ++a) {
    beta_sigma[a] = dm.beta * dm.sigma[a];
    beta_alpha[a] = dm.beta * dm.alpha[a];
  }

  const std::size_t n = psi.size();
  GordonTerms out{VectorField(n), VectorField(n), VectorField(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const Spinor& p = psi[i];
    const Spinor dpsi_dt = -I / hbar * hpsi[i];
    Vec3 conv, dt_term;
    // d_j S_k with S_k = psi^dagger beta sigma_k psi, by the product rule
    Eigen::Matrix3d ds;
    for (int j = 0; j < 3; ++j) {
      const Spinor& gj = grad[j][i];
      conv[j] = -(e * hbar / m) * p.dot(dm.beta * gj).imag();
      dt_term[j] = -(e * hbar / (m * c)) * p.dot(beta_alpha[j] * dpsi_dt).imag();
      for (int k = 0; k < 3; ++k) ds(j, k) = 2.0 * p.dot(beta_sigma[k] * gj).real();
    }
    const Vec3 curl(ds(1, 2) - ds(2, 1), ds(2, 0) - ds(0, 2), ds(0, 1) - ds(1, 0));
    out.convection[i] = conv;
    out.spin[i] = -(e * hbar / (2.0 * m)) * curl;
    out.time_derivative[i] = dt_term;
  }
  return out;
}

enum class EnergyConvention { standard, flipped };

/// i hbar integral(psi+^dagger d_t psi+ +/- psi-^dagger d_t psi-), evaluated as
/// the mode-space quadratic form sum_k E(k)(|a+|^2 -/+ |a-|^2).
inline double energy(const SpinorField& field, const PhysicalConstants& pc,
                     EnergyConvention convention = EnergyConvention::standard) {
  const auto coeffs = mode_coefficients(field, pc);
  const auto& basis = field.basis();
  const double neg_sign = convention == EnergyConvention::standard ? -1.0 : 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double e = mode_energy(basis.wavevector(i), pc);
    const double pos = std::norm(coeffs[i][0]) + std::norm(coeffs[i][1]);
    const double neg = std::norm(coeffs[i][2]) + std::norm(coeffs[i][3]);
    total += e * (pos + neg_sign * neg);
  }
  return total * basis.cell_volume();
}

/// Symmetrized energy density Re(psi^dagger H psi).
inline ScalarField energy_density(const SpinorField& field, const PhysicalConstants& pc) {
  const SpinorField psi = field.to_position();
  const SpinorField hpsi = apply_hamiltonian(psi, pc);
  ScalarField u(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) u[i] = psi[i].dot(hpsi[i]).real();
  return u;
}

/**
 * Momentum density from the symmetrized (Belinfante) energy-momentum tensor,
 * g_i = T^{0i}/c = (1/2)[Re psi^dagger(-i hbar d_i)psi + (1/c) Re psi^dagger alpha_i H psi],
 * i.e. the average of the canonical momentum density and the energy flux / c^2.
 * On shell this equals the canonical density plus (hbar/4) curl(psi^dagger sigma psi).
 */
inline VectorField momentum_density(const SpinorField& field, const PhysicalConstants& pc) {
  const auto& dm = DiracMatrices::standard();
  const SpinorField psi = field.to_position();
  const auto grad = spatial_gradient(psi);
  const SpinorField hpsi = apply_hamiltonian(psi, pc);
  VectorField g(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      const double canonical = (psi[i].dot(-I * pc.hbar * grad[a][i])).real();
      const double flux = psi[i].dot(dm.alpha[a] * hpsi[i]).real() / pc.c;
      g[i][a] = 0.5 * (canonical + flux);
    }
  }
  return g;
}

/// Periodic (circular-mean) centroid of a nonnegative density.
inline Vec3 periodic_centroid(const ScalarField& w, const ModeBasis& basis) {
  Vec3 center = Vec3::Zero();
  const double L = basis.extent();
  for (int a = 0; a < basis.dim(); ++a) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      acc += w[i] * std::exp(I * (2.0 * pi * basis.position(i)[a] / L));
    }
    double ang = std::arg(acc);
    if (ang < 0) ang += 2.0 * pi;
    center[a] = ang * L / (2.0 * pi);
  }
  return center;
}

struct SpinObservables {
  Vec3 angular_momentum = Vec3::Zero();
  Vec3 magnetic_moment = Vec3::Zero();
  Vec3 centroid = Vec3::Zero();
  /// Largest density on the outermost shell around the centroid over the peak density.
  double boundary_fraction = 0.0;
  bool reliable = true;
};

/// L = integral r x g and m = (1/2c) integral r x J about the charge centroid,
/// with g the symmetrized momentum density and J the standard current.
inline SpinObservables spin_observables(const SpinorField& field, const PhysicalConstants& pc,
                                        double boundary_threshold = 1e-6) {
  const auto& basis = field.basis();
  const auto pd = probability_densities(field, pc);
  const auto cc = charge_current(field, pc);
  const auto g = momentum_density(field, pc);

  SpinObservables out;
  out.centroid = periodic_centroid(pd.rho, basis);
  const double edge = basis.extent() / 2.0 - basis.spacing();
  double peak = 0.0, shell = 0.0;
  Vec3 lsum = Vec3::Zero(), msum = Vec3::Zero();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vec3 r = basis.minimal_image(basis.position(i), out.centroid);
    lsum += r.cross(g[i]);
    msum += r.cross(cc.current[i]);
    peak = std::max(peak, pd.rho[i]);
    if (r.head(basis.dim()).cwiseAbs().maxCoeff() >= edge) shell = std::max(shell, pd.rho[i]);
  }
  out.angular_momentum = lsum * basis.cell_volume();
  out.magnetic_moment = msum * basis.cell_volume() / (2.0 * pc.c);
  out.boundary_fraction = peak > 0.0 ? shell / peak : 0.0;
  out.reliable = out.boundary_fraction <= boundary_threshold;
  return out;
}

struct FlowVelocities {
  VectorField charge_velocity;
  VectorField energy_velocity;
  std::vector<bool> masked;
  std::size_t superluminal_energy_sites = 0;
  /// Subset of the above with strictly positive energy density.
  std::size_t superluminal_positive_energy_sites = 0;
  double max_charge_speed = 0.0;
  double max_energy_speed = 0.0;
};

/**
 * Charge velocity J^p / rho^p and energy velocity c^2 g / u per site. Sites
 * with rho^p below floor_fraction * max(rho^p) are masked. An unmasked site
 * with u <= 0 but g != 0 counts as superluminal with infinite speed.
 */
inline FlowVelocities flow_velocities(const SpinorField& field, const PhysicalConstants& pc,
                                      double floor_fraction = 1e-10) {
  const auto pd = probability_densities(field, pc);
  const auto u = energy_density(field, pc);
  const auto g = momentum_density(field, pc);
  const std::size_t n = pd.rho.size();
  FlowVelocities out{VectorField(n, Vec3::Zero()), VectorField(n, Vec3::Zero()),
                     std::vector<bool>(n, true)};
  const double peak = *std::max_element(pd.rho.begin(), pd.rho.end());
  const double floor = floor_fraction * peak;
  const double c2 = pc.c * pc.c;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(pd.rho[i] > floor) || peak == 0.0) continue;
    out.masked[i] = false;
    out.charge_velocity[i] = pd.current[i] / pd.rho[i];
    out.max_charge_speed = std::max(out.max_charge_speed, out.charge_velocity[i].norm());
    const double flux = c2 * g[i].norm();
    double speed;
    if (u[i] > 0.0) {
      out.energy_velocity[i] = c2 * g[i] / u[i];
      speed = flux / u[i];
    } else {
      out.energy_velocity[i] = Vec3::Constant(std::numeric_limits<double>::infinity());
      speed = flux > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.max_energy_speed = std::max(out.max_energy_speed, speed);
    if (speed > pc.c) {
      ++out.superluminal_energy_sites;
      if (u[i] > 0.0) ++out.superluminal_positive_energy_sites;
    }
  }
  return out;
}

/**
 * Unit-norm single-branch packet
 *   psi~(k) ~ exp(-sigma^2 |k - p0/hbar|^2) e^{-ik.center} w(k, spin),
 * with w = u on the positive branch and v on the negative one,
 * whose probability density has standard deviation sigma per axis (in the
 * nonrelativistic limit). Requires sigma > 2 spacing and extent >= 8 sigma.
 */
inline SpinorField build_gaussian_packet(const ModeBasis& basis, const PhysicalConstants& pc,
                                         const Vec3& center, double sigma, const Vec3& p0,
                                         Spin spin, Branch branch = Branch::positive) {
  pc.validate();
  if (!(sigma > 2.0 * basis.spacing())) {
    throw domain_error("packet width is under-resolved by the lattice (need sigma > 2 spacing)");
  }
  if (basis.extent() < 8.0 * sigma) throw domain_error("packet does not fit in the box");
  const Vec3 k0 = p0 / pc.hbar;
  std::vector<Spinor> vals(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vec3 k = basis.wavevector(i);
    const double w = std::exp(-sigma * sigma * (k - k0).squaredNorm());
    const auto sp = plane_wave_spinors(k, pc);
    vals[i] = sp[spinor_slot(branch, spin)].amplitude * (w * std::exp(-I * k.dot(center)));
  }
  SpinorField f(basis, Representation::mode, std::move(vals));
  const double n2 = f.norm_squared();
  if (!(n2 > 0.0)) throw domain_error("packet has no support on the lattice");
  return (f * (1.0 / std::sqrt(n2))).to_position();
}

/// Gaussian random mode amplitudes on modes with band() <= max_band, in
/// position representation. max_band < 0 fills every non-Nyquist mode.
template <class Rng>
SpinorField random_field(const ModeBasis& basis, Rng& rng, int max_band = -1) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Spinor> vals(basis.size(), Spinor::Zero());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const bool keep = max_band < 0 ? !basis.is_nyquist(i) : basis.band(i) <= max_band;
    Spinor v;
    for (int c = 0; c < 4; ++c) v[c] = cplx(gauss(rng), gauss(rng));
    if (keep) vals[i] = v;
  }
  return SpinorField(basis, Representation::mode, std::move(vals)).to_position();
}

}  // namespace fieldlab::dirac
