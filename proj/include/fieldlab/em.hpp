// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/lorentz.hpp"
#include "fieldlab/modebasis.hpp"
#include "fieldlab/types.hpp"

#include <array>
#include <functional>
#include <random>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace fieldlab::em {

namespace detail {

inline void require_3d(const ModeBasis& b) {
  if (b.dim() != 3) throw domain_error("electromagnetic fields need a 3D basis");
}

inline ComplexVectorField to_modes(const ComplexVectorField& f, const ModeBasis& b) {
  ComplexVectorField out = f;
  b.forward({reinterpret_cast<cplx*>(out.data()), out.size() * 3}, 3);
  return out;
}

inline ComplexVectorField to_sites(const ComplexVectorField& f, const ModeBasis& b) {
  ComplexVectorField out = f;
  b.inverse({reinterpret_cast<cplx*>(out.data()), out.size() * 3}, 3);
  return out;
}

inline ComplexVectorField complexify(const VectorField& f) {
  ComplexVectorField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].cast<cplx>();
  return out;
}

inline VectorField real_part(const ComplexVectorField& f) {
  VectorField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

inline double squared_norm(const ComplexVectorField& f) {
  double s = 0.0;
  for (const auto& v : f) s += v.squaredNorm();
  return s;
}

}  // namespace detail

/// Spectral curl of a real vector field.
inline VectorField curl(const VectorField& f, const ModeBasis& b) {
  auto m = detail::to_modes(detail::complexify(f), b);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 k = b.is_nyquist(i) ? Vec3::Zero() : b.wavevector(i);
    m[i] = cross(I * k.cast<cplx>(), m[i]);
  }
  return detail::real_part(detail::to_sites(m, b));
}

/// ||k . f~|| / ||k|| ||f~|| over modes: relative L2 size of the divergence.
inline double divergence_norm(const VectorField& f, const ModeBasis& b) {
  const auto m = detail::to_modes(detail::complexify(f), b);
  double div = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 k = b.wavevector(i);
    div += std::norm(k.cast<cplx>().dot(m[i]));
    scale += k.squaredNorm() * m[i].squaredNorm();
  }
  return scale > 0.0 ? std::sqrt(div / scale) : 0.0;
}

/// Real (E, B) on the sites of a 3D basis, Gaussian-cgs units.
class EMField {
 public:
  EMField(ModeBasis basis, VectorField e, VectorField b)
      : basis_(std::move(basis)), e_(std::move(e)), b_(std::move(b)) {
    detail::require_3d(basis_);
    if (e_.size() != basis_.size() || b_.size() != basis_.size()) {
      throw domain_error("EM field size mismatch");
    }
  }

  const ModeBasis& basis() const { return basis_; }
  const VectorField& E() const { return e_; }
  const VectorField& B() const { return b_; }

  double divergence() const {
    return std::max(divergence_norm(e_, basis_), divergence_norm(b_, basis_));
  }

 private:
  ModeBasis basis_;
  VectorField e_;
  VectorField b_;
};

/// Integral of (E^2 + B^2) / 8 pi.
inline double field_energy(const EMField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.E().size(); ++i) s += f.E()[i].squaredNorm() + f.B()[i].squaredNorm();
  return s * f.basis().cell_volume() / (8.0 * pi);
}

/// F = E + iB.
inline ComplexVectorField riemann_silberstein(const VectorField& e, const VectorField& b) {
  if (e.size() != b.size()) throw domain_error("E and B differ in size");
  ComplexVectorField f(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) f[i] = e[i].cast<cplx>() + I * b[i].cast<cplx>();
  return f;
}

inline ComplexVectorField riemann_silberstein(const EMField& f) {
  return riemann_silberstein(f.E(), f.B());
}

/**
 * Exact free evolution in mode space. F~ obeys i dF~/dt = c (i k x) F~, so on
 * transverse modes F~(t) = cos(ckt) F~ + sin(ckt) (k^ x F~).
 */
inline EMField evolve_maxwell_free(const EMField& field, double t, const PhysicalConstants& pc,
                                   double divergence_tolerance = 1e-10) {
  if (field.divergence() > divergence_tolerance) {
    throw domain_error("Maxwell evolution needs divergence-free E and B");
  }
  const auto& b = field.basis();
  auto m = detail::to_modes(riemann_silberstein(field), b);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 k = b.wavevector(i);
    const double kn = k.norm();
    if (kn == 0.0) continue;
    const double w = pc.c * kn * t;
    const CVec3 khat = (k / kn).cast<cplx>();
    m[i] = std::cos(w) * m[i] + std::sin(w) * cross(khat, m[i]);
  }
  const auto f = detail::to_sites(m, b);
  VectorField e(f.size()), bb(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    e[i] = f[i].real();
    bb[i] = f[i].imag();
  }
  return EMField(b, std::move(e), std::move(bb));
}

/// Time derivative from Maxwell's source-free equations: dE/dt = c curl B,
/// dB/dt = -c curl E.
inline EMField maxwell_time_derivative(const EMField& field, const PhysicalConstants& pc) {
  auto de = curl(field.B(), field.basis());
  auto db = curl(field.E(), field.basis());
  for (auto& v : de) v *= pc.c;
  for (auto& v : db) v *= -pc.c;
  return EMField(field.basis(), std::move(de), std::move(db));
}

/// (s_i)_{jk} = -i epsilon_{ijk}.
inline const std::array<Mat3, 3>& spin_one_matrices() {
  static const std::array<Mat3, 3> s = [] {
    std::array<Mat3, 3> out;
    for (int i = 0; i < 3; ++i) {
      out[i].setZero();
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          double eps = 0.0;
          if (i != j && j != k && i != k) eps = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
          out[i](j, k) = -I * eps;
        }
      }
    }
    return out;
  }();
  return s;
}

/// Candidate photon wave function on the lattice (position representation)
/// plus its positive- and negative-frequency (helicity +1 / -1) parts.
struct PhotonWF {
  ModeBasis basis;
  ComplexVectorField phi;
  ComplexVectorField phi_plus;
  ComplexVectorField phi_minus;
};

/// Good's mode weight 1 / (sqrt(8 pi) sqrt(hbar c |k|)); zero at k = 0.
inline double good_weight(const Vec3& k, const PhysicalConstants& pc) {
  const double kn = k.norm();
  if (kn == 0.0) return 0.0;
  return 1.0 / (std::sqrt(8.0 * pi) * std::sqrt(pc.hbar * pc.c * kn));
}

/// Helicity projections (1/2)(v_perp +/- i k^ x v) of every mode.
inline std::pair<ComplexVectorField, ComplexVectorField> helicity_split(
    const ComplexVectorField& modes, const ModeBasis& b) {
  ComplexVectorField plus(modes.size(), CVec3::Zero()), minus(modes.size(), CVec3::Zero());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Vec3 k = b.wavevector(i);
    const double kn = k.norm();
    if (kn == 0.0) continue;
    const CVec3 khat = (k / kn).cast<cplx>();
    const CVec3 perp = modes[i] - khat * khat.dot(modes[i]);
    const CVec3 rot = I * cross(khat, modes[i]);
    plus[i] = 0.5 * (perp + rot);
    minus[i] = 0.5 * (perp - rot);
  }
  return {plus, minus};
}

/// phi = mode-wise F~ / (sqrt(8 pi) sqrt(hbar c |k|)). F must be mean free.
inline PhotonWF good_wavefunction(const ComplexVectorField& f, const ModeBasis& b,
                                  const PhysicalConstants& pc, double zero_mode_tolerance = 1e-12) {
  detail::require_3d(b);
  if (f.size() != b.size()) throw domain_error("F does not match the basis");
  auto m = detail::to_modes(f, b);
  const double scale = std::max(1.0, std::sqrt(detail::squared_norm(m)));
  if (m[0].norm() > zero_mode_tolerance * scale) {
    throw domain_error("Good construction needs a field without a k = 0 component");
  }
  for (std::size_t i = 0; i < m.size(); ++i) m[i] *= good_weight(b.wavevector(i), pc);
  auto [plus, minus] = helicity_split(m, b);
  return PhotonWF{b, detail::to_sites(m, b), detail::to_sites(plus, b), detail::to_sites(minus, b)};
}

inline PhotonWF good_wavefunction(const EMField& field, const PhysicalConstants& pc) {
  return good_wavefunction(riemann_silberstein(field), field.basis(), pc);
}

/// Recovers F from phi using the stored mode weights.
inline ComplexVectorField inverse_good(const PhotonWF& wf, const PhysicalConstants& pc) {
  auto m = detail::to_modes(wf.phi, wf.basis);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = good_weight(wf.basis.wavevector(i), pc);
    m[i] = w > 0.0 ? CVec3(m[i] / w) : CVec3::Zero();
  }
  return detail::to_sites(m, wf.basis);
}

/// max_k |k . phi~(k)| / max_k |k||phi~(k)|.
inline double transversality_error(const ComplexVectorField& phi, const ModeBasis& b) {
  const auto m = detail::to_modes(phi, b);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 k = b.wavevector(i);
    worst = std::max(worst, std::abs(k.cast<cplx>().dot(m[i])));
    scale = std::max(scale, k.norm() * m[i].norm());
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

/// c s.p phi with p = -i hbar grad, applied with the explicit s matrices.
inline ComplexVectorField apply_spin_momentum(const ComplexVectorField& phi, const ModeBasis& b,
                                              const PhysicalConstants& pc) {
  const auto& s = spin_one_matrices();
  auto m = detail::to_modes(phi, b);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vec3 k = b.is_nyquist(i) ? Vec3::Zero() : b.wavevector(i);
    const Mat3 sk = s[0] * k[0] + s[1] * k[1] + s[2] * k[2];
    m[i] = pc.c * pc.hbar * (sk * m[i]);
  }
  return detail::to_sites(m, b);
}

/// d(phi)/dt obtained by applying the Good construction to dF/dt from
/// Maxwell's equations.
inline PhotonWF photon_time_derivative(const EMField& field, const PhysicalConstants& pc) {
  return good_wavefunction(maxwell_time_derivative(field, pc), pc);
}

/// ||i hbar dphi/dt - c s.p phi|| / ||i hbar dphi/dt||.
inline double photon_wave_equation_residual(const ComplexVectorField& phi,
                                            const ComplexVectorField& dphi_dt, const ModeBasis& b,
                                            const PhysicalConstants& pc) {
  const auto rhs = apply_spin_momentum(phi, b, pc);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const CVec3 lhs = I * pc.hbar * dphi_dt[i];
    num += (lhs - rhs[i]).squaredNorm();
    den += lhs.squaredNorm();
  }
  if (den == 0.0) den = detail::squared_norm(rhs);
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

inline double photon_wave_equation_residual(const EMField& field, const PhysicalConstants& pc) {
  const auto wf = good_wavefunction(field, pc);
  const auto dwf = photon_time_derivative(field, pc);
  return photon_wave_equation_residual(wf.phi, dwf.phi, field.basis(), pc);
}

struct PhotonDensities {
  ScalarField rho;
  VectorField current;
};

/// rho^p = phi^dagger phi, J^p = c phi^dagger s phi = -i c (phi* x phi).
inline CVec3 photon_current_at(const CVec3& phi, const PhysicalConstants& pc) {
  const auto& s = spin_one_matrices();
  CVec3 j;
  for (int a = 0; a < 3; ++a) j[a] = pc.c * phi.dot(s[a] * phi);
  return j;
}

inline PhotonDensities photon_densities(const ComplexVectorField& phi,
                                        const PhysicalConstants& pc) {
  PhotonDensities out{ScalarField(phi.size()), VectorField(phi.size())};
  for (std::size_t i = 0; i < phi.size(); ++i) {
    out.rho[i] = phi[i].squaredNorm();
    out.current[i] = photon_current_at(phi[i], pc).real();
  }
  return out;
}

/**
 * i hbar integral(phi+^dagger d_t phi+ - phi-^dagger d_t phi-). The
 * derivative parts are split with the same helicity projection as phi.
 */
inline double good_energy(const PhotonWF& wf, const PhotonWF& dwf_dt, const PhysicalConstants& pc) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < wf.phi.size(); ++i) {
    s += wf.phi_plus[i].dot(dwf_dt.phi_plus[i]) - wf.phi_minus[i].dot(dwf_dt.phi_minus[i]);
  }
  return (I * pc.hbar * s).real() * wf.basis.cell_volume();
}

inline double good_energy(const EMField& field, const PhysicalConstants& pc) {
  return good_energy(good_wavefunction(field, pc), photon_time_derivative(field, pc), pc);
}

/// Random divergence-free real (E, B) with modes 0 < band <= max_band and
/// no k = 0 or Nyquist content.
template <class Rng>
EMField random_transverse_field(const ModeBasis& b, Rng& rng, int max_band) {
  detail::require_3d(b);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    ComplexVectorField m(b.size(), CVec3::Zero());
    for (std::size_t i = 0; i < b.size(); ++i) {
      CVec3 v;
      for (int a = 0; a < 3; ++a) v[a] = cplx(gauss(rng), gauss(rng));
      const Vec3 k = b.wavevector(i);
      if (b.band(i) == 0 || b.band(i) > max_band || b.is_nyquist(i)) continue;
      const CVec3 khat = (k / k.norm()).cast<cplx>();
      m[i] = v - khat * khat.dot(v);
    }
    return detail::real_part(detail::to_sites(m, b));
  };
  VectorField e = draw();
  VectorField bb = draw();
  return EMField(b, std::move(e), std::move(bb));
}

/// Pointwise field transformation into a frame moving with velocity v.
inline std::pair<Vec3, Vec3> boost_field_values(const Vec3& e, const Vec3& b, const Vec3& v,
                                                const PhysicalConstants& pc) {
  const LorentzBoost lb(v, pc.c);
  const double g = lb.gamma();
  const Vec3 beta = v / pc.c;
  const double f = g * g / (g + 1.0);
  const Vec3 e2 = g * (e + beta.cross(b)) - f * beta * beta.dot(e);
  const Vec3 b2 = g * (b - beta.cross(e)) - f * beta * beta.dot(b);
  return {e2, b2};
}

/// Site-wise boost of field values; entry i holds the fields at the image of
/// (t = 0, x_i) in the moving frame (generally off the lattice).
inline std::pair<VectorField, VectorField> boost_em(const EMField& field, const Vec3& v,
                                                    const PhysicalConstants& pc) {
  VectorField e(field.E().size()), b(field.B().size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::tie(e[i], b[i]) = boost_field_values(field.E()[i], field.B()[i], v, pc);
  }
  return {e, b};
}

/**
 * Analytic free field E = Re sum_j E_j exp(i(k_j.x - c|k_j| t)), with
 * B_j = k^_j x E_j. Each E_j must be transverse to its k_j.
 */
struct PlaneWaveSum {
  struct Mode {
    Vec3 k;
    CVec3 e_amp;
    CVec3 b_amp() const { return cross((k / k.norm()).cast<cplx>(), e_amp); }
  };

  std::vector<Mode> modes;

  void add(const Vec3& k, const CVec3& e_amp) {
    if (!(k.norm() > 0.0)) throw domain_error("plane wave needs k != 0");
    if (std::abs(k.cast<cplx>().dot(e_amp)) > 1e-12 * k.norm() * e_amp.norm()) {
      throw domain_error("plane wave amplitude must be transverse");
    }
    modes.push_back({k, e_amp});
  }

  std::pair<Vec3, Vec3> fields(const Event& ev, const PhysicalConstants& pc) const {
    Vec3 e = Vec3::Zero(), b = Vec3::Zero();
    for (const auto& m : modes) {
      const cplx ph = std::exp(I * (m.k.dot(ev.x) - pc.c * m.k.norm() * ev.t));
      e += (m.e_amp * ph).real();
      b += (m.b_amp() * ph).real();
    }
    return {e, b};
  }

  /// Good's phi at an event: the e^{+i theta} part of F = E + iB sits at k,
  /// the e^{-i theta} part at -k, both weighted by 1/sqrt(8 pi hbar c |k|).
  CVec3 photon_wf(const Event& ev, const PhysicalConstants& pc) const {
    CVec3 phi = CVec3::Zero();
    for (const auto& m : modes) {
      const cplx ph = std::exp(I * (m.k.dot(ev.x) - pc.c * m.k.norm() * ev.t));
      const CVec3 a = 0.5 * (m.e_amp + I * m.b_amp());
      const CVec3 c = 0.5 * (m.e_amp.conjugate() + I * m.b_amp().conjugate());
      phi += good_weight(m.k, pc) * (a * ph + c * std::conj(ph));
    }
    return phi;
  }
};

/// Same field seen from a frame moving with velocity v: amplitudes transform
/// like the fields, wavevectors like four-vectors.
inline PlaneWaveSum boost(const PlaneWaveSum& field, const Vec3& v, const PhysicalConstants& pc) {
  const LorentzBoost lb(v, pc.c);
  PlaneWaveSum out;
  for (const auto& m : field.modes) {
    const Vec3 k = lb.apply_wave(pc.c * m.k.norm(), m.k).second;
    // real-linear map, applied to real and imaginary parts separately
    const CVec3 b_amp = m.b_amp();
    const Vec3 er = boost_field_values(m.e_amp.real(), b_amp.real(), v, pc).first;
    const Vec3 ei = boost_field_values(m.e_amp.imag(), b_amp.imag(), v, pc).first;
    out.modes.push_back({k, er.cast<cplx>() + I * ei.cast<cplx>()});
  }
  return out;
}

inline FourVector photon_four_current(const CVec3& phi, const PhysicalConstants& pc) {
  return {pc.c * phi.squaredNorm(), photon_current_at(phi, pc).real()};
}

/**
 * Max relative deviation between (c rho^p, J^p) of the Good wave function
 * rebuilt in the moving frame and the four-vector transform of the
 * rest-frame densities, at matched events.
 */
inline double photon_covariance_report(const PlaneWaveSum& field, const Vec3& v,
                                       const PhysicalConstants& pc,
                                       const std::vector<Event>& events) {
  const LorentzBoost lb(v, pc.c);
  const PlaneWaveSum moved = boost(field, v, pc);
  std::vector<FourVector> computed, expected;
  for (const auto& e : events) {
    computed.push_back(photon_four_current(moved.photon_wf(lb.apply(e), pc), pc));
    expected.push_back(lb.apply(photon_four_current(field.photon_wf(e, pc), pc)));
  }
  return four_vector_mismatch(computed, expected);
}

/// f = rho E + (1/c) J x B.
inline VectorField lorentz_force_density(const ScalarField& rho, const VectorField& j,
                                         const VectorField& e, const VectorField& b,
                                         const PhysicalConstants& pc) {
  if (rho.size() != j.size() || j.size() != e.size() || e.size() != b.size()) {
    throw domain_error("force density inputs differ in size");
  }
  VectorField f(rho.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rho[i] * e[i] + j[i].cross(b[i]) / pc.c;
  return f;
}

/// F = q E + (q/c) v x B.
inline Vec3 point_force(double q, const Vec3& v, const Vec3& e, const Vec3& b,
                        const PhysicalConstants& pc) {
  return q * e + (q / pc.c) * v.cross(b);
}

/// Madelung-type constant of a simple cubic lattice of point charges in a
/// neutralizing background: E_periodic = E_isolated - q^2 xi / (2L).
inline constexpr double cubic_madelung = 2.8372974794806;

/**
 * U = (1/2) integral rho(x) rho(y) / |x - y| with the periodic 4 pi / k^2
 * kernel and the k = 0 mode dropped (neutralizing background).
 */
inline double coulomb_self_energy(const ScalarField& rho, const ModeBasis& b) {
  detail::require_3d(b);
  std::vector<cplx> m(rho.begin(), rho.end());
  b.forward(m);
  // continuum transform = cell_volume * N^{3/2} * unitary coefficient
  const double to_continuum = b.cell_volume() * std::sqrt(static_cast<double>(b.size()));
  double u = 0.0;
  for (std::size_t i = 1; i < m.size(); ++i) {
    const double k2 = b.wavevector(i).squaredNorm();
    u += 4.0 * pi / k2 * std::norm(m[i] * to_continuum);
  }
  return 0.5 * u / b.volume();
}

/// Periodic energy plus the leading finite-size term Q^2 xi / (2L) of a
/// charged cell, approximating the energy of the same cloud in open space.
inline double coulomb_self_energy_isolated(const ScalarField& rho, const ModeBasis& b) {
  double q = 0.0;
  for (double r : rho) q += r;
  q *= b.cell_volume();
  return coulomb_self_energy(rho, b) + q * q * cubic_madelung / (2.0 * b.extent());
}

struct RefinementRow {
  int points_per_axis;
  double periodic_energy;
  double isolated_energy;
};

/// Self-energies of density(basis) on successively finer lattices.
inline std::vector<RefinementRow> refinement_study(
    const std::function<ScalarField(const ModeBasis&)>& density, double extent,
    const std::vector<int>& levels) {
  std::vector<RefinementRow> rows;
  for (int n : levels) {
    const auto b = ModeBasis::build(3, extent, n);
    const auto rho = density(b);
    rows.push_back({n, coulomb_self_energy(rho, b), coulomb_self_energy_isolated(rho, b)});
  }
  return rows;
}

/// Gaussian cloud of total charge q (exact on the lattice), std-dev sigma,
/// centred in the box.
inline ScalarField gaussian_charge_density(const ModeBasis& b, double q, double sigma) {
  const Vec3 center = Vec3::Constant(b.extent() / 2.0);
  ScalarField rho(b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec3 r = b.minimal_image(b.position(i), center);
    rho[i] = std::exp(-r.squaredNorm() / (2.0 * sigma * sigma));
    s += rho[i];
  }
  for (auto& r : rho) r *= q / (s * b.cell_volume());
  return rho;
}

/// All charge q on the central site.
inline ScalarField point_charge_density(const ModeBasis& b, double q) {
  ScalarField rho(b.size(), 0.0);
  const int h = b.points_per_axis() / 2;
  rho[b.flatten({h, h, h})] = q / b.cell_volume();
  return rho;
}

/// Closed form for an isolated Gaussian cloud: q^2 / (2 sigma sqrt(pi)).
inline double gaussian_self_energy(double q, double sigma) {
  return q * q / (2.0 * sigma * std::sqrt(pi));
}

}  // namespace fieldlab::em
