// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/dirac.hpp"
#include "fieldlab/dirac_boost.hpp"
#include "fieldlab/em.hpp"
#include "fieldlab/fock.hpp"
#include "fieldlab/functional.hpp"
#include "fieldlab/grassmann.hpp"
#include "fieldlab/io.hpp"
#include "fieldlab/modebasis.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fieldlab::scenarios {

using json = nlohmann::json;

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string requirement;
};

struct Artifact {
  std::string filename;
  std::string content;
};

struct Outcome {
  io::Table table;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<Artifact> data_files;  // deterministic
  std::vector<Artifact> plots;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  void check(std::string name, bool ok, double value, std::string requirement) {
    checks.push_back({std::move(name), ok, value, std::move(requirement)});
  }
};

struct Context {
  json config;
  std::uint64_t seed = 0;
  PhysicalConstants pc;

  double num(const char* key) const { return config.at(key).get<double>(); }
  int integer(const char* key) const { return config.at(key).get<int>(); }
  std::vector<double> list(const char* key) const { return config.at(key).get<std::vector<double>>(); }
  std::vector<int> int_list(const char* key) const { return config.at(key).get<std::vector<int>>(); }
  /// Compton length hbar / (m c), the natural length for packet widths.
  double compton() const { return pc.hbar / (pc.mass * pc.c); }
};

struct Scenario {
  std::string name;
  std::string claim;
  json defaults;
  std::function<Outcome(const Context&)> run;
};

inline constexpr std::uint64_t default_seed = 20260417;

namespace detail {

inline double rel(double value, double target) { return std::abs(value - target) / std::abs(target); }

inline Vec3 centre(const ModeBasis& b) { return Vec3::Constant(b.extent() / 2.0); }

// --- spin-packet ------------------------------------------------------------------

inline Outcome spin_packet(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  const double sigma = ctx.num("sigma") * ctx.compton();
  const auto basis = ModeBasis::build(3, ctx.num("box_factor") * sigma, ctx.integer("points_per_axis"));
  const auto psi = dirac::build_gaussian_packet(basis, pc, centre(basis), sigma, Vec3::Zero(), dirac::Spin::up);
  const auto obs = dirac::spin_observables(psi, pc);
  const double l_target = pc.hbar / 2.0;
  const double m_target = -pc.charge * pc.hbar / (2.0 * pc.mass * pc.c);
  const double lz = obs.angular_momentum.z(), mz = obs.magnetic_moment.z();

  out.table.columns = {"quantity", "value", "target", "relative_error"};
  out.table.add({"L_x", obs.angular_momentum.x(), 0.0, ""});
  out.table.add({"L_y", obs.angular_momentum.y(), 0.0, ""});
  out.table.add({"L_z", lz, l_target, rel(lz, l_target)});
  out.table.add({"m_x", obs.magnetic_moment.x(), 0.0, ""});
  out.table.add({"m_y", obs.magnetic_moment.y(), 0.0, ""});
  out.table.add({"m_z", mz, m_target, rel(mz, m_target)});
  out.table.add({"L_z/hbar", lz / pc.hbar, 0.5, rel(lz, l_target)});
  out.table.add({"m_z*2mc/(e*hbar)", mz / (-m_target), -1.0, rel(mz, m_target)});
  out.table.add({"norm", psi.norm_squared(), 1.0, rel(psi.norm_squared(), 1.0)});
  out.table.add({"energy", dirac::energy(psi, pc), pc.rest_energy(), ""});
  out.table.add({"boundary_fraction", obs.boundary_fraction, 0.0, ""});

  out.check("L_z = hbar/2 within 1%", rel(lz, l_target) <= 0.01, lz, "|L_z - hbar/2| <= 0.01 hbar/2");
  out.check("m_z = -e hbar/2mc within 2%", rel(mz, m_target) <= 0.02, mz, "|m_z + e hbar/2mc| <= 0.02 e hbar/2mc");
  out.check("moment antiparallel to spin", lz > 0.0 && mz < 0.0, lz * mz, "L_z > 0 and m_z < 0");
  out.check("packet contained in the box", obs.reliable, obs.boundary_fraction, "boundary density fraction <= 1e-6");
  out.notes.push_back("centroid = (" + io::format_double(obs.centroid.x()) + ", " +
                      io::format_double(obs.centroid.y()) + ", " + io::format_double(obs.centroid.z()) + ")");

  // Mid-plane |J| heatmap.
  const auto cc = dirac::charge_current(psi, pc);
  const int n = basis.points_per_axis();
  std::vector<double> slice;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) slice.push_back(cc.current[basis.flatten({x, y, n / 2})].norm());
  out.plots.push_back({"current_midplane.svg", io::render_heatmap("|J| in the z = L/2 plane", slice, n, n)});
  return out;
}

// --- small-packet-trend -----------------------------------------------------------

inline Outcome small_packet_trend(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  auto sigmas = ctx.list("sigmas");
  std::sort(sigmas.begin(), sigmas.end(), std::greater<>());
  out.table.columns = {"sigma", "energy", "L_z", "m_z", "abs_m_z", "boundary_fraction"};
  std::vector<double> energies, moments;
  for (double s : sigmas) {
    const double sigma = s * ctx.compton();
    const auto basis = ModeBasis::build(3, ctx.num("box_factor") * sigma, ctx.integer("points_per_axis"));
    const auto psi = dirac::build_gaussian_packet(basis, pc, centre(basis), sigma, Vec3::Zero(), dirac::Spin::up);
    const auto obs = dirac::spin_observables(psi, pc);
    const double e = dirac::energy(psi, pc);
    energies.push_back(e);
    moments.push_back(std::abs(obs.magnetic_moment.z()));
    out.table.add({s, e, obs.angular_momentum.z(), obs.magnetic_moment.z(), moments.back(), obs.boundary_fraction});
  }
  bool e_up = true, m_down = true;
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    e_up = e_up && energies[i] > energies[i - 1];
    m_down = m_down && moments[i] < moments[i - 1];
  }
  out.check("energy strictly increases as sigma shrinks", e_up, energies.empty() ? 0.0 : energies.back(),
            "E(sigma_i+1) > E(sigma_i) for decreasing sigma");
  out.check("|m_z| strictly decreases as sigma shrinks", m_down, moments.empty() ? 0.0 : moments.back(),
            "|m_z|(sigma_i+1) < |m_z|(sigma_i) for decreasing sigma");
  io::LinePlot plot{"Packet energy and moment vs width", "sigma (hbar/mc)", "value", true, true, {}};
  plot.series.push_back({"energy", sigmas, energies});
  plot.series.push_back({"|m_z|", sigmas, moments});
  out.plots.push_back({"trend.svg", io::render_svg(plot)});
  return out;
}

// --- charge-velocity ----------------------------------------------------------------

inline Outcome charge_velocity(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  std::mt19937_64 rng(ctx.seed);
  const auto small = ModeBasis::build(3, ctx.num("extent") * ctx.compton(), ctx.integer("points_per_axis"));
  const int fields = ctx.integer("fields");
  double worst = 0.0;
  for (int f = 0; f < fields; ++f) {
    const auto psi = dirac::random_field(small, rng, ctx.integer("max_band"));
    const auto pd = dirac::probability_densities(psi, pc);
    for (std::size_t i = 0; i < pd.rho.size(); ++i) {
      if (pd.rho[i] > 0.0) worst = std::max(worst, pd.current[i].norm() / (pc.c * pd.rho[i]));
    }
  }
  out.check("charge speed bounded by c on random fields", worst <= 1.0 + 1e-10, worst,
            "max |J^p| / (c rho^p) <= 1 + 1e-10");
  out.notes.push_back(std::to_string(fields) + " random fields, max |J^p|/(c rho^p) = " + io::format_double(worst));

  const double sigma = ctx.num("scan_sigma") * ctx.compton();
  const auto big = ModeBasis::build(3, ctx.num("scan_extent") * ctx.compton(), ctx.integer("scan_points"));
  out.table.columns = {"p0", "weight", "max_charge_speed", "max_energy_speed", "superluminal_sites",
                       "superluminal_sites_positive_u"};
  std::size_t found = 0;
  double scan_charge = 0.0;
  for (double p : ctx.list("scan_momenta")) {
    const Vec3 p0(p * pc.mass * pc.c, 0.0, 0.0);
    const auto right = dirac::build_gaussian_packet(big, pc, centre(big), sigma, p0, dirac::Spin::up);
    const auto left = dirac::build_gaussian_packet(big, pc, centre(big), sigma, -p0, dirac::Spin::up);
    for (double w : ctx.list("scan_weights")) {
      const auto psi = right + left * cplx(w);
      const auto fv = dirac::flow_velocities(psi, pc, ctx.num("mask_floor"));
      found += fv.superluminal_energy_sites;
      scan_charge = std::max(scan_charge, fv.max_charge_speed / pc.c);
      out.table.add({p, w, fv.max_charge_speed, fv.max_energy_speed, fv.superluminal_energy_sites,
                     fv.superluminal_positive_energy_sites});
    }
  }
  out.check("superluminal energy flow exists in the scan", found >= 1, static_cast<double>(found),
            ">= 1 unmasked site with |v_energy| > c");
  out.check("charge speed bounded by c in the scan", scan_charge <= 1.0 + 1e-10, scan_charge,
            "max |J^p| / (c rho^p) <= 1 + 1e-10");
  return out;
}

// --- gordon-closure --------------------------------------------------------------------

inline Outcome gordon_closure(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  std::mt19937_64 rng(ctx.seed);
  const auto basis = ModeBasis::build(3, ctx.num("extent") * ctx.compton(), ctx.integer("points_per_axis"));
  out.table.columns = {"field", "relative_error", "convection_norm", "spin_norm", "time_derivative_norm"};
  double worst = 0.0;
  for (int f = 0; f < ctx.integer("fields"); ++f) {
    const auto psi = dirac::random_field(basis, rng, ctx.integer("max_band"));
    const auto terms = dirac::gordon_decompose(psi, pc);
    const auto j = dirac::charge_current(psi, pc).current;
    const double err = l2_distance(terms.total(), j) / l2_norm(j);
    worst = std::max(worst, err);
    out.table.add({f, err, l2_norm(terms.convection), l2_norm(terms.spin), l2_norm(terms.time_derivative)});
  }
  out.check("Gordon terms sum to the current", worst < 1e-8, worst, "relative L2 error < 1e-8");
  return out;
}

// --- photon-goodwf ----------------------------------------------------------------------

inline Outcome photon_goodwf(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  std::mt19937_64 rng(ctx.seed);
  const auto basis = ModeBasis::build(3, ctx.num("extent"), ctx.integer("points_per_axis"));
  out.table.columns = {"field", "wave_equation_residual", "transversality_error", "roundtrip_error"};
  double worst = 0.0, worst_t = 0.0, worst_r = 0.0;
  for (int f = 0; f < ctx.integer("fields"); ++f) {
    const auto field = em::random_transverse_field(basis, rng, ctx.integer("max_band"));
    const double res = em::photon_wave_equation_residual(field, pc);
    const auto wf = em::good_wavefunction(field, pc);
    const double tr = em::transversality_error(wf.phi, basis);
    const auto f_back = em::inverse_good(wf, pc);
    const auto f_orig = em::riemann_silberstein(field);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f_back.size(); ++i) {
      num += (f_back[i] - f_orig[i]).squaredNorm();
      den += f_orig[i].squaredNorm();
    }
    const double rt = std::sqrt(num / den);
    worst = std::max(worst, res);
    worst_t = std::max(worst_t, tr);
    worst_r = std::max(worst_r, rt);
    out.table.add({f, res, tr, rt});
  }
  out.check("Good wave function obeys i hbar dphi/dt = c s.p phi", worst < 1e-10, worst, "relative residual < 1e-10");
  out.check("phi is transverse", worst_t < 1e-12, worst_t, "max |k.phi~| / max |k||phi~| < 1e-12");
  out.check("F is recovered from phi", worst_r < 1e-12, worst_r, "relative L2 error < 1e-12");
  return out;
}

// --- photon-covariance -------------------------------------------------------------------

inline Outcome photon_covariance(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double kscale = ctx.num("k_scale");
  const double span = ctx.num("event_span");
  auto dir = ctx.list("direction");
  if (dir.size() != 3) throw domain_error("direction needs three components");
  Vec3 n(dir[0], dir[1], dir[2]);
  if (!(n.norm() > 0.0)) throw domain_error("direction must be nonzero");
  n.normalize();

  auto random_k = [&] {
    Vec3 k;
    do {
      k = Vec3(unit(rng), unit(rng), unit(rng)) * kscale;
    } while (k.norm() < 0.2 * kscale);
    return k;
  };
  auto random_c3 = [&] { return CVec3(cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng)), cplx(gauss(rng), gauss(rng))); };

  std::vector<Event> events;
  for (int e = 0; e < ctx.integer("events"); ++e) {
    events.push_back({span * unit(rng), Vec3(unit(rng), unit(rng), unit(rng)) * span});
  }

  std::vector<em::PlaneWaveSum> photons, singles;
  std::vector<dirac::PlaneWaveSum> diracs;
  for (int s = 0; s < ctx.integer("superpositions"); ++s) {
    em::PlaneWaveSum ph, one;
    dirac::PlaneWaveSum dr;
    for (int m = 0; m < ctx.integer("modes_per_superposition"); ++m) {
      const Vec3 k = random_k();
      const Vec3 kh = k.normalized();
      CVec3 a = random_c3();
      a -= kh.cast<cplx>() * kh.cast<cplx>().dot(a);
      ph.add(k, a);
      if (m == 0) {
        // Circular polarization: a single helicity.
        const Vec3 e1 = kh.unitOrthogonal();
        one.add(k, (e1.cast<cplx>() + I * kh.cross(e1).cast<cplx>()) * a.norm());
      }
      const Vec3 kd = random_k() * (pc.mass * pc.c / pc.hbar);
      dr.add(kd, gauss(rng) > 0 ? dirac::Branch::positive : dirac::Branch::negative,
             gauss(rng) > 0 ? dirac::Spin::up : dirac::Spin::down, cplx(gauss(rng), gauss(rng)), pc);
    }
    photons.push_back(ph);
    singles.push_back(one);
    diracs.push_back(dr);
  }

  out.table.columns = {"case", "index", "speed", "mismatch"};
  const double check_speed = ctx.num("check_speed");
  for (double speed : ctx.list("speeds")) {
    const Vec3 v = n * (speed * pc.c);
    double ph_min = 1e300, ph_max = 0.0, dr_max = 0.0, single_max = 0.0;
    for (std::size_t s = 0; s < photons.size(); ++s) {
      const double mp = em::photon_covariance_report(photons[s], v, pc, events);
      const double md = dirac::covariance_report(diracs[s], v, pc, events);
      const double m1 = em::photon_covariance_report(singles[s], v, pc, events);
      out.table.add({"photon-superposition", static_cast<int>(s), speed, mp});
      out.table.add({"dirac-superposition", static_cast<int>(s), speed, md});
      out.table.add({"photon-single-mode", static_cast<int>(s), speed, m1});
      ph_min = std::min(ph_min, mp);
      ph_max = std::max(ph_max, mp);
      dr_max = std::max(dr_max, md);
      single_max = std::max(single_max, m1);
    }
    const std::string sp = io::format_double(speed);
    if (speed == 0.0) {
      out.check("identity boost leaves both densities unchanged", ph_max <= 1e-12 && dr_max <= 1e-12,
                std::max(ph_max, dr_max), "mismatch <= 1e-12 at v = 0");
    }
    if (speed == check_speed) {
      out.check("Dirac four-current covariant at v = " + sp + "c", dr_max < 1e-8, dr_max, "max mismatch < 1e-8");
      out.check("photon density not covariant at v = " + sp + "c", ph_min > 0.01, ph_min, "min mismatch > 0.01");
    }
    out.notes.push_back("v = " + sp + "c: single-mode photon mismatch max = " + io::format_double(single_max) +
                        " (single-helicity plane wave)");
  }
  return out;
}

// --- energy-identity -----------------------------------------------------------------------

inline Outcome energy_identity(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  std::mt19937_64 rng(ctx.seed);
  const auto basis = ModeBasis::build(3, ctx.num("extent"), ctx.integer("points_per_axis"));
  out.table.columns = {"field", "good_energy", "field_energy", "relative_difference"};
  double worst = 0.0;
  for (int f = 0; f < ctx.integer("fields"); ++f) {
    const auto field = em::random_transverse_field(basis, rng, ctx.integer("max_band"));
    const double eg = em::good_energy(field, pc);
    const double ef = em::field_energy(field);
    const double d = rel(eg, ef);
    worst = std::max(worst, d);
    out.table.add({f, eg, ef, d});
  }
  out.check("photon energy expression equals the field energy", worst < 1e-10, worst, "relative difference < 1e-10");
  return out;
}

// --- self-energy -------------------------------------------------------------------------------

inline Outcome self_energy(const Context& ctx) {
  Outcome out;
  const double q = ctx.num("charge");
  const double sigma = ctx.num("sigma");
  const double extent = ctx.num("extent");
  const auto levels = ctx.int_list("levels");
  if (levels.size() < 2) throw domain_error("self-energy needs at least two refinement levels");
  const auto gauss = em::refinement_study([&](const ModeBasis& b) { return em::gaussian_charge_density(b, q, sigma); },
                                          extent, levels);
  const auto point = em::refinement_study([&](const ModeBasis& b) { return em::point_charge_density(b, q); },
                                          extent, levels);
  const double closed = em::gaussian_self_energy(q, sigma);
  out.table.columns = {"points_per_axis", "gaussian_periodic", "gaussian_isolated", "gaussian_closed_form",
                       "point_periodic", "point_isolated"};
  std::vector<double> ns, gs, ps;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    out.table.add({levels[i], gauss[i].periodic_energy, gauss[i].isolated_energy, closed, point[i].periodic_energy,
                   point[i].isolated_energy});
    ns.push_back(levels[i]);
    gs.push_back(gauss[i].isolated_energy);
    ps.push_back(point[i].isolated_energy);
  }
  const std::size_t f = levels.size() - 1;
  const double change = rel(gauss[f].isolated_energy, gauss[f - 1].isolated_energy);
  const double oracle = rel(gauss[f].isolated_energy, closed);
  const double growth = point[f].isolated_energy / point[f - 1].isolated_energy;
  out.check("Gaussian self-energy converged", change < 0.01, change, "relative change between finest levels < 1%");
  out.check("Gaussian self-energy matches closed form", oracle < 0.02, oracle, "relative error < 2%");
  out.check("single-site self-energy diverges", growth >= 2.0, growth, "ratio between finest levels >= 2");
  io::LinePlot plot{"Coulomb self-energy under refinement", "points per axis", "U", true, true, {}};
  plot.series.push_back({"Gaussian cloud", ns, gs});
  plot.series.push_back({"single site", ns, ps});
  out.plots.push_back({"self_energy.svg", io::render_svg(plot)});
  return out;
}

// --- fock-demo -----------------------------------------------------------------------------------

inline Outcome fock_demo(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(ctx.seed);
  out.table.columns = {"statistics", "modes", "cap", "states", "identities", "mixed_dev", "annihilator_dev",
                       "creator_dev"};
  double worst = 0.0;
  for (int m = 1; m <= ctx.integer("max_modes"); ++m) {
    std::vector<double> omegas;
    for (int i = 0; i < m; ++i) omegas.push_back(1.0 + 0.5 * i);
    for (int fermi = 0; fermi < 2; ++fermi) {
      auto ms = std::make_shared<const fock::ModeSet>(fermi ? fock::simple_fermionic_modes(omegas)
                                                            : fock::simple_bosonic_modes(omegas, ctx.integer("boson_cap")));
      const auto r = fock::check_canonical_relations(ms);
      worst = std::max({worst, r.mixed, r.annihilators, r.creators});
      out.table.add({fermi ? "fermionic" : "bosonic", m, ms->n_max(), r.states, r.products, r.mixed, r.annihilators,
                     r.creators});
    }
  }
  out.check("CCR/CAR hold on every truncated basis state", worst < 1e-14, worst, "max deviation < 1e-14");

  // Exchange antisymmetry for every ordered pair.
  const int mm = ctx.integer("max_modes");
  std::vector<double> omegas;
  for (int i = 0; i < mm; ++i) omegas.push_back(1.0 + 0.5 * i);
  auto fm = std::make_shared<const fock::ModeSet>(fock::simple_fermionic_modes(omegas));
  const auto vac = fock::FockState::vacuum(fm);
  double anti = 0.0;
  bool pauli = true;
  for (int i = 0; i < mm; ++i) {
    pauli = pauli && fock::create(fock::create(vac, i), i).is_zero();
    for (int j = 0; j < mm; ++j) {
      if (i == j) continue;
      const auto ij = fock::create(fock::create(vac, j), i);
      const auto ji = fock::create(fock::create(vac, i), j);
      anti = std::max(anti, (ij + ji).distance(fock::FockState(fm)));
      if (ij.is_zero()) anti = 1.0;
    }
  }
  out.check("a+_i a+_j |0> = -a+_j a+_i |0> for all pairs", anti == 0.0, anti, "exact");
  out.check("Pauli exclusion a+_i a+_i |0> = 0", pauli, pauli ? 0.0 : 1.0, "exact zero state");

  // Sector probabilities.
  std::vector<fock::Mode> ep_modes = {{Vec3(0, 0, 0), 1, fock::Species::electron, fock::Branch::positive, 1.0},
                                      {Vec3(0, 0, 0), 1, fock::Species::positron, fock::Branch::positive, 1.0}};
  auto ep = std::make_shared<const fock::ModeSet>(ep_modes, fock::Statistics::fermionic);
  const auto v0 = fock::FockState::vacuum(ep);
  const auto pair = fock::create(fock::create(v0, 1), 0);
  const auto pair_prob = fock::sector_probabilities(pair);
  const bool pair_ok = pair_prob.size() == 1 && std::abs(pair_prob.at({1, 1}) - 1.0) < 1e-15;
  out.check("electron-positron pair lies in sector (1,1)", pair_ok, pair_prob.count({1, 1}) ? pair_prob.at({1, 1}) : 0.0,
            "probability 1");
  const auto sup = (v0 + fock::create(v0, 0)) * cplx(1.0 / std::sqrt(2.0));
  const auto sp = fock::sector_probabilities(sup);
  const double half_dev = std::max(std::abs(sp.at({0, 0}) - 0.5), std::abs(sp.at({1, 0}) - 0.5));
  out.check("(|0> + a+|0>)/sqrt2 splits 1/2, 1/2", half_dev < 1e-15, half_dev, "deviation < 1e-15");

  // Free evolution keeps every magnitude.
  auto bm = std::make_shared<const fock::ModeSet>(fock::simple_bosonic_modes({1.0, 1.7, 2.3}, 3));
  std::map<fock::Occupation, cplx> amps;
  std::normal_distribution<double> g(0.0, 1.0);
  for (const auto& occ : fock::all_configurations(*bm)) amps[occ] = cplx(g(rng), g(rng));
  const auto st = fock::FockState::physical(bm, amps);
  const auto ev = fock::evolve_fock(st, ctx.num("evolve_time"));
  double mag = 0.0;
  for (const auto& [occ, a] : st.amplitudes()) mag = std::max(mag, std::abs(std::abs(ev.amplitude(occ)) - std::abs(a)));
  out.check("evolution preserves |amplitudes|", mag < 1e-15, mag, "max change < 1e-15");
  return out;
}

// --- dirac-sea ------------------------------------------------------------------------------------

inline Outcome dirac_sea(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  const int count = ctx.integer("negative_modes");
  const double length = ctx.num("extent") * ctx.compton();
  std::vector<Vec3> ks;
  for (int j = 0; j < count; ++j) ks.emplace_back(2.0 * pi * (j - count / 2) / length, 0.0, 0.0);
  auto ms = std::make_shared<const fock::ModeSet>(fock::dirac_sea_modes(ks, pc));
  const auto ground = fock::dirac_sea_ground(ms);
  const auto& ground_occ = ground.amplitudes().begin()->first;
  out.notes.push_back("ground occupation " + fock::occupation_string(ground_occ) + " (sea modes first)");
  bool filled = true;
  for (std::size_t i = 0; i < ms->size(); ++i) {
    filled = filled && (ground_occ[i] == ((*ms)[i].branch == fock::Branch::negative ? 1 : 0));
  }
  out.check("ground state fills exactly the negative modes", filled, filled ? 1.0 : 0.0, "occupation 1..1 | 0..0");
  out.check("ground state has zero relative charge and energy",
            std::abs(fock::relative_charge(ground)) < 1e-15 && fock::mean_energy(ground) == 0.0,
            fock::relative_charge(ground), "0");

  out.table.columns = {"negative_mode", "positive_mode", "hole_charge", "pair_charge", "excitation_energy",
                       "expected_energy"};
  double charge_dev = 0.0, energy_dev = 0.0;
  bool positive = true;
  for (std::size_t i = 0; i < ms->size(); ++i) {
    if ((*ms)[i].branch != fock::Branch::negative) continue;
    const auto hole = fock::make_hole(ground, i);
    const double hq = fock::relative_charge(hole) * pc.charge;
    charge_dev = std::max(charge_dev, std::abs(hq - pc.charge));
    for (std::size_t j = 0; j < ms->size(); ++j) {
      if ((*ms)[j].branch != fock::Branch::positive) continue;
      const auto ex = fock::excite_hole(ground, i, j);
      const double e = fock::mean_energy(ex) * pc.hbar;
      const double expected = pc.hbar * ((*ms)[i].omega + (*ms)[j].omega);
      energy_dev = std::max(energy_dev, rel(e, expected));
      positive = positive && e > 0.0;
      out.table.add({static_cast<int>(i), static_cast<int>(j), hq, fock::relative_charge(ex) * pc.charge, e, expected});
    }
  }
  out.check("a hole carries charge +e", charge_dev < 1e-15, charge_dev, "|Q_hole - e| < 1e-15");
  out.check("hole-particle excitation energy is E+ + E- > 0", positive && energy_dev < 1e-14, energy_dev,
            "relative deviation < 1e-14 and energy > 0");
  bool rejected = false;
  try {
    (void)fock::make_hole(fock::make_hole(ground, 0), 0);
  } catch (const domain_error&) {
    rejected = true;
  }
  out.check("emptying an empty sea mode is rejected", rejected, rejected ? 1.0 : 0.0, "domain_error");
  return out;
}

// --- fock-functional-map ---------------------------------------------------------------------------

inline Outcome fock_functional_map(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(ctx.seed);
  const auto omegas = ctx.list("omegas");
  const int depth = ctx.integer("depth");
  const double t = ctx.num("evolve_time");
  auto ms = std::make_shared<const fock::ModeSet>(fock::simple_bosonic_modes(omegas, depth - 1));
  const auto basis = functional::basis_from_modes(*ms, depth, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  auto random_state = [&] {
    std::map<fock::Occupation, cplx> amps;
    for (const auto& occ : fock::all_configurations(*ms)) {
      const double re = g(rng);
      const double im = g(rng);
      amps[occ] = cplx(re, im);
    }
    return fock::FockState::physical(ms, amps);
  };
  out.table.columns = {"pair", "fock_re", "fock_im", "functional_re", "functional_im", "inner_difference",
                       "evolution_difference"};
  double worst_inner = 0.0, worst_evo = 0.0;
  for (int p = 0; p < ctx.integer("pairs"); ++p) {
    const auto f1 = random_state();
    const auto f2 = random_state();
    const cplx fi = f1.inner(f2);
    const auto w1 = functional::fock_to_functional(f1, basis);
    const auto w2 = functional::fock_to_functional(f2, basis);
    const cplx qi = functional::quadrature_inner_product(w1, w2, ctx.integer("quadrature_nodes"));
    const auto a = functional::fock_to_functional(fock::evolve_fock(f1, t), basis);
    const auto b = functional::evolve_functional(w1, t);
    double evo = 0.0;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) evo = std::max(evo, std::abs(a.coefficients[i] - b.coefficients[i]));
    worst_inner = std::max(worst_inner, std::abs(fi - qi));
    worst_evo = std::max(worst_evo, evo);
    out.table.add({p, fi.real(), fi.imag(), qi.real(), qi.imag(), std::abs(fi - qi), evo});
  }
  out.check("Fock and functional inner products agree", worst_inner < 1e-10, worst_inner, "|difference| < 1e-10");
  out.check("the map intertwines the free evolutions", worst_evo < 1e-10, worst_evo, "max coefficient difference < 1e-10");

  const auto vac = functional::fock_to_functional(fock::FockState::vacuum(ms), basis);
  const auto ground = functional::ground_state(basis);
  double vd = 0.0;
  for (std::size_t i = 0; i < vac.coefficients.size(); ++i) vd = std::max(vd, std::abs(vac.coefficients[i] - ground.coefficients[i]));
  out.check("vacuum maps to the ground functional", vd == 0.0, vd, "exact");
  const auto one = functional::fock_to_functional(fock::create(fock::FockState::vacuum(ms), 0), basis);
  const double node = std::abs(functional::evaluate(one, {0.0, 0.3, -0.2}));
  out.check("one-particle functional vanishes at phi_0 = 0", node < 1e-15, node, "|Psi| < 1e-15");

  // Sampled vacuum variance against hbar / (2 omega).
  const auto one_mode = functional::OscillatorBasis({{"k=0", omegas[0]}}, depth, 1.0);
  const auto samples = functional::sample_configurations(functional::ground_state(one_mode), ctx.integer("samples"), rng);
  double s2 = 0.0, s1 = 0.0;
  for (const auto& s : samples) {
    s1 += s[0];
    s2 += s[0] * s[0];
  }
  const double n = static_cast<double>(samples.size());
  const double var = s2 / n - (s1 / n) * (s1 / n);
  const double expected = 1.0 / (2.0 * omegas[0]);
  const double tol = 3.0 * expected * std::sqrt(2.0 / (n - 1.0));
  out.check("sampled vacuum variance matches hbar/2omega", std::abs(var - expected) <= tol, var,
            "within 3 standard errors of " + io::format_double(expected));
  return out;
}

// --- haag-overlap -------------------------------------------------------------------------------------

inline Outcome haag_overlap(const Context& ctx) {
  Outcome out;
  const auto& pc = ctx.pc;
  const double m1 = ctx.num("mass1"), m2 = ctx.num("mass2"), a = ctx.num("spacing") * ctx.compton();
  const auto rows = functional::bogoliubov_overlap(m1, m2, ctx.integer("max_modes"), a, pc);
  out.table.columns = {"M", "overlap", "log_overlap", "analytic_product"};
  bool decreasing = true, factor_ok = true;
  double factor_dev = 0.0;
  std::vector<double> ms, logs, ovs;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto b1 = functional::scalar_lattice_basis(rows[i].modes, a, m1, pc, 1);
    const auto b2 = functional::scalar_lattice_basis(rows[i].modes, a, m2, pc, 1);
    double prod = 1.0;
    for (std::size_t k = 0; k < b1.mode_count(); ++k) {
      const double w1 = b1.mode(k).omega, w2 = b2.mode(k).omega;
      const double fk = std::sqrt(2.0 * std::sqrt(w1 * w2) / (w1 + w2));
      factor_ok = factor_ok && (fk < 1.0 || m1 == m2);
      prod *= fk;
    }
    factor_dev = std::max(factor_dev, std::abs(rows[i].overlap - prod) / prod);
    if (i > 0) decreasing = decreasing && rows[i].overlap < rows[i - 1].overlap;
    out.table.add({rows[i].modes, rows[i].overlap, rows[i].log_overlap, prod});
    ms.push_back(rows[i].modes);
    logs.push_back(rows[i].log_overlap);
    ovs.push_back(rows[i].overlap);
  }
  const auto fit = functional::fit_line(ms, logs);
  out.check("overlap strictly decreasing in M", decreasing, ovs.back(), "strict");
  out.check("every per-mode factor below 1", factor_ok, 0.0, "f_k < 1");
  out.check("overlap factorizes into per-mode overlaps", factor_dev < 1e-12, factor_dev, "relative deviation < 1e-12");
  out.check("log-overlap falls linearly in M", fit.slope < 0.0 && fit.r_squared >= ctx.num("r2_min"), fit.r_squared,
            "slope < 0 and R^2 >= " + io::format_double(ctx.num("r2_min")));
  out.notes.push_back("fit: log overlap = " + io::format_double(fit.intercept) + " + " + io::format_double(fit.slope) +
                      " M, R^2 = " + io::format_double(fit.r_squared));
  io::LinePlot plot{"Vacuum overlap of two masses vs mode count", "M", "|<0_m1|0_m2>|", false, true, {}};
  plot.series.push_back({"overlap", ms, ovs});
  out.plots.push_back({"overlap.svg", io::render_svg(plot)});
  std::ostringstream csv;
  csv << "M,overlap\n";
  for (const auto& r : rows) csv << r.modes << ',' << io::format_double(r.overlap) << '\n';
  out.data_files.push_back({"overlap.csv", csv.str()});
  return out;
}

// --- grassmann-demo ---------------------------------------------------------------------------------------

inline Outcome grassmann_demo(const Context& ctx) {
  Outcome out;
  using namespace grassmann;
  std::mt19937_64 rng(ctx.seed);
  std::uniform_int_distribution<int> small(-3, 3);
  const int max_modes = ctx.integer("max_modes");
  out.table.columns = {"modes", "functionals", "anticommutator_max", "probability_sum_dev", "phase_invariance_dev"};
  double anti = 0.0, prob_dev = 0.0, phase_dev = 0.0;
  for (int m = 1; m <= max_modes; ++m) {
    const ToyFermionField field(m);
    // Gaussian-integer data keeps every product exact in floating point.
    std::vector<cplx> config(m);
    for (auto& c : config) c = cplx(small(rng), small(rng));
    const auto values = field.grassmann_values(config);
    double a_m = 0.0, p_m = 0.0, ph_m = 0.0;
    for (int f = 0; f < ctx.integer("random_functionals"); ++f) {
      // Generic functional over all generators for the anticommutator.
      GrassmannElement psi(field.space());
      for (Mask k = 0; k < (Mask{1} << (2 * m)); ++k) psi.add(k, cplx(small(rng), small(rng)));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a_m = std::max(a_m, anticommutator(values, i, j, psi).max_abs());
      // Holomorphic functional for the paired probabilities.
      const auto hol = field.random_functional(rng);
      double total = 0.0;
      const cplx phase = std::exp(I * 0.7);
      for (const auto& c : field.configuration_family()) {
        const double p = paired_probability(field, hol, c);
        total += p;
        ph_m = std::max(ph_m, std::abs(p - paired_probability(field, hol * phase, c)));
      }
      p_m = std::max(p_m, std::abs(total - 1.0));
    }
    anti = std::max(anti, a_m);
    prob_dev = std::max(prob_dev, p_m);
    phase_dev = std::max(phase_dev, ph_m);
    out.table.add({m, ctx.integer("random_functionals"), a_m, p_m, ph_m});
  }
  out.check("Grassmann field operators anticommute", anti == 0.0, anti, "exact zero for all pairs");
  const cplx counter = complex_anticommutator({1.0, 1.0}, 0, 1, 1.0);
  out.check("complex-valued field operators do not anticommute", counter != 0.0, std::abs(counter), "2 != 0");
  out.check("paired probabilities sum to 1", prob_dev < 1e-12, prob_dev, "|sum - 1| < 1e-12");
  out.check("paired probabilities ignore a global phase", phase_dev < 1e-12, phase_dev, "< 1e-12");

  // Exhaustive soul check: psi_i = sum_j a_ij theta_j with a_ij in {0, 1, i}.
  std::size_t fields = 0, with_soul = 0;
  const cplx alphabet[3] = {0.0, 1.0, I};
  for (int m = 1; m <= 3; ++m) {
    const ToyFermionField field(m);
    const int entries = m * m;
    int total = 1;
    for (int e = 0; e < entries; ++e) total *= 3;
    for (int code = 1; code < total; ++code) {
      std::vector<GrassmannElement> vals(m, GrassmannElement(field.space()));
      int rest = code;
      for (int e = 0; e < entries; ++e) {
        const cplx a = alphabet[rest % 3];
        rest /= 3;
        if (a != 0.0) vals[e / m] = vals[e / m] + field.theta(e % m) * a;
      }
      ++fields;
      const auto rho = field.density(vals);
      if (!rho.soul().is_zero()) ++with_soul;
    }
  }
  out.check("soul(psi^dagger psi) != 0 for every nonzero field, M <= 3", with_soul == fields,
            static_cast<double>(fields - with_soul), "all " + std::to_string(fields) + " fields");

  // Pathology report for a two-mode example.
  const ToyFermionField two(2);
  const auto vals = two.grassmann_values({cplx(1.0, 0.5), cplx(-0.3, 0.8)});
  const auto psi = (GrassmannElement::scalar(two.space(), 1.0) + two.theta_bar(0) * cplx(0.4, 0.0) +
                    two.theta_bar(0) * two.theta_bar(1) * cplx(0.0, 0.6));
  const auto report = density_pathology_report(two, vals, psi);
  out.check("psi^dagger psi has a soul", report.density_has_soul, report.density_soul, "soul != 0");
  out.check("Psi^dagger Psi has a soul", report.amplitude_has_soul, report.amplitude_soul, "soul != 0");
  out.data_files.push_back({"pathology.json", to_json(report).dump(2) + "\n"});
  out.data_files.push_back({"density_dump.txt", report.density_dump});
  return out;
}

}  // namespace detail

inline json constants_json(const PhysicalConstants& pc) {
  json j;
  to_json(j, pc);
  return j;
}

inline const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> all = {
      {"spin-packet", "spin and magnetic moment carried by the circulating current of a Dirac packet",
       {{"sigma", 5.0}, {"box_factor", 12.0}, {"points_per_axis", 32}}, detail::spin_packet},
      {"small-packet-trend", "narrow packets cost energy and lose magnetic moment",
       {{"sigmas", {0.1, 0.3, 1.0, 5.0}}, {"box_factor", 12.0}, {"points_per_axis", 32}}, detail::small_packet_trend},
      {"charge-velocity", "charge flows at most at c while energy flow can exceed c",
       {{"fields", 10000}, {"extent", 4.0}, {"points_per_axis", 4}, {"max_band", -1}, {"scan_sigma", 2.0},
        {"scan_extent", 24.0}, {"scan_points", 32}, {"scan_momenta", {0.5, 1.0, 2.0}},
        {"scan_weights", {0.1, 0.3, 1.0}}, {"mask_floor", 1e-6}},
       detail::charge_velocity},
      {"gordon-closure", "convection, spin and time-derivative terms rebuild the Dirac current",
       {{"fields", 100}, {"extent", 8.0}, {"points_per_axis", 8}, {"max_band", 2}}, detail::gordon_closure},
      {"photon-goodwf", "the Good wave function obeys a Dirac-like equation",
       {{"fields", 100}, {"extent", 8.0}, {"points_per_axis", 8}, {"max_band", 2}}, detail::photon_goodwf},
      {"photon-covariance", "photon number density is not a four-vector component, the Dirac current is",
       {{"speeds", {0.0, 0.5}}, {"check_speed", 0.5}, {"direction", {1.0, 0.0, 0.0}}, {"superpositions", 5},
        {"modes_per_superposition", 3}, {"events", 64}, {"k_scale", 1.0}, {"event_span", 5.0}},
       detail::photon_covariance},
      {"energy-identity", "the helicity-split photon energy equals the electromagnetic field energy",
       {{"fields", 20}, {"extent", 8.0}, {"points_per_axis", 8}, {"max_band", 3}}, detail::energy_identity},
      {"self-energy", "a smooth classical charge has finite Coulomb self-energy, a point charge does not",
       {{"charge", 1.0}, {"sigma", 1.0}, {"extent", 12.0}, {"levels", {16, 32, 64}}}, detail::self_energy},
      {"fock-demo", "Fock space creation operators, statistics and sectors",
       {{"max_modes", 6}, {"boson_cap", 3}, {"evolve_time", 1.3}}, detail::fock_demo},
      {"dirac-sea", "holes in a filled sea act as positive charges with positive energy",
       {{"negative_modes", 4}, {"extent", 6.283185307179586}}, detail::dirac_sea},
      {"fock-functional-map", "particle states map onto field wave functionals",
       {{"omegas", {1.0, 1.7, 2.3}}, {"depth", 8}, {"pairs", 20}, {"evolve_time", 1.3}, {"quadrature_nodes", 64},
        {"samples", 100000}},
       detail::fock_functional_map},
      {"haag-overlap", "vacua of different masses become orthogonal as modes are added",
       {{"mass1", 1.0}, {"mass2", 2.0}, {"max_modes", 16}, {"spacing", 2.0}, {"r2_min", 0.99}}, detail::haag_overlap},
      {"grassmann-demo", "anticommuting field values and their non-real densities",
       {{"max_modes", 6}, {"random_functionals", 4}}, detail::grassmann_demo},
  };
  return all;
}

inline const Scenario& find(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  throw domain_error("unknown scenario: " + name);
}

/// Scenario defaults overlaid with the user's config. Unknown keys and
/// type changes are rejected.
inline json resolve_config(const Scenario& sc, const json& user, std::optional<std::uint64_t> seed_override) {
  if (!user.is_null() && !user.is_object()) throw domain_error("config must be a JSON object");
  json cfg = sc.defaults;
  cfg["constants"] = constants_json(PhysicalConstants{});
  cfg["seed"] = default_seed;
  if (user.is_object()) {
    for (auto it = user.begin(); it != user.end(); ++it) {
      const auto& key = it.key();
      if (key == "scenario") {
        if (!it->is_string() || it->get<std::string>() != sc.name) {
          throw domain_error("config is for a different scenario");
        }
        continue;
      }
      if (!cfg.contains(key)) throw domain_error("unknown config key for " + sc.name + ": " + key);
      if (key == "constants") {
        cfg[key] = constants_json(constants_from_json(*it));
        continue;
      }
      const auto& ref = cfg[key];
      const bool ok = (ref.is_number() && it->is_number()) || (ref.is_array() && it->is_array()) ||
                      (ref.is_string() && it->is_string()) || (ref.is_boolean() && it->is_boolean());
      if (!ok) throw domain_error("config key " + key + " has the wrong type");
      if (ref.is_number_integer() && !it->is_number_integer()) {
        throw domain_error("config key " + key + " must be an integer");
      }
      cfg[key] = *it;
    }
  }
  if (seed_override) cfg["seed"] = *seed_override;
  return cfg;
}

struct RunRecord {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<Check> checks;
};

inline std::string summary_text(const Scenario& sc, const json& cfg, const Outcome& o) {
  std::ostringstream s;
  s << sc.name << ": " << sc.claim << "\n";
  s << "seed " << cfg.at("seed").get<std::uint64_t>() << "\n\n";
  for (const auto& c : o.checks) {
    s << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << io::format_double(c.value) << " (" << c.requirement
      << ")\n";
  }
  if (!o.notes.empty()) s << "\n";
  for (const auto& n : o.notes) s << n << "\n";
  s << "\n" << (o.passed() ? "scenario passed" : "scenario FAILED") << "\n";
  return s.str();
}

/// Runs one scenario and writes results.csv, summary.txt, run.json plus any
/// extra data and plot files into out_dir.
inline RunRecord run_scenario(const Scenario& sc, const json& user_config, std::optional<std::uint64_t> seed,
                              const std::filesystem::path& out_dir) {
  const json cfg = resolve_config(sc, user_config, seed);
  Context ctx{cfg, cfg.at("seed").get<std::uint64_t>(), constants_from_json(cfg.at("constants"))};
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error("output directory not writable: " + out_dir.string());
  }
  const auto start = std::chrono::steady_clock::now();
  Outcome o = sc.run(ctx);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  io::write_text(out_dir / "results.csv", o.table.str());
  io::write_text(out_dir / "summary.txt", summary_text(sc, cfg, o));
  json checks = json::array();
  for (const auto& c : o.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"requirement", c.requirement}});
  }
  const json run = {{"scenario", sc.name}, {"claim", sc.claim}, {"config", cfg}, {"checks", checks},
                    {"notes", o.notes},   {"passed", o.passed()}};
  io::write_text(out_dir / "run.json", run.dump(2) + "\n");
  for (const auto& f : o.data_files) io::write_text(out_dir / f.filename, f.content);
  for (const auto& f : o.plots) io::write_text(out_dir / f.filename, f.content);
  return {sc.name, o.passed(), secs, o.checks};
}

}  // namespace fieldlab::scenarios
