// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/fock.hpp"
#include "fieldlab/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fieldlab::functional {

// --- Gauss-Hermite quadrature --------------------------------------------

/// Nodes and weights for the weight e^{-x^2} (Golub-Welsch).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermite gauss_hermite(int n) {
  if (n < 1) throw domain_error("quadrature needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(0.5 * i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussHermite gh;
  for (int i = 0; i < n; ++i) {
    gh.nodes.push_back(es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    gh.weights.push_back(std::sqrt(pi) * v0 * v0);
  }
  return gh;
}

/// h_n(xi) = (1/pi)^{1/4} H_n(xi) / sqrt(2^n n!) for n < depth: normalized
/// Hermite functions without their e^{-xi^2/2} factor.
inline std::vector<double> reduced_hermite(double xi, int depth) {
  std::vector<double> h(depth);
  h[0] = std::pow(pi, -0.25);
  if (depth > 1) h[1] = std::sqrt(2.0) * xi * h[0];
  for (int n = 1; n + 1 < depth; ++n) {
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * xi * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
  }
  return h;
}

// --- basis ---------------------------------------------------------------

struct OscillatorMode {
  std::string label;
  double omega = 1.0;
};

/**
 * Independent oscillator modes, unit mass in field units: mode k contributes
 * (pi_k^2 + omega_k^2 phi_k^2) / 2. Each mode is truncated at Hermite depth D.
 */
class OscillatorBasis {
 public:
  static constexpr std::size_t max_tensor_size = std::size_t{1} << 24;

  OscillatorBasis(std::vector<OscillatorMode> modes, int depth = 8, double hbar = 1.0)
      : modes_(std::move(modes)), depth_(depth), hbar_(hbar) {
    if (depth_ < 1) throw domain_error("Hermite depth must be positive");
    if (!(hbar_ > 0.0)) throw domain_error("hbar must be positive");
    for (const auto& m : modes_) {
      if (!(m.omega > 0.0) || !std::isfinite(m.omega)) {
        throw domain_error("oscillator frequencies must be positive");
      }
    }
    size_ = 1;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      size_ *= static_cast<std::size_t>(depth_);
      if (size_ > max_tensor_size) throw domain_error("coefficient tensor too large");
    }
  }

  std::size_t mode_count() const { return modes_.size(); }
  const OscillatorMode& mode(std::size_t i) const { return modes_.at(i); }
  const std::vector<OscillatorMode>& modes() const { return modes_; }
  int depth() const { return depth_; }
  double hbar() const { return hbar_; }
  std::size_t tensor_size() const { return size_; }

  /// Row-major flat index, mode 0 slowest.
  std::size_t flatten(const std::vector<int>& n) const {
    if (n.size() != modes_.size()) throw domain_error("index tuple length mismatch");
    std::size_t idx = 0;
    for (int v : n) {
      if (v < 0 || v >= depth_) throw truncation_error("Hermite index above the depth");
      idx = idx * static_cast<std::size_t>(depth_) + static_cast<std::size_t>(v);
    }
    return idx;
  }

  std::vector<int> unflatten(std::size_t idx) const {
    std::vector<int> n(modes_.size());
    for (std::size_t i = modes_.size(); i-- > 0;) {
      n[i] = static_cast<int>(idx % static_cast<std::size_t>(depth_));
      idx /= static_cast<std::size_t>(depth_);
    }
    return n;
  }

  /// xi = phi sqrt(omega / hbar) for mode i.
  double scale(std::size_t i) const { return std::sqrt(modes_[i].omega / hbar_); }

  /// psi_n(phi) for n < depth: normalized oscillator eigenfunctions of mode i.
  std::vector<double> eigenfunctions(std::size_t i, double phi) const {
    const double s = scale(i);
    const double xi = phi * s;
    auto h = reduced_hermite(xi, depth_);
    const double f = std::sqrt(s) * std::exp(-0.5 * xi * xi);
    for (auto& v : h) v *= f;
    return h;
  }

  bool operator==(const OscillatorBasis& o) const {
    if (depth_ != o.depth_ || hbar_ != o.hbar_ || modes_.size() != o.modes_.size()) return false;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i].omega != o.modes_[i].omega || modes_[i].label != o.modes_[i].label) return false;
    }
    return true;
  }

 private:
  std::vector<OscillatorMode> modes_;
  int depth_;
  double hbar_;
  std::size_t size_ = 1;
};

/// Real massive scalar on a 1D ring of `sites` points at `spacing`:
/// k_n = 2 pi n / (sites spacing), n = j - sites/2. Real/imaginary parts of
/// each +-k doublet form independent oscillators with the same omega, so the
/// mode count equals the site count.
inline OscillatorBasis scalar_lattice_basis(int sites, double spacing, double mass,
                                            const PhysicalConstants& pc = {}, int depth = 8) {
  if (sites < 1) throw domain_error("need at least one site");
  if (!(spacing > 0.0)) throw domain_error("spacing must be positive");
  if (!(mass > 0.0)) throw domain_error("scalar mass must be positive");
  std::vector<OscillatorMode> modes;
  const double length = sites * spacing;
  for (int j = 0; j < sites; ++j) {
    const int n = j - sites / 2;
    const double k = 2.0 * pi * n / length;
    const double w = std::hypot(mass * pc.c * pc.c, pc.hbar * k * pc.c) / pc.hbar;
    modes.push_back({"k=" + std::to_string(n), w});
  }
  return OscillatorBasis(std::move(modes), depth, pc.hbar);
}

/// Coulomb-gauge EM modes: two transverse polarizations per nonzero k, omega = c|k|.
inline OscillatorBasis em_basis(const std::vector<Vec3>& wavevectors, const PhysicalConstants& pc = {},
                                int depth = 8) {
  std::vector<OscillatorMode> modes;
  for (const auto& k : wavevectors) {
    if (k.norm() == 0.0) throw domain_error("the k = 0 mode has no transverse oscillator");
    std::ostringstream label;
    label.precision(17);
    label << "k=(" << k.x() << ' ' << k.y() << ' ' << k.z() << ")";
    for (int pol = 1; pol <= 2; ++pol) {
      modes.push_back({label.str() + ",pol=" + std::to_string(pol), pc.c * k.norm()});
    }
  }
  return OscillatorBasis(std::move(modes), depth, pc.hbar);
}

/// Oscillator basis matching a bosonic Fock mode set mode for mode.
inline OscillatorBasis basis_from_modes(const fock::ModeSet& ms, int depth = 8, double hbar = 1.0) {
  std::vector<OscillatorMode> modes;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    std::ostringstream label;
    label.precision(17);
    label << "k=(" << m.k.x() << ' ' << m.k.y() << ' ' << m.k.z() << "),s=" << m.spin;
    modes.push_back({label.str(), m.omega});
  }
  return OscillatorBasis(std::move(modes), depth, hbar);
}

// --- functionals ---------------------------------------------------------

struct WaveFunctional {
  OscillatorBasis basis;
  std::vector<cplx> coefficients;

  double norm() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += std::norm(c);
    return std::sqrt(s);
  }

  cplx coefficient(const std::vector<int>& n) const { return coefficients[basis.flatten(n)]; }
};

inline WaveFunctional number_state(const OscillatorBasis& b, const std::vector<int>& occupation) {
  WaveFunctional w{b, std::vector<cplx>(b.tensor_size(), 0.0)};
  w.coefficients[b.flatten(occupation)] = 1.0;
  return w;
}

inline WaveFunctional ground_state(const OscillatorBasis& b) {
  return number_state(b, std::vector<int>(b.mode_count(), 0));
}

inline WaveFunctional em_functional_ground(const OscillatorBasis& em) { return ground_state(em); }

/// Psi[phi]: coefficient tensor contracted with per-mode eigenfunctions.
inline cplx evaluate(const WaveFunctional& w, const std::vector<double>& phi) {
  const auto& b = w.basis;
  if (phi.size() != b.mode_count()) throw domain_error("configuration length mismatch");
  std::vector<cplx> partial = w.coefficients;
  std::size_t len = partial.size();
  // Contract the fastest (last) mode first.
  for (std::size_t i = b.mode_count(); i-- > 0;) {
    const auto f = b.eigenfunctions(i, phi[i]);
    const std::size_t d = static_cast<std::size_t>(b.depth());
    len /= d;
    for (std::size_t r = 0; r < len; ++r) {
      cplx s = 0.0;
      for (std::size_t n = 0; n < d; ++n) s += partial[r * d + n] * f[n];
      partial[r] = s;
    }
  }
  return partial[0];
}

inline double probability_density(const WaveFunctional& w, const std::vector<double>& phi) {
  return std::norm(evaluate(w, phi));
}

/// Exact <a|b> from the orthonormal Hermite basis.
inline cplx inner_product(const WaveFunctional& a, const WaveFunctional& b) {
  if (!(a.basis == b.basis)) throw domain_error("functionals live on different bases");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) s += std::conj(a.coefficients[i]) * b.coefficients[i];
  return s;
}

namespace detail {

// Values of w on the tensor-product quadrature grid with the Gaussian factor
// stripped: v(xi) = sum_n c_n prod_k sqrt(s_k) h_{n_k}(xi_k).
inline std::vector<cplx> reduced_grid_values(const WaveFunctional& w, const GaussHermite& gh) {
  const auto& b = w.basis;
  const std::size_t d = static_cast<std::size_t>(b.depth());
  const std::size_t g = gh.nodes.size();
  std::vector<std::vector<double>> table(g);
  for (std::size_t q = 0; q < g; ++q) table[q] = reduced_hermite(gh.nodes[q], b.depth());
  // Replace one Hermite axis at a time by a grid axis, slowest axis first.
  std::vector<cplx> cur = w.coefficients;
  std::size_t outer = 1;
  std::size_t inner = b.tensor_size();
  for (std::size_t i = 0; i < b.mode_count(); ++i) {
    inner /= d;
    const double root_s = std::sqrt(b.scale(i));
    std::vector<cplx> next(outer * g * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t q = 0; q < g; ++q)
        for (std::size_t n = 0; n < d; ++n) {
          const double f = root_s * table[q][n];
          const cplx* src = &cur[(o * d + n) * inner];
          cplx* dst = &next[(o * g + q) * inner];
          for (std::size_t r = 0; r < inner; ++r) dst[r] += f * src[r];
        }
    cur.swap(next);
    outer *= g;
  }
  return cur;
}

}  // namespace detail

/// <a|b> by tensor-product Gauss-Hermite quadrature over field configurations.
inline cplx quadrature_inner_product(const WaveFunctional& a, const WaveFunctional& b, int nodes = 64) {
  if (!(a.basis == b.basis)) throw domain_error("functionals live on different bases");
  if (nodes < 64) throw domain_error("use at least 64 quadrature nodes");
  const auto gh = gauss_hermite(nodes);
  const auto va = detail::reduced_grid_values(a, gh);
  const auto vb = detail::reduced_grid_values(b, gh);
  const std::size_t m = a.basis.mode_count();
  const std::size_t g = gh.nodes.size();
  cplx s = 0.0;
  for (std::size_t idx = 0; idx < va.size(); ++idx) {
    double weight = 1.0;
    std::size_t rem = idx;
    for (std::size_t i = 0; i < m; ++i) {
      weight *= gh.weights[rem % g] / a.basis.scale(m - 1 - i);
      rem /= g;
    }
    s += weight * std::conj(va[idx]) * vb[idx];
  }
  return s;
}

/// sum_k hbar omega_k n_k for a configuration of Hermite indices.
inline double excitation_energy(const OscillatorBasis& b, const std::vector<int>& n) {
  double e = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) e += b.hbar() * b.mode(i).omega * n[i];
  return e;
}

/// <H>; adds the zero-point sum hbar omega / 2 unless normal-ordered.
inline double energy_expectation(const WaveFunctional& w, bool normal_ordered = false) {
  const auto& b = w.basis;
  double e = 0.0;
  const double n2 = w.norm() * w.norm();
  for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
    if (w.coefficients[i] == 0.0) continue;
    e += std::norm(w.coefficients[i]) * excitation_energy(b, b.unflatten(i));
  }
  e /= n2;
  if (!normal_ordered) {
    for (const auto& m : b.modes()) e += 0.5 * b.hbar() * m.omega;
  }
  return e;
}

/// Coefficient (n_1..n_M) picks up e^{-i sum n_k omega_k t}; zero-point phase dropped.
inline WaveFunctional evolve_functional(const WaveFunctional& w, double t) {
  WaveFunctional out = w;
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) {
    if (out.coefficients[i] == 0.0) continue;
    const double e = excitation_energy(w.basis, w.basis.unflatten(i)) / w.basis.hbar();
    out.coefficients[i] *= std::exp(-I * e * t);
  }
  return out;
}

/// Occupation (n_1..n_M) maps to the Hermite basis element (n_1..n_M).
inline WaveFunctional fock_to_functional(const fock::FockState& state, const OscillatorBasis& b) {
  const auto& ms = state.modes();
  if (ms.fermionic()) throw domain_error("only bosonic states map to field functionals");
  if (ms.size() != b.mode_count()) throw domain_error("mode count mismatch");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].omega != b.mode(i).omega) throw domain_error("mode frequencies differ");
  }
  WaveFunctional w{b, std::vector<cplx>(b.tensor_size(), 0.0)};
  for (const auto& [occ, a] : state.amplitudes()) {
    std::vector<int> n(occ.begin(), occ.end());
    for (int v : n) {
      if (v >= b.depth()) throw truncation_error("occupation exceeds the Hermite depth");
    }
    w.coefficients[b.flatten(n)] += a;
  }
  return w;
}

inline fock::FockState functional_to_fock(const WaveFunctional& w,
                                          std::shared_ptr<const fock::ModeSet> ms) {
  if (ms->size() != w.basis.mode_count()) throw domain_error("mode count mismatch");
  fock::FockState s(ms);
  for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
    if (w.coefficients[i] == 0.0) continue;
    const auto n = w.basis.unflatten(i);
    fock::Occupation occ(n.begin(), n.end());
    for (auto v : occ) {
      if (v > ms->n_max()) throw truncation_error("Hermite index above the Fock cap");
    }
    s.add(occ, w.coefficients[i]);
  }
  return s;
}

/// Normalized random functional with independent complex Gaussian coefficients.
template <class Rng>
WaveFunctional random_functional(const OscillatorBasis& b, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  WaveFunctional w{b, std::vector<cplx>(b.tensor_size())};
  for (auto& c : w.coefficients) {
    const double re = g(rng);
    const double im = g(rng);
    c = cplx(re, im);
  }
  const double n = w.norm();
  for (auto& c : w.coefficients) c /= n;
  return w;
}

/**
 * Draws configurations from |Psi[phi]|^2 one mode at a time. The conditional
 * density of mode i is h^T G h e^{-xi^2} with G the positive Gram matrix of
 * the partially contracted tensor, so it is bounded by trace(G) times the
 * state-independent kernel K(xi) = sum_n h_n(xi)^2 e^{-xi^2}. Rejection uses
 * a Gaussian proposal with envelope 1.05 max(K / proposal) from a fine grid.
 */
template <class Rng>
std::vector<std::vector<double>> sample_configurations(const WaveFunctional& w, std::size_t count,
                                                       Rng& rng) {
  const auto& b = w.basis;
  const int depth = b.depth();
  const std::size_t d = static_cast<std::size_t>(depth);
  const std::size_t m = b.mode_count();
  const double prop_sigma = std::sqrt(0.5 * (depth + 1));  // in xi units
  std::normal_distribution<double> proposal(0.0, prop_sigma);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto prop_pdf = [&](double xi) { return std::exp(-0.5 * xi * xi / (prop_sigma * prop_sigma)); };

  double envelope = 0.0;
  for (int step = -2800; step <= 2800; ++step) {
    const double xi = step * 0.005;
    double kernel = 0.0;
    for (double h : reduced_hermite(xi, depth)) kernel += h * h;
    envelope = std::max(envelope, kernel * std::exp(-xi * xi) / prop_pdf(xi));
  }
  envelope *= 1.05;

  std::vector<std::vector<double>> out;
  out.reserve(count);
  Eigen::MatrixXcd gram(d, d);
  for (std::size_t s = 0; s < count; ++s) {
    std::vector<double> phi(m);
    std::vector<cplx> partial = w.coefficients;  // shape [n_i, rest]
    std::size_t rest = partial.size();
    for (std::size_t i = 0; i < m; ++i) {
      rest /= d;
      double trace = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = a; c < d; ++c) {
          cplx v = 0.0;
          for (std::size_t r = 0; r < rest; ++r) v += std::conj(partial[a * rest + r]) * partial[c * rest + r];
          gram(a, c) = v;
          gram(c, a) = std::conj(v);
          if (a == c) trace += v.real();
        }
      if (!(trace > 0.0)) throw domain_error("cannot sample the zero functional");
      double xi = 0.0;
      while (true) {
        xi = proposal(rng);
        const auto h = reduced_hermite(xi, depth);
        const Eigen::Map<const Eigen::VectorXd> hv(h.data(), static_cast<Eigen::Index>(d));
        const double quad = (hv.cast<cplx>().dot(gram * hv.cast<cplx>())).real();
        if (unif(rng) * envelope * trace * prop_pdf(xi) <= std::max(0.0, quad) * std::exp(-xi * xi)) break;
      }
      phi[i] = xi / b.scale(i);
      // Fix this mode's value: contract its index with psi_n(phi_i).
      const auto f = b.eigenfunctions(i, phi[i]);
      std::vector<cplx> next(rest, 0.0);
      for (std::size_t n = 0; n < d; ++n)
        for (std::size_t r = 0; r < rest; ++r) next[r] += f[n] * partial[n * rest + r];
      partial.swap(next);
    }
    out.push_back(std::move(phi));
  }
  return out;
}

// --- inequivalent vacua ----------------------------------------------------

/// <0_{omega1}|0_{omega2}> for one oscillator, by Gauss-Hermite quadrature in
/// the variable that makes the product Gaussian the quadrature weight.
inline double vacuum_overlap_quadrature(double omega1, double omega2, double hbar = 1.0,
                                        int nodes = 64) {
  const auto gh = gauss_hermite(nodes);
  const double s_ref = std::sqrt(0.5 * (omega1 + omega2) / hbar);
  const double s1 = std::sqrt(omega1 / hbar);
  const double s2 = std::sqrt(omega2 / hbar);
  double total = 0.0;
  for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
    // psi_0^{w1}(phi) psi_0^{w2}(phi) = sqrt(s1 s2 / pi) e^{-(s_ref phi)^2}.
    total += gh.weights[q] * std::sqrt(s1 * s2 / pi);
  }
  return total / s_ref;
}

struct OverlapRow {
  int modes = 0;
  double overlap = 1.0;
  double log_overlap = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

/// |<ground(m1)|ground(m2)>| on scalar lattices with M = 1..max_sites sites.
inline std::vector<OverlapRow> bogoliubov_overlap(double mass1, double mass2, int max_sites,
                                                  double spacing, const PhysicalConstants& pc = {}) {
  if (!(mass1 > 0.0) || !(mass2 > 0.0)) throw domain_error("masses must be positive");
  std::vector<OverlapRow> rows;
  for (int sites = 1; sites <= max_sites; ++sites) {
    const auto b1 = scalar_lattice_basis(sites, spacing, mass1, pc, 1);
    const auto b2 = scalar_lattice_basis(sites, spacing, mass2, pc, 1);
    double log_ov = 0.0;
    for (std::size_t i = 0; i < b1.mode_count(); ++i) {
      log_ov += std::log(vacuum_overlap_quadrature(b1.mode(i).omega, b2.mode(i).omega, pc.hbar));
    }
    rows.push_back({sites, std::exp(log_ov), log_ov});
  }
  return rows;
}

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  const double mean = sy / n;
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_tot += (y[i] - mean) * (y[i] - mean);
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

// --- serialization -----------------------------------------------------------

/// "#functional,<modes>,<depth>,<hbar>", one "#mode,<label>,<omega>" per mode,
/// then "indices,real,imag" rows for nonzero coefficients with ';'-joined indices.
inline void write_functional(std::ostream& os, const WaveFunctional& w) {
  const auto& b = w.basis;
  os.precision(17);
  os << "#functional," << b.mode_count() << ',' << b.depth() << ',' << b.hbar() << '\n';
  for (const auto& m : b.modes()) os << "#mode," << m.label << ',' << m.omega << '\n';
  os << "indices,real,imag\n";
  for (std::size_t i = 0; i < w.coefficients.size(); ++i) {
    const cplx c = w.coefficients[i];
    if (c == 0.0) continue;
    const auto n = b.unflatten(i);
    for (std::size_t k = 0; k < n.size(); ++k) os << (k ? ";" : "") << n[k];
    os << ',' << c.real() << ',' << c.imag() << '\n';
  }
}

inline WaveFunctional read_functional(std::istream& is) {
  std::string line;
  auto split = [](const std::string& l, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(l);
    std::string p;
    while (std::getline(ss, p, sep)) parts.push_back(p);
    return parts;
  };
  if (!std::getline(is, line)) throw domain_error("empty functional file");
  auto head = split(line, ',');
  if (head.size() != 4 || head[0] != "#functional") throw domain_error("missing #functional header");
  const std::size_t count = std::stoul(head[1]);
  const int depth = std::stoi(head[2]);
  const double hbar = std::stod(head[3]);
  std::vector<OscillatorMode> modes;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw domain_error("truncated mode table");
    const auto last = line.rfind(',');
    if (line.rfind("#mode,", 0) != 0 || last == std::string::npos || last < 6) {
      throw domain_error("bad mode line");
    }
    modes.push_back({line.substr(6, last - 6), std::stod(line.substr(last + 1))});
  }
  OscillatorBasis b(std::move(modes), depth, hbar);
  WaveFunctional w{b, std::vector<cplx>(b.tensor_size(), 0.0)};
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto p = split(line, ',');
    if (p.size() != 3) throw domain_error("bad coefficient row");
    std::vector<int> n;
    if (count > 0) {
      for (const auto& s : split(p[0], ';')) n.push_back(std::stoi(s));
    }
    w.coefficients[b.flatten(n)] = cplx(std::stod(p[1]), std::stod(p[2]));
  }
  return w;
}

}  // namespace fieldlab::functional
