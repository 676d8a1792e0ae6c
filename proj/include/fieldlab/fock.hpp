// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/types.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fieldlab::fock {

enum class Statistics { bosonic, fermionic };

/// Particle species a mode belongs to; decides the (n, m) sector and charge.
enum class Species { electron, positron, boson };

/// Frequency branch. Negative modes are Dirac-sea modes: occupied in the
/// ground state, with energy -hbar omega per occupant.
enum class Branch { positive, negative };

struct Mode {
  Vec3 k = Vec3::Zero();
  int spin = 0;
  Species species = Species::boson;
  Branch branch = Branch::positive;
  double omega = 0.0;
};

inline auto mode_key(const Mode& m) {
  return std::make_tuple(static_cast<int>(m.species), m.branch == Branch::negative ? 0 : 1, m.k.x(),
                         m.k.y(), m.k.z(), m.spin);
}

/**
 * Finite, canonically ordered mode list. Order: species, then sea (negative)
 * before positive branch, then wavevector lexicographically, then spin. The
 * order fixes every fermionic sign.
 */
class ModeSet {
 public:
  ModeSet(std::vector<Mode> modes, Statistics stats, int n_max = 8)
      : modes_(std::move(modes)), stats_(stats), n_max_(stats == Statistics::fermionic ? 1 : n_max) {
    if (n_max_ < 1 || n_max_ > 35) throw domain_error("bosonic cap must lie in [1, 35]");
    std::stable_sort(modes_.begin(), modes_.end(),
                     [](const Mode& a, const Mode& b) { return mode_key(a) < mode_key(b); });
    for (std::size_t i = 1; i < modes_.size(); ++i) {
      if (mode_key(modes_[i]) == mode_key(modes_[i - 1])) throw domain_error("duplicate mode label");
    }
    for (const auto& m : modes_) {
      if (!(m.omega >= 0.0)) throw domain_error("mode frequencies must be nonnegative");
    }
  }

  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t i) const { return modes_.at(i); }
  const std::vector<Mode>& modes() const { return modes_; }
  Statistics statistics() const { return stats_; }
  int n_max() const { return n_max_; }
  bool fermionic() const { return stats_ == Statistics::fermionic; }

  std::size_t index_of(const Mode& m) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (mode_key(modes_[i]) == mode_key(m)) return i;
    }
    throw domain_error("mode not in set");
  }

  bool operator==(const ModeSet& o) const {
    if (stats_ != o.stats_ || n_max_ != o.n_max_ || modes_.size() != o.modes_.size()) return false;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (mode_key(modes_[i]) != mode_key(o.modes_[i]) || modes_[i].omega != o.modes_[i].omega) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Mode> modes_;
  Statistics stats_;
  int n_max_;
};

/// Bosonic modes with the given frequencies and no further labels.
inline ModeSet simple_bosonic_modes(const std::vector<double>& omegas, int n_max = 8) {
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    modes.push_back({Vec3(static_cast<double>(i), 0, 0), 0, Species::boson, Branch::positive,
                     omegas[i]});
  }
  return ModeSet(std::move(modes), Statistics::bosonic, n_max);
}

/// Electron modes with the given frequencies (fermionic).
inline ModeSet simple_fermionic_modes(const std::vector<double>& omegas) {
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    modes.push_back({Vec3(static_cast<double>(i), 0, 0), 0, Species::electron, Branch::positive,
                     omegas[i]});
  }
  return ModeSet(std::move(modes), Statistics::fermionic);
}

using Occupation = std::vector<std::uint8_t>;

/**
 * State in the truncated Fock space: complex amplitudes over occupation
 * configurations. Operator applications return unnormalized states; use
 * is_physical() to tell the two apart.
 */
class FockState {
 public:
  explicit FockState(std::shared_ptr<const ModeSet> modes) : modes_(std::move(modes)) {}

  static FockState vacuum(std::shared_ptr<const ModeSet> modes) {
    FockState s(modes);
    s.amps_[Occupation(modes->size(), 0)] = 1.0;
    return s;
  }

  static FockState basis_state(std::shared_ptr<const ModeSet> modes, Occupation occ) {
    FockState s(modes);
    s.check(occ);
    s.amps_[std::move(occ)] = 1.0;
    return s;
  }

  /// Builds a physical state; amplitudes are normalized and must not vanish.
  static FockState physical(std::shared_ptr<const ModeSet> modes,
                            std::map<Occupation, cplx> amplitudes) {
    FockState s(modes);
    for (auto& [occ, a] : amplitudes) {
      s.check(occ);
      if (a != 0.0) s.amps_[occ] = a;
    }
    const double n = s.norm();
    if (!(n > 0.0)) throw domain_error("physical state needs a nonzero amplitude");
    return s * (1.0 / n);
  }

  const ModeSet& modes() const { return *modes_; }
  std::shared_ptr<const ModeSet> mode_set() const { return modes_; }
  const std::map<Occupation, cplx>& amplitudes() const { return amps_; }

  cplx amplitude(const Occupation& occ) const {
    auto it = amps_.find(occ);
    return it == amps_.end() ? cplx(0.0) : it->second;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [occ, a] : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  bool is_physical(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }
  bool is_zero() const { return amps_.empty(); }

  void add(const Occupation& occ, cplx a) {
    if (a == 0.0) return;
    auto [it, inserted] = amps_.try_emplace(occ, a);
    if (!inserted) {
      it->second += a;
      if (it->second == 0.0) amps_.erase(it);
    }
  }

  FockState operator+(const FockState& o) const {
    require_same(o);
    FockState out = *this;
    for (const auto& [occ, a] : o.amps_) out.add(occ, a);
    return out;
  }

  FockState operator-(const FockState& o) const { return *this + o * cplx(-1.0); }

  FockState operator*(cplx s) const {
    FockState out(modes_);
    if (s == 0.0) return out;
    for (const auto& [occ, a] : amps_) out.amps_[occ] = a * s;
    return out;
  }

  /// <this|o>
  cplx inner(const FockState& o) const {
    require_same(o);
    cplx s = 0.0;
    for (const auto& [occ, a] : amps_) s += std::conj(a) * o.amplitude(occ);
    return s;
  }

  /// Largest amplitude difference; 0 means identical states.
  double distance(const FockState& o) const {
    double d = 0.0;
    for (const auto& [occ, a] : amps_) d = std::max(d, std::abs(a - o.amplitude(occ)));
    for (const auto& [occ, a] : o.amps_) d = std::max(d, std::abs(a - amplitude(occ)));
    return d;
  }

  void require_same(const FockState& o) const {
    if (!(modes_ == o.modes_ || *modes_ == *o.modes_)) throw domain_error("different mode sets");
  }

 private:
  void check(const Occupation& occ) const {
    if (occ.size() != modes_->size()) throw domain_error("occupation length mismatch");
    for (auto n : occ) {
      if (n > modes_->n_max()) throw truncation_error("occupation above the cap");
    }
  }

  std::shared_ptr<const ModeSet> modes_;
  std::map<Occupation, cplx> amps_;
};

/// (-1)^{number of occupied modes before `mode`}.
inline double jordan_wigner_sign(const Occupation& occ, std::size_t mode) {
  int parity = 0;
  for (std::size_t j = 0; j < mode; ++j) parity += occ[j];
  return parity % 2 == 0 ? 1.0 : -1.0;
}

/// a^dagger_mode. Bosonic: sqrt(n+1), overflow past n_max throws.
/// Fermionic: Jordan-Wigner sign, Pauli-blocked configurations vanish.
inline FockState create(const FockState& state, std::size_t mode) {
  const auto& ms = state.modes();
  if (mode >= ms.size()) throw domain_error("mode index out of range");
  FockState out(state.mode_set());
  for (const auto& [occ, a] : state.amplitudes()) {
    Occupation next = occ;
    if (ms.fermionic()) {
      if (occ[mode] == 1) continue;
      next[mode] = 1;
      out.add(next, a * jordan_wigner_sign(occ, mode));
    } else {
      if (occ[mode] >= ms.n_max()) {
        throw truncation_error("bosonic occupation would exceed n_max");
      }
      next[mode] = static_cast<std::uint8_t>(occ[mode] + 1);
      out.add(next, a * std::sqrt(static_cast<double>(occ[mode] + 1)));
    }
  }
  return out;
}

/// a_mode.
inline FockState annihilate(const FockState& state, std::size_t mode) {
  const auto& ms = state.modes();
  if (mode >= ms.size()) throw domain_error("mode index out of range");
  FockState out(state.mode_set());
  for (const auto& [occ, a] : state.amplitudes()) {
    if (occ[mode] == 0) continue;
    Occupation next = occ;
    next[mode] = static_cast<std::uint8_t>(occ[mode] - 1);
    const double factor = ms.fermionic() ? jordan_wigner_sign(occ, mode)
                                         : std::sqrt(static_cast<double>(occ[mode]));
    out.add(next, a * factor);
  }
  return out;
}

/// Every configuration of the truncated space, in lexicographic order.
inline std::vector<Occupation> all_configurations(const ModeSet& ms) {
  std::vector<Occupation> out;
  Occupation occ(ms.size(), 0);
  while (true) {
    out.push_back(occ);
    std::size_t i = ms.size();
    while (i > 0) {
      --i;
      if (occ[i] < ms.n_max()) {
        ++occ[i];
        std::fill(occ.begin() + static_cast<std::ptrdiff_t>(i) + 1, occ.end(), 0);
        break;
      }
      if (i == 0) return out;
    }
    if (ms.size() == 0) return out;
  }
}

struct Sector {
  int electrons = 0;
  int positrons = 0;
  auto operator<=>(const Sector&) const = default;
};

/// Electron count (electron or boson species) and positron count.
inline Sector sector_of(const ModeSet& ms, const Occupation& occ) {
  Sector s;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].species == Species::positron) s.positrons += occ[i];
    else s.electrons += occ[i];
  }
  return s;
}

/// Born weight of every (n, m) sector present in the state.
inline std::map<Sector, double> sector_probabilities(const FockState& state) {
  std::map<Sector, double> out;
  const double n2 = state.norm() * state.norm();
  for (const auto& [occ, a] : state.amplitudes()) {
    out[sector_of(state.modes(), occ)] += std::norm(a) / n2;
  }
  return out;
}

/// Amplitude table of sector (n electrons, m positrons), in configuration order.
inline std::vector<std::pair<Occupation, cplx>> sector_wavefunction(const FockState& state, int n,
                                                                    int m) {
  std::vector<std::pair<Occupation, cplx>> out;
  for (const auto& [occ, a] : state.amplitudes()) {
    const Sector s = sector_of(state.modes(), occ);
    if (s.electrons == n && s.positrons == m) out.emplace_back(occ, a);
  }
  return out;
}

namespace detail {

// Sum over permutations of prod_i mat(i, perm(i)), signed for determinants.
inline cplx permutation_sum(const Eigen::MatrixXcd& mat, bool signed_sum) {
  const int n = static_cast<int>(mat.rows());
  if (n == 0) return 1.0;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  cplx total = 0.0;
  do {
    cplx term = 1.0;
    for (int i = 0; i < n; ++i) term *= mat(i, perm[i]);
    if (signed_sum) {
      int inversions = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
      if (inversions % 2) term = -term;
    }
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace detail

/**
 * Position-space amplitude of sector (n, m) at the given electron and
 * positron coordinates, with plane-wave mode functions e^{ik.x}/sqrt(volume).
 * Fermions: product of the two Slater determinants / sqrt(n! m!). Bosons:
 * permanent / sqrt(n! prod n_k!). Produced on demand from the mode table.
 */
inline cplx sector_position_amplitude(const FockState& state, const std::vector<Vec3>& electrons,
                                      const std::vector<Vec3>& positrons, double volume) {
  const auto& ms = state.modes();
  const int n = static_cast<int>(electrons.size());
  const int m = static_cast<int>(positrons.size());
  const double inv_sqrt_v = 1.0 / std::sqrt(volume);
  cplx total = 0.0;
  for (const auto& [occ, a] : sector_wavefunction(state, n, m)) {
    std::vector<std::size_t> e_modes, p_modes;
    double occupancy_factorials = 1.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      for (int c = 0; c < occ[i]; ++c) {
        (ms[i].species == Species::positron ? p_modes : e_modes).push_back(i);
        occupancy_factorials *= (c + 1);
      }
    }
    auto block = [&](const std::vector<std::size_t>& mode_list, const std::vector<Vec3>& xs) {
      Eigen::MatrixXcd mat(mode_list.size(), xs.size());
      for (std::size_t r = 0; r < mode_list.size(); ++r)
        for (std::size_t c = 0; c < xs.size(); ++c)
          mat(r, c) = std::exp(I * ms[mode_list[r]].k.dot(xs[c])) * inv_sqrt_v;
      return detail::permutation_sum(mat, ms.fermionic());
    };
    double factorials = 1.0;
    for (int i = 2; i <= n; ++i) factorials *= i;
    for (int i = 2; i <= m; ++i) factorials *= i;
    if (!ms.fermionic()) factorials *= occupancy_factorials;
    total += a * block(e_modes, electrons) * block(p_modes, positrons) / std::sqrt(factorials);
  }
  return total;
}

/// Energy of a configuration in units of hbar with the zero at the empty
/// (or filled-sea) state: occupied positive modes add omega, empty sea modes
/// add omega.
inline double configuration_energy(const ModeSet& ms, const Occupation& occ) {
  double e = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].branch == Branch::negative) e += (1 - occ[i]) * ms[i].omega;
    else e += occ[i] * ms[i].omega;
  }
  return e;
}

/// Free evolution: each configuration rotates by e^{-i E_config t}.
inline FockState evolve_fock(const FockState& state, double t) {
  FockState out(state.mode_set());
  for (const auto& [occ, a] : state.amplitudes()) {
    out.add(occ, a * std::exp(-I * configuration_energy(state.modes(), occ) * t));
  }
  return out;
}

/// <H> / hbar relative to the vacuum or filled sea.
inline double mean_energy(const FockState& state) {
  double e = 0.0;
  const double n2 = state.norm() * state.norm();
  for (const auto& [occ, a] : state.amplitudes()) {
    e += std::norm(a) * configuration_energy(state.modes(), occ);
  }
  return e / n2;
}

/// Expected total charge relative to the ground state, in units of e:
/// electrons -1 each, positrons +1 each, the filled sea as reference.
inline double relative_charge(const FockState& state) {
  const auto& ms = state.modes();
  double sea = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].branch == Branch::negative && ms[i].species == Species::electron) sea += -1.0;
  }
  double q = 0.0;
  const double n2 = state.norm() * state.norm();
  for (const auto& [occ, a] : state.amplitudes()) {
    double cq = 0.0;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (ms[i].species == Species::electron) cq -= occ[i];
      else if (ms[i].species == Species::positron) cq += occ[i];
    }
    q += std::norm(a) * cq;
  }
  return q / n2 - sea;
}

/// Electron modes of both branches for a Dirac-sea toy: each wavevector
/// gets a negative (sea) and a positive mode with omega = E(k)/hbar.
inline ModeSet dirac_sea_modes(const std::vector<Vec3>& wavevectors, const PhysicalConstants& pc) {
  std::vector<Mode> modes;
  for (const auto& k : wavevectors) {
    const double w = std::hypot(pc.mass * pc.c * pc.c, pc.hbar * pc.c * k.norm()) / pc.hbar;
    modes.push_back({k, 1, Species::electron, Branch::negative, w});
    modes.push_back({k, 1, Species::electron, Branch::positive, w});
  }
  return ModeSet(std::move(modes), Statistics::fermionic);
}

/// All negative modes filled, positive modes empty.
inline FockState dirac_sea_ground(std::shared_ptr<const ModeSet> modes) {
  if (!modes->fermionic()) throw domain_error("the Dirac sea needs fermionic modes");
  Occupation occ(modes->size(), 0);
  for (std::size_t i = 0; i < modes->size(); ++i) {
    if ((*modes)[i].branch == Branch::negative) occ[i] = 1;
  }
  return FockState::basis_state(modes, occ);
}

/// Removes the electron in a negative mode, leaving a hole.
inline FockState make_hole(const FockState& state, std::size_t negative_mode) {
  if (state.modes()[negative_mode].branch != Branch::negative) {
    throw domain_error("holes live in negative-frequency modes");
  }
  for (const auto& [occ, a] : state.amplitudes()) {
    if (occ[negative_mode] == 0) throw domain_error("negative mode is already empty");
  }
  return annihilate(state, negative_mode);
}

/// Moves an electron from a negative mode to a positive one: a^dagger_+ a_-.
inline FockState excite_hole(const FockState& state, std::size_t negative_mode,
                             std::size_t positive_mode) {
  if (state.modes()[positive_mode].branch != Branch::positive) {
    throw domain_error("target must be a positive-frequency mode");
  }
  return create(make_hole(state, negative_mode), positive_mode);
}

/// Largest deviations from the canonical (anti)commutation relations over
/// every basis configuration of the truncated space.
struct AlgebraReport {
  double mixed = 0.0;          // [a_i, a_j^dagger]_{-/+} - delta_ij
  double annihilators = 0.0;   // [a_i, a_j]_{-/+}
  double creators = 0.0;       // [a_i^dagger, a_j^dagger]_{-/+}
  std::size_t states = 0;      // configurations visited
  std::size_t products = 0;    // operator identities evaluated
};

/**
 * Exhaustive check on basis states. Bosonic identities are only evaluated
 * where every intermediate stays within the cap, i.e. strictly below n_max
 * in the modes that get raised.
 */
inline AlgebraReport check_canonical_relations(std::shared_ptr<const ModeSet> ms) {
  AlgebraReport r;
  const bool fermi = ms->fermionic();
  const double sign = fermi ? 1.0 : -1.0;  // anticommutator vs commutator
  for (const auto& occ : all_configurations(*ms)) {
    ++r.states;
    const FockState s = FockState::basis_state(ms, occ);
    for (std::size_t i = 0; i < ms->size(); ++i) {
      for (std::size_t j = 0; j < ms->size(); ++j) {
        const bool room_j = fermi || occ[j] < ms->n_max();
        const bool room_i = fermi || occ[i] < ms->n_max();
        if (room_j) {
          FockState lhs = annihilate(create(s, j), i) + create(annihilate(s, i), j) * sign;
          if (i == j) lhs = lhs - s;
          r.mixed = std::max(r.mixed, lhs.distance(FockState(ms)));
          ++r.products;
        }
        const FockState aa = annihilate(annihilate(s, j), i) + annihilate(annihilate(s, i), j) * sign;
        r.annihilators = std::max(r.annihilators, aa.distance(FockState(ms)));
        ++r.products;
        const bool room_pair = fermi || (i == j ? occ[i] + 2 <= ms->n_max() : room_i && room_j);
        if (room_pair) {
          const FockState cc = create(create(s, j), i) + create(create(s, i), j) * sign;
          r.creators = std::max(r.creators, cc.distance(FockState(ms)));
          ++r.products;
        }
      }
    }
  }
  return r;
}

// --- serialization --------------------------------------------------------

inline std::string occupation_string(const Occupation& occ) {
  static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  for (auto n : occ) s.push_back(digits[n]);
  return s;
}

inline Occupation parse_occupation(const std::string& s) {
  Occupation occ;
  for (char ch : s) {
    if (ch >= '0' && ch <= '9') occ.push_back(static_cast<std::uint8_t>(ch - '0'));
    else if (ch >= 'a' && ch <= 'z') occ.push_back(static_cast<std::uint8_t>(ch - 'a' + 10));
    else throw domain_error("bad occupation character");
  }
  return occ;
}

/**
 * CSV: a header "#fock,<statistics>,<n_max>,<mode count>", one
 * "#mode,kx,ky,kz,spin,species,branch,omega" line per mode (canonical order),
 * then "occupation,real,imag" rows.
 */
inline void write_csv(std::ostream& os, const FockState& state) {
  const auto& ms = state.modes();
  os.precision(17);
  os << "#fock," << (ms.fermionic() ? "fermionic" : "bosonic") << ',' << ms.n_max() << ','
     << ms.size() << '\n';
  for (const auto& m : ms.modes()) {
    os << "#mode," << m.k.x() << ',' << m.k.y() << ',' << m.k.z() << ',' << m.spin << ','
       << static_cast<int>(m.species) << ',' << (m.branch == Branch::negative ? -1 : 1) << ','
       << m.omega << '\n';
  }
  os << "occupation,real,imag\n";
  for (const auto& [occ, a] : state.amplitudes()) {
    os << occupation_string(occ) << ',' << a.real() << ',' << a.imag() << '\n';
  }
}

inline FockState read_csv(std::istream& is) {
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> parts;
    std::stringstream ss(l);
    std::string p;
    while (std::getline(ss, p, ',')) parts.push_back(p);
    return parts;
  };
  if (!std::getline(is, line)) throw domain_error("empty Fock CSV");
  auto head = split(line);
  if (head.size() != 4 || head[0] != "#fock") throw domain_error("missing #fock header");
  const Statistics stats = head[1] == "fermionic" ? Statistics::fermionic : Statistics::bosonic;
  const int n_max = std::stoi(head[2]);
  const std::size_t count = std::stoul(head[3]);
  std::vector<Mode> modes;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw domain_error("truncated mode table");
    auto p = split(line);
    if (p.size() != 8 || p[0] != "#mode") throw domain_error("bad mode line");
    modes.push_back({Vec3(std::stod(p[1]), std::stod(p[2]), std::stod(p[3])), std::stoi(p[4]),
                     static_cast<Species>(std::stoi(p[5])),
                     std::stoi(p[6]) < 0 ? Branch::negative : Branch::positive, std::stod(p[7])});
  }
  auto ms = std::make_shared<const ModeSet>(std::move(modes), stats, n_max);
  std::getline(is, line);
  FockState state(ms);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto p = split(line);
    if (p.size() != 3) throw domain_error("bad amplitude row");
    const Occupation occ = parse_occupation(p[0]);
    if (occ.size() != ms->size()) throw domain_error("occupation length mismatch");
    state.add(occ, cplx(std::stod(p[1]), std::stod(p[2])));
  }
  return state;
}

namespace detail {
template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw domain_error("truncated binary");
  return v;
}
}  // namespace detail

/// Compact little-endian binary: "FLFK", u32 version, u8 stats, u8 n_max,
/// u32 modes, per mode (3 f64, i32, u8, i8, f64), u64 rows, per row
/// (occupation bytes, f64 re, f64 im).
inline void write_binary(std::ostream& os, const FockState& state) {
  const auto& ms = state.modes();
  os.write("FLFK", 4);
  detail::put<std::uint32_t>(os, 1);
  detail::put<std::uint8_t>(os, ms.fermionic() ? 1 : 0);
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(ms.n_max()));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(ms.size()));
  for (const auto& m : ms.modes()) {
    for (int a = 0; a < 3; ++a) detail::put<double>(os, m.k[a]);
    detail::put<std::int32_t>(os, m.spin);
    detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(m.species));
    detail::put<std::int8_t>(os, m.branch == Branch::negative ? -1 : 1);
    detail::put<double>(os, m.omega);
  }
  detail::put<std::uint64_t>(os, state.amplitudes().size());
  for (const auto& [occ, a] : state.amplitudes()) {
    os.write(reinterpret_cast<const char*>(occ.data()), static_cast<std::streamsize>(occ.size()));
    detail::put<double>(os, a.real());
    detail::put<double>(os, a.imag());
  }
}

inline FockState read_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "FLFK") throw domain_error("not a Fock binary");
  if (detail::get<std::uint32_t>(is) != 1) throw domain_error("unsupported Fock binary version");
  const auto stats = detail::get<std::uint8_t>(is) ? Statistics::fermionic : Statistics::bosonic;
  const int n_max = detail::get<std::uint8_t>(is);
  const auto count = detail::get<std::uint32_t>(is);
  std::vector<Mode> modes;
  for (std::uint32_t i = 0; i < count; ++i) {
    Mode m;
    for (int a = 0; a < 3; ++a) m.k[a] = detail::get<double>(is);
    m.spin = detail::get<std::int32_t>(is);
    m.species = static_cast<Species>(detail::get<std::uint8_t>(is));
    m.branch = detail::get<std::int8_t>(is) < 0 ? Branch::negative : Branch::positive;
    m.omega = detail::get<double>(is);
    modes.push_back(m);
  }
  auto ms = std::make_shared<const ModeSet>(std::move(modes), stats, n_max);
  FockState state(ms);
  const auto rows = detail::get<std::uint64_t>(is);
  for (std::uint64_t r = 0; r < rows; ++r) {
    Occupation occ(count);
    if (!is.read(reinterpret_cast<char*>(occ.data()), count)) throw domain_error("truncated binary");
    const double re = detail::get<double>(is);
    const double im = detail::get<double>(is);
    state.add(occ, cplx(re, im));
  }
  return state;
}

}  // namespace fieldlab::fock
