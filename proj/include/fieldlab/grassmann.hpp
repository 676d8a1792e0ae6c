// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fieldlab::grassmann {

using Mask = std::uint32_t;

/// Generator count plus the conjugation involution theta_i^dagger = theta_{dagger[i]}.
struct GrassmannSpace {
  static constexpr int max_generators = 24;
  int generators = 0;
  std::vector<int> dagger;

  static std::shared_ptr<const GrassmannSpace> make(int g, std::vector<int> dagger_map = {}) {
    if (g < 0 || g > max_generators) throw domain_error("generator count must lie in [0, 24]");
    auto s = std::make_shared<GrassmannSpace>();
    s->generators = g;
    if (dagger_map.empty()) {
      for (int i = 0; i < g; ++i) dagger_map.push_back(i);
    }
    if (static_cast<int>(dagger_map.size()) != g) throw domain_error("dagger map length mismatch");
    for (int i = 0; i < g; ++i) {
      const int j = dagger_map[i];
      if (j < 0 || j >= g || dagger_map[j] != i) throw domain_error("dagger map must be an involution");
    }
    s->dagger = std::move(dagger_map);
    return s;
  }

  bool operator==(const GrassmannSpace& o) const {
    return generators == o.generators && dagger == o.dagger;
  }
};

using SpacePtr = std::shared_ptr<const GrassmannSpace>;

/// Sign of theta_A theta_B -> theta_{A|B} with both monomials in ascending order.
inline double reorder_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(static_cast<Mask>(a >> (j + 1)));
  }
  return (swaps & 1) ? -1.0 : 1.0;
}

/**
 * Element of the Grassmann algebra over a GrassmannSpace. Monomials are
 * bitmasks with generators in ascending order; dense storage up to 16
 * generators, an ordered map above.
 */
class GrassmannElement {
 public:
  static constexpr int dense_limit = 16;

  explicit GrassmannElement(SpacePtr space) : space_(std::move(space)) {
    if (dense()) dense_.assign(std::size_t{1} << space_->generators, 0.0);
  }

  static GrassmannElement scalar(SpacePtr space, cplx v) {
    GrassmannElement e(std::move(space));
    e.add(0, v);
    return e;
  }

  static GrassmannElement generator(SpacePtr space, int i, cplx v = 1.0) {
    if (i < 0 || i >= space->generators) throw domain_error("generator index out of range");
    GrassmannElement e(std::move(space));
    e.add(Mask{1} << i, v);
    return e;
  }

  /// Ordered product theta_{i1} theta_{i2} ... in the given order.
  static GrassmannElement monomial(SpacePtr space, const std::vector<int>& indices, cplx v = 1.0) {
    GrassmannElement e = scalar(space, v);
    for (int i : indices) e = e * generator(space, i);
    return e;
  }

  const SpacePtr& space() const { return space_; }
  int generators() const { return space_->generators; }
  bool dense() const { return space_->generators <= dense_limit; }

  cplx coefficient(Mask m) const {
    if (dense()) return m < dense_.size() ? dense_[m] : cplx(0.0);
    auto it = sparse_.find(m);
    return it == sparse_.end() ? cplx(0.0) : it->second;
  }

  void add(Mask m, cplx v) {
    if (v == 0.0) return;
    if (generators() < 32 && (m >> generators()) != 0) throw domain_error("monomial outside the space");
    if (dense()) {
      dense_[m] += v;
    } else {
      auto& slot = sparse_[m];
      slot += v;
      if (slot == 0.0) sparse_.erase(m);
    }
  }

  /// Nonzero terms in ascending mask order.
  std::vector<std::pair<Mask, cplx>> terms() const {
    std::vector<std::pair<Mask, cplx>> out;
    if (dense()) {
      for (Mask m = 0; m < dense_.size(); ++m)
        if (dense_[m] != 0.0) out.emplace_back(m, dense_[m]);
    } else {
      for (const auto& t : sparse_) out.push_back(t);
    }
    return out;
  }

  cplx body() const { return coefficient(0); }

  GrassmannElement soul() const {
    GrassmannElement s = *this;
    s.add(0, -body());
    return s;
  }

  bool is_zero() const { return terms().empty(); }

  /// Largest coefficient magnitude.
  double max_abs() const {
    double m = 0.0;
    for (const auto& [mask, c] : terms()) m = std::max(m, std::abs(c));
    return m;
  }

  void require_same(const GrassmannElement& o) const {
    if (!(space_ == o.space_ || *space_ == *o.space_)) throw domain_error("mismatched generator spaces");
  }

  GrassmannElement operator+(const GrassmannElement& o) const {
    require_same(o);
    GrassmannElement r = *this;
    for (const auto& [m, c] : o.terms()) r.add(m, c);
    return r;
  }

  GrassmannElement operator-(const GrassmannElement& o) const { return *this + o * cplx(-1.0); }

  GrassmannElement operator*(cplx s) const {
    GrassmannElement r(space_);
    for (const auto& [m, c] : terms()) r.add(m, c * s);
    return r;
  }

  GrassmannElement operator*(const GrassmannElement& o) const {
    require_same(o);
    GrassmannElement r(space_);
    const auto ta = terms();
    const auto tb = o.terms();
    for (const auto& [ma, ca] : ta)
      for (const auto& [mb, cb] : tb) {
        if (ma & mb) continue;
        r.add(ma | mb, reorder_sign(ma, mb) * ca * cb);
      }
    return r;
  }

  bool operator==(const GrassmannElement& o) const {
    if (!(space_ == o.space_ || *space_ == *o.space_)) return false;
    return terms() == o.terms();
  }

 private:
  SpacePtr space_;
  std::vector<cplx> dense_;
  std::map<Mask, cplx> sparse_;
};

inline GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b) { return a * b; }

/// (c theta_{i1}..theta_{ik})^dagger = c* theta_{ik}^dagger..theta_{i1}^dagger.
inline GrassmannElement conjugate(const GrassmannElement& a) {
  const auto& dag = a.space()->dagger;
  GrassmannElement r(a.space());
  for (const auto& [m, c] : a.terms()) {
    std::vector<int> order;
    for (int i = a.generators() - 1; i >= 0; --i) {
      if (m & (Mask{1} << i)) order.push_back(dag[i]);
    }
    int inversions = 0;
    Mask out = 0;
    for (std::size_t p = 0; p < order.size(); ++p) {
      out |= Mask{1} << order[p];
      for (std::size_t q = p + 1; q < order.size(); ++q) inversions += order[p] > order[q];
    }
    r.add(out, (inversions & 1 ? -1.0 : 1.0) * std::conj(c));
  }
  return r;
}

/// Berezin integral over all generators: coefficient of the ascending top monomial.
inline cplx berezin_top(const GrassmannElement& a) {
  const int g = a.generators();
  const Mask top = g == 32 ? ~Mask{0} : ((Mask{1} << g) - 1);
  return a.coefficient(top);
}

/// "θ_{i1}…θ_{ik}: a+bi" per nonzero subset, "1" for the empty one.
inline void dump(std::ostream& os, const GrassmannElement& a) {
  os.precision(17);
  for (const auto& [m, c] : a.terms()) {
    if (m == 0) {
      os << '1';
    } else {
      for (int i = 0; i < a.generators(); ++i)
        if (m & (Mask{1} << i)) os << "θ_{" << i << '}';
    }
    os << ": " << c.real() << (c.imag() < 0 || std::signbit(c.imag()) ? "-" : "+")
       << std::abs(c.imag()) << "i\n";
  }
}

inline std::string dump_string(const GrassmannElement& a) {
  std::ostringstream os;
  dump(os, a);
  return os.str();
}

// --- toy fermion field ------------------------------------------------------

/**
 * M modes, each with a generator pair: theta_i = generator 2i and
 * thetabar_i = generator 2i+1, with theta_i^dagger = thetabar_i. A complex
 * configuration c maps one-to-one onto the Grassmann configuration
 * psi_i = c_i theta_i.
 */
class ToyFermionField {
 public:
  static constexpr int max_modes = 6;

  explicit ToyFermionField(int modes) : modes_(modes) {
    if (modes < 0 || modes > max_modes) throw domain_error("toy fields hold at most 6 modes");
    std::vector<int> dag(2 * modes);
    for (int i = 0; i < modes; ++i) {
      dag[2 * i] = 2 * i + 1;
      dag[2 * i + 1] = 2 * i;
    }
    space_ = GrassmannSpace::make(2 * modes, std::move(dag));
  }

  int modes() const { return modes_; }
  const SpacePtr& space() const { return space_; }

  GrassmannElement theta(int i) const { return GrassmannElement::generator(space_, 2 * check(i)); }
  GrassmannElement theta_bar(int i) const { return GrassmannElement::generator(space_, 2 * check(i) + 1); }

  /// Grassmann field values paired with a complex configuration.
  std::vector<GrassmannElement> grassmann_values(const std::vector<cplx>& config) const {
    if (static_cast<int>(config.size()) != modes_) throw domain_error("configuration length mismatch");
    std::vector<GrassmannElement> out;
    for (int i = 0; i < modes_; ++i) out.push_back(theta(i) * config[i]);
    return out;
  }

  /// Inverse of the pairing; rejects values outside span{theta_i}.
  std::vector<cplx> complex_values(const std::vector<GrassmannElement>& values) const {
    std::vector<cplx> out;
    for (int i = 0; i < modes_; ++i) {
      const Mask m = Mask{1} << (2 * i);
      const cplx c = values.at(i).coefficient(m);
      if (!(values[i] - GrassmannElement::generator(space_, 2 * i, c)).is_zero()) {
        throw domain_error("value is not a multiple of its mode generator");
      }
      out.push_back(c);
    }
    return out;
  }

  /// psi^dagger psi = sum_i psi_i^dagger psi_i.
  GrassmannElement density(const std::vector<GrassmannElement>& values) const {
    GrassmannElement s(space_);
    for (const auto& v : values) s = s + conjugate(v) * v;
    return s;
  }

  /// Berezin measure exp(-sum_i thetabar_i theta_i).
  GrassmannElement measure() const {
    GrassmannElement w = GrassmannElement::scalar(space_, 1.0);
    for (int i = 0; i < modes_; ++i) {
      w = w * (GrassmannElement::scalar(space_, 1.0) - theta_bar(i) * theta(i));
    }
    return w;
  }

  /// True when the element only involves thetabar generators.
  bool holomorphic(const GrassmannElement& psi) const {
    Mask theta_bits = 0;
    for (int i = 0; i < modes_; ++i) theta_bits |= Mask{1} << (2 * i);
    for (const auto& [m, c] : psi.terms())
      if (m & theta_bits) return false;
    return true;
  }

  /// <a|b> = Berezin integral of a^dagger b exp(-sum thetabar theta).
  cplx inner(const GrassmannElement& a, const GrassmannElement& b) const {
    if (!holomorphic(a) || !holomorphic(b)) throw domain_error("toy functionals are polynomials in thetabar");
    return berezin_top(conjugate(a) * b * measure());
  }

  /// Discrete configuration family: binary occupations c in {0,1}^M.
  std::vector<std::vector<cplx>> configuration_family() const {
    std::vector<std::vector<cplx>> out;
    for (Mask m = 0; m < (Mask{1} << modes_); ++m) {
      std::vector<cplx> c(modes_);
      for (int i = 0; i < modes_; ++i) c[i] = (m >> i) & 1 ? 1.0 : 0.0;
      out.push_back(c);
    }
    return out;
  }

  /// Eigenstate paired with family member c: ordered product of thetabar_i over c_i = 1.
  GrassmannElement eigenstate(const std::vector<cplx>& config) const {
    if (static_cast<int>(config.size()) != modes_) throw domain_error("configuration length mismatch");
    GrassmannElement e = GrassmannElement::scalar(space_, 1.0);
    for (int i = 0; i < modes_; ++i) {
      if (config[i] == 1.0) e = e * theta_bar(i);
      else if (config[i] != 0.0) throw domain_error("configuration is not in the discrete family");
    }
    return e;
  }

  /// Random holomorphic toy functional, normalized in the Berezin inner product.
  template <class Rng>
  GrassmannElement random_functional(Rng& rng) const {
    std::normal_distribution<double> g(0.0, 1.0);
    GrassmannElement psi(space_);
    for (const auto& c : configuration_family()) {
      const double re = g(rng);
      const double im = g(rng);
      psi = psi + eigenstate(c) * cplx(re, im);
    }
    return psi * (1.0 / std::sqrt(inner(psi, psi).real()));
  }

 private:
  int check(int i) const {
    if (i < 0 || i >= modes_) throw domain_error("mode index out of range");
    return i;
  }

  int modes_;
  SpacePtr space_;
};

/// Field operator psi_i acting by left multiplication with its value.
inline GrassmannElement field_operator_action(const std::vector<GrassmannElement>& values, int i,
                                              const GrassmannElement& psi) {
  return values.at(i) * psi;
}

/// {psi_i, psi_j} Psi with Grassmann values.
inline GrassmannElement anticommutator(const std::vector<GrassmannElement>& values, int i, int j,
                                       const GrassmannElement& psi) {
  return field_operator_action(values, i, field_operator_action(values, j, psi)) +
         field_operator_action(values, j, field_operator_action(values, i, psi));
}

/// Same construction with ordinary complex values: 2 v_i v_j Psi.
inline cplx complex_anticommutator(const std::vector<cplx>& values, int i, int j, cplx psi) {
  return values.at(i) * (values.at(j) * psi) + values.at(j) * (values.at(i) * psi);
}

/// |<c|Psi>|^2 / <Psi|Psi> for a member of the configuration family.
inline double paired_probability(const ToyFermionField& field, const GrassmannElement& psi,
                                 const std::vector<cplx>& config) {
  const double norm2 = field.inner(psi, psi).real();
  if (!(norm2 > 0.0)) throw domain_error("zero functional has no probabilities");
  return std::norm(field.inner(field.eigenstate(config), psi)) / norm2;
}

struct PathologyReport {
  cplx density_body = 0.0;
  double density_soul = 0.0;  // largest soul coefficient magnitude
  cplx amplitude_body = 0.0;
  double amplitude_soul = 0.0;
  bool density_has_soul = false;
  bool amplitude_has_soul = false;
  std::string density_dump;
  std::string amplitude_dump;
};

/// Body and soul of psi^dagger psi and of Psi^dagger Psi.
inline PathologyReport density_pathology_report(const ToyFermionField& field,
                                                const std::vector<GrassmannElement>& values,
                                                const GrassmannElement& functional) {
  PathologyReport r;
  const auto rho = field.density(values);
  r.density_body = rho.body();
  r.density_soul = rho.soul().max_abs();
  r.density_has_soul = r.density_soul != 0.0;
  r.density_dump = dump_string(rho);
  const auto amp = conjugate(functional) * functional;
  r.amplitude_body = amp.body();
  r.amplitude_soul = amp.soul().max_abs();
  r.amplitude_has_soul = r.amplitude_soul != 0.0;
  r.amplitude_dump = dump_string(amp);
  return r;
}

inline nlohmann::json to_json(const PathologyReport& r) {
  return {{"density", {{"body", {r.density_body.real(), r.density_body.imag()}},
                       {"soul_max_abs", r.density_soul},
                       {"has_soul", r.density_has_soul},
                       {"terms", r.density_dump}}},
          {"amplitude_squared", {{"body", {r.amplitude_body.real(), r.amplitude_body.imag()}},
                                 {"soul_max_abs", r.amplitude_soul},
                                 {"has_soul", r.amplitude_has_soul},
                                 {"terms", r.amplitude_dump}}}};
}

}  // namespace fieldlab::grassmann
