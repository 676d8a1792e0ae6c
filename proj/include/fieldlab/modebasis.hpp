// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fieldlab/fft.hpp"
#include "fieldlab/types.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fieldlab {

/**
 * Periodic lattice of N^dim sites on a cube of side `extent`, together with
 * its discrete Fourier modes k_n = 2 pi n / L, n in {-N/2, ..., N/2-1}.
 *
 * Site and mode arrays share the row-major layout (x slowest). Mode arrays
 * are stored in FFT order (n = 0, 1, ..., N/2-1, -N/2, ..., -1 on each axis);
 * canonical_wavevectors() gives the signed enumeration.
 *
 * Transforms are unitary: forward multiplies by N^{-dim/2} sum_x e^{-ik.x},
 * so sum_x |f|^2 = sum_k |f~|^2 and integrals are spacing^dim sums.
 */
class ModeBasis {
 public:
  static ModeBasis build(int dim, double extent, int points_per_axis) {
    if (dim != 1 && dim != 3) throw domain_error("dim must be 1 or 3");
    if (points_per_axis < 4 || points_per_axis % 2 != 0) {
      throw domain_error("points_per_axis must be even and at least 4");
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) throw domain_error("extent must be positive");
    ModeBasis b;
    b.dim_ = dim;
    b.n_ = points_per_axis;
    b.extent_ = extent;
    return b;
  }

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / n_; }
  double cell_volume() const { return std::pow(spacing(), dim_); }
  double volume() const { return std::pow(extent_, dim_); }
  double dk() const { return 2.0 * pi / extent_; }

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim_; ++d) s *= static_cast<std::size_t>(n_);
    return s;
  }

  /// Per-axis integer coordinates of a flat index (unused axes are 0).
  std::array<int, 3> unflatten(std::size_t idx) const {
    std::array<int, 3> c{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
      c[d] = static_cast<int>(idx % n_);
      idx /= n_;
    }
    return c;
  }

  std::size_t flatten(const std::array<int, 3>& c) const {
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
      const int w = ((c[d] % n_) + n_) % n_;
      idx = idx * n_ + static_cast<std::size_t>(w);
    }
    return idx;
  }

  Vec3 position(std::size_t site) const {
    const auto c = unflatten(site);
    return Vec3(c[0], c[1], c[2]) * spacing();
  }

  /// Signed mode numbers of an FFT-ordered mode index.
  std::array<int, 3> mode_numbers(std::size_t mode) const {
    auto c = unflatten(mode);
    for (int d = 0; d < dim_; ++d) {
      if (c[d] >= n_ / 2) c[d] -= n_;
    }
    return c;
  }

  Vec3 wavevector(std::size_t mode) const {
    const auto m = mode_numbers(mode);
    return Vec3(m[0], m[1], m[2]) * dk();
  }

  /// Index of the mode carrying -k. The Nyquist plane maps to itself.
  std::size_t negated(std::size_t mode) const {
    auto m = mode_numbers(mode);
    for (int d = 0; d < dim_; ++d) m[d] = -m[d];
    return flatten(m);
  }

  bool is_nyquist(std::size_t mode) const {
    const auto m = mode_numbers(mode);
    for (int d = 0; d < dim_; ++d) {
      if (m[d] == -n_ / 2) return true;
    }
    return false;
  }

  /// Largest |n_i| over the axes of a mode.
  int band(std::size_t mode) const {
    const auto m = mode_numbers(mode);
    int b = 0;
    for (int d = 0; d < dim_; ++d) b = std::max(b, std::abs(m[d]));
    return b;
  }

  /// Wavevectors in canonical row-major signed order.
  std::vector<Vec3> canonical_wavevectors() const {
    std::vector<Vec3> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const auto c = unflatten(i);
      Vec3 k = Vec3::Zero();
      for (int d = 0; d < dim_; ++d) k[d] = (c[d] - n_ / 2) * dk();
      out.push_back(k);
    }
    return out;
  }

  /// Displacement from `origin` to `x` folded into [-L/2, L/2) per active axis.
  Vec3 minimal_image(const Vec3& x, const Vec3& origin) const {
    Vec3 d = x - origin;
    for (int a = 0; a < dim_; ++a) d[a] -= extent_ * std::floor(d[a] / extent_ + 0.5);
    return d;
  }

  /// Forward unitary transform of `components` interleaved complex fields.
  void forward(std::span<cplx> data, int components = 1) const {
    check_span(data.size(), components);
    detail::unitary_fft(data, dim_, n_, components, FFTW_FORWARD);
  }

  void inverse(std::span<cplx> data, int components = 1) const {
    check_span(data.size(), components);
    detail::unitary_fft(data, dim_, n_, components, FFTW_BACKWARD);
  }

  std::vector<cplx> forward_copy(std::span<const cplx> in) const {
    std::vector<cplx> out(in.begin(), in.end());
    forward(out);
    return out;
  }

  std::vector<cplx> inverse_copy(std::span<const cplx> in) const {
    std::vector<cplx> out(in.begin(), in.end());
    inverse(out);
    return out;
  }

  bool operator==(const ModeBasis& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && extent_ == o.extent_;
  }

  void require_same(const ModeBasis& o) const {
    if (!(*this == o)) throw domain_error("fields live on different mode bases");
  }

 private:
  ModeBasis() = default;

  void check_span(std::size_t n, int components) const {
    if (components < 1 || n != size() * static_cast<std::size_t>(components)) {
      throw domain_error("transform buffer does not match the basis");
    }
  }

  int dim_ = 1;
  int n_ = 4;
  double extent_ = 1.0;
};

/// omega = sqrt(m^2 c^4 + hbar^2 |k|^2 c^2) / hbar. Mass may be zero here.
inline double dispersion_massive(const Vec3& k, const PhysicalConstants& pc) {
  if (!(pc.hbar > 0.0) || !(pc.c > 0.0) || pc.mass < 0.0) {
    throw domain_error("dispersion needs hbar, c > 0 and mass >= 0");
  }
  const double mc2 = pc.mass * pc.c * pc.c;
  const double pc_ = pc.hbar * k.norm() * pc.c;
  return std::hypot(mc2, pc_) / pc.hbar;
}

/// Photon angular frequency c|k|.
inline double dispersion_photon(const Vec3& k, const PhysicalConstants& pc = {}) {
  return pc.c * k.norm();
}

inline void to_json(nlohmann::json& j, const PhysicalConstants& pc) {
  j = nlohmann::json{{"hbar", pc.hbar}, {"c", pc.c}, {"mass", pc.mass}, {"charge", pc.charge}};
}

inline PhysicalConstants constants_from_json(const nlohmann::json& j) {
  PhysicalConstants pc;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    if (key == "hbar") pc.hbar = it->get<double>();
    else if (key == "c") pc.c = it->get<double>();
    else if (key == "mass" || key == "m") pc.mass = it->get<double>();
    else if (key == "charge" || key == "e") pc.charge = it->get<double>();
    else throw domain_error("unknown constants key: " + key);
  }
  pc.validate();
  return pc;
}

/// Reads {dim, extent, points_per_axis[, constants]}; unknown keys rejected.
struct BasisConfig {
  ModeBasis basis;
  PhysicalConstants constants;
};

inline BasisConfig basis_from_json(const nlohmann::json& j) {
  int dim = 0;
  double extent = 0.0;
  int points = 0;
  PhysicalConstants pc;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    if (key == "dim") dim = it->get<int>();
    else if (key == "extent") extent = it->get<double>();
    else if (key == "points_per_axis") points = it->get<int>();
    else if (key == "constants") pc = constants_from_json(*it);
    else throw domain_error("unknown basis key: " + key);
  }
  return {ModeBasis::build(dim, extent, points), pc};
}

inline nlohmann::json basis_to_json(const ModeBasis& b) {
  return {{"dim", b.dim()}, {"extent", b.extent()}, {"points_per_axis", b.points_per_axis()}};
}

}  // namespace fieldlab
