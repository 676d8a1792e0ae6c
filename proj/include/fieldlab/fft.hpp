// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>

namespace fieldlab::detail {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are cached per (rank, extent, interleaved components,
// direction) and never destroyed before process exit.
class fft_plan_cache {
 public:
  using key_type = std::tuple<int, int, int, int>;

  static fft_plan_cache& instance() {
    static fft_plan_cache cache;
    return cache;
  }

  fftw_plan get(int rank, int n, int howmany, int sign) {
    std::lock_guard lock(mutex_);
    const key_type key{rank, n, howmany, sign};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::array<int, 3> dims{n, n, n};
    std::size_t total = static_cast<std::size_t>(howmany);
    for (int r = 0; r < rank; ++r) total *= static_cast<std::size_t>(n);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_many_dft(rank, dims.data(), howmany, scratch, nullptr, howmany, 1,
                                        scratch, nullptr, howmany, 1, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

  fft_plan_cache(const fft_plan_cache&) = delete;
  fft_plan_cache& operator=(const fft_plan_cache&) = delete;

 private:
  fft_plan_cache() = default;
  ~fft_plan_cache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<key_type, fftw_plan> plans_;
};

/// In-place unitary DFT over `rank` axes of extent `n` on `howmany`
/// interleaved components. sign = -1 forward (position to mode), +1 inverse.
inline void unitary_fft(std::span<std::complex<double>> data, int rank, int n, int howmany,
                        int sign) {
  fftw_plan plan = fft_plan_cache::instance().get(rank, n, howmany, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
  double points = 1.0;
  for (int r = 0; r < rank; ++r) points *= n;
  const double scale = 1.0 / std::sqrt(points);
  for (auto& z : data) z *= scale;
}

}  // namespace fieldlab::detail
