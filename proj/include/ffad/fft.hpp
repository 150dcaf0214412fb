// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <concepts>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include "ffad/error.hpp"

namespace ffad {

/// Forward DFT X_k = sum_n x_n exp(-2 pi i k n / N) for any N >= 1.
///
/// Lengths whose prime factors are all small run through a recursive
/// mixed-radix Cooley-Tukey decomposition. When a large prime factor remains
/// the transform is evaluated with Bluestein's chirp-z algorithm on a
/// power-of-two convolution, so the cost stays O(N log N) for prime N.
template <std::floating_point T>
class FftPlan {
 public:
  using Complex = std::complex<T>;

  /// Largest prime factor handled directly by the generic butterfly.
  static constexpr std::size_t kMaxDirectRadix = 31;

  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw Error(ErrorKind::kInvalidInput, "FFT length must be positive");
    factors_ = factorize(n);
    if (factors_.empty()) {
      init_bluestein();
    } else {
      twiddles_ = make_twiddles(n);
    }
  }

  std::size_t size() const { return n_; }
  bool uses_bluestein() const { return bluestein_ != nullptr; }

  std::vector<Complex> forward(std::span<const Complex> in) const {
    if (in.size() != n_) throw Error(ErrorKind::kShape, "FFT input length does not match plan");
    std::vector<Complex> out(n_);
    if (bluestein_) {
      run_bluestein(in, out);
    } else {
      std::vector<Complex> scratch(max_radix());
      work(out.data(), in.data(), 1, 0, scratch);
    }
    return out;
  }

 private:
  struct Bluestein {
    std::size_t m = 0;                  // power-of-two convolution length
    std::vector<Complex> chirp;         // exp(-i pi k^2 / N), k < N
    std::vector<Complex> kernel_freq;   // FFT of the conjugate chirp, wrapped
    std::unique_ptr<FftPlan> inner;
  };

  // Returns (radix, remaining length) pairs, or empty if a large prime factor remains.
  static std::vector<std::size_t> factorize(std::size_t n) {
    std::vector<std::size_t> out;
    std::size_t rest = n;
    auto take = [&](std::size_t p) {
      while (rest % p == 0) {
        rest /= p;
        out.push_back(p);
        out.push_back(rest);
      }
    };
    take(4);
    take(2);
    for (std::size_t p = 3; p <= kMaxDirectRadix && rest > 1; p += 2) take(p);
    if (rest != 1) return {};
    if (out.empty()) out = {1, 1};  // n == 1
    return out;
  }

  static std::vector<Complex> make_twiddles(std::size_t n) {
    std::vector<Complex> tw(n);
    for (std::size_t k = 0; k < n; ++k) {
      const T phase = -T(2) * std::numbers::pi_v<T> * static_cast<T>(k) / static_cast<T>(n);
      tw[k] = Complex(std::cos(phase), std::sin(phase));
    }
    return tw;
  }

  std::size_t max_radix() const {
    std::size_t r = 1;
    for (std::size_t i = 0; i < factors_.size(); i += 2) r = std::max(r, factors_[i]);
    return r;
  }

  void work(Complex* out, const Complex* in, std::size_t stride, std::size_t fi,
            std::vector<Complex>& scratch) const {
    const std::size_t p = factors_[fi];
    const std::size_t m = factors_[fi + 1];
    if (m == 1) {
      for (std::size_t j = 0; j < p; ++j) out[j] = in[j * stride];
    } else {
      for (std::size_t j = 0; j < p; ++j) work(out + j * m, in + j * stride, stride * p, fi + 2, scratch);
    }
    butterfly(out, stride, p, m, scratch);
  }

  // Generic radix-p butterfly over p interleaved sub-transforms of length m.
  void butterfly(Complex* out, std::size_t stride, std::size_t p, std::size_t m,
                 std::vector<Complex>& scratch) const {
    if (p == 1) return;
    if (p == 2) {
      for (std::size_t u = 0; u < m; ++u) {
        const Complex t = out[u + m] * twiddles_[u * stride];
        out[u + m] = out[u] - t;
        out[u] += t;
      }
      return;
    }
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t q = 0, k = u; q < p; ++q, k += m) scratch[q] = out[k];
      for (std::size_t q1 = 0, k = u; q1 < p; ++q1, k += m) {
        Complex acc = scratch[0];
        std::size_t tw = 0;
        for (std::size_t q = 1; q < p; ++q) {
          tw += stride * k;
          tw %= n_;
          acc += scratch[q] * twiddles_[tw];
        }
        out[k] = acc;
      }
    }
  }

  void init_bluestein() {
    auto b = std::make_unique<Bluestein>();
    std::size_t m = 1;
    while (m < 2 * n_ - 1) m <<= 1;
    b->m = m;
    b->chirp.resize(n_);
    const std::size_t two_n = 2 * n_;
    for (std::size_t k = 0; k < n_; ++k) {
      // k^2 mod 2N keeps the chirp phase exact for large k.
      const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % two_n);
      const T phase = -std::numbers::pi_v<T> * static_cast<T>(k2) / static_cast<T>(n_);
      b->chirp[k] = Complex(std::cos(phase), std::sin(phase));
    }
    std::vector<Complex> kernel(m, Complex(0));
    kernel[0] = std::conj(b->chirp[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      kernel[k] = std::conj(b->chirp[k]);
      kernel[m - k] = std::conj(b->chirp[k]);
    }
    b->inner = std::make_unique<FftPlan>(m);
    b->kernel_freq = b->inner->forward(kernel);
    bluestein_ = std::move(b);
  }

  void run_bluestein(std::span<const Complex> in, std::vector<Complex>& out) const {
    const Bluestein& b = *bluestein_;
    std::vector<Complex> a(b.m, Complex(0));
    for (std::size_t k = 0; k < n_; ++k) a[k] = in[k] * b.chirp[k];
    auto fa = b.inner->forward(a);
    for (std::size_t k = 0; k < b.m; ++k) fa[k] = std::conj(fa[k] * b.kernel_freq[k]);
    // Inverse transform via conj(FFT(conj(x))) / m.
    auto conv = b.inner->forward(fa);
    const T scale = T(1) / static_cast<T>(b.m);
    for (std::size_t k = 0; k < n_; ++k) out[k] = std::conj(conv[k]) * scale * b.chirp[k];
  }

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<Complex> twiddles_;
  std::unique_ptr<Bluestein> bluestein_;
};

}  // namespace ffad
