// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ffad/error.hpp"
#include "ffad/fft.hpp"
#include "ffad/text.hpp"

namespace ffad {

/// One real-valued sequence with optional class label and dataset tag.
struct TimeSeries {
  std::vector<double> values;
  std::optional<std::int64_t> label;
  std::optional<std::string> dataset_id;

  std::size_t size() const { return values.size(); }
};

/// The m lowest normalized Fourier coefficients X_k / N of a real series,
/// stored as (real, imaginary) rows.
struct FrequencyRepresentation {
  std::vector<std::array<double, 2>> coeffs;
  std::size_t original_length = 0;

  std::size_t m() const { return coeffs.size(); }
};

using Spectrum = std::vector<std::complex<double>>;

/// Largest component count a series of length n supports.
constexpr std::size_t max_components(std::size_t n) { return n / 2 + 1; }

inline void validate_series(std::span<const double> values, std::string_view where = {}) {
  auto ctx = [&] { return where.empty() ? std::string() : " (" + std::string(where) + ")"; };
  if (values.size() < 2) {
    throw Error(ErrorKind::kInvalidInput, "series length must be at least 2" + ctx());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kInvalidInput, "non-finite value at index " + std::to_string(i) + ctx());
    }
  }
}

/// Unnormalized DFT of a real series, any length >= 2.
inline Spectrum forward_spectrum(std::span<const double> values) {
  validate_series(values);
  const std::size_t n = values.size();
  Spectrum in(values.begin(), values.end());
  Spectrum out = FftPlan<double>(n).forward(in);
  // DC (and Nyquist for even n) of a real signal are real.
  out[0].imag(0.0);
  if (n % 2 == 0) out[n / 2].imag(0.0);
  return out;
}

inline Spectrum forward_spectrum(const TimeSeries& series) { return forward_spectrum(series.values); }

inline void check_component_count(std::size_t m, std::size_t length, std::string_view where = {}) {
  if (m == 0 || m > max_components(length)) {
    std::ostringstream msg;
    msg << "m=" << m << " outside [1, " << max_components(length) << "] for series length " << length;
    if (!where.empty()) msg << " (" << where << ")";
    throw Error(ErrorKind::kComponentCount, msg.str());
  }
}

/// Keeps coefficients k = 0..m-1, each divided by original_length.
inline FrequencyRepresentation truncate_normalize(const Spectrum& spectrum, std::size_t m,
                                                  std::size_t original_length,
                                                  std::string_view where = {}) {
  check_component_count(m, original_length, where);
  if (spectrum.size() < m) throw Error(ErrorKind::kShape, "spectrum shorter than m");
  FrequencyRepresentation rep;
  rep.original_length = original_length;
  rep.coeffs.resize(m);
  const double scale = 1.0 / static_cast<double>(original_length);
  for (std::size_t k = 0; k < m; ++k) {
    rep.coeffs[k] = {spectrum[k].real() * scale, spectrum[k].imag() * scale};
  }
  return rep;
}

/// forward_spectrum followed by truncate_normalize.
inline FrequencyRepresentation to_frequency(const TimeSeries& series, std::size_t m,
                                            std::string_view where = {}) {
  validate_series(series.values, where);
  check_component_count(m, series.size(), where);
  return truncate_normalize(forward_spectrum(series.values), m, series.size(), where);
}

/// Real inverse of truncate_normalize:
///   x_j = sum_k c_k (a_k cos(k theta_j) - b_k sin(k theta_j)),  theta_j = 2 pi j / N,
/// with c_0 = 1, c_k = 2 for 0 < k < N/2 and c_{N/2} = 1 when N is even.
inline TimeSeries inverse_ft(const FrequencyRepresentation& rep) {
  const std::size_t n = rep.original_length;
  if (n < 2) throw Error(ErrorKind::kInvalidInput, "original_length must be at least 2");
  check_component_count(rep.m(), n);
  // Angles are reduced as (k*j mod N) so large k*j keeps full precision.
  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    cos_table[r] = std::cos(phase);
    sin_table[r] = std::sin(phase);
  }
  TimeSeries out;
  out.values.assign(n, 0.0);
  for (std::size_t k = 0; k < rep.m(); ++k) {
    const bool nyquist = (n % 2 == 0) && (k == n / 2);
    const double c = (k == 0 || nyquist) ? 1.0 : 2.0;
    const double a = c * rep.coeffs[k][0];
    const double b = c * rep.coeffs[k][1];
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      out.values[j] += a * cos_table[idx] - b * sin_table[idx];
      idx += k;
      if (idx >= n) idx %= n;
    }
  }
  return out;
}

inline double mean_squared_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw Error(ErrorKind::kShape, "MSE operands differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

/// MSE between a series and its m-component reconstruction.
inline double reconstruction_mse(const TimeSeries& series, std::size_t m) {
  const auto rep = to_frequency(series, m);
  return mean_squared_error(series.values, inverse_ft(rep).values);
}

/// Component counts examined by the reconstruction sweep.
inline const std::vector<std::size_t>& default_sweep_components() {
  static const std::vector<std::size_t> kDefault = {1, 2, 3, 5, 10, 15, 20, 30};
  return kDefault;
}

struct SweepRow {
  std::size_t m = 0;
  double mean_mse = 0.0;  // NaN when every series was skipped
  std::size_t series_skipped = 0;
};

/// Mean reconstruction MSE per component count. Series too short for a given m
/// are skipped for that m and counted.
inline std::vector<SweepRow> sweep_components(std::span<const TimeSeries> dataset,
                                              std::span<const std::size_t> m_values) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyInput, "sweep over an empty dataset");
  std::vector<SweepRow> rows;
  rows.reserve(m_values.size());
  for (std::size_t m : m_values) {
    SweepRow row{m, 0.0, 0};
    double acc = 0.0;
    std::size_t used = 0;
    for (const auto& s : dataset) {
      if (m == 0 || m > max_components(s.size())) {
        ++row.series_skipped;
        continue;
      }
      acc += reconstruction_mse(s, m);
      ++used;
    }
    row.mean_mse = used ? acc / static_cast<double>(used) : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

inline std::string sweep_to_csv(std::span<const SweepRow> rows) {
  std::string out = "m,mean_mse,series_skipped\n";
  for (const auto& r : rows) {
    out += std::to_string(r.m) + "," + format_double(r.mean_mse) + "," +
           std::to_string(r.series_skipped) + "\n";
  }
  return out;
}

}  // namespace ffad
