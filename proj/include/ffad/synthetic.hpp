// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ffad/dataset.hpp"
#include "ffad/fourier.hpp"
#include "ffad/random.hpp"

namespace ffad::synthetic {

/// sum_i A_i sin(2 pi f_i t / L + phi_i) + noise, with A_i ~ U(0.5, 1.5) and
/// phi_i ~ U(0, 2 pi).
inline TimeSeries sinusoid_mixture(std::size_t length, std::span<const double> freqs, double noise, Rng& rng) {
  TimeSeries s;
  s.values.assign(length, 0.0);
  for (double f : freqs) {
    const double amp = rng.uniform(0.5, 1.5);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t t = 0; t < length; ++t) {
      s.values[t] += amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(t) /
                                        static_cast<double>(length) + phase);
    }
  }
  if (noise > 0.0)
    for (double& v : s.values) v += noise * rng.normal();
  return s;
}

/// Smooth series: 1-4 components with integer frequencies in [1, 6].
inline std::vector<TimeSeries> smooth_mixtures(std::size_t count, std::size_t length, std::uint64_t seed) {
  Rng rng(derive_seed(seed, SeedStream::kSynthetic));
  std::vector<TimeSeries> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> freqs(1 + rng.below(4));
    for (double& f : freqs) f = static_cast<double>(1 + rng.below(6));
    out.push_back(sinusoid_mixture(length, freqs, 0.0, rng));
  }
  return out;
}

struct Component {
  double freq;
  double amplitude;
  double phase;
};

/// Template series with per-series amplitude scaling U(1-a, 1+a), phase
/// offsets U(-p, p) per component, and Gaussian noise.
inline TimeSeries jittered_template(std::size_t length, std::span<const Component> comps, double amp_jitter,
                                    double phase_jitter, double noise, Rng& rng) {
  TimeSeries s;
  s.values.assign(length, 0.0);
  for (const auto& c : comps) {
    const double amp = c.amplitude * rng.uniform(1.0 - amp_jitter, 1.0 + amp_jitter);
    const double phase = c.phase + rng.uniform(-phase_jitter, phase_jitter);
    for (std::size_t t = 0; t < length; ++t) {
      s.values[t] += amp * std::sin(2.0 * std::numbers::pi * c.freq * static_cast<double>(t) /
                                        static_cast<double>(length) + phase);
    }
  }
  for (double& v : s.values) v += noise * rng.normal();
  return s;
}

/// Two-class toy problem in the spirit of aligned UCR shapes: class 1 mixes
/// frequencies 1 and 3, class 2 mixes 2 and 5, each around a fixed phase.
struct ToyOptions {
  std::size_t per_class_train = 100;
  std::size_t per_class_test = 50;
  std::size_t length = 60;
  double amp_jitter = 0.2;
  double phase_jitter = 0.3;
  double noise = 0.1;
  std::uint64_t seed = 7;
  std::string name = "toy";
};

inline std::pair<LabeledDataset, LabeledDataset> toy_binary(const ToyOptions& opt = {}) {
  static constexpr Component kClass1[] = {{1.0, 1.0, 0.0}, {3.0, 0.6, 1.0}};
  static constexpr Component kClass2[] = {{2.0, 1.0, 0.5}, {5.0, 0.5, 2.0}};
  Rng rng(derive_seed(opt.seed, SeedStream::kSynthetic, 1));
  auto make = [&](std::size_t per_class, Split split) {
    LabeledDataset ds;
    ds.name = opt.name;
    ds.split = split;
    // Interleave classes so row order carries no class structure.
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
      const std::int64_t label = (i % 2 == 0) ? 1 : 2;
      TimeSeries s = jittered_template(opt.length, label == 1 ? std::span<const Component>(kClass1)
                                                              : std::span<const Component>(kClass2),
                                       opt.amp_jitter, opt.phase_jitter, opt.noise, rng);
      s.label = label;
      s.dataset_id = opt.name;
      ds.class_values.insert(label);
      ds.series.push_back(std::move(s));
    }
    return ds;
  };
  auto train = make(opt.per_class_train, Split::kTrain);
  auto test = make(opt.per_class_test, Split::kTest);
  return {std::move(train), std::move(test)};
}

}  // namespace ffad::synthetic
