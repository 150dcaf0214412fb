// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ffad/autoencoder.hpp"
#include "ffad/dataset.hpp"
#include "ffad/error.hpp"
#include "ffad/linalg.hpp"
#include "ffad/random.hpp"
#include "ffad/text.hpp"

namespace ffad {

struct FrechetResult {
  double distance = 0.0;
  double jitter_a = 0.0;  // epsilon added to the diagonal of each covariance
  double jitter_b = 0.0;
};

/// Diagonal jitter for a near-singular covariance: 1e-10 * trace when the
/// smallest eigenvalue is below 1e-12 * trace, else 0.
inline double covariance_jitter(const Matrix& cov) {
  const double tr = cov.trace();
  if (!(tr > 0.0)) return 0.0;
  const auto eig = sym_eig(cov);
  return eig.values.front() < 1e-12 * tr ? 1e-10 * tr : 0.0;
}

/// ||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 sqrt(S_a^1/2 S_b S_a^1/2)).
inline FrechetResult frechet_distance_detailed(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim() != b.dim() || a.cov.rows() != a.dim() || b.cov.rows() != b.dim()) {
    throw Error(ErrorKind::kShape, "Gaussian dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                       std::to_string(b.dim()));
  }
  FrechetResult r;
  r.jitter_a = covariance_jitter(a.cov);
  r.jitter_b = covariance_jitter(b.cov);
  Matrix sa = a.cov + Matrix::identity(a.dim()) * r.jitter_a;
  Matrix sb = b.cov + Matrix::identity(b.dim()) * r.jitter_b;

  double mean_term = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a.mean[i] - b.mean[i];
    mean_term += d * d;
  }
  const Matrix root_a = sqrtm_psd(sa);
  const double cross = sqrtm_psd(symmetrize(root_a * sb * root_a)).trace();
  const double value = mean_term + sa.trace() + sb.trace() - 2.0 * cross;
  if (value < 0.0) {
    if (value < -1e-10 * std::max(1.0, sa.trace() + sb.trace() + mean_term)) {
      throw Error(ErrorKind::kNotPsd, "Frechet distance is negative (" + format_double(value, 6) + ")");
    }
    r.distance = 0.0;
  } else {
    r.distance = value;
  }
  return r;
}

inline double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  return frechet_distance_detailed(a, b).distance;
}

/// Frechet distance between Gaussian fits of the encoded sets.
inline FrechetResult ffad_score_detailed(const AutoencoderModel& model, std::span<const FrequencyRepresentation> set_a,
                                         std::span<const FrequencyRepresentation> set_b,
                                         std::string_view name_a = "A", std::string_view name_b = "B") {
  for (const auto& [set, name] : {std::pair{set_a, name_a}, std::pair{set_b, name_b}}) {
    if (set.size() < 2) {
      throw Error(ErrorKind::kInsufficientSamples, "set " + std::string(name) + " has " +
                                                       std::to_string(set.size()) + " sample(s), need at least 2");
    }
  }
  const auto ga = fit_gaussian(encode_set(model, set_a, std::string(name_a)));
  const auto gb = fit_gaussian(encode_set(model, set_b, std::string(name_b)));
  return frechet_distance_detailed(ga, gb);
}

inline double ffad_score(const AutoencoderModel& model, std::span<const FrequencyRepresentation> set_a,
                         std::span<const FrequencyRepresentation> set_b) {
  return ffad_score_detailed(model, set_a, set_b).distance;
}

using RepGroups = FourGroups<std::vector<FrequencyRepresentation>>;

/// Normalizes and transforms the four groups of a binary partition at `m`.
inline RepGroups to_rep_groups(const FourGroups<std::vector<TimeSeries>>& g, std::size_t m, Normalization mode) {
  auto convert = [&](const std::vector<TimeSeries>& series, const char* name) {
    std::vector<FrequencyRepresentation> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
      TimeSeries s = series[i];
      if (mode == Normalization::kPerSeriesZ) z_normalize(s.values);
      out.push_back(to_frequency(s, m, std::string(name) + "[" + std::to_string(i) + "]"));
    }
    return out;
  };
  return {convert(g.train0, "train-0"), convert(g.train1, "train-1"), convert(g.test0, "test-0"),
          convert(g.test1, "test-1")};
}

enum class RepeatMode { kRetrain, kResample };

inline const char* to_string(RepeatMode m) { return m == RepeatMode::kRetrain ? "retrain" : "resample"; }

inline RepeatMode parse_repeat_mode(std::string_view s) {
  if (s == "retrain") return RepeatMode::kRetrain;
  if (s == "resample") return RepeatMode::kResample;
  throw Error(ErrorKind::kConfig, "unknown repeat mode '" + std::string(s) + "'");
}

/// Pair order of the six scores; the first two are same-class.
inline constexpr std::array<std::string_view, 6> kPairKeys = {
    "train0_vs_test0", "train1_vs_test1", "train0_vs_train1", "train0_vs_test1", "train1_vs_test0", "test0_vs_test1"};
inline constexpr std::array<std::string_view, 6> kPairColumns = {
    "train0-test0", "train1-test1", "train0-train1", "train0-test1", "train1-test0", "test0-test1"};

using PairScores = std::array<double, 6>;

struct FfadReport {
  std::string dataset;
  PairScores scores{};  // mean over repeats
  std::size_t repeats = 1;
  RepeatMode repeat_mode = RepeatMode::kRetrain;
  std::vector<PairScores> raw;
  std::vector<std::string> model_fingerprints;  // one per repeat
  Normalization normalization = Normalization::kPerSeriesZ;
  double max_jitter = 0.0;

  double same_class_mean() const { return 0.5 * (scores[0] + scores[1]); }
  double different_class_mean() const { return 0.25 * (scores[2] + scores[3] + scores[4] + scores[5]); }

  /// Both same-class scores strictly below all four different-class scores.
  bool strictly_separated() const {
    return std::max(scores[0], scores[1]) < *std::min_element(scores.begin() + 2, scores.end());
  }
};

struct ScoreOptions {
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  RepeatMode mode = RepeatMode::kRetrain;
  /// Required for retrain-mode repeats; repeat r trains with seed train.seed + r.
  const Corpus* training_corpus = nullptr;
  TrainConfig train;
  std::string dataset_name;
};

namespace detail {

inline PairScores six_scores(const AutoencoderModel& model, const RepGroups& g, double& max_jitter) {
  const std::array<const std::vector<FrequencyRepresentation>*, 4> sets = {&g.train0, &g.train1, &g.test0, &g.test1};
  const std::array<const char*, 4> names = {"train-0", "train-1", "test-0", "test-1"};
  std::array<GaussianStats, 4> stats;
  for (std::size_t i = 0; i < 4; ++i) {
    if (sets[i]->size() < 2) {
      throw Error(ErrorKind::kInsufficientSamples, std::string("group ") + names[i] + " has fewer than 2 samples");
    }
    stats[i] = fit_gaussian(encode_set(model, *sets[i], names[i]));
  }
  static constexpr std::array<std::pair<int, int>, 6> kPairs = {{{0, 2}, {1, 3}, {0, 1}, {0, 3}, {1, 2}, {2, 3}}};
  PairScores out{};
  for (std::size_t p = 0; p < 6; ++p) {
    const auto r = frechet_distance_detailed(stats[kPairs[p].first], stats[kPairs[p].second]);
    max_jitter = std::max({max_jitter, r.jitter_a, r.jitter_b});
    out[p] = r.distance;
  }
  return out;
}

inline std::vector<FrequencyRepresentation> bootstrap(const std::vector<FrequencyRepresentation>& g, Rng& rng) {
  std::vector<FrequencyRepresentation> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g[static_cast<std::size_t>(rng.below(g.size()))]);
  return out;
}

}  // namespace detail

/// Six pairwise FFAD scores among {train-0, train-1, test-0, test-1}.
///
/// Repeat 0 always scores the given model on the given groups. Further repeats
/// either retrain the auto-encoder on `training_corpus` with seed train.seed + r
/// (retrain mode) or bootstrap-resample every group with a seeded generator
/// (resample mode). Reported scores are per-pair means.
inline FfadReport score_pairs(const AutoencoderModel& model, const RepGroups& groups, const ScoreOptions& opts) {
  if (opts.repeats == 0) throw Error(ErrorKind::kConfig, "repeats must be at least 1");
  if (opts.repeats > 1 && opts.mode == RepeatMode::kRetrain && !opts.training_corpus) {
    throw Error(ErrorKind::kConfig, "retrain-mode repeats need a training corpus");
  }
  FfadReport report;
  report.dataset = opts.dataset_name;
  report.repeats = opts.repeats;
  report.repeat_mode = opts.mode;
  report.normalization = model.meta.normalization;

  for (std::size_t r = 0; r < opts.repeats; ++r) {
    if (r == 0) {
      report.raw.push_back(detail::six_scores(model, groups, report.max_jitter));
      report.model_fingerprints.push_back(model_fingerprint(model));
    } else if (opts.mode == RepeatMode::kRetrain) {
      TrainConfig cfg = opts.train;
      cfg.seed = opts.train.seed + r;
      const auto trained = train(*opts.training_corpus, cfg);
      report.raw.push_back(detail::six_scores(trained.model, groups, report.max_jitter));
      report.model_fingerprints.push_back(model_fingerprint(trained.model));
    } else {
      Rng rng(derive_seed(opts.seed, SeedStream::kResample, r));
      RepGroups resampled{detail::bootstrap(groups.train0, rng), detail::bootstrap(groups.train1, rng),
                          detail::bootstrap(groups.test0, rng), detail::bootstrap(groups.test1, rng)};
      report.raw.push_back(detail::six_scores(model, resampled, report.max_jitter));
      report.model_fingerprints.push_back(model_fingerprint(model));
    }
  }
  for (std::size_t p = 0; p < 6; ++p) {
    double acc = 0.0;
    for (const auto& raw : report.raw) acc += raw[p];
    report.scores[p] = acc / static_cast<double>(report.raw.size());
  }
  return report;
}

inline std::string report_csv_header() {
  std::string out = "dataset";
  for (auto c : kPairColumns) (out += ",") += c;
  return out + "\n";
}

inline std::string report_csv_row(const FfadReport& r) {
  std::string out = r.dataset;
  for (double s : r.scores) out += "," + format_double(s);
  return out + "\n";
}

inline nlohmann::json report_json(const FfadReport& r) {
  nlohmann::json scores, raw = nlohmann::json::array();
  for (std::size_t p = 0; p < 6; ++p) scores[std::string(kPairKeys[p])] = r.scores[p];
  for (const auto& rep : r.raw) {
    nlohmann::json row;
    for (std::size_t p = 0; p < 6; ++p) row[std::string(kPairKeys[p])] = rep[p];
    raw.push_back(row);
  }
  return {{"dataset", r.dataset},
          {"scores", scores},
          {"same_class_mean", r.same_class_mean()},
          {"different_class_mean", r.different_class_mean()},
          {"repeats", r.repeats},
          {"repeat_mode", to_string(r.repeat_mode)},
          {"raw", raw},
          {"model_fingerprints", r.model_fingerprints},
          {"normalization", to_string(r.normalization)},
          {"covariance_divisor", "n-1"},
          {"max_jitter", r.max_jitter}};
}

}  // namespace ffad
