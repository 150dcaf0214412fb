// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ffad/binary_io.hpp"
#include "ffad/error.hpp"
#include "ffad/fourier.hpp"
#include "ffad/random.hpp"
#include "ffad/text.hpp"

namespace ffad {

enum class Split { kTrain, kTest };
enum class Normalization { kNone, kPerSeriesZ };

inline const char* to_string(Split s) { return s == Split::kTrain ? "train" : "test"; }
inline const char* to_string(Normalization n) { return n == Normalization::kNone ? "none" : "per_series_z"; }

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw Error(ErrorKind::kConfig, "unknown split '" + std::string(s) + "'");
}

inline Normalization parse_normalization(std::string_view s) {
  if (s == "none") return Normalization::kNone;
  if (s == "per_series_z" || s == "z") return Normalization::kPerSeriesZ;
  throw Error(ErrorKind::kConfig, "unknown normalization mode '" + std::string(s) + "'");
}

/// Fixed-length labeled series from one file (one split of one dataset).
struct LabeledDataset {
  std::string name;
  std::vector<TimeSeries> series;
  Split split = Split::kTrain;
  std::set<std::int64_t> class_values;
  Normalization normalization = Normalization::kNone;

  std::size_t length() const { return series.empty() ? 0 : series.front().size(); }
};

enum class Delimiter { kAuto, kComma, kTab, kWhitespace };

struct LoadOptions {
  Delimiter delimiter = Delimiter::kAuto;
  std::size_t label_column = 0;
  std::string name;  // defaults to the file stem without a _TRAIN/_TEST suffix
  std::optional<Split> split;  // defaults to the file-name suffix, else train
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, Delimiter d) {
  std::vector<std::string_view> out;
  if (d == Delimiter::kWhitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  const char sep = d == Delimiter::kTab ? '\t' : ',';
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline Delimiter detect(std::string_view line) {
  if (line.find('\t') != std::string_view::npos) return Delimiter::kTab;
  if (line.find(',') != std::string_view::npos) return Delimiter::kComma;
  return Delimiter::kWhitespace;
}

}  // namespace detail

/// Infers (dataset name, split) from UCR-style names such as "GunPoint_TRAIN.tsv".
inline std::pair<std::string, std::optional<Split>> infer_name_and_split(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  auto strip = [&](std::string_view suffix) {
    if (stem.size() > suffix.size() && stem.ends_with(suffix)) {
      stem.resize(stem.size() - suffix.size());
      return true;
    }
    return false;
  };
  if (strip("_TRAIN")) return {stem, Split::kTrain};
  if (strip("_TEST")) return {stem, Split::kTest};
  return {stem, std::nullopt};
}

/// Parses label-first delimited text. Ragged or non-numeric rows abort the
/// load with their 1-based line numbers.
inline LabeledDataset parse_delimited(std::string_view text, const LoadOptions& options) {
  LabeledDataset ds;
  ds.name = options.name;
  ds.split = options.split.value_or(Split::kTrain);

  std::size_t expected_fields = 0;
  std::vector<std::size_t> bad_rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  Delimiter delim = options.delimiter;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (delim == Delimiter::kAuto) delim = detail::detect(line);

    const auto fields = detail::split_fields(line, delim);
    if (expected_fields == 0) {
      expected_fields = fields.size();
      if (expected_fields < 3 || options.label_column >= expected_fields) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                           ": need a label and at least 2 samples per row");
      }
    } else if (fields.size() != expected_fields) {
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": ragged row with " +
                                         std::to_string(fields.size()) + " fields, expected " +
                                         std::to_string(expected_fields));
    }

    TimeSeries s;
    s.dataset_id = ds.name;
    s.values.reserve(fields.size() - 1);
    bool ok = true;
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto v = detail::parse_number(fields[f]);
      if (!v) {
        ok = false;
        break;
      }
      if (f == options.label_column) {
        if (*v != std::floor(*v) || std::abs(*v) > 9.0e15) {
          ok = false;
          break;
        }
        s.label = static_cast<std::int64_t>(*v);
      } else {
        s.values.push_back(*v);
      }
    }
    if (!ok) {
      bad_rows.push_back(line_no);
      continue;
    }
    ds.class_values.insert(*s.label);
    ds.series.push_back(std::move(s));
  }

  if (!bad_rows.empty()) {
    std::string rows;
    for (std::size_t i = 0; i < bad_rows.size() && i < 20; ++i) rows += (i ? ", " : "") + std::to_string(bad_rows[i]);
    if (bad_rows.size() > 20) rows += ", ...";
    throw Error(ErrorKind::kParse, std::to_string(bad_rows.size()) +
                                       " row(s) with non-numeric or missing values at line(s) " + rows);
  }
  if (ds.series.empty()) throw Error(ErrorKind::kEmptyInput, "no rows in '" + ds.name + "'");
  return ds;
}

inline LabeledDataset load_delimited(const std::string& path, LoadOptions options = {}) {
  const auto [name, split] = infer_name_and_split(path);
  if (options.name.empty()) options.name = name;
  if (!options.split) options.split = split;
  try {
    return parse_delimited(io::read_file(path), options);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse || e.kind() == ErrorKind::kEmptyInput) {
      throw Error(e.kind(), path + ": " + std::string(e.what()));
    }
    throw;
  }
}

/// Population z-score; series whose values are all equal become zeros.
inline void z_normalize(std::vector<double>& v) {
  if (v.empty()) return;
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  if (sd == 0.0) {
    std::fill(v.begin(), v.end(), 0.0);
    return;
  }
  for (double& x : v) x = (x - mean) / sd;
}

inline LabeledDataset normalize(LabeledDataset ds, Normalization mode) {
  if (mode == Normalization::kPerSeriesZ) {
    for (auto& s : ds.series) z_normalize(s.values);
  }
  ds.normalization = mode;
  return ds;
}

/// One row of the mixed corpus with its provenance.
struct CorpusRow {
  FrequencyRepresentation rep;
  std::string dataset_id;
  std::size_t sample_index = 0;
  std::optional<std::int64_t> label;
  Split split = Split::kTrain;
};

struct SkipRecord {
  std::string dataset;
  std::size_t length = 0;
  std::size_t count = 0;
};

/// Concatenated truncated Fourier representations of several datasets, shape [N, m, 2].
struct Corpus {
  std::vector<CorpusRow> rows;
  std::size_t m = 0;
  Normalization normalization = Normalization::kNone;
  std::vector<SkipRecord> skipped;

  std::size_t size() const { return rows.size(); }

  std::vector<FrequencyRepresentation> reps() const {
    std::vector<FrequencyRepresentation> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.rep);
    return out;
  }

  std::vector<std::size_t> indices_of(Split split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].split == split) out.push_back(i);
    return out;
  }
};

enum class ShortSeriesPolicy { kSkip, kError };

/// A dataset of length L is usable at m when L >= 2m - 1.
constexpr bool meets_length_bound(std::size_t length, std::size_t m) { return length + 1 >= 2 * m; }

inline Corpus build_corpus(std::span<const LabeledDataset> datasets, std::size_t m,
                           ShortSeriesPolicy policy = ShortSeriesPolicy::kSkip) {
  if (m == 0) throw Error(ErrorKind::kComponentCount, "m must be positive");
  Corpus corpus;
  corpus.m = m;
  bool mode_set = false;
  for (const auto& ds : datasets) {
    if (!meets_length_bound(ds.length(), m)) {
      const std::string msg = "dataset '" + ds.name + "' (" + to_string(ds.split) + ", length " +
                              std::to_string(ds.length()) + ") is shorter than 2m-1 = " +
                              std::to_string(2 * m - 1);
      if (policy == ShortSeriesPolicy::kError) throw Error(ErrorKind::kComponentCount, msg);
      warn("skipping " + msg);
      corpus.skipped.push_back({ds.name, ds.length(), ds.series.size()});
      continue;
    }
    if (mode_set && ds.normalization != corpus.normalization) {
      throw Error(ErrorKind::kInvalidInput, "datasets mix normalization modes");
    }
    corpus.normalization = ds.normalization;
    mode_set = true;
    for (std::size_t i = 0; i < ds.series.size(); ++i) {
      const auto& s = ds.series[i];
      corpus.rows.push_back({to_frequency(s, m, ds.name + "[" + std::to_string(i) + "]"), ds.name, i,
                             s.label, ds.split});
    }
  }
  if (corpus.rows.empty()) throw Error(ErrorKind::kEmptyInput, "corpus is empty after applying skip rules");
  return corpus;
}

template <class T>
struct FourGroups {
  T train0, train1, test0, test1;
};

struct BinaryPartition {
  FourGroups<std::vector<TimeSeries>> groups;
  std::int64_t label0 = 0;  // smaller label -> class 0
  std::int64_t label1 = 0;
};

inline BinaryPartition partition_binary(const LabeledDataset& train, const LabeledDataset& test) {
  std::set<std::int64_t> labels = train.class_values;
  labels.insert(test.class_values.begin(), test.class_values.end());
  if (labels.size() != 2) {
    throw Error(ErrorKind::kClassArity, "expected exactly 2 classes across train and test, found " +
                                            std::to_string(labels.size()));
  }
  BinaryPartition out;
  out.label0 = *labels.begin();
  out.label1 = *labels.rbegin();
  for (const auto& s : train.series) (s.label == out.label0 ? out.groups.train0 : out.groups.train1).push_back(s);
  for (const auto& s : test.series) (s.label == out.label0 ? out.groups.test0 : out.groups.test1).push_back(s);
  const std::pair<const char*, const std::vector<TimeSeries>*> named[] = {
      {"train-0", &out.groups.train0}, {"train-1", &out.groups.train1},
      {"test-0", &out.groups.test0}, {"test-1", &out.groups.test1}};
  for (const auto& [name, g] : named) {
    if (g->empty()) throw Error(ErrorKind::kEmptyGroup, std::string("group ") + name + " is empty");
  }
  return out;
}

/// Uniform sample of `count` rows without replacement (partial Fisher-Yates).
inline Corpus sample_rows(const Corpus& corpus, std::size_t count, std::uint64_t seed) {
  if (count > corpus.size()) {
    throw Error(ErrorKind::kBounds, "cannot sample " + std::to_string(count) + " rows from " +
                                        std::to_string(corpus.size()));
  }
  std::vector<std::size_t> idx(corpus.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  Corpus out;
  out.m = corpus.m;
  out.normalization = corpus.normalization;
  out.skipped = corpus.skipped;
  out.rows.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.rows.push_back(corpus.rows[idx[i]]);
  return out;
}

// Corpus cache:
//   "FFADCORP" | u32 version | u64 N | u32 m
//   N*m*2 little-endian f64, row-major (row, component, real/imag)
//   u64 byte length | UTF-8 JSON provenance
inline constexpr std::string_view kCorpusMagic = "FFADCORP";
inline constexpr std::uint32_t kCorpusVersion = 1;

inline std::string serialize_corpus(const Corpus& corpus) {
  io::Writer w;
  w.bytes(kCorpusMagic);
  w.uint(kCorpusVersion);
  w.uint(static_cast<std::uint64_t>(corpus.size()));
  w.uint(static_cast<std::uint32_t>(corpus.m));
  for (const auto& row : corpus.rows) {
    for (const auto& c : row.rep.coeffs) {
      w.f64(c[0]);
      w.f64(c[1]);
    }
  }
  nlohmann::json meta;
  meta["normalization"] = to_string(corpus.normalization);
  auto& rows = meta["rows"] = nlohmann::json::array();
  for (const auto& row : corpus.rows) {
    nlohmann::json r = {{"dataset", row.dataset_id},
                        {"index", row.sample_index},
                        {"split", to_string(row.split)},
                        {"length", row.rep.original_length}};
    r["label"] = row.label ? nlohmann::json(*row.label) : nlohmann::json(nullptr);
    rows.push_back(std::move(r));
  }
  auto& skipped = meta["skipped"] = nlohmann::json::array();
  for (const auto& s : corpus.skipped) {
    skipped.push_back({{"dataset", s.dataset}, {"length", s.length}, {"count", s.count}});
  }
  w.trailer(meta.dump());
  return w.data();
}

inline bool has_corpus_magic(std::string_view data) { return data.starts_with(kCorpusMagic); }

inline Corpus deserialize_corpus(std::string_view data) {
  io::Reader r(data);
  if (r.remaining() < kCorpusMagic.size() || r.bytes(kCorpusMagic.size()) != kCorpusMagic) {
    throw Error(ErrorKind::kSerialization, "not a corpus file (bad magic)");
  }
  const auto version = r.uint<std::uint32_t>();
  if (version != kCorpusVersion) {
    throw Error(ErrorKind::kSerialization, "unsupported corpus version " + std::to_string(version));
  }
  const auto n = r.uint<std::uint64_t>();
  const auto m = r.uint<std::uint32_t>();
  if (m == 0 || n > r.remaining() / (16ULL * m)) throw Error(ErrorKind::kSerialization, "truncated corpus");
  Corpus corpus;
  corpus.m = m;
  corpus.rows.resize(static_cast<std::size_t>(n));
  for (auto& row : corpus.rows) {
    row.rep.coeffs.resize(m);
    for (auto& c : row.rep.coeffs) {
      c[0] = r.f64();
      c[1] = r.f64();
    }
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(r.trailer());
    corpus.normalization = parse_normalization(meta.at("normalization").get<std::string>());
    const auto& rows = meta.at("rows");
    if (rows.size() != n) throw Error(ErrorKind::kSerialization, "provenance row count mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = rows[i];
      auto& row = corpus.rows[i];
      row.dataset_id = p.at("dataset").get<std::string>();
      row.sample_index = p.at("index").get<std::size_t>();
      row.split = parse_split(p.at("split").get<std::string>());
      row.rep.original_length = p.at("length").get<std::size_t>();
      if (!p.at("label").is_null()) row.label = p.at("label").get<std::int64_t>();
    }
    for (const auto& s : meta.at("skipped")) {
      corpus.skipped.push_back({s.at("dataset").get<std::string>(), s.at("length").get<std::size_t>(),
                                s.at("count").get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSerialization, std::string("bad corpus provenance: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSerialization) throw;
    throw Error(ErrorKind::kSerialization, e.what());
  }
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::string& path) { io::write_file(path, serialize_corpus(corpus)); }
inline Corpus load_corpus(const std::string& path) { return deserialize_corpus(io::read_file(path)); }

}  // namespace ffad
