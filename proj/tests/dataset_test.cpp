// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "ffad/ffad.hpp"
#include "oracles.hpp"

namespace ffad {
namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an ffad::Error";
  return ErrorKind::kConfig;
}

LabeledDataset make_dataset(std::string name, std::size_t count, std::size_t length, Split split,
                            std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset ds;
  ds.name = std::move(name);
  ds.split = split;
  for (std::size_t i = 0; i < count; ++i) {
    TimeSeries s{oracle::random_series(length, rng), static_cast<std::int64_t>(i % 2), ds.name};
    ds.class_values.insert(*s.label);
    ds.series.push_back(std::move(s));
  }
  return ds;
}

TEST(ParseDelimited, MinimalTwoLineFile) {
  const auto ds = parse_delimited("1,0.0,1.0\n0,1.0,0.0", {});
  ASSERT_EQ(ds.series.size(), 2u);
  EXPECT_EQ(ds.length(), 2u);
  EXPECT_EQ(ds.class_values, (std::set<std::int64_t>{0, 1}));
  EXPECT_EQ(ds.series[0].label, 1);
  EXPECT_EQ(ds.series[0].values, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(ds.series[1].values, (std::vector<double>{1.0, 0.0}));
}

TEST(ParseDelimited, UcrTabAndWhitespaceLayouts) {
  const auto tab = parse_delimited("1\t0.5\t-0.25\t1e-3\n2\t1\t2\t3\n", {});
  EXPECT_EQ(tab.class_values, (std::set<std::int64_t>{1, 2}));
  EXPECT_EQ(tab.length(), 3u);
  EXPECT_DOUBLE_EQ(tab.series[0].values[2], 1e-3);

  const auto ws = parse_delimited("  1.0000000e+00  2.5 3.5\n -1.0000000e+00  4 5\n", {});
  EXPECT_EQ(ws.class_values, (std::set<std::int64_t>{-1, 1}));
  EXPECT_EQ(ws.series[1].values, (std::vector<double>{4.0, 5.0}));
}

TEST(ParseDelimited, ExplicitDelimiterAndLabelColumn) {
  LoadOptions opts;
  opts.delimiter = Delimiter::kComma;
  opts.label_column = 2;
  const auto ds = parse_delimited("0.1,0.2,7\n0.3,0.4,8\n", opts);
  EXPECT_EQ(ds.series[0].label, 7);
  EXPECT_EQ(ds.series[1].values, (std::vector<double>{0.3, 0.4}));
}

TEST(ParseDelimited, RaggedRowNamesTheLine) {
  try {
    parse_delimited("1,0,1,2\n0,1,0\n1,2,3,4\n", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ParseDelimited, NonNumericRowsReportedByNumber) {
  try {
    parse_delimited("1,0,1\n0,abc,0\n1,2,3\n0,NaN,1\n", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2, 4"), std::string::npos) << msg;
  }
  EXPECT_EQ(kind_of([] { parse_delimited("1,,2\n", {}); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { parse_delimited("1.5,1,2\n", {}); }), ErrorKind::kParse);  // fractional label
}

TEST(ParseDelimited, EmptyInput) {
  EXPECT_EQ(kind_of([] { parse_delimited("", {}); }), ErrorKind::kEmptyInput);
  EXPECT_EQ(kind_of([] { parse_delimited("\n\n  \n", {}); }), ErrorKind::kEmptyInput);
}

TEST(ParseDelimited, PreservesRowOrder) {
  std::string text;
  for (int i = 0; i < 50; ++i) text += std::to_string(i % 3) + "," + std::to_string(i) + ",0\n";
  const auto ds = parse_delimited(text, {});
  for (int i = 0; i < 50; ++i) EXPECT_EQ(ds.series[i].values[0], i);
}

TEST(LoadDelimited, InfersNameAndSplitFromUcrFileNames) {
  const auto dir = std::filesystem::temp_directory_path() / "ffad_dataset_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "BeetleFly_TEST.tsv").string();
  std::ofstream(path) << "1\t0.1\t0.2\t0.3\n2\t0.3\t0.2\t0.1\n";
  const auto ds = load_delimited(path);
  EXPECT_EQ(ds.name, "BeetleFly");
  EXPECT_EQ(ds.split, Split::kTest);
  EXPECT_EQ(ds.class_values, (std::set<std::int64_t>{1, 2}));
  EXPECT_EQ(ds.series[0].dataset_id, "BeetleFly");
  EXPECT_EQ(kind_of([&] { load_delimited((dir / "missing.tsv").string()); }), ErrorKind::kInvalidInput);
}

TEST(Normalize, ClosedFormZScore) {
  LabeledDataset ds;
  ds.series = {TimeSeries{{1.0, 2.0, 3.0}}};
  const auto out = normalize(ds, Normalization::kPerSeriesZ);
  const double a = std::sqrt(1.5);  // 1 / sqrt(2/3)
  EXPECT_NEAR(out.series[0].values[0], -a, 1e-15);
  EXPECT_NEAR(out.series[0].values[1], 0.0, 1e-15);
  EXPECT_NEAR(out.series[0].values[2], a, 1e-15);
  EXPECT_EQ(out.normalization, Normalization::kPerSeriesZ);
}

TEST(Normalize, ConstantSeriesBecomesZeros) {
  LabeledDataset ds;
  ds.series = {TimeSeries{std::vector<double>(7, 0.1)}};
  const auto out = normalize(ds, Normalization::kPerSeriesZ);
  for (double v : out.series[0].values) EXPECT_EQ(v, 0.0);
}

TEST(Normalize, NoneIsIdentity) {
  const auto ds = make_dataset("d", 4, 9, Split::kTrain, 1);
  const auto out = normalize(ds, Normalization::kNone);
  for (std::size_t i = 0; i < ds.series.size(); ++i) EXPECT_EQ(out.series[i].values, ds.series[i].values);
}

TEST(Normalize, ZScoreMomentsAndIdempotence) {
  auto ds = make_dataset("d", 20, 37, Split::kTrain, 2);
  for (auto& s : ds.series)
    for (double& v : s.values) v = 100.0 + 40.0 * v;
  const auto once = normalize(ds, Normalization::kPerSeriesZ);
  const auto twice = normalize(once, Normalization::kPerSeriesZ);
  for (std::size_t i = 0; i < once.series.size(); ++i) {
    const auto& v = once.series[i].values;
    double mean = 0.0, ss = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    for (double x : v) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(ss / v.size()), 1.0, 1e-9);
    for (std::size_t j = 0; j < v.size(); ++j) EXPECT_NEAR(twice.series[i].values[j], v[j], 1e-9);
  }
}

TEST(BuildCorpus, CountsAndShape) {
  const std::vector<LabeledDataset> ds = {make_dataset("a", 3, 64, Split::kTrain, 1),
                                          make_dataset("b", 5, 50, Split::kTest, 2)};
  const auto corpus = build_corpus(ds, 20);
  ASSERT_EQ(corpus.size(), 8u);
  EXPECT_EQ(corpus.m, 20u);
  for (const auto& row : corpus.rows) EXPECT_EQ(row.rep.m(), 20u);
  EXPECT_EQ(corpus.rows[0].dataset_id, "a");
  EXPECT_EQ(corpus.rows[3].dataset_id, "b");
  EXPECT_EQ(corpus.rows[7].sample_index, 4u);
  EXPECT_EQ(corpus.rows[7].split, Split::kTest);
  EXPECT_EQ(corpus.rows[7].rep.original_length, 50u);

  std::set<std::pair<std::string, std::size_t>> seen;
  for (const auto& row : corpus.rows) EXPECT_TRUE(seen.insert({row.dataset_id, row.sample_index}).second);

  // Each row is the truncated spectrum of its source series.
  const auto direct = to_frequency(ds[1].series[2], 20);
  EXPECT_EQ(corpus.rows[5].rep.coeffs, direct.coeffs);
}

TEST(BuildCorpus, LengthBoundSkipsShortDatasets) {
  const std::vector<LabeledDataset> ds = {make_dataset("short", 4, 15, Split::kTrain, 1),
                                          make_dataset("ok", 6, 39, Split::kTrain, 2),
                                          make_dataset("edge", 2, 38, Split::kTrain, 3)};
  std::vector<std::string> warnings;
  auto saved = warning_sink();
  warning_sink() = [&](std::string_view w) { warnings.emplace_back(w); };
  const auto corpus = build_corpus(ds, 20);
  warning_sink() = saved;
  EXPECT_EQ(corpus.size(), 6u);  // 15 < 39 and 38 < 39
  ASSERT_EQ(corpus.skipped.size(), 2u);
  EXPECT_EQ(corpus.skipped[0].dataset, "short");
  EXPECT_EQ(corpus.skipped[0].count, 4u);
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_EQ(kind_of([&] { build_corpus(ds, 20, ShortSeriesPolicy::kError); }), ErrorKind::kComponentCount);
}

TEST(BuildCorpus, AllSkippedIsEmptyCorpusError) {
  const std::vector<LabeledDataset> ds = {make_dataset("short", 4, 15, Split::kTrain, 1)};
  auto saved = warning_sink();
  warning_sink() = nullptr;
  EXPECT_EQ(kind_of([&] { build_corpus(ds, 20); }), ErrorKind::kEmptyInput);
  warning_sink() = saved;
}

TEST(BuildCorpus, RecordsNormalization) {
  const std::vector<LabeledDataset> ds = {normalize(make_dataset("a", 3, 40, Split::kTrain, 1), Normalization::kPerSeriesZ)};
  EXPECT_EQ(build_corpus(ds, 5).normalization, Normalization::kPerSeriesZ);
}

TEST(PartitionBinary, MapsAscendingLabelsAndCoversInput) {
  LabeledDataset train, test;
  test.split = Split::kTest;
  for (int i = 0; i < 10; ++i) {
    const std::int64_t label = (i % 3 == 0) ? 2 : 1;
    train.series.push_back(TimeSeries{{double(i), 0.0}, label});
    train.class_values.insert(label);
    test.series.push_back(TimeSeries{{double(100 + i), 0.0}, label});
    test.class_values.insert(label);
  }
  const auto p = partition_binary(train, test);
  EXPECT_EQ(p.label0, 1);
  EXPECT_EQ(p.label1, 2);
  EXPECT_EQ(p.groups.train0.size() + p.groups.train1.size(), 10u);
  EXPECT_EQ(p.groups.test0.size() + p.groups.test1.size(), 10u);
  EXPECT_EQ(p.groups.train1.size(), 4u);
  for (const auto& s : p.groups.train0) EXPECT_EQ(s.label, 1);
  for (const auto& s : p.groups.test1) EXPECT_EQ(s.label, 2);
  std::multiset<double> all;
  for (auto* g : {&p.groups.train0, &p.groups.train1, &p.groups.test0, &p.groups.test1})
    for (const auto& s : *g) all.insert(s.values[0]);
  EXPECT_EQ(all.size(), 20u);
  EXPECT_EQ(std::set<double>(all.begin(), all.end()).size(), 20u);
}

TEST(PartitionBinary, ArityAndEmptyGroupErrors) {
  LabeledDataset train, test;
  for (std::int64_t l : {0, 1, 2}) {
    train.series.push_back(TimeSeries{{1.0, 2.0}, l});
    train.class_values.insert(l);
  }
  test = train;
  EXPECT_EQ(kind_of([&] { partition_binary(train, test); }), ErrorKind::kClassArity);

  LabeledDataset one;
  one.series.push_back(TimeSeries{{1.0, 2.0}, 0});
  one.class_values.insert(0);
  EXPECT_EQ(kind_of([&] { partition_binary(one, one); }), ErrorKind::kClassArity);

  LabeledDataset both = one;
  both.series.push_back(TimeSeries{{1.0, 2.0}, 1});
  both.class_values.insert(1);
  EXPECT_EQ(kind_of([&] { partition_binary(both, one); }), ErrorKind::kEmptyGroup);
}

TEST(SampleRows, FullCountIsPermutation) {
  const auto corpus = build_corpus(std::vector{make_dataset("a", 30, 20, Split::kTrain, 4)}, 5);
  const auto s = sample_rows(corpus, corpus.size(), 99);
  std::set<std::size_t> idx;
  for (const auto& r : s.rows) idx.insert(r.sample_index);
  EXPECT_EQ(idx.size(), 30u);
}

TEST(SampleRows, SeededAndBounded) {
  const auto corpus = build_corpus(std::vector{make_dataset("a", 40, 20, Split::kTrain, 4)}, 5);
  auto ids = [](const Corpus& c) {
    std::vector<std::size_t> v;
    for (const auto& r : c.rows) v.push_back(r.sample_index);
    return v;
  };
  EXPECT_EQ(ids(sample_rows(corpus, 10, 5)), ids(sample_rows(corpus, 10, 5)));
  EXPECT_NE(ids(sample_rows(corpus, 10, 5)), ids(sample_rows(corpus, 10, 6)));
  EXPECT_EQ(kind_of([&] { sample_rows(corpus, 41, 1); }), ErrorKind::kBounds);
}

TEST(Rng, StandardEngineReferenceValue) {
  // The standard fixes the 10000th output of a default-constructed mt19937_64.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(CorpusCache, RoundTripIsBitExact) {
  auto saved = warning_sink();
  warning_sink() = nullptr;
  const std::vector<LabeledDataset> ds = {make_dataset("a", 3, 40, Split::kTrain, 1),
                                          make_dataset("b", 2, 45, Split::kTest, 2),
                                          make_dataset("tiny", 2, 5, Split::kTrain, 3)};
  const auto corpus = build_corpus(ds, 8);
  warning_sink() = saved;
  const auto bytes = serialize_corpus(corpus);
  const auto back = deserialize_corpus(bytes);
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(back.rows[i].rep.coeffs, corpus.rows[i].rep.coeffs);
    EXPECT_EQ(back.rows[i].rep.original_length, corpus.rows[i].rep.original_length);
    EXPECT_EQ(back.rows[i].dataset_id, corpus.rows[i].dataset_id);
    EXPECT_EQ(back.rows[i].label, corpus.rows[i].label);
    EXPECT_EQ(back.rows[i].split, corpus.rows[i].split);
  }
  ASSERT_EQ(back.skipped.size(), 1u);
  EXPECT_EQ(serialize_corpus(back), bytes);
}

TEST(CorpusCache, HeaderLayout) {
  Corpus c;
  c.m = 1;
  c.rows.push_back({FrequencyRepresentation{{{1.0, -2.0}}, 2}, "x", 0, 3, Split::kTrain});
  const auto bytes = serialize_corpus(c);
  ASSERT_GE(bytes.size(), 8u + 4 + 8 + 4 + 16);
  EXPECT_EQ(bytes.substr(0, 8), "FFADCORP");
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1u);   // version, little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 1u);  // N
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 1u);  // m
  // 1.0 = 0x3FF0000000000000 little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 7]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(bytes[24 + 6]), 0xF0u);
}

TEST(CorpusCache, RejectsCorruption) {
  Corpus c;
  c.m = 1;
  c.rows.push_back({FrequencyRepresentation{{{1.0, 0.0}}, 2}, "x", 0, 1, Split::kTrain});
  auto bytes = serialize_corpus(c);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_EQ(kind_of([&] { deserialize_corpus(bad); }), ErrorKind::kSerialization);
  EXPECT_EQ(kind_of([&] { deserialize_corpus(bytes.substr(0, bytes.size() - 5)); }), ErrorKind::kSerialization);
  EXPECT_EQ(kind_of([&] { deserialize_corpus(bytes.substr(0, 30)); }), ErrorKind::kSerialization);
  bad = bytes;
  bad[8] = 2;
  EXPECT_EQ(kind_of([&] { deserialize_corpus(bad); }), ErrorKind::kSerialization);
}

}  // namespace
}  // namespace ffad
