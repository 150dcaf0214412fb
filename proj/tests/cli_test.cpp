// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

// Drives the command-line front end in-process.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffad_cli.hpp"

namespace ffad {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out, err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ffad_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  RunResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "ffad");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  std::string write_dataset(const LabeledDataset& ds, const std::string& name) {
    std::string text;
    for (const auto& s : ds.series) {
      text += std::to_string(*s.label);
      for (double v : s.values) text += "\t" + format_double(v);
      text += "\n";
    }
    const auto p = path(name);
    io::write_file(p, text);
    return p;
  }

  // Toy binary dataset on disk plus a small trained model.
  void prepare_model() {
    synthetic::ToyOptions opt;
    opt.per_class_train = 15;
    opt.per_class_test = 10;
    opt.length = 30;
    auto [train, test] = synthetic::toy_binary(opt);
    train_file_ = write_dataset(train, "toy_TRAIN.tsv");
    test_file_ = write_dataset(test, "toy_TEST.tsv");
    auto r = run({"--out", dir_.string(), "build-corpus", "--m", "5", train_file_, test_file_});
    ASSERT_EQ(r.code, 0) << r.err;
    r = run({"--out", dir_.string(), "--seed", "1", "train", "--corpus", path("corpus.ffc"), "--hidden", "4",
             "--epochs", "6", "--checkpoint-every", "3", "--batch", "8"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
  std::string train_file_, test_file_;
};

TEST_F(CliTest, SweepOnConstantSeriesIsExactlyZero) {
  io::write_file(path("c.csv"), "1,0.1,0.1,0.1,0.1\n2,0.1,0.1,0.1,0.1\n");
  const auto r = run({"--out", dir_.string(), "sweep", "--m-list", "1,2,3", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "m,mean_mse,series_skipped\n1,0,0\n2,0,0\n3,0,0\n");
  EXPECT_EQ(io::read_file(path("sweep.csv")), r.out);
}

TEST_F(CliTest, BuildCorpusReportsCountsAndSkips) {
  synthetic::ToyOptions opt;
  opt.per_class_train = 2;
  opt.per_class_test = 3;
  opt.length = 40;
  auto [train, test] = synthetic::toy_binary(opt);
  const auto a = write_dataset(train, "a_TRAIN.tsv");
  const auto b = write_dataset(test, "a_TEST.tsv");
  io::write_file(path("short.tsv"), "1\t1\t2\t3\n2\t3\t2\t1\n");
  const auto r = run({"--out", dir_.string(), "build-corpus", "--m", "20", a, b, path("short.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("N=10 m=20 datasets_skipped=1 series_skipped=2"), std::string::npos) << r.out;
  const auto corpus = load_corpus(path("corpus.ffc"));
  EXPECT_EQ(corpus.size(), 10u);
  EXPECT_EQ(corpus.indices_of(Split::kTest).size(), 6u);

  const auto strict = run({"--out", dir_.string(), "--force", "build-corpus", "--m", "20", "--on-short", "error",
                           a, path("short.tsv")});
  EXPECT_EQ(strict.code, 2);
}

TEST_F(CliTest, TrainEncodeAndScore) {
  prepare_model();
  EXPECT_TRUE(fs::exists(path("model.ffm")));
  EXPECT_TRUE(fs::exists(path("train_log.csv")));
  const auto sel = nlohmann::json::parse(io::read_file(path("selection.json")));
  EXPECT_EQ(sel["checkpoints"].size(), 2u);
  const auto model = load_model(path("model.ffm"));
  EXPECT_EQ(model.m, 5u);
  EXPECT_EQ(model.hidden_dim(), 4u);
  EXPECT_EQ(sel["model_fingerprint"], model_fingerprint(model));

  auto r = run({"--out", dir_.string(), "encode", "--model", path("model.ffm"), test_file_});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = io::read_file(path("encoded.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "source,index,y0,y1,y2,y3");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);

  r = run({"--out", dir_.string(), "score", "--model", path("model.ffm"), test_file_, test_file_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(r.out), 0.0, 1e-10);
  r = run({"--out", dir_.string(), "--force", "score", "--model", path("model.ffm"), train_file_, test_file_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_GE(std::stod(r.out), 0.0);
  const auto j = nlohmann::json::parse(io::read_file(path("score.json")));
  EXPECT_EQ(j["n_a"], 30);
  EXPECT_EQ(j["covariance_divisor"], "n-1");

  // A corpus cache at the model's m is also a valid set.
  r = run({"--out", dir_.string(), "--force", "score", "--model", path("model.ffm"), path("corpus.ffc"), test_file_});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, ComponentCountMismatchIsDataError) {
  prepare_model();
  const auto sub = (dir_ / "m7").string();
  auto r = run({"--out", sub, "build-corpus", "--m", "7", train_file_});
  ASSERT_EQ(r.code, 0) << r.err;
  r = run({"--out", dir_.string(), "score", "--model", path("model.ffm"), sub + "/corpus.ffc", test_file_});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("retrain"), std::string::npos) << r.err;
}

TEST_F(CliTest, ScorePairsWritesSixColumns) {
  prepare_model();
  const auto r = run({"--out", dir_.string(), "score-pairs", "--model", path("model.ffm"), "--train", train_file_,
                      "--test", test_file_});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "dataset,train0-test0,train1-test1,train0-train1,train0-test1,train1-test0,test0-test1");
  EXPECT_EQ(r.out.substr(r.out.find('\n') + 1, 4), "toy,");
  const auto j = nlohmann::json::parse(io::read_file(path("toy_ffad.json")));
  EXPECT_EQ(j["class_labels"], nlohmann::json::array({1, 2}));
  EXPECT_EQ(j["scores"].size(), 6u);

  const auto resample = run({"--out", dir_.string(), "--force", "score-pairs", "--model", path("model.ffm"),
                             "--train", train_file_, "--test", test_file_, "--repeats", "3", "--repeat-mode",
                             "resample"});
  ASSERT_EQ(resample.code, 0) << resample.err;
  EXPECT_EQ(nlohmann::json::parse(io::read_file(path("toy_ffad.json")))["raw"].size(), 3u);

  const auto retrain = run({"--out", dir_.string(), "--force", "score-pairs", "--model", path("model.ffm"),
                            "--train", train_file_, "--test", test_file_, "--repeats", "2", "--corpus",
                            path("corpus.ffc"), "--epochs", "2"});
  ASSERT_EQ(retrain.code, 0) << retrain.err;
  const auto fps = nlohmann::json::parse(io::read_file(path("toy_ffad.json")))["model_fingerprints"];
  ASSERT_EQ(fps.size(), 2u);
  EXPECT_NE(fps[0], fps[1]);
}

TEST_F(CliTest, ScorePairsRejectsThreeClasses) {
  prepare_model();
  std::string text = io::read_file(test_file_);
  text += "3" + text.substr(text.find('\t'), text.find('\n') - text.find('\t') + 1);
  io::write_file(path("three_TEST.tsv"), text);
  const auto r = run({"--out", dir_.string(), "score-pairs", "--model", path("model.ffm"), "--train", train_file_,
                      "--test", path("three_TEST.tsv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("class"), std::string::npos) << r.err;
}

TEST_F(CliTest, PathsComeFromConfig) {
  prepare_model();
  const auto sub = path("cfgrun");
  io::write_file(path("paths.json"), nlohmann::json{{"paths", {{"out", sub},
                                                                {"data", {train_file_, test_file_}},
                                                                {"corpus", path("corpus.ffc")},
                                                                {"model", path("model.ffm")}}},
                                                     {"fourier", {{"m", 5}}},
                                                     {"training", {{"hidden_dim", 3}, {"epochs", 2}, {"seed", 4}}}}
                                          .dump());
  auto r = run({"--config", path("paths.json"), "build-corpus"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_corpus(sub + "/corpus.ffc").size(), 50u);
  r = run({"--config", path("paths.json"), "train", "--clip-norm", "1.5", "--eval-samples", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto model = load_model(sub + "/model.ffm");
  EXPECT_EQ(model.hidden_dim(), 3u);
  EXPECT_EQ(model.meta.seed, 4u);
  r = run({"--config", path("paths.json"), "score", test_file_, test_file_});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"--out", sub, "--force", "train"}).code, 1);  // no corpus anywhere
}

TEST_F(CliTest, RefusesToOverwriteWithoutForce) {
  io::write_file(path("c.csv"), "1,1,2,3\n2,3,2,1\n");
  ASSERT_EQ(run({"--out", dir_.string(), "sweep", path("c.csv")}).code, 0);
  const auto again = run({"--out", dir_.string(), "sweep", path("c.csv")});
  EXPECT_EQ(again.code, 1);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(run({"--out", dir_.string(), "--force", "sweep", path("c.csv")}).code, 0);
}

TEST_F(CliTest, ConfigFileAndUsageErrors) {
  io::write_file(path("c.csv"), "1,1,2,3,4\n2,3,2,1,0\n");
  io::write_file(path("cfg.json"), R"({"paths": {"out": ")" + path("o") + R"("}, "fourier": {"sweep_m": [2]}})");
  auto r = run({"--config", path("cfg.json"), "sweep", path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(path("o/sweep.csv")));

  io::write_file(path("bad.json"), R"({"training": {"lr": -1}})");
  EXPECT_EQ(run({"--config", path("bad.json"), "sweep", path("c.csv")}).code, 1);
  io::write_file(path("broken.json"), "{not json");
  EXPECT_EQ(run({"--config", path("broken.json"), "sweep", path("c.csv")}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--out", dir_.string(), "sweep", path("missing.csv")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MalformedInputIsDataError) {
  io::write_file(path("bad.csv"), "1,0,1\n0,x,0\n");
  const auto r = run({"--out", dir_.string(), "sweep", path("bad.csv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line(s) 2"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace ffad
