// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffad/ffad.hpp"

namespace ffad::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return kUsage;
    case ErrorKind::kDivergence:
    case ErrorKind::kNotPsd:
    case ErrorKind::kInsufficientSamples:
      return kNumeric;
    default:
      return kData;
  }
}

/// Everything a command needs; defaults are the standard operating point.
struct RunConfig {
  std::string out_dir = ".";
  std::vector<std::string> data_files;  // used when a command gets no positional files
  std::string corpus_path;
  std::string model_path;
  bool force = false;

  std::size_t m = 20;
  Normalization normalization = Normalization::kPerSeriesZ;
  ShortSeriesPolicy on_short = ShortSeriesPolicy::kSkip;
  std::vector<std::size_t> sweep_m = default_sweep_components();

  TrainConfig training;  // hidden 20, lr 0.001, batch 512, 5000 epochs, checkpoints every 500

  std::size_t repeats = 1;
  RepeatMode repeat_mode = RepeatMode::kRetrain;
  std::uint64_t seed = 0;
};

namespace detail {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

inline void require_positive(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kConfig, std::string(what) + " must be positive");
}

}  // namespace detail

/// Reads a JSON config with optional "paths", "fourier", "training" and
/// "scoring" sections on top of `cfg`.
inline void apply_config_json(const nlohmann::json& j, RunConfig& cfg) {
  try {
    if (j.contains("paths")) {
      const auto& p = j["paths"];
      detail::read_if(p, "out", cfg.out_dir);
      detail::read_if(p, "data", cfg.data_files);
      detail::read_if(p, "corpus", cfg.corpus_path);
      detail::read_if(p, "model", cfg.model_path);
    }
    if (j.contains("seed")) cfg.seed = cfg.training.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("fourier")) {
      const auto& f = j["fourier"];
      detail::read_if(f, "m", cfg.m);
      detail::read_if(f, "sweep_m", cfg.sweep_m);
      if (f.contains("normalization")) cfg.normalization = parse_normalization(f["normalization"].get<std::string>());
      if (f.contains("on_short")) {
        const auto s = f["on_short"].get<std::string>();
        if (s != "skip" && s != "error") throw Error(ErrorKind::kConfig, "on_short must be skip or error");
        cfg.on_short = s == "skip" ? ShortSeriesPolicy::kSkip : ShortSeriesPolicy::kError;
      }
    }
    if (j.contains("training")) {
      const auto& t = j["training"];
      detail::read_if(t, "hidden_dim", cfg.training.hidden_dim);
      detail::read_if(t, "lr", cfg.training.lr);
      detail::read_if(t, "batch_size", cfg.training.batch_size);
      detail::read_if(t, "epochs", cfg.training.epochs);
      detail::read_if(t, "checkpoint_every", cfg.training.checkpoint_every);
      detail::read_if(t, "eval_samples", cfg.training.eval_samples);
      detail::read_if(t, "clip_norm", cfg.training.clip_norm);
      detail::read_if(t, "threads", cfg.training.threads);
      if (t.contains("seed")) cfg.training.seed = t["seed"].get<std::uint64_t>();
    }
    if (j.contains("scoring")) {
      const auto& s = j["scoring"];
      detail::read_if(s, "repeats", cfg.repeats);
      if (s.contains("repeat_mode")) cfg.repeat_mode = parse_repeat_mode(s["repeat_mode"].get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("bad config: ") + e.what());
  }
}

inline void validate(const RunConfig& cfg) {
  detail::require_positive(cfg.m > 0, "fourier.m");
  detail::require_positive(!cfg.sweep_m.empty(), "fourier.sweep_m");
  for (auto m : cfg.sweep_m) detail::require_positive(m > 0, "fourier.sweep_m entries");
  const auto& t = cfg.training;
  detail::require_positive(t.hidden_dim > 0, "training.hidden_dim");
  detail::require_positive(t.lr > 0.0, "training.lr");
  detail::require_positive(t.batch_size > 0, "training.batch_size");
  detail::require_positive(t.epochs > 0, "training.epochs");
  detail::require_positive(t.checkpoint_every > 0, "training.checkpoint_every");
  detail::require_positive(t.eval_samples > 0, "training.eval_samples");
  detail::require_positive(t.clip_norm > 0.0, "training.clip_norm");
  detail::require_positive(t.threads > 0, "training.threads");
  detail::require_positive(cfg.repeats > 0, "scoring.repeats");
}

namespace detail {

inline std::string output_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

/// Refuses to clobber existing outputs unless --force was given.
inline void check_outputs(const RunConfig& cfg, std::initializer_list<std::string> paths) {
  for (const auto& p : paths) {
    if (!cfg.force && std::filesystem::exists(p)) {
      throw Error(ErrorKind::kConfig, "output '" + p + "' exists; pass --force to overwrite");
    }
  }
  std::filesystem::create_directories(cfg.out_dir);
}

inline void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorKind::kConfig, "no such file: '" + path + "'");
}

/// A set file is either a corpus cache or a label-first delimited file that
/// is normalized and transformed the way the model was trained.
inline std::vector<FrequencyRepresentation> load_set(const std::string& path, const AutoencoderModel& model) {
  const auto data = io::read_file(path);
  if (has_corpus_magic(data)) {
    const auto corpus = deserialize_corpus(data);
    if (corpus.m != model.m) {
      throw Error(ErrorKind::kComponentCount, "'" + path + "' holds m=" + std::to_string(corpus.m) +
                                                  " components but the model was trained with m=" +
                                                  std::to_string(model.m) + "; retrain the model at this m");
    }
    return corpus.reps();
  }
  const auto [name, split] = infer_name_and_split(path);
  LoadOptions opts;
  opts.name = name;
  const auto ds = normalize(parse_delimited(data, opts), model.meta.normalization);
  if (!meets_length_bound(ds.length(), model.m)) {
    throw Error(ErrorKind::kComponentCount, "'" + path + "' has length " + std::to_string(ds.length()) +
                                                ", too short for the model's m=" + std::to_string(model.m) +
                                                "; retrain the model with a smaller m");
  }
  std::vector<FrequencyRepresentation> out;
  out.reserve(ds.series.size());
  for (std::size_t i = 0; i < ds.series.size(); ++i) {
    out.push_back(to_frequency(ds.series[i], model.m, name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

inline int cmd_sweep(const RunConfig& cfg, const std::vector<std::string>& files, std::ostream& out) {
  for (const auto& f : files) detail::require_file(f);
  const auto csv_path = detail::output_path(cfg, "sweep.csv");
  detail::check_outputs(cfg, {csv_path});
  std::vector<TimeSeries> all;
  for (const auto& f : files) {
    auto ds = normalize(load_delimited(f), cfg.normalization);
    for (auto& s : ds.series) all.push_back(std::move(s));
  }
  const auto csv = sweep_to_csv(sweep_components(all, cfg.sweep_m));
  io::write_file(csv_path, csv);
  out << csv;
  return kOk;
}

inline int cmd_build_corpus(const RunConfig& cfg, const std::vector<std::string>& files, std::ostream& out) {
  for (const auto& f : files) detail::require_file(f);
  const auto path = detail::output_path(cfg, "corpus.ffc");
  detail::check_outputs(cfg, {path});
  std::vector<LabeledDataset> datasets;
  for (const auto& f : files) datasets.push_back(normalize(load_delimited(f), cfg.normalization));
  const auto corpus = build_corpus(datasets, cfg.m, cfg.on_short);
  save_corpus(corpus, path);
  std::size_t skipped = 0;
  for (const auto& s : corpus.skipped) skipped += s.count;
  out << "N=" << corpus.size() << " m=" << corpus.m << " datasets_skipped=" << corpus.skipped.size()
      << " series_skipped=" << skipped << " path=" << path << "\n";
  return kOk;
}

inline int cmd_train(const RunConfig& cfg, const std::string& corpus_path, std::ostream& out, std::ostream& err) {
  detail::require_file(corpus_path);
  const auto model_path = detail::output_path(cfg, "model.ffm");
  const auto log_path = detail::output_path(cfg, "train_log.csv");
  const auto summary_path = detail::output_path(cfg, "selection.json");
  detail::check_outputs(cfg, {model_path, log_path, summary_path});
  const auto corpus = load_corpus(corpus_path);

  TrainConfig tc = cfg.training;
  const std::size_t every = std::max<std::size_t>(1, tc.epochs / 20);
  tc.on_epoch = [&err, every, total = tc.epochs](std::size_t epoch, double loss) {
    if (epoch % every == 0 || epoch == total) {
      err << "epoch " << epoch << "/" << total << " train_loss=" << format_double(loss, 8) << "\n";
    }
  };
  const auto result = train(corpus, tc);

  save_model(result.model, model_path);
  io::write_file(log_path, training_log_csv(result));
  nlohmann::json cps = nlohmann::json::array();
  for (const auto& c : result.checkpoints) {
    cps.push_back({{"epoch", c.epoch}, {"train_mse", c.train_mse}, {"test_mse", c.test_mse}});
  }
  const nlohmann::json summary = {{"selected_epoch", result.selected_epoch},
                                  {"checkpoints", cps},
                                  {"clip_events", result.clip_events},
                                  {"model_fingerprint", model_fingerprint(result.model)},
                                  {"seed", tc.seed},
                                  {"m", corpus.m},
                                  {"hidden_dim", tc.hidden_dim},
                                  {"normalization", to_string(corpus.normalization)}};
  io::write_file(summary_path, summary.dump(2) + "\n");
  out << "selected_epoch=" << result.selected_epoch << " model=" << model_path << "\n";
  return kOk;
}

inline int cmd_encode(const RunConfig& cfg, const std::string& model_path, const std::vector<std::string>& files,
                      std::ostream& out) {
  detail::require_file(model_path);
  for (const auto& f : files) detail::require_file(f);
  const auto path = detail::output_path(cfg, "encoded.csv");
  detail::check_outputs(cfg, {path});
  const auto model = load_model(model_path);
  std::string csv = "source,index";
  for (std::size_t i = 0; i < model.hidden_dim(); ++i) csv += ",y" + std::to_string(i);
  csv += "\n";
  std::size_t rows = 0;
  for (const auto& f : files) {
    const auto set = encode_set(model, detail::load_set(f, model), f);
    for (std::size_t r = 0; r < set.vectors.size(); ++r, ++rows) {
      csv += std::filesystem::path(f).filename().string() + "," + std::to_string(r);
      for (double v : set.vectors[r]) csv += "," + format_double(v);
      csv += "\n";
    }
  }
  io::write_file(path, csv);
  out << "encoded=" << rows << " dim=" << model.hidden_dim() << " path=" << path << "\n";
  return kOk;
}

inline int cmd_score(const RunConfig& cfg, const std::string& model_path, const std::string& set_a,
                     const std::string& set_b, std::ostream& out) {
  for (const auto& f : {model_path, set_a, set_b}) detail::require_file(f);
  const auto path = detail::output_path(cfg, "score.json");
  detail::check_outputs(cfg, {path});
  const auto model = load_model(model_path);
  const auto a = detail::load_set(set_a, model);
  const auto b = detail::load_set(set_b, model);
  const auto r = ffad_score_detailed(model, a, b, set_a, set_b);
  const nlohmann::json j = {{"score", r.distance},
                            {"set_a", set_a},
                            {"set_b", set_b},
                            {"n_a", a.size()},
                            {"n_b", b.size()},
                            {"jitter_a", r.jitter_a},
                            {"jitter_b", r.jitter_b},
                            {"model_fingerprint", model_fingerprint(model)},
                            {"m", model.m},
                            {"normalization", to_string(model.meta.normalization)},
                            {"covariance_divisor", "n-1"}};
  io::write_file(path, j.dump(2) + "\n");
  out << format_double(r.distance) << "\n";
  return kOk;
}

inline int cmd_score_pairs(const RunConfig& cfg, const std::string& model_path, const std::string& train_path,
                           const std::string& test_path, const std::string& corpus_path, std::ostream& out) {
  for (const auto& f : {model_path, train_path, test_path}) detail::require_file(f);
  if (cfg.repeats > 1 && cfg.repeat_mode == RepeatMode::kRetrain && corpus_path.empty()) {
    throw Error(ErrorKind::kConfig, "retrain-mode repeats need --corpus");
  }
  const auto model = load_model(model_path);
  const auto train_ds = load_delimited(train_path);
  LoadOptions test_opts;
  test_opts.split = Split::kTest;
  const auto test_ds = load_delimited(test_path, test_opts);
  const auto json_path = detail::output_path(cfg, train_ds.name + "_ffad.json");
  const auto csv_path = detail::output_path(cfg, train_ds.name + "_ffad.csv");
  detail::check_outputs(cfg, {json_path, csv_path});

  const auto part = partition_binary(train_ds, test_ds);
  if (!meets_length_bound(train_ds.length(), model.m) || !meets_length_bound(test_ds.length(), model.m)) {
    throw Error(ErrorKind::kComponentCount, "series too short for the model's m=" + std::to_string(model.m));
  }
  const auto groups = to_rep_groups(part.groups, model.m, model.meta.normalization);

  std::optional<Corpus> corpus;
  if (!corpus_path.empty()) corpus = load_corpus(corpus_path);
  ScoreOptions opts;
  opts.repeats = cfg.repeats;
  opts.mode = cfg.repeat_mode;
  opts.seed = cfg.seed;
  opts.train = cfg.training;
  opts.training_corpus = corpus ? &*corpus : nullptr;
  opts.dataset_name = train_ds.name;
  const auto report = score_pairs(model, groups, opts);

  auto j = report_json(report);
  j["class_labels"] = {part.label0, part.label1};
  io::write_file(json_path, j.dump(2) + "\n");
  const auto csv = report_csv_header() + report_csv_row(report);
  io::write_file(csv_path, csv);
  out << csv;
  return kOk;
}

/// Parses arguments and runs one subcommand. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Frechet Fourier-transform auto-encoder distance for time series"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool force = false;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Run seed (all randomness derives from it)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--force", force, "Overwrite existing outputs");

  std::optional<std::size_t> m, hidden, batch, epochs, every, eval_samples, repeats;
  std::optional<double> lr, clip_norm;
  std::optional<std::string> normalization, repeat_mode, on_short;
  std::optional<unsigned> threads;
  std::vector<std::size_t> m_list;
  std::vector<std::string> files;
  std::string model_path, corpus_path, train_path, test_path, set_a, set_b;

  auto training_flags = [&](CLI::App* sub) {
    sub->add_option("--hidden", hidden, "GRU hidden size");
    sub->add_option("--lr", lr, "Adam learning rate");
    sub->add_option("--batch", batch, "Mini-batch size");
    sub->add_option("--epochs", epochs, "Training epochs");
    sub->add_option("--checkpoint-every", every, "Epochs between model-selection checkpoints");
    sub->add_option("--eval-samples", eval_samples, "Rows sampled per checkpoint evaluation");
    sub->add_option("--clip-norm", clip_norm, "Global gradient-norm clip");
    sub->add_option("--threads", threads, "Worker threads for gradient evaluation");
  };

  auto* sweep = app.add_subcommand("sweep", "Reconstruction MSE versus number of Fourier components");
  sweep->add_option("files", files, "Delimited dataset files (default: paths.data)");
  sweep->add_option("--m-list", m_list, "Comma-separated component counts")->delimiter(',')->allow_extra_args(false);
  sweep->add_option("--normalize", normalization, "none | per_series_z");

  auto* build = app.add_subcommand("build-corpus", "Transform datasets into a corpus cache");
  build->add_option("files", files, "Delimited dataset files; UCR *_TRAIN / *_TEST names set the split (default: paths.data)");
  build->add_option("--m", m, "Fourier components kept per series");
  build->add_option("--normalize", normalization, "none | per_series_z");
  build->add_option("--on-short", on_short, "skip | error for datasets shorter than 2m-1");

  auto* train_cmd = app.add_subcommand("train", "Train the GRU auto-encoder on a corpus cache");
  train_cmd->add_option("--corpus", corpus_path, "Corpus cache (default: paths.corpus)");
  training_flags(train_cmd);

  auto* encode_cmd = app.add_subcommand("encode", "Write encoder outputs for sample sets");
  encode_cmd->add_option("--model", model_path, "Model file (default: paths.model)");
  encode_cmd->add_option("files", files, "Delimited files or corpus caches")->required();

  auto* score = app.add_subcommand("score", "FFAD score between two sample sets");
  score->add_option("--model", model_path, "Model file (default: paths.model)");
  score->add_option("set_a", set_a, "First set")->required();
  score->add_option("set_b", set_b, "Second set")->required();

  auto* pairs = app.add_subcommand("score-pairs", "Six pairwise scores for a binary train/test dataset");
  pairs->add_option("--model", model_path, "Model file (default: paths.model)");
  pairs->add_option("--train", train_path, "Training split file")->required();
  pairs->add_option("--test", test_path, "Test split file")->required();
  pairs->add_option("--corpus", corpus_path, "Corpus cache used by retrain-mode repeats (default: paths.corpus)");
  pairs->add_option("--repeats", repeats, "Repeated experiments averaged per score");
  pairs->add_option("--repeat-mode", repeat_mode, "retrain | resample");
  training_flags(pairs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(io::read_file(config_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::kConfig, std::string("config is not valid JSON: ") + e.what());
      }
      apply_config_json(j, cfg);
    }
    if (seed) cfg.seed = cfg.training.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    cfg.force = force;
    if (m) cfg.m = *m;
    if (!m_list.empty()) cfg.sweep_m = m_list;
    if (normalization) cfg.normalization = parse_normalization(*normalization);
    if (on_short) {
      if (*on_short != "skip" && *on_short != "error") throw Error(ErrorKind::kConfig, "--on-short must be skip or error");
      cfg.on_short = *on_short == "skip" ? ShortSeriesPolicy::kSkip : ShortSeriesPolicy::kError;
    }
    if (hidden) cfg.training.hidden_dim = *hidden;
    if (lr) cfg.training.lr = *lr;
    if (batch) cfg.training.batch_size = *batch;
    if (epochs) cfg.training.epochs = *epochs;
    if (every) cfg.training.checkpoint_every = *every;
    if (threads) cfg.training.threads = *threads;
    if (eval_samples) cfg.training.eval_samples = *eval_samples;
    if (clip_norm) cfg.training.clip_norm = *clip_norm;
    if (!corpus_path.empty()) cfg.corpus_path = corpus_path;
    if (!model_path.empty()) cfg.model_path = model_path;
    if (files.empty()) files = cfg.data_files;
    if (repeats) cfg.repeats = *repeats;
    if (repeat_mode) cfg.repeat_mode = parse_repeat_mode(*repeat_mode);
    validate(cfg);

    auto need = [](const std::string& v, const char* what) {
      if (v.empty()) throw Error(ErrorKind::kConfig, std::string("missing ") + what);
    };
    if ((*sweep || *build) && files.empty()) throw Error(ErrorKind::kConfig, "no dataset files (positional or paths.data)");
    if (*train_cmd) need(cfg.corpus_path, "--corpus (or paths.corpus)");
    if (*encode_cmd || *score || *pairs) need(cfg.model_path, "--model (or paths.model)");

    if (*sweep) return cmd_sweep(cfg, files, out);
    if (*build) return cmd_build_corpus(cfg, files, out);
    if (*train_cmd) return cmd_train(cfg, cfg.corpus_path, out, err);
    if (*encode_cmd) return cmd_encode(cfg, cfg.model_path, files, out);
    if (*score) return cmd_score(cfg, cfg.model_path, set_a, set_b, out);
    if (*pairs) return cmd_score_pairs(cfg, cfg.model_path, train_path, test_path, cfg.corpus_path, out);
    return kUsage;
  } catch (const Error& e) {
    err << "ffad: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ffad: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace ffad::cli
