// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ffad/binary_io.hpp"
#include "ffad/dataset.hpp"
#include "ffad/error.hpp"
#include "ffad/fourier.hpp"
#include "ffad/gru.hpp"
#include "ffad/linalg.hpp"
#include "ffad/random.hpp"
#include "ffad/text.hpp"

namespace ffad {

/// Trainable parameters: encoder GRU (input 2), decoder GRU (input H) and the
/// 2 x H output projection. Also used as the gradient container.
struct AutoencoderParams {
  GruLayerParams encoder;
  GruLayerParams decoder;
  Matrix proj_w;  // 2 x H
  Vector proj_b;  // 2

  static AutoencoderParams zeros(std::size_t hidden_dim) {
    return {GruLayerParams::zeros(2, hidden_dim), GruLayerParams::zeros(hidden_dim, hidden_dim),
            Matrix(2, hidden_dim), Vector(2, 0.0)};
  }

  std::size_t hidden_dim() const { return encoder.hidden_dim; }

  /// Visits all 20 blocks in file order: encoder.{W_z,W_r,W_h,U_z,U_r,U_h,b_z,b_r,b_h},
  /// decoder.{same}, projection.W, projection.b.
  template <class F>
  void for_each_block(F&& f) {
    visit(*this, f);
  }
  template <class F>
  void for_each_block(F&& f) const {
    visit(*this, f);
  }

  void set_zero() {
    for_each_block([](const std::string&, std::span<double> b) { std::fill(b.begin(), b.end(), 0.0); });
  }

  bool operator==(const AutoencoderParams&) const = default;

 private:
  template <class Self, class F>
  static void visit(Self& self, F& f) {
    GruLayerParams::visit(self.encoder, "encoder.", f);
    GruLayerParams::visit(self.decoder, "decoder.", f);
    f(std::string("projection.W"), self.proj_w.flat());
    f(std::string("projection.b"), std::span(self.proj_b));
  }
};

/// a += b over every block.
inline void add_params(AutoencoderParams& a, const AutoencoderParams& b) {
  std::vector<std::span<const double>> src;
  b.for_each_block([&](const std::string&, std::span<const double> s) { src.push_back(s); });
  std::size_t i = 0;
  a.for_each_block([&](const std::string&, std::span<double> d) {
    const auto s = src[i++];
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += s[k];
  });
}

struct TrainingMetadata {
  std::size_t epoch = 0;
  std::vector<double> loss_history;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::kPerSeriesZ;

  bool operator==(const TrainingMetadata&) const = default;
};

struct AutoencoderModel {
  AutoencoderParams params;
  std::size_t m = 0;
  TrainingMetadata meta;

  std::size_t hidden_dim() const { return params.hidden_dim(); }

  static AutoencoderModel zeros(std::size_t m, std::size_t hidden_dim) {
    if (m == 0 || hidden_dim == 0) throw Error(ErrorKind::kShape, "model dimensions must be positive");
    return {AutoencoderParams::zeros(hidden_dim), m, {}};
  }

  /// Weights uniform in [-1/sqrt(H), 1/sqrt(H)], biases zero.
  static AutoencoderModel initialized(std::size_t m, std::size_t hidden_dim, std::uint64_t seed) {
    auto model = zeros(m, hidden_dim);
    model.meta.seed = seed;
    Rng rng(derive_seed(seed, SeedStream::kInit));
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    model.params.for_each_block([&](const std::string& name, std::span<double> block) {
      if (name.ends_with(".b") || name.find(".b_") != std::string::npos) return;
      for (double& v : block) v = rng.uniform(-bound, bound);
    });
    return model;
  }

  bool operator==(const AutoencoderModel&) const = default;
};

using Reconstruction = std::vector<std::array<double, 2>>;

namespace detail {

inline void check_rep(const AutoencoderModel& model, const FrequencyRepresentation& rep) {
  if (rep.m() != model.m) {
    throw Error(ErrorKind::kShape, "representation has m=" + std::to_string(rep.m()) + " but model expects m=" +
                                       std::to_string(model.m));
  }
}

// Forward/backward buffers for one sample, reused across a chunk.
struct Workspace {
  std::vector<GruStepCache> enc, dec;
  Reconstruction out;
  Vector dh, dh_prev, dy, dx, scratch;

  void prepare(std::size_t m, std::size_t hd) {
    enc.resize(m);
    dec.resize(m);
    out.resize(m);
    dh.assign(hd, 0.0);
    dh_prev.assign(hd, 0.0);
    dy.assign(hd, 0.0);
  }
};

inline void forward(const AutoencoderModel& model, const FrequencyRepresentation& rep, Workspace& ws) {
  const std::size_t hd = model.hidden_dim();
  const auto& p = model.params;
  ws.prepare(model.m, hd);
  const Vector zero(hd, 0.0);
  for (std::size_t t = 0; t < model.m; ++t) {
    gru_forward(p.encoder, rep.coeffs[t], t == 0 ? std::span<const double>(zero) : ws.enc[t - 1].h, ws.enc[t]);
  }
  const Vector& latent = ws.enc[model.m - 1].h;
  for (std::size_t t = 0; t < model.m; ++t) {
    gru_forward(p.decoder, latent, t == 0 ? std::span<const double>(zero) : ws.dec[t - 1].h, ws.dec[t]);
    for (std::size_t c = 0; c < 2; ++c) {
      double acc = p.proj_b[c];
      const auto row = p.proj_w.row(c);
      for (std::size_t i = 0; i < hd; ++i) acc += row[i] * ws.dec[t].h[i];
      ws.out[t][c] = acc;
    }
  }
}

// Squared error of one sample; when `grads` is set, adds scale * d(sum sq err)/dparams.
inline double sample_loss_grad(const AutoencoderModel& model, const FrequencyRepresentation& rep, double scale,
                               AutoencoderParams* grads, Workspace& ws) {
  forward(model, rep, ws);
  double sq = 0.0;
  for (std::size_t t = 0; t < model.m; ++t)
    for (std::size_t c = 0; c < 2; ++c) {
      const double d = ws.out[t][c] - rep.coeffs[t][c];
      sq += d * d;
    }
  if (!grads) return sq;

  const std::size_t hd = model.hidden_dim();
  const auto& p = model.params;
  std::fill(ws.dh.begin(), ws.dh.end(), 0.0);
  std::fill(ws.dy.begin(), ws.dy.end(), 0.0);
  for (std::size_t t = model.m; t-- > 0;) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double dout = 2.0 * scale * (ws.out[t][c] - rep.coeffs[t][c]);
      grads->proj_b[c] += dout;
      double* gw = grads->proj_w.flat().data() + c * hd;
      const auto row = p.proj_w.row(c);
      for (std::size_t i = 0; i < hd; ++i) {
        gw[i] += dout * ws.dec[t].h[i];
        ws.dh[i] += dout * row[i];
      }
    }
    gru_backward(p.decoder, ws.dec[t], ws.dh, grads->decoder, ws.dy, ws.dh_prev, ws.scratch);
    std::swap(ws.dh, ws.dh_prev);
  }
  // The latent feeds every decoder step; its total gradient is dy.
  std::swap(ws.dh, ws.dy);
  for (std::size_t t = model.m; t-- > 0;) {
    gru_backward(p.encoder, ws.enc[t], ws.dh, grads->encoder, {}, ws.dh_prev, ws.scratch);
    std::swap(ws.dh, ws.dh_prev);
  }
  return sq;
}

// Samples are reduced in fixed-size chunks whose partial sums are combined in
// chunk order, so results do not depend on the thread count.
inline constexpr std::size_t kReduceChunk = 16;

inline double loss_and_gradients(const AutoencoderModel& model,
                                 std::span<const FrequencyRepresentation* const> batch,
                                 AutoencoderParams* grads, unsigned threads = 1) {
  if (batch.empty()) throw Error(ErrorKind::kEmptyInput, "empty batch");
  for (const auto* rep : batch) check_rep(model, *rep);
  const double scale = 1.0 / (static_cast<double>(batch.size()) * static_cast<double>(model.m) * 2.0);
  const std::size_t chunks = (batch.size() + kReduceChunk - 1) / kReduceChunk;
  std::vector<double> partial_loss(chunks, 0.0);
  std::vector<AutoencoderParams> partial_grads;
  if (grads) partial_grads.assign(chunks, AutoencoderParams::zeros(model.hidden_dim()));

  auto run_chunks = [&](std::size_t first, std::size_t last) {
    Workspace ws;
    for (std::size_t c = first; c < last; ++c) {
      const std::size_t end = std::min(batch.size(), (c + 1) * kReduceChunk);
      double acc = 0.0;
      for (std::size_t i = c * kReduceChunk; i < end; ++i) {
        acc += sample_loss_grad(model, *batch[i], scale, grads ? &partial_grads[c] : nullptr, ws);
      }
      partial_loss[c] = acc;
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, chunks);
  if (workers == 1) {
    run_chunks(0, chunks);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(run_chunks, chunks * w / workers, chunks * (w + 1) / workers);
    }
  }

  double total = 0.0;
  for (double l : partial_loss) total += l;
  if (grads) {
    grads->set_zero();
    for (const auto& g : partial_grads) add_params(*grads, g);
  }
  return total * scale;
}

inline std::vector<const FrequencyRepresentation*> pointers(std::span<const FrequencyRepresentation> reps) {
  std::vector<const FrequencyRepresentation*> out;
  out.reserve(reps.size());
  for (const auto& r : reps) out.push_back(&r);
  return out;
}

}  // namespace detail

/// Final encoder hidden state after reading the m (real, imag) steps from h = 0.
inline Vector encode(const AutoencoderModel& model, const FrequencyRepresentation& rep) {
  detail::check_rep(model, rep);
  Vector h(model.hidden_dim(), 0.0);
  GruStepCache cache;
  for (const auto& step : rep.coeffs) {
    gru_forward(model.params.encoder, step, h, cache);
    h = cache.h;
  }
  return h;
}

/// Feeds the latent at every one of m steps from a zero decoder state and
/// projects each hidden state to (real, imag).
inline Reconstruction decode(const AutoencoderModel& model, std::span<const double> latent) {
  const std::size_t hd = model.hidden_dim();
  if (latent.size() != hd) {
    throw Error(ErrorKind::kShape, "latent has dimension " + std::to_string(latent.size()) + ", expected " +
                                       std::to_string(hd));
  }
  Reconstruction out(model.m);
  Vector h(hd, 0.0);
  GruStepCache cache;
  for (std::size_t t = 0; t < model.m; ++t) {
    gru_forward(model.params.decoder, latent, h, cache);
    h = cache.h;
    for (std::size_t c = 0; c < 2; ++c) {
      double acc = model.params.proj_b[c];
      for (std::size_t i = 0; i < hd; ++i) acc += model.params.proj_w(c, i) * h[i];
      out[t][c] = acc;
    }
  }
  return out;
}

/// Mean squared reconstruction error: sum / (|batch| * m * 2).
inline double batch_loss(const AutoencoderModel& model, std::span<const FrequencyRepresentation> batch) {
  const auto ptrs = detail::pointers(batch);
  return detail::loss_and_gradients(model, ptrs, nullptr);
}

struct LossGradients {
  double loss = 0.0;
  AutoencoderParams grads;
};

/// Exact gradients of batch_loss by backpropagation through both GRUs.
inline LossGradients gradients(const AutoencoderModel& model, std::span<const FrequencyRepresentation> batch,
                               unsigned threads = 1) {
  LossGradients out{0.0, AutoencoderParams::zeros(model.hidden_dim())};
  const auto ptrs = detail::pointers(batch);
  out.loss = detail::loss_and_gradients(model, ptrs, &out.grads, threads);
  return out;
}

struct AdamHyper {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AutoencoderParams m1;  // first moment
  AutoencoderParams m2;  // second moment

  static AdamState zeros(std::size_t hidden_dim) {
    return {AutoencoderParams::zeros(hidden_dim), AutoencoderParams::zeros(hidden_dim)};
  }
};

/// One bias-corrected Adam update at step t >= 1.
inline void adam_step(AutoencoderParams& params, const AutoencoderParams& grads, AdamState& state,
                      const AdamHyper& hyper, std::uint64_t t) {
  if (t == 0) throw Error(ErrorKind::kInvalidInput, "Adam step index starts at 1");
  grads.for_each_block([](const std::string& name, std::span<const double> g) {
    for (double v : g)
      if (!std::isfinite(v)) throw Error(ErrorKind::kDivergence, "non-finite gradient in block " + name);
  });
  std::vector<std::span<const double>> g;
  std::vector<std::span<double>> m1, m2;
  grads.for_each_block([&](const std::string&, std::span<const double> b) { g.push_back(b); });
  state.m1.for_each_block([&](const std::string&, std::span<double> b) { m1.push_back(b); });
  state.m2.for_each_block([&](const std::string&, std::span<double> b) { m2.push_back(b); });
  if (g.size() != m1.size()) throw Error(ErrorKind::kShape, "Adam state does not match parameters");

  const double td = static_cast<double>(t);
  const double c1 = 1.0 - std::pow(hyper.beta1, td);
  const double c2 = 1.0 - std::pow(hyper.beta2, td);
  std::size_t b = 0;
  params.for_each_block([&](const std::string& name, std::span<double> p) {
    if (p.size() != g[b].size()) throw Error(ErrorKind::kShape, "gradient shape mismatch in block " + name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g[b][i];
      m1[b][i] = hyper.beta1 * m1[b][i] + (1.0 - hyper.beta1) * gi;
      m2[b][i] = hyper.beta2 * m2[b][i] + (1.0 - hyper.beta2) * gi * gi;
      p[i] -= hyper.lr * (m1[b][i] / c1) / (std::sqrt(m2[b][i] / c2) + hyper.eps);
    }
    ++b;
  });
}

/// Rescales grads to `max_norm` when their global L2 norm exceeds it. Returns the pre-clip norm.
inline double clip_global_norm(AutoencoderParams& grads, double max_norm) {
  double sq = 0.0;
  grads.for_each_block([&](const std::string&, std::span<const double> b) {
    for (double v : b) sq += v * v;
  });
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    grads.for_each_block([&](const std::string&, std::span<double> b) {
      for (double& v : b) v *= s;
    });
  }
  return norm;
}

struct TrainConfig {
  std::size_t hidden_dim = 20;
  double lr = 0.001;
  std::size_t batch_size = 512;
  std::size_t epochs = 5000;
  std::size_t checkpoint_every = 500;
  std::size_t eval_samples = 10000;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;
  unsigned threads = 1;
  /// Called after every epoch with (epoch, train loss).
  std::function<void(std::size_t, double)> on_epoch;
};

struct Checkpoint {
  std::size_t epoch = 0;
  double train_mse = 0.0;
  double test_mse = 0.0;
};

struct TrainResult {
  AutoencoderModel model;         // selected snapshot
  std::vector<double> epoch_loss;  // index e-1 holds epoch e
  std::vector<Checkpoint> checkpoints;
  std::size_t selected_epoch = 0;
  std::size_t clip_events = 0;
};

/// Mini-batch Adam over the corpus's train rows with per-epoch reshuffling.
/// Every `checkpoint_every` epochs (and at the last epoch) the model is scored
/// on fixed seeded samples of train and test rows; the snapshot with the lowest
/// test MSE is returned, earliest epoch on ties. Without test rows, train rows
/// stand in for the selection set.
inline TrainResult train(const Corpus& corpus, const TrainConfig& cfg) {
  if (corpus.size() == 0) throw Error(ErrorKind::kEmptyInput, "cannot train on an empty corpus");
  if (cfg.batch_size == 0 || cfg.epochs == 0 || cfg.checkpoint_every == 0 || cfg.hidden_dim == 0 ||
      cfg.eval_samples == 0 || !(cfg.lr > 0.0)) {
    throw Error(ErrorKind::kConfig, "training hyperparameters must be positive");
  }
  std::vector<std::size_t> train_rows = corpus.indices_of(Split::kTrain);
  std::vector<std::size_t> test_rows = corpus.indices_of(Split::kTest);
  if (train_rows.empty()) throw Error(ErrorKind::kEmptyInput, "corpus has no train rows");
  if (test_rows.empty()) test_rows = train_rows;

  auto eval_subset = [&](const std::vector<std::size_t>& rows, std::uint64_t index) {
    std::vector<std::size_t> pick = rows;
    const std::size_t count = std::min(cfg.eval_samples, pick.size());
    Rng rng(derive_seed(cfg.seed, SeedStream::kEvalSample, index));
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pick[i], pick[i + static_cast<std::size_t>(rng.below(pick.size() - i))]);
    }
    std::vector<const FrequencyRepresentation*> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(&corpus.rows[pick[i]].rep);
    return out;
  };
  const auto train_eval = eval_subset(train_rows, 0);
  const auto test_eval = eval_subset(test_rows, 1);

  TrainResult result;
  AutoencoderModel model = AutoencoderModel::initialized(corpus.m, cfg.hidden_dim, cfg.seed);
  model.meta.normalization = corpus.normalization;
  AdamState adam = AdamState::zeros(cfg.hidden_dim);
  AdamHyper hyper;
  hyper.lr = cfg.lr;
  AutoencoderParams grads = AutoencoderParams::zeros(cfg.hidden_dim);
  Rng shuffle_rng(derive_seed(cfg.seed, SeedStream::kShuffle));
  std::uint64_t step = 0;
  double best_test = std::numeric_limits<double>::infinity();
  std::optional<AutoencoderParams> best_params;

  std::vector<const FrequencyRepresentation*> batch;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span(train_rows));
    double weighted = 0.0;
    for (std::size_t start = 0; start < train_rows.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(train_rows.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(&corpus.rows[train_rows[i]].rep);
      const double loss = detail::loss_and_gradients(model, batch, &grads, cfg.threads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorKind::kDivergence, "non-finite loss at epoch " + std::to_string(epoch));
      }
      weighted += loss * static_cast<double>(batch.size());
      if (clip_global_norm(grads, cfg.clip_norm) > cfg.clip_norm) ++result.clip_events;
      try {
        adam_step(model.params, grads, adam, hyper, ++step);
      } catch (const Error& e) {
        throw Error(ErrorKind::kDivergence, std::string(e.what()) + " at epoch " + std::to_string(epoch));
      }
    }
    const double epoch_loss = weighted / static_cast<double>(train_rows.size());
    result.epoch_loss.push_back(epoch_loss);
    if (cfg.on_epoch) cfg.on_epoch(epoch, epoch_loss);

    if (epoch % cfg.checkpoint_every == 0 || epoch == cfg.epochs) {
      Checkpoint cp{epoch, detail::loss_and_gradients(model, train_eval, nullptr, cfg.threads),
                    detail::loss_and_gradients(model, test_eval, nullptr, cfg.threads)};
      if (!std::isfinite(cp.test_mse) || !std::isfinite(cp.train_mse)) {
        throw Error(ErrorKind::kDivergence, "non-finite checkpoint MSE at epoch " + std::to_string(epoch));
      }
      result.checkpoints.push_back(cp);
      if (cp.test_mse < best_test) {
        best_test = cp.test_mse;
        best_params = model.params;
        result.selected_epoch = epoch;
      }
    }
  }
  if (result.clip_events > 0) {
    warn("gradient norm clipped at " + format_double(cfg.clip_norm, 6) + " in " +
         std::to_string(result.clip_events) + " step(s)");
  }

  model.params = std::move(*best_params);
  model.meta.epoch = result.selected_epoch;
  model.meta.loss_history = result.epoch_loss;
  result.model = std::move(model);
  return result;
}

inline std::string training_log_csv(const TrainResult& r) {
  std::string out = "epoch,train_loss,checkpoint_test_mse\n";
  std::size_t next = 0;
  for (std::size_t e = 1; e <= r.epoch_loss.size(); ++e) {
    out += std::to_string(e) + "," + format_double(r.epoch_loss[e - 1]) + ",";
    if (next < r.checkpoints.size() && r.checkpoints[next].epoch == e) {
      out += format_double(r.checkpoints[next++].test_mse);
    }
    out += "\n";
  }
  return out;
}

// Model file:
//   "FFADMODL" | u32 version | u32 m | u32 H
//   20 parameter blocks as little-endian f64 in for_each_block order
//   u64 byte length | UTF-8 JSON metadata
inline constexpr std::string_view kModelMagic = "FFADMODL";
inline constexpr std::uint32_t kModelVersion = 1;

namespace detail {
inline std::string serialize_params(const AutoencoderModel& model) {
  io::Writer w;
  w.bytes(kModelMagic);
  w.uint(kModelVersion);
  w.uint(static_cast<std::uint32_t>(model.m));
  w.uint(static_cast<std::uint32_t>(model.hidden_dim()));
  model.params.for_each_block([&](const std::string&, std::span<const double> b) {
    for (double v : b) w.f64(v);
  });
  return w.data();
}
}  // namespace detail

/// Content hash of the serialized dimensions and parameters.
inline std::string model_fingerprint(const AutoencoderModel& model) {
  return io::hex64(io::fnv1a64(detail::serialize_params(model)));
}

inline std::string serialize_model(const AutoencoderModel& model) {
  std::string out = detail::serialize_params(model);
  nlohmann::json meta = {{"epoch", model.meta.epoch},
                         {"loss_history", model.meta.loss_history},
                         {"seed", model.meta.seed},
                         {"normalization", to_string(model.meta.normalization)}};
  io::Writer w;
  w.trailer(meta.dump());
  return out + w.data();
}

inline AutoencoderModel deserialize_model(std::string_view data) {
  io::Reader r(data);
  if (r.remaining() < kModelMagic.size() || r.bytes(kModelMagic.size()) != kModelMagic) {
    throw Error(ErrorKind::kSerialization, "not a model file (bad magic)");
  }
  const auto version = r.uint<std::uint32_t>();
  if (version != kModelVersion) {
    throw Error(ErrorKind::kSerialization, "unsupported model version " + std::to_string(version));
  }
  const auto m = r.uint<std::uint32_t>();
  const auto hd = r.uint<std::uint32_t>();
  if (m == 0 || hd == 0 || hd > 4096) throw Error(ErrorKind::kSerialization, "bad model dimensions");
  AutoencoderModel model = AutoencoderModel::zeros(m, hd);
  model.params.for_each_block([&](const std::string&, std::span<double> b) {
    const auto vals = r.f64s(b.size());
    std::copy(vals.begin(), vals.end(), b.begin());
  });
  try {
    const auto meta = nlohmann::json::parse(r.trailer());
    model.meta.epoch = meta.at("epoch").get<std::size_t>();
    model.meta.loss_history = meta.at("loss_history").get<std::vector<double>>();
    model.meta.seed = meta.at("seed").get<std::uint64_t>();
    model.meta.normalization = parse_normalization(meta.at("normalization").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSerialization, std::string("bad model metadata: ") + e.what());
  }
  return model;
}

inline void save_model(const AutoencoderModel& model, const std::string& path) {
  io::write_file(path, serialize_model(model));
}

inline AutoencoderModel load_model(const std::string& path) { return deserialize_model(io::read_file(path)); }

/// Encoded vectors of one sample set plus where they came from.
struct EncodedSet {
  std::vector<Vector> vectors;
  std::string source;
  std::string model_fingerprint;
};

inline EncodedSet encode_set(const AutoencoderModel& model, std::span<const FrequencyRepresentation> reps,
                             std::string source = {}) {
  EncodedSet out{{}, std::move(source), model_fingerprint(model)};
  out.vectors.reserve(reps.size());
  for (const auto& rep : reps) out.vectors.push_back(encode(model, rep));
  return out;
}

inline GaussianStats fit_gaussian(const EncodedSet& set) { return fit_gaussian(std::span<const Vector>(set.vectors)); }

}  // namespace ffad
