// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "ffad/error.hpp"
#include "ffad/linalg.hpp"

namespace ffad {

/// Parameters of one GRU layer:
///   z  = sigmoid(W_z x + U_z h + b_z)
///   r  = sigmoid(W_r x + U_r h + b_r)
///   h~ = tanh(W_h x + U_h (r * h) + b_h)
///   h' = (1 - z) * h + z * h~
struct GruLayerParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix w_z, w_r, w_h;  // hidden x input
  Matrix u_z, u_r, u_h;  // hidden x hidden
  Vector b_z, b_r, b_h;

  static GruLayerParams zeros(std::size_t input_dim, std::size_t hidden_dim) {
    GruLayerParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    for (Matrix* w : {&p.w_z, &p.w_r, &p.w_h}) *w = Matrix(hidden_dim, input_dim);
    for (Matrix* u : {&p.u_z, &p.u_r, &p.u_h}) *u = Matrix(hidden_dim, hidden_dim);
    for (Vector* b : {&p.b_z, &p.b_r, &p.b_h}) b->assign(hidden_dim, 0.0);
    return p;
  }

  /// Visits the nine parameter blocks in serialization order.
  template <class Self, class F>
  static void visit(Self& self, const std::string& prefix, F&& f) {
    f(prefix + "W_z", self.w_z.flat());
    f(prefix + "W_r", self.w_r.flat());
    f(prefix + "W_h", self.w_h.flat());
    f(prefix + "U_z", self.u_z.flat());
    f(prefix + "U_r", self.u_r.flat());
    f(prefix + "U_h", self.u_h.flat());
    f(prefix + "b_z", std::span(self.b_z));
    f(prefix + "b_r", std::span(self.b_r));
    f(prefix + "b_h", std::span(self.b_h));
  }

  bool operator==(const GruLayerParams&) const = default;
};

namespace detail {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y += M x
inline void gemv_add(const Matrix& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

// y += M^T x
inline void gemv_t_add(const Matrix& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < row.size(); ++j) y[j] += row[j] * xi;
  }
}

// G += a b^T
inline void ger_add(Matrix& g, std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    double* row = g.flat().data() + i * g.cols();
    for (std::size_t j = 0; j < g.cols(); ++j) row[j] += ai * b[j];
  }
}

}  // namespace detail

/// Activations of one GRU step, kept for backpropagation.
struct GruStepCache {
  Vector x, h_prev, z, r, candidate, h;

  void resize(std::size_t input_dim, std::size_t hidden_dim) {
    x.resize(input_dim);
    for (Vector* v : {&h_prev, &z, &r, &candidate, &h}) v->resize(hidden_dim);
  }
};

inline void check_gru_dims(const GruLayerParams& p, std::size_t x_dim, std::size_t h_dim) {
  if (x_dim != p.input_dim || h_dim != p.hidden_dim) {
    throw Error(ErrorKind::kShape, "GRU step expects input " + std::to_string(p.input_dim) + " / hidden " +
                                       std::to_string(p.hidden_dim) + ", got " + std::to_string(x_dim) +
                                       " / " + std::to_string(h_dim));
  }
}

inline void gru_forward(const GruLayerParams& p, std::span<const double> x, std::span<const double> h_prev,
                        GruStepCache& c) {
  const std::size_t hd = p.hidden_dim;
  c.resize(p.input_dim, hd);
  std::copy(x.begin(), x.end(), c.x.begin());
  std::copy(h_prev.begin(), h_prev.end(), c.h_prev.begin());

  c.z = p.b_z;
  detail::gemv_add(p.w_z, x, c.z);
  detail::gemv_add(p.u_z, h_prev, c.z);
  c.r = p.b_r;
  detail::gemv_add(p.w_r, x, c.r);
  detail::gemv_add(p.u_r, h_prev, c.r);
  for (std::size_t i = 0; i < hd; ++i) {
    c.z[i] = detail::sigmoid(c.z[i]);
    c.r[i] = detail::sigmoid(c.r[i]);
  }
  // h holds r * h_prev temporarily.
  for (std::size_t i = 0; i < hd; ++i) c.h[i] = c.r[i] * h_prev[i];
  c.candidate = p.b_h;
  detail::gemv_add(p.w_h, x, c.candidate);
  detail::gemv_add(p.u_h, c.h, c.candidate);
  for (std::size_t i = 0; i < hd; ++i) {
    c.candidate[i] = std::tanh(c.candidate[i]);
    c.h[i] = (1.0 - c.z[i]) * h_prev[i] + c.z[i] * c.candidate[i];
  }
}

/// One GRU step without caching.
inline Vector gru_step(const GruLayerParams& p, std::span<const double> x, std::span<const double> h_prev) {
  check_gru_dims(p, x.size(), h_prev.size());
  GruStepCache c;
  gru_forward(p, x, h_prev, c);
  return c.h;
}

/// Backpropagates dL/dh' through one step. Accumulates parameter gradients
/// into `grads`, adds dL/dx into `dx` (if non-empty) and writes dL/dh_prev.
inline void gru_backward(const GruLayerParams& p, const GruStepCache& c, std::span<const double> dh,
                         GruLayerParams& grads, std::span<double> dx, std::span<double> dh_prev,
                         Vector& scratch) {
  const std::size_t hd = p.hidden_dim;
  scratch.assign(4 * hd, 0.0);
  std::span<double> da_z(scratch.data(), hd);
  std::span<double> da_r(scratch.data() + hd, hd);
  std::span<double> da_h(scratch.data() + 2 * hd, hd);
  std::span<double> rh(scratch.data() + 3 * hd, hd);

  for (std::size_t i = 0; i < hd; ++i) {
    const double z = c.z[i];
    const double cand = c.candidate[i];
    da_z[i] = dh[i] * (cand - c.h_prev[i]) * z * (1.0 - z);
    da_h[i] = dh[i] * z * (1.0 - cand * cand);
    rh[i] = c.r[i] * c.h_prev[i];
    dh_prev[i] = dh[i] * (1.0 - z);
  }

  detail::ger_add(grads.w_h, da_h, c.x);
  detail::ger_add(grads.u_h, da_h, rh);
  for (std::size_t i = 0; i < hd; ++i) grads.b_h[i] += da_h[i];

  // d(r * h_prev) = U_h^T da_h, reusing rh.
  std::fill(rh.begin(), rh.end(), 0.0);
  detail::gemv_t_add(p.u_h, da_h, rh);
  for (std::size_t i = 0; i < hd; ++i) {
    const double r = c.r[i];
    da_r[i] = rh[i] * c.h_prev[i] * r * (1.0 - r);
    dh_prev[i] += rh[i] * r;
  }

  detail::ger_add(grads.w_z, da_z, c.x);
  detail::ger_add(grads.u_z, da_z, c.h_prev);
  detail::ger_add(grads.w_r, da_r, c.x);
  detail::ger_add(grads.u_r, da_r, c.h_prev);
  for (std::size_t i = 0; i < hd; ++i) {
    grads.b_z[i] += da_z[i];
    grads.b_r[i] += da_r[i];
  }

  detail::gemv_t_add(p.u_z, da_z, dh_prev);
  detail::gemv_t_add(p.u_r, da_r, dh_prev);
  if (!dx.empty()) {
    detail::gemv_t_add(p.w_z, da_z, dx);
    detail::gemv_t_add(p.w_r, da_r, dx);
    detail::gemv_t_add(p.w_h, da_h, dx);
  }
}

}  // namespace ffad
