// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ffad/error.hpp"
#include "ffad/text.hpp"

namespace ffad {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::kShape, "matrix product dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix operator+(Matrix a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::kShape, "matrix sum mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a.flat()[i] += b.flat()[i];
  return a;
}

inline Matrix operator-(Matrix a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::kShape, "matrix difference mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a.flat()[i] -= b.flat()[i];
  return a;
}

inline Matrix operator*(Matrix a, double s) {
  for (double& v : a.flat()) v *= s;
  return a;
}

/// (A + A^T) / 2
inline Matrix symmetrize(const Matrix& a) {
  Matrix s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

/// Mean vector, unbiased covariance (divisor n-1) and sample count of a point set.
struct GaussianStats {
  Vector mean;
  Matrix cov;
  std::size_t n = 0;

  std::size_t dim() const { return mean.size(); }
};

inline GaussianStats fit_gaussian(std::span<const Vector> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw Error(ErrorKind::kInsufficientSamples,
                "Gaussian fit needs at least 2 samples, got " + std::to_string(n));
  }
  const std::size_t d = samples.front().size();
  GaussianStats g{Vector(d, 0.0), Matrix(d, d), n};
  for (const auto& x : samples) {
    if (x.size() != d) throw Error(ErrorKind::kShape, "samples differ in dimension");
    for (std::size_t i = 0; i < d; ++i) {
      if (!std::isfinite(x[i])) throw Error(ErrorKind::kInvalidInput, "non-finite sample entry");
      g.mean[i] += x[i];
    }
  }
  for (double& m : g.mean) m /= static_cast<double>(n);
  for (const auto& x : samples) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = x[i] - g.mean[i];
      for (std::size_t j = i; j < d; ++j) g.cov(i, j) += di * (x[j] - g.mean[j]);
    }
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      g.cov(i, j) /= denom;
      g.cov(j, i) = g.cov(i, j);
    }
  return g;
}

struct SymEig {
  Vector values;   // ascending
  Matrix vectors;  // column i pairs with values[i]
};

inline void require_symmetric(const Matrix& a, double rel_tol = 1e-10) {
  if (!a.square()) throw Error(ErrorKind::kShape, "matrix is not square");
  const double tol = rel_tol * std::max(1.0, a.max_abs());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) throw Error(ErrorKind::kShape, "matrix is not symmetric");
}

/// Cyclic Jacobi eigendecomposition A = V diag(values) V^T.
inline SymEig sym_eig(const Matrix& input) {
  require_symmetric(input);
  const std::size_t n = input.rows();
  Matrix a = symmetrize(input);
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double total = 0.0;
  for (double x : a.flat()) total += x * x;
  const double stop = 1e-15 * std::sqrt(total);

  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p, q); t is the smaller root of t^2 + 2 theta t - 1 = 0.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymEig out{Vector(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

/// V f(diag(values)) V^T
template <class F>
Matrix spectral_apply(const SymEig& e, F&& f) {
  const std::size_t n = e.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = e.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * e.vectors(j, k);
    }
  }
  return out;
}

/// Principal square root of a symmetric PSD matrix. Eigenvalues in
/// [-1e-10 ||A||_max, 0) are clamped to zero; anything more negative is an error.
inline Matrix sqrtm_psd(const Matrix& a) {
  const auto eig = sym_eig(a);
  const double tol = 1e-10 * a.max_abs();
  std::size_t clamped = 0;
  for (double lambda : eig.values) {
    if (lambda < -tol) {
      throw Error(ErrorKind::kNotPsd, "eigenvalue " + format_double(lambda, 6) +
                                          " below tolerance " + format_double(-tol, 6));
    }
    if (lambda < 0.0) ++clamped;
  }
  if (clamped > 0) warn("sqrtm_psd clamped " + std::to_string(clamped) + " negative eigenvalue(s) to 0");
  return spectral_apply(eig, [](double lambda) { return std::sqrt(std::max(lambda, 0.0)); });
}

}  // namespace ffad
