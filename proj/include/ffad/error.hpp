// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ffad {

/// Broad failure classes. The CLI maps these onto exit codes.
enum class ErrorKind {
  kInvalidInput,
  kComponentCount,
  kParse,
  kEmptyInput,
  kClassArity,
  kEmptyGroup,
  kBounds,
  kShape,
  kDivergence,
  kSerialization,
  kInsufficientSamples,
  kNotPsd,
  kConfig,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kComponentCount: return "component-count";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kClassArity: return "class-arity";
    case ErrorKind::kEmptyGroup: return "empty-group";
    case ErrorKind::kBounds: return "bounds";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kSerialization: return "serialization";
    case ErrorKind::kInsufficientSamples: return "insufficient-samples";
    case ErrorKind::kNotPsd: return "not-psd";
    case ErrorKind::kConfig: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ffad
