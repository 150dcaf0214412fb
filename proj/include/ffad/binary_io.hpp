// Copyright (C) 2026 The FFAD Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ffad/error.hpp"

namespace ffad::io {

// Little-endian byte buffers. Floats are written through their IEEE-754 bit
// pattern so files are identical on every platform.
class Writer {
 public:
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

  template <std::unsigned_integral T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
  }

  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }

  void f64s(const std::vector<double>& vs) {
    for (double v : vs) f64(v);
  }

  /// u64 byte length followed by the UTF-8 payload.
  void trailer(const std::string& text) {
    uint(static_cast<std::uint64_t>(text.size()));
    bytes(text);
  }

  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::string_view bytes(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  template <std::unsigned_integral T>
  T uint() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return v;
  }

  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

  std::vector<double> f64s(std::size_t n) {
    if (n > remaining() / 8) throw Error(ErrorKind::kSerialization, "truncated file");
    std::vector<double> out(n);
    for (auto& v : out) v = f64();
    return out;
  }

  std::string trailer() {
    const auto n = uint<std::uint64_t>();
    if (n > remaining()) throw Error(ErrorKind::kSerialization, "truncated metadata trailer");
    return std::string(bytes(static_cast<std::size_t>(n)));
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw Error(ErrorKind::kSerialization, "truncated file");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write '" + path + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorKind::kInvalidInput, "write failed for '" + path + "'");
}

}  // namespace ffad::io
