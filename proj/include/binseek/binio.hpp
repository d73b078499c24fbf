// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace binseek {

/// Little-endian binary writer backed by an in-memory buffer.
class BinaryWriter {
 public:
  void put_bytes(std::string_view bytes);
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f32(float v);
  void put_f64(double v);

  const std::string& buffer() const { return buf_; }
  void write_file(const std::string& path) const;

 private:
  std::string buf_;
};

/// Little-endian binary reader. Every failure reports the byte offset at
/// which decoding stopped, so corrupt files are diagnosable.
class BinaryReader {
 public:
  explicit BinaryReader(std::string bytes) : buf_(std::move(bytes)) {}
  static BinaryReader from_file(const std::string& path);

  std::string get_bytes(std::size_t n);
  std::uint32_t get_u32();
  std::uint64_t get_u64();
  float get_f32();
  double get_f64();

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }
  bool exhausted() const { return pos_ == buf_.size(); }

 private:
  void require(std::size_t n) const;

  std::string buf_;
  std::size_t pos_ = 0;
};

}  // namespace binseek
