// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/binio.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "binseek/errors.hpp"

namespace binseek {

void BinaryWriter::put_bytes(std::string_view bytes) { buf_.append(bytes); }

void BinaryWriter::put_u32(std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  buf_.append(b, 4);
}

void BinaryWriter::put_u64(std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  buf_.append(b, 8);
}

void BinaryWriter::put_f32(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(bits);
}

void BinaryWriter::put_f64(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(bits);
}

void BinaryWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  if (!out) throw DataError("write failed: " + path);
}

BinaryReader BinaryReader::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return BinaryReader(ss.str());
}

void BinaryReader::require(std::size_t n) const {
  if (pos_ + n > buf_.size()) {
    throw DataError("unexpected end of data at offset " + std::to_string(pos_) +
                    " (need " + std::to_string(n) + " bytes, have " +
                    std::to_string(buf_.size() - pos_) + ")");
  }
}

std::string BinaryReader::get_bytes(std::size_t n) {
  require(n);
  std::string out = buf_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint32_t BinaryReader::get_u32() {
  require(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i]))
         << (8 * i);
  }
  pos_ += 4;
  return v;
}

std::uint64_t BinaryReader::get_u64() {
  require(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i]))
         << (8 * i);
  }
  pos_ += 8;
  return v;
}

float BinaryReader::get_f32() {
  std::uint32_t bits = get_u32();
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

double BinaryReader::get_f64() {
  std::uint64_t bits = get_u64();
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace binseek
