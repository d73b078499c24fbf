// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "binseek/binio.hpp"
#include "binseek/errors.hpp"

namespace binseek {

namespace {

constexpr std::string_view kIndexMagic = "BSEEKIDX";
constexpr std::uint32_t kIndexVersion = 1;
constexpr double kNormTolerance = 1e-3;

}  // namespace

VectorIndex VectorIndex::build(
    const std::vector<std::pair<std::string, EmbeddingVector>>& entries) {
  VectorIndex idx;
  if (entries.empty()) return idx;

  idx.dim_ = static_cast<std::uint32_t>(entries.front().second.dim());
  idx.ids_.reserve(entries.size());
  idx.data_.reserve(entries.size() * idx.dim_);
  std::unordered_set<std::string> seen;
  for (const auto& [id, vec] : entries) {
    if (!seen.insert(id).second) {
      throw DataError("VectorIndex::build: duplicate id: " + id);
    }
    if (vec.dim() != idx.dim_) {
      throw DataError("VectorIndex::build: dimension mismatch for id " + id +
                      " (" + std::to_string(vec.dim()) + " vs " +
                      std::to_string(idx.dim_) + ")");
    }
    double norm_sq = 0.0;
    for (float v : vec.values) {
      norm_sq += static_cast<double>(v) * static_cast<double>(v);
    }
    if (std::abs(std::sqrt(norm_sq) - 1.0) > kNormTolerance) {
      throw DataError("VectorIndex::build: non-unit vector for id " + id);
    }
    idx.ids_.push_back(id);
    idx.data_.insert(idx.data_.end(), vec.values.begin(), vec.values.end());
  }
  return idx;
}

RankedList VectorIndex::search(const EmbeddingVector& query,
                               std::size_t top_n) const {
  if (top_n == 0) {
    throw std::invalid_argument("VectorIndex::search: top_n must be >= 1");
  }
  RankedList out;
  if (ids_.empty()) return out;
  if (query.dim() != dim_) {
    throw std::invalid_argument(
        "VectorIndex::search: query dimension mismatch (" +
        std::to_string(query.dim()) + " vs " + std::to_string(dim_) + ")");
  }

  std::vector<std::pair<double, std::size_t>> scored(ids_.size());
  for (std::size_t row = 0; row < ids_.size(); ++row) {
    const float* v = data_.data() + row * dim_;
    double dot = 0.0;
    for (std::uint32_t c = 0; c < dim_; ++c) {
      dot += static_cast<double>(v[c]) * static_cast<double>(query.values[c]);
    }
    scored[row] = {dot, row};
  }

  const std::size_t take = std::min(top_n, scored.size());
  auto better = [this](const std::pair<double, std::size_t>& a,
                       const std::pair<double, std::size_t>& b) {
    if (a.first != b.first) return a.first > b.first;
    return ids_[a.second] < ids_[b.second];
  };
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    better);

  out.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.items.push_back({ids_[scored[i].second], scored[i].first});
  }
  return out;
}

void VectorIndex::save(const std::string& path) const {
  BinaryWriter w;
  w.put_bytes(kIndexMagic);
  w.put_u32(kIndexVersion);
  w.put_u32(dim_);
  w.put_u64(ids_.size());
  for (float v : data_) w.put_f32(v);
  for (const std::string& id : ids_) {
    w.put_u32(static_cast<std::uint32_t>(id.size()));
    w.put_bytes(id);
  }
  w.write_file(path);
}

VectorIndex VectorIndex::load(const std::string& path) {
  BinaryReader r = BinaryReader::from_file(path);
  if (r.get_bytes(kIndexMagic.size()) != kIndexMagic) {
    throw DataError(path + ": not an index file (bad magic)");
  }
  const std::uint32_t version = r.get_u32();
  if (version != kIndexVersion) {
    throw DataError(path + ": unsupported index version " +
                    std::to_string(version));
  }
  VectorIndex idx;
  idx.dim_ = r.get_u32();
  const std::uint64_t count = r.get_u64();
  if (count > 0 && idx.dim_ == 0) {
    throw DataError(path + ": corrupt header at offset " +
                    std::to_string(r.offset()));
  }
  idx.data_.resize(count * idx.dim_);
  for (auto& v : idx.data_) v = r.get_f32();
  idx.ids_.reserve(count);
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t len = r.get_u32();
    std::string id = r.get_bytes(len);
    if (!seen.insert(id).second) {
      throw DataError(path + ": duplicate id in id table at offset " +
                      std::to_string(r.offset()));
    }
    idx.ids_.push_back(std::move(id));
  }
  if (!r.exhausted()) {
    throw DataError(path + ": trailing bytes at offset " +
                    std::to_string(r.offset()));
  }
  return idx;
}

}  // namespace binseek
