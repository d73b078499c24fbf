// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "binseek/embedding.hpp"

namespace binseek {

struct RankedItem {
  std::string id;
  double score = 0.0;
};

/// Ordered retrieval results: scores non-increasing, ids distinct.
struct RankedList {
  std::vector<RankedItem> items;

  bool empty() const { return items.empty(); }
  std::size_t size() const { return items.size(); }
};

/// Exact (flat) cosine index over unit-norm vectors. Immutable once built;
/// searches are const and freely concurrent.
class VectorIndex {
 public:
  /// Throws on duplicate ids, dimension mismatches, and non-unit vectors,
  /// naming the offending id.
  static VectorIndex build(
      const std::vector<std::pair<std::string, EmbeddingVector>>& entries);

  /// Exact top-n by cosine score; ties broken by ascending id. Returns
  /// min(top_n, size()) items; empty index yields an empty list.
  RankedList search(const EmbeddingVector& query, std::size_t top_n) const;

  std::size_t size() const { return ids_.size(); }
  std::uint32_t dim() const { return dim_; }
  const std::vector<std::string>& ids() const { return ids_; }

  void save(const std::string& path) const;
  static VectorIndex load(const std::string& path);

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<float> data_;  // row-major, one row per id
};

}  // namespace binseek
