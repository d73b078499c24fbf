// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace binseek {

/// Sparse unit-norm feature vector; indices sorted and unique.
struct SparseVec {
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  bool degenerate = false;  // no tokens -> zero vector

  std::size_t nnz() const { return idx.size(); }
};

/// Hashed bag-of-tokens featurization: each token lands in a bucket in
/// [0, feature_dim) with a +/-1 sign hash, accumulated over occurrences,
/// then L2-normalized. Deterministic for a fixed hash_seed.
SparseVec featurize(std::string_view text, std::uint32_t feature_dim,
                    std::uint64_t hash_seed);

/// Dot product over sorted sparse vectors.
double sparse_dot(const SparseVec& a, const SparseVec& b);

}  // namespace binseek
