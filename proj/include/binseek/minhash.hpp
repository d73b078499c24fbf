// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binseek/tokenizer.hpp"

namespace binseek {

/// MinHash signature over single-token shingles (content + kind). Signatures
/// are comparable only when num_hashes and seed match.
struct MinHashSignature {
  std::vector<std::uint64_t> values;
  std::uint32_t num_hashes = 0;
  std::uint64_t seed = 0;
  bool empty_input = false;  // sentinel values, no shingles seen
};

/// Per-position minimum of num_hashes seeded hash functions over the token
/// set. Deterministic for fixed (tokens, num_hashes, seed). An empty token
/// sequence yields sentinel (all-ones) values with empty_input set.
MinHashSignature minhash_signature(const std::vector<Token>& tokens,
                                   std::uint32_t num_hashes,
                                   std::uint64_t seed);

/// Fraction of agreeing positions; unbiased estimate of Jaccard similarity
/// of the underlying shingle sets. Throws on incompatible signatures.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

struct DedupConfig {
  double threshold = 0.95;  // must lie in (0, 1]
  std::uint32_t num_hashes = 256;
  std::uint64_t seed = 0;
};

struct DedupResult {
  std::vector<std::string> kept_ids;  // stable input order
  // (dropped id, earlier kept id it duplicated)
  std::vector<std::pair<std::string, std::string>> dropped;
};

/// Greedy single pass in input order: an item is dropped iff its estimated
/// Jaccard with some earlier-kept item is >= threshold.
DedupResult dedup(
    const std::vector<std::pair<std::string, MinHashSignature>>& items,
    double threshold);

/// Signature + dedup over whole token streams, shared by the source and
/// binary corpus CLI paths.
DedupResult dedup_token_sets(
    const std::vector<std::pair<std::string, std::vector<Token>>>& items,
    const DedupConfig& cfg);

}  // namespace binseek
