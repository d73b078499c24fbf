// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/minhash.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "binseek/hashing.hpp"

namespace binseek {

namespace {

constexpr std::uint64_t kSentinel = std::numeric_limits<std::uint64_t>::max();

std::uint64_t shingle_hash(const Token& t, std::uint64_t seed) {
  std::string key;
  key.reserve(t.text.size() + 1);
  key.push_back(static_cast<char>(t.kind));
  key.append(t.text);
  return hash_bytes(key, seed);
}

}  // namespace

MinHashSignature minhash_signature(const std::vector<Token>& tokens,
                                   std::uint32_t num_hashes,
                                   std::uint64_t seed) {
  if (num_hashes == 0) {
    throw std::invalid_argument("minhash_signature: num_hashes must be >= 1");
  }
  MinHashSignature sig;
  sig.num_hashes = num_hashes;
  sig.seed = seed;
  sig.values.assign(num_hashes, kSentinel);

  // Collapse the multiset to a set of base hashes; the i-th hash function is
  // mix64(base ^ r_i) with r_i drawn from a seed-keyed stream.
  std::unordered_set<std::uint64_t> base;
  base.reserve(tokens.size());
  for (const Token& t : tokens) base.insert(shingle_hash(t, seed));
  sig.empty_input = base.empty();
  if (sig.empty_input) return sig;

  std::vector<std::uint64_t> salts(num_hashes);
  Rng rng(derive_seed(seed, "minhash-salts"));
  for (auto& s : salts) s = rng.next_u64();

  for (std::uint64_t b : base) {
    for (std::uint32_t i = 0; i < num_hashes; ++i) {
      const std::uint64_t h = mix64(b ^ salts[i]);
      if (h < sig.values[i]) sig.values[i] = h;
    }
  }
  return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.num_hashes != b.num_hashes || a.seed != b.seed) {
    throw std::invalid_argument(
        "estimate_jaccard: signatures built with different num_hashes/seed");
  }
  if (a.num_hashes == 0) {
    throw std::invalid_argument("estimate_jaccard: empty signatures");
  }
  std::size_t agree = 0;
  for (std::uint32_t i = 0; i < a.num_hashes; ++i) {
    if (a.values[i] == b.values[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(a.num_hashes);
}

DedupResult dedup(
    const std::vector<std::pair<std::string, MinHashSignature>>& items,
    double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw std::invalid_argument("dedup: threshold must lie in (0, 1]");
  }
  DedupResult result;
  std::vector<const MinHashSignature*> kept_sigs;
  for (const auto& [id, sig] : items) {
    const std::string* duplicate_of = nullptr;
    for (std::size_t k = 0; k < kept_sigs.size(); ++k) {
      if (estimate_jaccard(sig, *kept_sigs[k]) >= threshold) {
        duplicate_of = &result.kept_ids[k];
        break;
      }
    }
    if (duplicate_of != nullptr) {
      result.dropped.emplace_back(id, *duplicate_of);
    } else {
      result.kept_ids.push_back(id);
      kept_sigs.push_back(&sig);
    }
  }
  return result;
}

DedupResult dedup_token_sets(
    const std::vector<std::pair<std::string, std::vector<Token>>>& items,
    const DedupConfig& cfg) {
  std::vector<std::pair<std::string, MinHashSignature>> sigs;
  sigs.reserve(items.size());
  for (const auto& [id, tokens] : items) {
    sigs.emplace_back(id, minhash_signature(tokens, cfg.num_hashes, cfg.seed));
  }
  return dedup(sigs, cfg.threshold);
}

}  // namespace binseek
