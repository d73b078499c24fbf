// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "binseek/corpus.hpp"

namespace binseek {

/// Maps a binary function id to the source-function id it was compiled
/// from. Functions absent from the table count as their own source.
struct LinkTable {
  std::unordered_map<std::string, std::string> source_of;

  std::string source_for(const std::string& function_id) const {
    auto it = source_of.find(function_id);
    return it == source_of.end() ? function_id : it->second;
  }
};

LinkTable load_links(const std::string& path);
void save_links(const LinkTable& links, const std::string& path);

/// One training pair: NL query plus a positive, an optional mined hard
/// negative, and random negatives. The query id is `<function_ref>#<ord>`
/// where ord is the description's position among its function's labels.
struct DataPair {
  std::string query_id;
  std::string positive_id;
  std::optional<std::string> hard_negative_id;
  std::vector<std::string> random_negative_ids;
  std::uint64_t seed = 0;
};

std::vector<DataPair> load_pairs(const std::string& path);
void save_pairs(const std::vector<DataPair>& pairs, const std::string& path);

/// Description-to-description similarity in [0, 1]; pluggable so an
/// external judge model can stand in.
using DescSim = std::function<double(const std::string&, const std::string&)>;

/// Default scorer: cosine over hashed token features, with vectors cached
/// per distinct text. Not thread-safe (the cache is shared).
DescSim make_hashed_desc_sim(std::uint32_t feature_dim = 1u << 16,
                             std::uint64_t hash_seed = 0x5eed);

/// Uniform sample of `count` functions without replacement, excluding every
/// function compiled from the positive's source. Deterministic per seed;
/// throws when fewer than `count` functions are eligible.
std::vector<std::string> sample_random_negatives(const std::string& positive_id,
                                                 const Corpus& corpus,
                                                 const LinkTable& links,
                                                 std::size_t count,
                                                 std::uint64_t seed);

/// Candidates sorted by desc_sim(query, candidate description) descending;
/// returns the first whose score is <= threshold, or nothing.
std::optional<std::string> mine_hard_negative(
    const std::string& query_text,
    const std::vector<std::pair<std::string, std::string>>& candidates,
    const DescSim& desc_sim, double threshold);

struct SamplerConfig {
  std::size_t random_negatives = 8;
  double hard_threshold = 0.95;
  std::uint64_t seed = 0;
};

struct BuildPairsResult {
  std::vector<DataPair> pairs;
  std::size_t skipped = 0;  // ineligible descriptions (grade, refs, slots)
};

/// One DataPair per A/B-graded description whose positive resolves and for
/// which enough negatives exist. Deterministic per cfg.seed.
BuildPairsResult build_pairs(const Corpus& corpus,
                             const std::vector<DescriptionLabel>& descriptions,
                             const LinkTable& links, const SamplerConfig& cfg,
                             const DescSim& desc_sim = make_hashed_desc_sim());

}  // namespace binseek
