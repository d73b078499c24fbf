// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binseek/context.hpp"
#include "binseek/features.hpp"
#include "binseek/index.hpp"
#include "binseek/optim.hpp"

namespace binseek {

/// One reranker training sample; assembled_input comes from assemble_input.
struct RerankSample {
  std::string query;
  std::string assembled_input;
  int label = 0;  // 0 or 1
};

inline constexpr std::size_t kDefaultCrossCap = 8192;

/// Joint relevance features: salted unigrams of the query, salted unigrams
/// of the assembled input, and hashed (query token, input token) cross
/// pairs capped per sample. Only identifier/string/number tokens
/// participate; punctuation carries no relevance signal.
SparseVec joint_features(std::string_view query, std::string_view input,
                         std::uint32_t feature_dim, std::uint64_t hash_seed,
                         std::size_t cross_cap = kDefaultCrossCap);

/// Linear relevance scorer: sigmoid(w . phi(query, input) + b) in (0, 1).
struct LinearReranker {
  std::uint32_t feature_dim = 0;
  std::uint64_t hash_seed = 0;
  std::vector<double> weights;
  double bias = 0.0;

  static LinearReranker zeros(std::uint32_t feature_dim,
                              std::uint64_t hash_seed);

  double score(std::string_view query, std::string_view input) const;

  void save(const std::string& path) const;
  static LinearReranker load(const std::string& path);
};

struct BceLoss {
  double value = 0.0;
  std::size_t clamped = 0;  // scores that hit the [eps, 1-eps] clamp
};

/// Mean binary cross-entropy. Scores exactly 0 or 1 are clamped to
/// [1e-12, 1 - 1e-12] and counted.
BceLoss bce_loss(std::span<const double> scores, std::span<const int> labels);

struct RerankerTrainResult {
  LinearReranker model;
  std::vector<double> epoch_loss;
};

/// AdamW + cosine decay over shuffled minibatches; deterministic per seed.
/// Throws if the samples contain only one class.
RerankerTrainResult train_reranker(const std::vector<RerankSample>& samples,
                                   std::uint32_t feature_dim,
                                   std::uint64_t hash_seed,
                                   const TrainConfig& cfg);

struct RerankOptions {
  ScoreParams score{};
  std::size_t budget = kDefaultTokenBudget;
  std::uint64_t seed = 0;  // random-mode context selection
};

/// Custom candidate scorer; lets tests swap in oracle or identity rerankers.
using RerankScorerFn = std::function<double(
    const std::string& query, const std::string& candidate_id,
    const std::string& assembled_input)>;

/// Score every candidate against the query with context assembled under
/// `mode`, then sort by score descending with ties keeping the incoming
/// order. Throws DataError naming any candidate id missing from the corpus.
RankedList rerank_with(const RerankScorerFn& scorer, const std::string& query,
                       const RankedList& candidates, const Corpus& corpus,
                       ContextMode mode, const RerankOptions& opts = {});

/// rerank_with() using the linear model as the scorer.
RankedList rerank(const LinearReranker& model, const std::string& query,
                  const RankedList& candidates, const Corpus& corpus,
                  ContextMode mode, const RerankOptions& opts = {});

}  // namespace binseek
