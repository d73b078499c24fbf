// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binseek/features.hpp"
#include "binseek/optim.hpp"

namespace binseek {

/// Unit-norm embedding. `degenerate` marks the fixed-axis fallback used for
/// empty inputs.
struct EmbeddingVector {
  std::vector<float> values;
  bool degenerate = false;

  std::size_t dim() const { return values.size(); }
};

/// Cosine similarity of unit-norm vectors (their dot product). Throws on
/// dimension mismatch.
double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b);

/// Linear map over hashed token features followed by L2 normalization.
/// Weights are row-major dim x feature_dim.
struct LinearEmbedder {
  std::uint32_t feature_dim = 0;
  std::uint32_t dim = 0;
  std::uint64_t hash_seed = 0;
  std::vector<double> weights;

  static LinearEmbedder random_init(std::uint32_t feature_dim,
                                    std::uint32_t dim, std::uint64_t hash_seed,
                                    std::uint64_t init_seed);
  /// dim == feature_dim, identity weights; embeddings equal normalized
  /// features. Intended for small dims and the default description scorer.
  static LinearEmbedder identity(std::uint32_t feature_dim,
                                 std::uint64_t hash_seed);

  /// Full-precision embedding used by training and the loss path.
  std::vector<double> embed_raw(std::string_view text,
                                bool* degenerate = nullptr) const;
  EmbeddingVector embed(std::string_view text) const;

  void save(const std::string& path) const;
  static LinearEmbedder load(const std::string& path);
};

// -- InfoNCE -----------------------------------------------------------------

/// Similarities for a batch of N (query, positive, hard negative) triples:
/// doc_sim[i][j] = sim(q_i, p_j), hard_sim[i] = sim(q_i, hard_i). Each
/// query's candidate set is its hard negative plus all in-batch positives.
struct InfoNceBatch {
  std::vector<std::vector<double>> doc_sim;
  std::vector<double> hard_sim;

  std::size_t size() const { return hard_sim.size(); }
};

/// Mean over queries of -log softmax of the positive among
/// {positive, hard negative, other in-batch positives}, at temperature tau.
double infonce_loss(const InfoNceBatch& batch, double tau);

struct TrainExample {
  std::string query;
  std::string positive;
  std::string hard_negative;
};

/// Featurized triple; reused across epochs so texts hash once.
struct FeaturizedExample {
  SparseVec query;
  SparseVec positive;
  SparseVec hard_negative;
};

FeaturizedExample featurize_example(const TrainExample& ex,
                                    std::uint32_t feature_dim,
                                    std::uint64_t hash_seed);

InfoNceBatch make_infonce_batch(const LinearEmbedder& model,
                                std::span<const FeaturizedExample> batch);

/// Loss plus analytic gradient w.r.t. the embedder weights, propagated
/// through cosine similarity and the L2 normalization. `grad` must match
/// the weight vector size and is accumulated into (callers zero it).
double infonce_loss_and_grad(const LinearEmbedder& model,
                             std::span<const FeaturizedExample> batch,
                             double tau, std::vector<double>& grad);

struct EmbedderTrainResult {
  LinearEmbedder model;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
  double first_lr = 0.0;
  double last_lr = 0.0;
};

/// AdamW over shuffled batches with cosine learning-rate decay; fully
/// deterministic for a fixed cfg.seed. Throws on an empty example set.
EmbedderTrainResult train_embedder(const std::vector<TrainExample>& examples,
                                   std::uint32_t feature_dim, std::uint32_t dim,
                                   std::uint64_t hash_seed,
                                   const TrainConfig& cfg);

}  // namespace binseek
