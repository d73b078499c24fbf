// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "binseek/bench.hpp"
#include "binseek/context.hpp"
#include "binseek/corpus.hpp"
#include "binseek/embedding.hpp"
#include "binseek/index.hpp"
#include "binseek/reranker.hpp"

namespace binseek {

/// Two-stage pipeline configuration. Loaded from a flat key=value file;
/// every key can be overridden by a BINSEEK_<UPPERCASE_KEY> environment
/// variable.
struct PipelineConfig {
  std::string embedder_model;
  std::string reranker_model;
  std::string index_path;
  std::string corpus_path;
  int top_n_retrieve = 10;
  int top_k_return = 3;
  ContextMode mode = ContextMode::Heuristic;
  ScoreParams score{};
  std::size_t budget = kDefaultTokenBudget;
  std::uint64_t seed = 0;
  bool timing = true;

  void validate() const;  // top_k_return <= top_n_retrieve etc.
};

PipelineConfig load_pipeline_config(const std::string& path);

struct SearchResponse {
  RankedList final_list;  // length <= top_k_return
  RankedList stage1;      // raw retrieval, length <= top_n_retrieve
  double stage1_ms = 0.0;
  double stage2_ms = 0.0;
  bool empty_index = false;
};

/// Loaded artifacts plus the retrieve -> rerank flow. Immutable after
/// load(); concurrent searches are safe.
class Pipeline {
 public:
  /// Loads every artifact named by the config, raising DataError naming
  /// the missing piece.
  static Pipeline load(const PipelineConfig& cfg);

  SearchResponse search(const std::string& query) const;

  const PipelineConfig& config() const { return cfg_; }
  const Corpus& corpus() const { return corpus_; }
  const LinearEmbedder& embedder() const { return embedder_; }
  const LinearReranker& reranker() const { return reranker_; }
  const VectorIndex& index() const { return index_; }

 private:
  PipelineConfig cfg_;
  LinearEmbedder embedder_;
  LinearReranker reranker_;
  VectorIndex index_;
  Corpus corpus_;
};

struct SystemEvalOptions {
  std::size_t top_n = 10;
  ContextMode mode = ContextMode::Heuristic;
  ScoreParams score{};
  std::size_t budget = kDefaultTokenBudget;
  std::uint64_t seed = 0;
  std::vector<std::size_t> rec_ks = {1, 3, 10};
  std::vector<std::size_t> mrr_ks = {3, 10};
  RerankScorerFn scorer;  // optional override of the model scorer
};

struct SystemEvalResult {
  EvalReport stage1;  // embedding-only ranks over the full pool
  EvalReport final;   // after reranking the top-N candidates
  Ranks stage1_ranks;
  Ranks final_ranks;
  double total_ms = 0.0;
};

/// Run each benchmark case against a pool-restricted index, rerank the
/// retrieved candidates, and report both stages. `reranker` may be null
/// when opts.scorer is provided.
SystemEvalResult evaluate_system(const LinearEmbedder& embedder,
                                 const LinearReranker* reranker,
                                 const Corpus& corpus,
                                 const std::vector<BenchmarkCase>& cases,
                                 const SystemEvalOptions& opts);

}  // namespace binseek
