// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "binseek/corpus.hpp"
#include "binseek/embedding.hpp"
#include "binseek/sampler.hpp"

namespace binseek {

/// Embedding-stage evaluation case: one query against a pool of exactly K
/// function ids containing the positive.
struct BenchmarkCase {
  std::string query;
  std::string positive_id;
  std::vector<std::string> pool_ids;
};

/// Reranking evaluation case: N retrieval-ordered candidates containing the
/// positive somewhere below rank 1.
struct RerankCase {
  std::string query;
  std::string positive_id;
  std::vector<std::string> candidate_ids;
};

std::vector<BenchmarkCase> load_benchmark_cases(const std::string& path);
void save_benchmark_cases(const std::vector<BenchmarkCase>& cases,
                          const std::string& path);
std::vector<RerankCase> load_rerank_cases(const std::string& path);
void save_rerank_cases(const std::vector<RerankCase>& cases,
                       const std::string& path);

/// (query text, positive function id) — the unit the benchmark builder
/// iterates over.
struct QueryPair {
  std::string query;
  std::string positive_id;
};

/// All description texts per function, including rephrasings when present.
using DescriptionsByFunction =
    std::unordered_map<std::string, std::vector<std::string>>;

DescriptionsByFunction group_descriptions(
    const std::vector<DescriptionLabel>& descriptions);

/// Maximum similarity between the query and any description of the
/// candidate function.
using MaxSim = std::function<double(const std::string& query_text,
                                    const std::string& candidate_id)>;

MaxSim make_description_max_sim(const DescriptionsByFunction& descs,
                                const DescSim& desc_sim);

struct EmbedBenchConfig {
  std::size_t pool_size = 10000;  // K
  double rho_th = 0.95;
  std::uint64_t seed = 0;
  std::size_t max_cases = SIZE_MAX;
};

struct RejectedQuery {
  std::string query;
  std::string positive_id;
  std::size_t reached = 0;  // pool size when candidates ran out
};

struct EmbedBenchResult {
  std::vector<BenchmarkCase> cases;
  std::vector<RejectedQuery> rejects;
};

/// Pool construction: start from {positive}, scan candidates in seeded
/// order, admit those with MaxSim(query, candidate) < rho_th until the pool
/// holds K ids. Queries whose pool cannot reach K are routed to rejects.
EmbedBenchResult build_embedding_benchmark(
    const std::vector<QueryPair>& pairs,
    const std::vector<std::string>& candidate_ids, const MaxSim& max_sim,
    const EmbedBenchConfig& cfg);

/// Post-hoc audit: pool members (other than the positive) whose MaxSim
/// breaches the threshold. Empty result means the leakage guard held.
struct AuditViolation {
  std::size_t case_index;
  std::string member_id;
  double sim;
};
std::vector<AuditViolation> audit_embedding_benchmark(
    const std::vector<BenchmarkCase>& cases, const MaxSim& max_sim,
    double rho_th);

struct RerankBenchResult {
  std::vector<RerankCase> cases;
  std::size_t filtered_rank1 = 0;    // positive already at rank 1
  std::size_t filtered_missing = 0;  // positive outside the top N
};

/// Retrieval-derived rerank cases: run the embedder over each pool, keep
/// queries where the positive lands in the top N but not at rank 1, and
/// emit the top-N list in retrieval order.
RerankBenchResult build_rerank_benchmark(
    const std::vector<BenchmarkCase>& bench, const Corpus& corpus,
    const LinearEmbedder& embedder, std::size_t top_n);

// -- Metrics -----------------------------------------------------------------

/// Per-query 1-based rank of the positive; nullopt when not retrieved.
using Ranks = std::vector<std::optional<std::size_t>>;

double recall_at_k(const Ranks& ranks, std::size_t k);
double mrr_at_k(const Ranks& ranks, std::size_t k);

struct EvalReport {
  std::map<std::size_t, double> rec;
  std::map<std::size_t, double> mrr;
  std::size_t n_queries = 0;
  double elapsed_ms = 0.0;
  std::optional<double> resample_std;
};

EvalReport make_report(const Ranks& ranks, std::span<const std::size_t> rec_ks,
                       std::span<const std::size_t> mrr_ks, double elapsed_ms);

struct EmbeddingEvalResult {
  EvalReport report;
  Ranks ranks;
};

/// Rank of each case's positive under exact cosine retrieval restricted to
/// its pool. Pool member embeddings are cached across cases.
EmbeddingEvalResult run_embedding_eval(const std::vector<BenchmarkCase>& cases,
                                       const Corpus& corpus,
                                       const LinearEmbedder& embedder,
                                       std::span<const std::size_t> rec_ks,
                                       std::span<const std::size_t> mrr_ks);

// -- Stability ---------------------------------------------------------------

/// A trial maps a derived seed to metric values (fractions in [0, 1]).
using TrialRunner =
    std::function<std::map<std::string, double>(std::uint64_t trial_seed)>;

/// Sample standard deviation per metric across trials, in percentage
/// points. Requires trials >= 2.
std::map<std::string, double> stability_report(const TrialRunner& runner,
                                               std::size_t trials,
                                               std::uint64_t seed);

/// Subsample a fixed case list (without replacement) with a derived seed.
std::vector<BenchmarkCase> subsample_cases(
    const std::vector<BenchmarkCase>& cases, std::size_t count,
    std::uint64_t seed);

}  // namespace binseek
