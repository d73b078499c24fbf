// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "binseek/errors.hpp"
#include "binseek/hashing.hpp"
#include "binseek/index.hpp"

namespace binseek {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<ordered_json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<ordered_json> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      rows.push_back(ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

std::vector<BenchmarkCase> load_benchmark_cases(const std::string& path) {
  std::vector<BenchmarkCase> out;
  for (const auto& j : read_jsonl(path)) {
    BenchmarkCase c;
    c.query = j.at("query").get<std::string>();
    c.positive_id = j.at("positive_id").get<std::string>();
    c.pool_ids = j.at("pool_ids").get<std::vector<std::string>>();
    out.push_back(std::move(c));
  }
  return out;
}

void save_benchmark_cases(const std::vector<BenchmarkCase>& cases,
                          const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const BenchmarkCase& c : cases) {
    ordered_json j;
    j["query"] = c.query;
    j["positive_id"] = c.positive_id;
    j["pool_ids"] = c.pool_ids;
    out << j.dump() << "\n";
  }
}

std::vector<RerankCase> load_rerank_cases(const std::string& path) {
  std::vector<RerankCase> out;
  for (const auto& j : read_jsonl(path)) {
    RerankCase c;
    c.query = j.at("query").get<std::string>();
    c.positive_id = j.at("positive_id").get<std::string>();
    c.candidate_ids = j.at("candidate_ids").get<std::vector<std::string>>();
    out.push_back(std::move(c));
  }
  return out;
}

void save_rerank_cases(const std::vector<RerankCase>& cases,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const RerankCase& c : cases) {
    ordered_json j;
    j["query"] = c.query;
    j["positive_id"] = c.positive_id;
    j["candidate_ids"] = c.candidate_ids;
    out << j.dump() << "\n";
  }
}

DescriptionsByFunction group_descriptions(
    const std::vector<DescriptionLabel>& descriptions) {
  DescriptionsByFunction out;
  for (const DescriptionLabel& d : descriptions) {
    out[d.function_ref].push_back(d.text_en);
  }
  return out;
}

MaxSim make_description_max_sim(const DescriptionsByFunction& descs,
                                const DescSim& desc_sim) {
  return [&descs, desc_sim](const std::string& query_text,
                            const std::string& candidate_id) {
    auto it = descs.find(candidate_id);
    if (it == descs.end()) return 0.0;
    double best = 0.0;
    for (const std::string& d : it->second) {
      best = std::max(best, desc_sim(query_text, d));
    }
    return best;
  };
}

EmbedBenchResult build_embedding_benchmark(
    const std::vector<QueryPair>& pairs,
    const std::vector<std::string>& candidate_ids, const MaxSim& max_sim,
    const EmbedBenchConfig& cfg) {
  if (cfg.pool_size < 1) {
    throw std::invalid_argument("build_embedding_benchmark: K must be >= 1");
  }
  EmbedBenchResult result;

  std::vector<std::size_t> order(candidate_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::size_t emitted = 0;
  for (std::size_t qi = 0; qi < pairs.size() && emitted < cfg.max_cases; ++qi) {
    const QueryPair& pair = pairs[qi];
    BenchmarkCase c;
    c.query = pair.query;
    c.positive_id = pair.positive_id;
    c.pool_ids.push_back(pair.positive_id);

    Rng rng(derive_seed(cfg.seed, hash_bytes(pair.positive_id + "#" +
                                                 std::to_string(qi),
                                             0)));
    rng.shuffle(order);

    for (std::size_t k : order) {
      if (c.pool_ids.size() >= cfg.pool_size) break;
      const std::string& cand = candidate_ids[k];
      if (cand == pair.positive_id) continue;
      if (max_sim(pair.query, cand) < cfg.rho_th) {
        c.pool_ids.push_back(cand);
      }
    }

    if (c.pool_ids.size() == cfg.pool_size) {
      result.cases.push_back(std::move(c));
      ++emitted;
    } else {
      result.rejects.push_back(
          {pair.query, pair.positive_id, c.pool_ids.size()});
    }
  }
  return result;
}

std::vector<AuditViolation> audit_embedding_benchmark(
    const std::vector<BenchmarkCase>& cases, const MaxSim& max_sim,
    double rho_th) {
  std::vector<AuditViolation> violations;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const BenchmarkCase& c = cases[i];
    for (const std::string& member : c.pool_ids) {
      if (member == c.positive_id) continue;
      const double sim = max_sim(c.query, member);
      if (sim >= rho_th) violations.push_back({i, member, sim});
    }
  }
  return violations;
}

namespace {

class EmbeddingCache {
 public:
  EmbeddingCache(const Corpus& corpus, const LinearEmbedder& embedder)
      : corpus_(corpus), embedder_(embedder) {}

  const EmbeddingVector& of(const std::string& id) {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    const FunctionRecord* rec = corpus_.find(id);
    if (rec == nullptr) {
      throw DataError("benchmark references unknown function id: " + id);
    }
    return cache_.emplace(id, embedder_.embed(rec->pseudocode)).first->second;
  }

 private:
  const Corpus& corpus_;
  const LinearEmbedder& embedder_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

}  // namespace

RerankBenchResult build_rerank_benchmark(
    const std::vector<BenchmarkCase>& bench, const Corpus& corpus,
    const LinearEmbedder& embedder, std::size_t top_n) {
  if (top_n < 2) {
    throw std::invalid_argument("build_rerank_benchmark: N must be >= 2");
  }
  RerankBenchResult result;
  EmbeddingCache cache(corpus, embedder);

  for (const BenchmarkCase& c : bench) {
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    entries.reserve(c.pool_ids.size());
    for (const std::string& id : c.pool_ids) {
      entries.emplace_back(id, cache.of(id));
    }
    const VectorIndex index = VectorIndex::build(entries);
    const RankedList top = index.search(embedder.embed(c.query), top_n);

    std::size_t positive_rank = 0;  // 1-based; 0 = not retrieved
    for (std::size_t i = 0; i < top.items.size(); ++i) {
      if (top.items[i].id == c.positive_id) {
        positive_rank = i + 1;
        break;
      }
    }
    if (positive_rank == 0) {
      ++result.filtered_missing;
      continue;
    }
    if (positive_rank == 1) {
      ++result.filtered_rank1;
      continue;
    }
    RerankCase rc;
    rc.query = c.query;
    rc.positive_id = c.positive_id;
    rc.candidate_ids.reserve(top.items.size());
    for (const RankedItem& item : top.items) {
      rc.candidate_ids.push_back(item.id);
    }
    result.cases.push_back(std::move(rc));
  }
  return result;
}

double recall_at_k(const Ranks& ranks, std::size_t k) {
  if (k < 1) throw std::invalid_argument("recall_at_k: k must be >= 1");
  if (ranks.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : ranks) {
    if (r.has_value() && *r <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double mrr_at_k(const Ranks& ranks, std::size_t k) {
  if (k < 1) throw std::invalid_argument("mrr_at_k: k must be >= 1");
  if (ranks.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : ranks) {
    if (r.has_value() && *r <= k) {
      total += 1.0 / static_cast<double>(*r);
    }
  }
  return total / static_cast<double>(ranks.size());
}

EvalReport make_report(const Ranks& ranks, std::span<const std::size_t> rec_ks,
                       std::span<const std::size_t> mrr_ks, double elapsed_ms) {
  EvalReport report;
  report.n_queries = ranks.size();
  report.elapsed_ms = elapsed_ms;
  for (std::size_t k : rec_ks) report.rec[k] = recall_at_k(ranks, k);
  for (std::size_t k : mrr_ks) report.mrr[k] = mrr_at_k(ranks, k);
  return report;
}

EmbeddingEvalResult run_embedding_eval(const std::vector<BenchmarkCase>& cases,
                                       const Corpus& corpus,
                                       const LinearEmbedder& embedder,
                                       std::span<const std::size_t> rec_ks,
                                       std::span<const std::size_t> mrr_ks) {
  const auto start = std::chrono::steady_clock::now();
  EmbeddingCache cache(corpus, embedder);
  Ranks ranks;
  ranks.reserve(cases.size());

  for (const BenchmarkCase& c : cases) {
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    entries.reserve(c.pool_ids.size());
    for (const std::string& id : c.pool_ids) {
      entries.emplace_back(id, cache.of(id));
    }
    const VectorIndex index = VectorIndex::build(entries);
    const RankedList full = index.search(embedder.embed(c.query), index.size());
    std::optional<std::size_t> rank;
    for (std::size_t i = 0; i < full.items.size(); ++i) {
      if (full.items[i].id == c.positive_id) {
        rank = i + 1;
        break;
      }
    }
    ranks.push_back(rank);
  }

  const auto end = std::chrono::steady_clock::now();
  const double ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return {make_report(ranks, rec_ks, mrr_ks, ms), std::move(ranks)};
}

std::map<std::string, double> stability_report(const TrialRunner& runner,
                                               std::size_t trials,
                                               std::uint64_t seed) {
  if (trials < 2) {
    throw std::invalid_argument("stability_report: trials must be >= 2");
  }
  std::map<std::string, std::vector<double>> series;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto metrics = runner(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (const auto& [name, value] : metrics) series[name].push_back(value);
  }

  std::map<std::string, double> stds;
  for (const auto& [name, values] : series) {
    if (values.size() != trials) {
      throw DataError("stability_report: metric '" + name +
                      "' missing from some trials");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sample_var = ss / static_cast<double>(values.size() - 1);
    stds[name] = std::sqrt(sample_var) * 100.0;  // percentage points
  }
  return stds;
}

std::vector<BenchmarkCase> subsample_cases(
    const std::vector<BenchmarkCase>& cases, std::size_t count,
    std::uint64_t seed) {
  if (count > cases.size()) {
    throw std::invalid_argument("subsample_cases: count exceeds case count");
  }
  std::vector<std::size_t> order(cases.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.next_below(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::vector<BenchmarkCase> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(cases[order[i]]);
  return out;
}

}  // namespace binseek
