// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "binseek/errors.hpp"
#include "binseek/hashing.hpp"

namespace binseek {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string env_key(const std::string& key) {
  std::string out = "BINSEEK_";
  for (char c : key) {
    out.push_back(c == '.' || c == '-'
                      ? '_'
                      : static_cast<char>(std::toupper(
                            static_cast<unsigned char>(c))));
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("config: bad boolean for " + key + ": " + v);
}

}  // namespace

void PipelineConfig::validate() const {
  if (top_n_retrieve < 1) {
    throw DataError("config: top_n_retrieve must be >= 1");
  }
  if (top_k_return < 1 || top_k_return > top_n_retrieve) {
    throw DataError("config: need 1 <= top_k_return <= top_n_retrieve");
  }
  if (!(score.beta > 0.0)) throw DataError("config: beta must be > 0");
  if (score.k < 1) throw DataError("config: k must be >= 1");
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path);

  std::unordered_map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected key = value");
    }
    kv[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }

  auto value_of = [&kv](const std::string& key) -> std::string {
    if (const char* env = std::getenv(env_key(key).c_str())) {
      return env;
    }
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
  };
  auto int_of = [&](const std::string& key, int fallback) {
    const std::string v = value_of(key);
    if (v.empty()) return fallback;
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw DataError("config: bad integer for " + key + ": " + v);
    }
  };

  PipelineConfig cfg;
  cfg.embedder_model = value_of("embedder_model");
  cfg.reranker_model = value_of("reranker_model");
  cfg.index_path = value_of("index_path");
  cfg.corpus_path = value_of("corpus_path");
  cfg.top_n_retrieve = int_of("top_n_retrieve", cfg.top_n_retrieve);
  cfg.top_k_return = int_of("top_k_return", cfg.top_k_return);
  if (const std::string v = value_of("context_mode"); !v.empty()) {
    cfg.mode = context_mode_from_string(v);
  }
  if (const std::string v = value_of("beta"); !v.empty()) {
    cfg.score.beta = std::stod(v);
  }
  cfg.score.k = int_of("k", cfg.score.k);
  cfg.budget = static_cast<std::size_t>(
      int_of("budget", static_cast<int>(cfg.budget)));
  if (const std::string v = value_of("seed"); !v.empty()) {
    cfg.seed = std::stoull(v);
  }
  if (const std::string v = value_of("timing"); !v.empty()) {
    cfg.timing = parse_bool(v, "timing");
  }
  cfg.validate();
  return cfg;
}

Pipeline Pipeline::load(const PipelineConfig& cfg) {
  cfg.validate();
  Pipeline p;
  p.cfg_ = cfg;
  auto require = [](const std::string& path, const char* what) {
    if (path.empty()) {
      throw DataError(std::string("config: missing ") + what);
    }
    std::ifstream probe(path);
    if (!probe) {
      throw DataError(std::string(what) + " not found: " + path);
    }
  };
  require(cfg.embedder_model, "embedder model");
  require(cfg.reranker_model, "reranker model");
  require(cfg.index_path, "index");
  require(cfg.corpus_path, "corpus");
  p.embedder_ = LinearEmbedder::load(cfg.embedder_model);
  p.reranker_ = LinearReranker::load(cfg.reranker_model);
  p.index_ = VectorIndex::load(cfg.index_path);
  p.corpus_ = load_corpus(cfg.corpus_path);
  return p;
}

SearchResponse Pipeline::search(const std::string& query) const {
  SearchResponse resp;
  using clock = std::chrono::steady_clock;

  const auto t0 = clock::now();
  if (index_.size() == 0) {
    resp.empty_index = true;
    return resp;
  }
  const EmbeddingVector q = embedder_.embed(query);
  resp.stage1 =
      index_.search(q, static_cast<std::size_t>(cfg_.top_n_retrieve));
  const auto t1 = clock::now();
  resp.stage1_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  RerankOptions opts;
  opts.score = cfg_.score;
  opts.budget = cfg_.budget;
  opts.seed = cfg_.seed;
  RankedList reranked =
      rerank(reranker_, query, resp.stage1, corpus_, cfg_.mode, opts);
  if (reranked.items.size() > static_cast<std::size_t>(cfg_.top_k_return)) {
    reranked.items.resize(static_cast<std::size_t>(cfg_.top_k_return));
  }
  resp.final_list = std::move(reranked);
  const auto t2 = clock::now();
  resp.stage2_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return resp;
}

SystemEvalResult evaluate_system(const LinearEmbedder& embedder,
                                 const LinearReranker* reranker,
                                 const Corpus& corpus,
                                 const std::vector<BenchmarkCase>& cases,
                                 const SystemEvalOptions& opts) {
  if (!opts.scorer && reranker == nullptr) {
    throw std::invalid_argument(
        "evaluate_system: need a reranker model or a scorer override");
  }
  RerankScorerFn scorer = opts.scorer;
  if (!scorer) {
    const LinearReranker* model = reranker;
    scorer = [model](const std::string& query, const std::string&,
                     const std::string& input) {
      return model->score(query, input);
    };
  }

  const auto start = std::chrono::steady_clock::now();
  std::unordered_map<std::string, EmbeddingVector> cache;
  auto embed_id = [&](const std::string& id) -> const EmbeddingVector& {
    auto it = cache.find(id);
    if (it != cache.end()) return it->second;
    const FunctionRecord* rec = corpus.find(id);
    if (rec == nullptr) {
      throw DataError("evaluate_system: unknown function id: " + id);
    }
    return cache.emplace(id, embedder.embed(rec->pseudocode)).first->second;
  };

  SystemEvalResult result;
  RerankOptions ropts;
  ropts.score = opts.score;
  ropts.budget = opts.budget;
  ropts.seed = opts.seed;

  for (const BenchmarkCase& c : cases) {
    std::vector<std::pair<std::string, EmbeddingVector>> entries;
    entries.reserve(c.pool_ids.size());
    for (const std::string& id : c.pool_ids) {
      entries.emplace_back(id, embed_id(id));
    }
    const VectorIndex index = VectorIndex::build(entries);
    const EmbeddingVector q = embedder.embed(c.query);

    const RankedList full = index.search(q, index.size());
    std::optional<std::size_t> stage1_rank;
    for (std::size_t i = 0; i < full.items.size(); ++i) {
      if (full.items[i].id == c.positive_id) {
        stage1_rank = i + 1;
        break;
      }
    }
    result.stage1_ranks.push_back(stage1_rank);

    RankedList stage1_top;
    const std::size_t take = std::min(opts.top_n, full.items.size());
    stage1_top.items.assign(full.items.begin(), full.items.begin() + take);

    std::optional<std::size_t> final_rank;
    if (stage1_rank.has_value() && *stage1_rank <= take) {
      const RankedList reranked = rerank_with(scorer, c.query, stage1_top,
                                              corpus, opts.mode, ropts);
      for (std::size_t i = 0; i < reranked.items.size(); ++i) {
        if (reranked.items[i].id == c.positive_id) {
          final_rank = i + 1;
          break;
        }
      }
    }
    result.final_ranks.push_back(final_rank);
  }

  const auto end = std::chrono::steady_clock::now();
  result.total_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  result.stage1 = make_report(result.stage1_ranks, opts.rec_ks, opts.mrr_ks,
                              result.total_ms);
  result.final =
      make_report(result.final_ranks, opts.rec_ks, opts.mrr_ks, result.total_ms);
  return result;
}

}  // namespace binseek
