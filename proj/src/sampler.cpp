// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/sampler.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "binseek/errors.hpp"
#include "binseek/features.hpp"
#include "binseek/hashing.hpp"

namespace binseek {

namespace {

using ordered_json = nlohmann::ordered_json;

}  // namespace

LinkTable load_links(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  LinkTable links;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = ordered_json::parse(line);
      links.source_of[j.at("function_id").get<std::string>()] =
          j.at("source_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return links;
}

void save_links(const LinkTable& links, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  // Sorted for stable output.
  std::vector<std::pair<std::string, std::string>> rows(
      links.source_of.begin(), links.source_of.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [fn, src] : rows) {
    ordered_json j;
    j["function_id"] = fn;
    j["source_id"] = src;
    out << j.dump() << "\n";
  }
}

std::vector<DataPair> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<DataPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto j = ordered_json::parse(line);
      DataPair p;
      p.query_id = j.at("query_id").get<std::string>();
      p.positive_id = j.at("positive_id").get<std::string>();
      if (j.contains("hard_negative_id")) {
        p.hard_negative_id = j.at("hard_negative_id").get<std::string>();
      }
      p.random_negative_ids =
          j.at("random_negative_ids").get<std::vector<std::string>>();
      p.seed = j.at("seed").get<std::uint64_t>();
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void save_pairs(const std::vector<DataPair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const DataPair& p : pairs) {
    ordered_json j;
    j["query_id"] = p.query_id;
    j["positive_id"] = p.positive_id;
    if (p.hard_negative_id) j["hard_negative_id"] = *p.hard_negative_id;
    j["random_negative_ids"] = p.random_negative_ids;
    j["seed"] = p.seed;
    out << j.dump() << "\n";
  }
}

DescSim make_hashed_desc_sim(std::uint32_t feature_dim,
                             std::uint64_t hash_seed) {
  auto cache =
      std::make_shared<std::unordered_map<std::string, SparseVec>>();
  return [cache, feature_dim, hash_seed](const std::string& a,
                                         const std::string& b) {
    auto vec_of = [&](const std::string& text) -> const SparseVec& {
      auto it = cache->find(text);
      if (it == cache->end()) {
        it = cache->emplace(text, featurize(text, feature_dim, hash_seed))
                 .first;
      }
      return it->second;
    };
    return sparse_dot(vec_of(a), vec_of(b));
  };
}

std::vector<std::string> sample_random_negatives(const std::string& positive_id,
                                                 const Corpus& corpus,
                                                 const LinkTable& links,
                                                 std::size_t count,
                                                 std::uint64_t seed) {
  const std::string positive_source = links.source_for(positive_id);
  std::vector<const std::string*> eligible;
  eligible.reserve(corpus.size());
  for (const FunctionRecord& r : corpus.records()) {
    if (r.id == positive_id) continue;
    if (links.source_for(r.id) == positive_source) continue;
    eligible.push_back(&r.id);
  }
  if (eligible.size() < count) {
    throw DataError("sample_random_negatives: only " +
                    std::to_string(eligible.size()) +
                    " eligible functions, need " + std::to_string(count));
  }
  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.next_below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
    out.push_back(*eligible[i]);
  }
  return out;
}

std::optional<std::string> mine_hard_negative(
    const std::string& query_text,
    const std::vector<std::pair<std::string, std::string>>& candidates,
    const DescSim& desc_sim, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) {
    throw std::invalid_argument(
        "mine_hard_negative: threshold must lie in (0, 1]");
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored.emplace_back(desc_sim(query_text, candidates[i].second), i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [score, i] : scored) {
    if (score <= threshold) return candidates[i].first;
  }
  return std::nullopt;
}

BuildPairsResult build_pairs(const Corpus& corpus,
                             const std::vector<DescriptionLabel>& descriptions,
                             const LinkTable& links, const SamplerConfig& cfg,
                             const DescSim& desc_sim) {
  BuildPairsResult result;

  // Primary description per function: first occurrence in file order.
  std::unordered_map<std::string, const std::string*> primary_desc;
  std::unordered_map<std::string, std::size_t> ordinal;
  for (const DescriptionLabel& d : descriptions) {
    if (!primary_desc.contains(d.function_ref)) {
      primary_desc.emplace(d.function_ref, &d.text_en);
    }
  }

  for (const DescriptionLabel& d : descriptions) {
    const std::size_t ord = ordinal[d.function_ref]++;
    if (d.grade != Grade::A && d.grade != Grade::B) {
      ++result.skipped;
      continue;
    }
    const FunctionRecord* positive = corpus.find(d.function_ref);
    if (positive == nullptr) {
      ++result.skipped;
      continue;
    }

    const std::string query_id =
        d.function_ref + "#" + std::to_string(ord);
    const std::uint64_t pair_seed =
        derive_seed(cfg.seed, hash_bytes(query_id, 0));

    DataPair pair;
    pair.query_id = query_id;
    pair.positive_id = d.function_ref;
    pair.seed = pair_seed;
    try {
      pair.random_negative_ids = sample_random_negatives(
          d.function_ref, corpus, links, cfg.random_negatives, pair_seed);
    } catch (const DataError&) {
      ++result.skipped;
      continue;
    }

    // Hard-negative candidates: other-source functions that carry a
    // description of their own.
    const std::string positive_source = links.source_for(d.function_ref);
    std::vector<std::pair<std::string, std::string>> candidates;
    candidates.reserve(primary_desc.size());
    for (const FunctionRecord& r : corpus.records()) {
      if (r.id == d.function_ref) continue;
      if (links.source_for(r.id) == positive_source) continue;
      auto it = primary_desc.find(r.id);
      if (it == primary_desc.end()) continue;
      candidates.emplace_back(r.id, *it->second);
    }
    pair.hard_negative_id =
        mine_hard_negative(d.text_en, candidates, desc_sim, cfg.hard_threshold);

    result.pairs.push_back(std::move(pair));
  }
  return result;
}

}  // namespace binseek
