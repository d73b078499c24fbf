// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/context.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "binseek/errors.hpp"
#include "binseek/hashing.hpp"

namespace binseek {

const char* to_string(ContextMode mode) {
  switch (mode) {
    case ContextMode::Heuristic: return "heuristic";
    case ContextMode::Random: return "random";
    case ContextMode::None: return "none";
  }
  return "?";
}

ContextMode context_mode_from_string(std::string_view s) {
  if (s == "heuristic") return ContextMode::Heuristic;
  if (s == "random") return ContextMode::Random;
  if (s == "none") return ContextMode::None;
  throw std::invalid_argument("unknown context mode: " + std::string(s));
}

double zero_centered_sigmoid(double x) { return std::tanh(0.5 * x); }

int name_indicator(const FunctionRecord& f) {
  return f.name_symbol.has_value() ? 1 : 0;
}

int callee_name_indicator(const Corpus& corpus, const std::string& callee_id) {
  if (is_external_ref(callee_id)) return 1;
  const FunctionRecord* rec = corpus.find(callee_id);
  if (rec == nullptr) return 0;
  return name_indicator(*rec);
}

double string_density(const FunctionRecord& f) {
  if (f.tokens.empty()) return 0.0;
  std::size_t strings = 0;
  for (const Token& t : f.tokens) {
    if (t.kind == TokenKind::String) ++strings;
  }
  return static_cast<double>(strings) / static_cast<double>(f.tokens.size());
}

double informative_score(const FunctionRecord& f, const Corpus& corpus,
                         const ScoreParams& params) {
  if (!(params.beta > 0.0)) {
    throw std::invalid_argument("informative_score: beta must be > 0");
  }
  double score = static_cast<double>(name_indicator(f));
  score += zero_centered_sigmoid(params.beta * string_density(f));
  if (!f.callee_ids.empty()) {
    double named = 0.0;
    for (const std::string& callee : f.callee_ids) {
      named += static_cast<double>(callee_name_indicator(corpus, callee));
    }
    score += named / static_cast<double>(f.callee_ids.size());
  }
  return score;
}

ContextBundle select_context(const FunctionRecord& target, const Corpus& corpus,
                             const ScoreParams& params, ContextMode mode,
                             std::uint64_t seed) {
  if (params.k < 1) {
    throw std::invalid_argument("select_context: k must be >= 1");
  }
  ContextBundle bundle;
  bundle.target_id = target.id;
  bundle.mode = mode;
  bundle.k = params.k;
  if (mode == ContextMode::None) return bundle;

  // Candidates: direct callees resolvable in the corpus, first occurrence
  // wins. Externals have no pseudocode and stay out of the bundle body.
  struct Candidate {
    const FunctionRecord* rec;
    double score;
  };
  std::vector<Candidate> candidates;
  std::unordered_set<std::string> seen;
  for (const std::string& callee : target.callee_ids) {
    if (is_external_ref(callee)) continue;
    if (!seen.insert(callee).second) continue;
    const FunctionRecord* rec = corpus.find(callee);
    if (rec == nullptr) continue;
    candidates.push_back({rec, informative_score(*rec, corpus, params)});
  }

  const std::size_t take =
      std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(params.k));

  if (mode == ContextMode::Heuristic) {
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                if (a.score != b.score) return a.score > b.score;
                if (a.rec->address != b.rec->address) {
                  return a.rec->address < b.rec->address;
                }
                return a.rec->id < b.rec->id;
              });
    for (std::size_t i = 0; i < take; ++i) {
      bundle.selected.emplace_back(candidates[i].rec->id, candidates[i].score);
    }
  } else {  // Random
    Rng rng(seed);
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Partial Fisher-Yates; the first `take` slots are the sample, in
    // draw order.
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng.next_below(order.size() - i);
      std::swap(order[i], order[j]);
    }
    for (std::size_t i = 0; i < take; ++i) {
      const Candidate& c = candidates[order[i]];
      bundle.selected.emplace_back(c.rec->id, c.score);
    }
  }
  return bundle;
}

namespace {

std::size_t token_cost(const std::string& text) { return tokenize(text).size(); }

}  // namespace

std::string assemble_input(const std::string& query,
                           const FunctionRecord& target,
                           const ContextBundle& bundle, const Corpus& corpus,
                           std::size_t budget) {
  std::string base = "[query]\n" + query + "\n[target]\n" + target.pseudocode;
  std::size_t used = token_cost(base);
  if (used > budget) {
    throw OutOfContextError(
        "assemble_input: query + target need " + std::to_string(used) +
        " tokens but budget is " + std::to_string(budget));
  }

  // Blocks are newline-separated, so token costs are additive.
  for (const auto& [callee_id, score] : bundle.selected) {
    (void)score;
    const FunctionRecord* rec = corpus.find(callee_id);
    if (rec == nullptr) continue;
    const std::string block =
        "\n[callee " + callee_id + "]\n" + rec->pseudocode;
    const std::size_t cost = token_cost(block);
    if (used + cost > budget) break;
    base += block;
    used += cost;
  }
  return base;
}

}  // namespace binseek
