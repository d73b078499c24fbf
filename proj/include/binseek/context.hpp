// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binseek/corpus.hpp"

namespace binseek {

struct ScoreParams {
  double beta = 15.0;  // string-density scaling; must be > 0
  int k = 5;           // callees to keep; must be >= 1
};

enum class ContextMode : std::uint8_t { Heuristic, Random, None };

const char* to_string(ContextMode mode);
ContextMode context_mode_from_string(std::string_view s);

/// Zero-centered sigmoid 2/(1+e^-x) - 1 (= tanh(x/2)). Maps [0, inf) onto
/// [0, 1) with value 0 at 0, so a string-free function contributes nothing.
double zero_centered_sigmoid(double x);

/// 1 iff the function kept a name symbol.
int name_indicator(const FunctionRecord& f);

/// Name indicator for a callee reference: external imports retain their
/// names (1); resolvable records defer to their name_symbol; dangling
/// references contribute 0.
int callee_name_indicator(const Corpus& corpus, const std::string& callee_id);

/// Fraction of string-kind tokens among all tokens; 0 for an empty stream.
double string_density(const FunctionRecord& f);

/// Informative score in [0, 3): name indicator + squashed string density +
/// mean name indicator over callees (0 when there are none).
double informative_score(const FunctionRecord& f, const Corpus& corpus,
                         const ScoreParams& params);

struct ContextBundle {
  std::string target_id;
  // (callee id, informative score), selection order. Heuristic mode sorts
  // by descending score with ties broken by (address asc, id asc).
  std::vector<std::pair<std::string, double>> selected;
  ContextMode mode = ContextMode::None;
  int k = 0;
};

/// Pick up to k direct callees of `target` as reranker context. Only
/// callees resolvable to corpus records are eligible for the bundle body;
/// externals still count toward informative scores.
ContextBundle select_context(const FunctionRecord& target, const Corpus& corpus,
                             const ScoreParams& params, ContextMode mode,
                             std::uint64_t seed);

inline constexpr std::size_t kDefaultTokenBudget = 16384;

/// Deterministic reranker input: query, target pseudocode, then selected
/// callees in bundle order, each introduced by a header naming its id.
/// Callees are appended whole; assembly stops before the first callee that
/// would push the token count past `budget`. Throws OutOfContextError when
/// query + target alone do not fit.
std::string assemble_input(const std::string& query,
                           const FunctionRecord& target,
                           const ContextBundle& bundle, const Corpus& corpus,
                           std::size_t budget = kDefaultTokenBudget);

}  // namespace binseek
