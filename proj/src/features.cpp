// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "binseek/hashing.hpp"
#include "binseek/tokenizer.hpp"

namespace binseek {

SparseVec featurize(std::string_view text, std::uint32_t feature_dim,
                    std::uint64_t hash_seed) {
  if (feature_dim == 0) {
    throw std::invalid_argument("featurize: feature_dim must be >= 1");
  }
  const std::vector<Token> tokens = tokenize(text);
  SparseVec out;
  if (tokens.empty()) {
    out.degenerate = true;
    return out;
  }

  std::vector<std::pair<std::uint32_t, double>> accum;
  accum.reserve(tokens.size());
  for (const Token& t : tokens) {
    std::string key;
    key.reserve(t.text.size() + 1);
    key.push_back(static_cast<char>(t.kind));
    key.append(t.text);
    const std::uint64_t h = hash_bytes(key, hash_seed);
    const auto bucket = static_cast<std::uint32_t>(h % feature_dim);
    const double sign = (h >> 63) ? 1.0 : -1.0;
    accum.emplace_back(bucket, sign);
  }
  std::sort(accum.begin(), accum.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double norm_sq = 0.0;
  for (std::size_t i = 0; i < accum.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < accum.size() && accum[j].first == accum[i].first) {
      sum += accum[j].second;
      ++j;
    }
    if (sum != 0.0) {
      out.idx.push_back(accum[i].first);
      out.val.push_back(sum);
      norm_sq += sum * sum;
    }
    i = j;
  }
  if (norm_sq == 0.0) {
    // Signs can cancel exactly; treat like an empty input.
    out.idx.clear();
    out.val.clear();
    out.degenerate = true;
    return out;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out.val) v *= inv;
  return out;
}

double sparse_dot(const SparseVec& a, const SparseVec& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.idx.size() && j < b.idx.size()) {
    if (a.idx[i] < b.idx[j]) {
      ++i;
    } else if (a.idx[i] > b.idx[j]) {
      ++j;
    } else {
      dot += a.val[i] * b.val[j];
      ++i;
      ++j;
    }
  }
  return dot;
}

}  // namespace binseek
