// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/reranker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binseek/binio.hpp"
#include "binseek/errors.hpp"
#include "binseek/hashing.hpp"

namespace binseek {

namespace {

constexpr std::string_view kRerankerMagic = "BSEEKRRK";
constexpr std::uint32_t kRerankerVersion = 1;
constexpr double kBceEps = 1e-12;

bool relevance_token(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::String ||
         t.kind == TokenKind::Number;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

SparseVec joint_features(std::string_view query, std::string_view input,
                         std::uint32_t feature_dim, std::uint64_t hash_seed,
                         std::size_t cross_cap) {
  if (feature_dim == 0) {
    throw std::invalid_argument("joint_features: feature_dim must be >= 1");
  }
  const std::uint64_t query_seed = derive_seed(hash_seed, "rerank-query");
  const std::uint64_t input_seed = derive_seed(hash_seed, "rerank-input");
  const std::uint64_t cross_seed = derive_seed(hash_seed, "rerank-cross");

  std::vector<std::uint64_t> query_hashes;
  std::vector<std::uint64_t> input_hashes;
  for (const Token& t : tokenize(query)) {
    if (!relevance_token(t)) continue;
    std::string key;
    key.push_back(static_cast<char>(t.kind));
    key.append(t.text);
    query_hashes.push_back(hash_bytes(key, 0));
  }
  for (const Token& t : tokenize(input)) {
    if (!relevance_token(t)) continue;
    std::string key;
    key.push_back(static_cast<char>(t.kind));
    key.append(t.text);
    input_hashes.push_back(hash_bytes(key, 0));
  }

  std::vector<std::pair<std::uint32_t, double>> accum;
  accum.reserve(query_hashes.size() + input_hashes.size() + cross_cap);
  auto emit = [&](std::uint64_t h) {
    accum.emplace_back(static_cast<std::uint32_t>(h % feature_dim),
                       (h >> 63) ? 1.0 : -1.0);
  };
  for (std::uint64_t h : query_hashes) emit(mix64(h ^ query_seed));
  for (std::uint64_t h : input_hashes) emit(mix64(h ^ input_seed));

  // Cross pairs in reading order, capped so pathological inputs cannot
  // explode the feature count.
  std::size_t crosses = 0;
  for (std::uint64_t qh : query_hashes) {
    if (crosses >= cross_cap) break;
    for (std::uint64_t ih : input_hashes) {
      if (crosses >= cross_cap) break;
      emit(mix64((qh * 0x9e3779b97f4a7c15ULL) ^ mix64(ih) ^ cross_seed));
      ++crosses;
    }
  }

  SparseVec out;
  if (accum.empty()) {
    out.degenerate = true;
    return out;
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
    out.idx.clear();
    out.val.clear();
    out.degenerate = true;
    return out;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out.val) v *= inv;
  return out;
}

LinearReranker LinearReranker::zeros(std::uint32_t feature_dim,
                                     std::uint64_t hash_seed) {
  LinearReranker m;
  m.feature_dim = feature_dim;
  m.hash_seed = hash_seed;
  m.weights.assign(feature_dim, 0.0);
  m.bias = 0.0;
  return m;
}

double LinearReranker::score(std::string_view query,
                             std::string_view input) const {
  const SparseVec phi = joint_features(query, input, feature_dim, hash_seed);
  double z = bias;
  for (std::size_t k = 0; k < phi.idx.size(); ++k) {
    z += weights[phi.idx[k]] * phi.val[k];
  }
  return sigmoid(z);
}

void LinearReranker::save(const std::string& path) const {
  BinaryWriter w;
  w.put_bytes(kRerankerMagic);
  w.put_u32(kRerankerVersion);
  w.put_u32(feature_dim);
  w.put_u64(hash_seed);
  w.put_f64(bias);
  for (double v : weights) w.put_f64(v);
  w.write_file(path);
}

LinearReranker LinearReranker::load(const std::string& path) {
  BinaryReader r = BinaryReader::from_file(path);
  if (r.get_bytes(kRerankerMagic.size()) != kRerankerMagic) {
    throw DataError(path + ": not a reranker model file (bad magic)");
  }
  const std::uint32_t version = r.get_u32();
  if (version != kRerankerVersion) {
    throw DataError(path + ": unsupported reranker version " +
                    std::to_string(version));
  }
  LinearReranker m;
  m.feature_dim = r.get_u32();
  m.hash_seed = r.get_u64();
  m.bias = r.get_f64();
  if (m.feature_dim == 0) {
    throw DataError(path + ": corrupt feature_dim at offset " +
                    std::to_string(r.offset()));
  }
  m.weights.resize(m.feature_dim);
  for (auto& v : m.weights) v = r.get_f64();
  if (!r.exhausted()) {
    throw DataError(path + ": trailing bytes at offset " +
                    std::to_string(r.offset()));
  }
  return m;
}

BceLoss bce_loss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty() || scores.size() != labels.size()) {
    throw std::invalid_argument("bce_loss: need equal, non-empty score/label spans");
  }
  BceLoss out;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double p = scores[i];
    if (!std::isfinite(p)) {
      throw std::invalid_argument("bce_loss: non-finite score");
    }
    if (p < kBceEps || p > 1.0 - kBceEps) {
      p = std::clamp(p, kBceEps, 1.0 - kBceEps);
      ++out.clamped;
    }
    const int y = labels[i];
    if (y != 0 && y != 1) {
      throw std::invalid_argument("bce_loss: labels must be 0 or 1");
    }
    total += y == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  out.value = total / static_cast<double>(scores.size());
  return out;
}

RerankerTrainResult train_reranker(const std::vector<RerankSample>& samples,
                                   std::uint32_t feature_dim,
                                   std::uint64_t hash_seed,
                                   const TrainConfig& cfg) {
  if (samples.empty()) {
    throw std::invalid_argument("train_reranker: no samples");
  }
  cfg.validate();
  bool has_pos = false, has_neg = false;
  for (const RerankSample& s : samples) {
    if (s.label == 1) has_pos = true;
    else if (s.label == 0) has_neg = true;
    else throw std::invalid_argument("train_reranker: labels must be 0 or 1");
  }
  if (!has_pos || !has_neg) {
    throw std::invalid_argument(
        "train_reranker: degenerate objective, need both classes");
  }

  std::vector<SparseVec> features;
  features.reserve(samples.size());
  for (const RerankSample& s : samples) {
    features.push_back(joint_features(s.query, s.assembled_input, feature_dim,
                                      hash_seed));
  }

  RerankerTrainResult result;
  result.model = LinearReranker::zeros(feature_dim, hash_seed);

  // Parameter vector layout: [weights..., bias].
  std::vector<double> params(feature_dim + 1, 0.0);
  std::vector<double> grad(feature_dim + 1, 0.0);

  const std::size_t n = samples.size();
  const std::uint64_t batches_per_epoch =
      (n + cfg.batch_size - 1) / cfg.batch_size;
  const CosineSchedule schedule{cfg.learning_rate, cfg.lr_min,
                                batches_per_epoch * cfg.epochs};
  AdamW opt(params.size(), cfg.beta1, cfg.beta2, cfg.eps, cfg.weight_decay);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::uint64_t step = 0;
  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed(derive_seed(cfg.seed, "rerank-shuffle"), epoch));
    rng.shuffle(order);

    double epoch_total = 0.0;
    std::size_t epoch_batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      const double inv_m = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t s = order[k];
        const SparseVec& phi = features[s];
        double z = params[feature_dim];
        for (std::size_t t = 0; t < phi.idx.size(); ++t) {
          z += params[phi.idx[t]] * phi.val[t];
        }
        const double p = sigmoid(z);
        const double y = static_cast<double>(samples[s].label);
        const double pc = std::clamp(p, kBceEps, 1.0 - kBceEps);
        batch_loss += y == 1.0 ? -std::log(pc) : -std::log(1.0 - pc);
        const double dz = (p - y) * inv_m;
        for (std::size_t t = 0; t < phi.idx.size(); ++t) {
          grad[phi.idx[t]] += dz * phi.val[t];
        }
        grad[feature_dim] += dz;
      }
      opt.step(params, grad, schedule.at(step));
      ++step;
      epoch_total += batch_loss * inv_m;
      ++epoch_batches;
    }
    result.epoch_loss.push_back(epoch_total /
                                static_cast<double>(epoch_batches));
  }

  result.model.weights.assign(params.begin(), params.begin() + feature_dim);
  result.model.bias = params[feature_dim];
  return result;
}

RankedList rerank_with(const RerankScorerFn& scorer, const std::string& query,
                       const RankedList& candidates, const Corpus& corpus,
                       ContextMode mode, const RerankOptions& opts) {
  if (candidates.empty()) {
    throw std::invalid_argument("rerank: empty candidate list");
  }
  struct Scored {
    std::size_t original_rank;
    double score;
    const std::string* id;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.items.size(); ++i) {
    const std::string& id = candidates.items[i].id;
    const FunctionRecord* rec = corpus.find(id);
    if (rec == nullptr) {
      throw DataError("rerank: candidate id not in corpus: " + id);
    }
    // Per-candidate seed keeps random-mode context independent of the
    // candidate's position in the list.
    const std::uint64_t seed = derive_seed(opts.seed, hash_bytes(id, 0));
    const ContextBundle bundle =
        select_context(*rec, corpus, opts.score, mode, seed);
    const std::string input =
        assemble_input(query, *rec, bundle, corpus, opts.budget);
    scored.push_back({i, scorer(query, id, input), &id});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.original_rank < b.original_rank;
  });
  RankedList out;
  out.items.reserve(scored.size());
  for (const Scored& s : scored) out.items.push_back({*s.id, s.score});
  return out;
}

RankedList rerank(const LinearReranker& model, const std::string& query,
                  const RankedList& candidates, const Corpus& corpus,
                  ContextMode mode, const RerankOptions& opts) {
  return rerank_with(
      [&model](const std::string& q, const std::string&,
               const std::string& input) { return model.score(q, input); },
      query, candidates, corpus, mode, opts);
}

}  // namespace binseek
