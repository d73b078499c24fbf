// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "binseek/binio.hpp"
#include "binseek/errors.hpp"
#include "binseek/hashing.hpp"

namespace binseek {

namespace {

constexpr std::string_view kEmbedderMagic = "BSEEKEMB";
constexpr std::uint32_t kEmbedderVersion = 1;

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
}

}  // namespace

double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("cosine_sim: dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += static_cast<double>(a.values[i]) * static_cast<double>(b.values[i]);
  }
  return dot;
}

LinearEmbedder LinearEmbedder::random_init(std::uint32_t feature_dim,
                                           std::uint32_t dim,
                                           std::uint64_t hash_seed,
                                           std::uint64_t init_seed) {
  if (feature_dim == 0 || dim == 0) {
    throw std::invalid_argument("LinearEmbedder: dims must be >= 1");
  }
  LinearEmbedder m;
  m.feature_dim = feature_dim;
  m.dim = dim;
  m.hash_seed = hash_seed;
  m.weights.resize(static_cast<std::size_t>(feature_dim) * dim);
  Rng rng(derive_seed(init_seed, "embedder-init"));
  const double scale =
      std::sqrt(2.0 / static_cast<double>(feature_dim + dim));
  for (double& w : m.weights) w = scale * rng.next_gaussian();
  return m;
}

LinearEmbedder LinearEmbedder::identity(std::uint32_t feature_dim,
                                        std::uint64_t hash_seed) {
  LinearEmbedder m;
  m.feature_dim = feature_dim;
  m.dim = feature_dim;
  m.hash_seed = hash_seed;
  m.weights.assign(static_cast<std::size_t>(feature_dim) * feature_dim, 0.0);
  for (std::uint32_t i = 0; i < feature_dim; ++i) {
    m.weights[static_cast<std::size_t>(i) * feature_dim + i] = 1.0;
  }
  return m;
}

namespace {

// z = W f for sparse unit-norm f; returns false when z is exactly zero.
bool project(const LinearEmbedder& m, const SparseVec& f,
             std::vector<double>& z) {
  z.assign(m.dim, 0.0);
  if (f.degenerate) return false;
  for (std::uint32_t r = 0; r < m.dim; ++r) {
    const double* row = m.weights.data() +
                        static_cast<std::size_t>(r) * m.feature_dim;
    double acc = 0.0;
    for (std::size_t k = 0; k < f.idx.size(); ++k) {
      acc += row[f.idx[k]] * f.val[k];
    }
    z[r] = acc;
  }
  double norm_sq = 0.0;
  for (double v : z) norm_sq += v * v;
  return norm_sq > 0.0;
}

std::vector<double> fallback_axis(std::uint32_t dim) {
  std::vector<double> e(dim, 0.0);
  e[0] = 1.0;
  return e;
}

}  // namespace

std::vector<double> LinearEmbedder::embed_raw(std::string_view text,
                                              bool* degenerate) const {
  const SparseVec f = featurize(text, feature_dim, hash_seed);
  std::vector<double> z;
  if (!project(*this, f, z)) {
    if (degenerate != nullptr) *degenerate = true;
    return fallback_axis(dim);
  }
  double norm_sq = 0.0;
  for (double v : z) norm_sq += v * v;
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : z) v *= inv;
  if (degenerate != nullptr) *degenerate = false;
  return z;
}

EmbeddingVector LinearEmbedder::embed(std::string_view text) const {
  bool degenerate = false;
  const std::vector<double> raw = embed_raw(text, &degenerate);
  EmbeddingVector out;
  out.degenerate = degenerate;
  out.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.values[i] = static_cast<float>(raw[i]);
  }
  return out;
}

void LinearEmbedder::save(const std::string& path) const {
  BinaryWriter w;
  w.put_bytes(kEmbedderMagic);
  w.put_u32(kEmbedderVersion);
  w.put_u32(feature_dim);
  w.put_u32(dim);
  w.put_u64(hash_seed);
  for (double v : weights) w.put_f64(v);
  w.write_file(path);
}

LinearEmbedder LinearEmbedder::load(const std::string& path) {
  BinaryReader r = BinaryReader::from_file(path);
  if (r.get_bytes(kEmbedderMagic.size()) != kEmbedderMagic) {
    throw DataError(path + ": not an embedder model file (bad magic)");
  }
  const std::uint32_t version = r.get_u32();
  if (version != kEmbedderVersion) {
    throw DataError(path + ": unsupported embedder version " +
                    std::to_string(version));
  }
  LinearEmbedder m;
  m.feature_dim = r.get_u32();
  m.dim = r.get_u32();
  m.hash_seed = r.get_u64();
  if (m.feature_dim == 0 || m.dim == 0) {
    throw DataError(path + ": corrupt dims at offset " +
                    std::to_string(r.offset()));
  }
  const std::size_t n = static_cast<std::size_t>(m.feature_dim) * m.dim;
  m.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.weights[i] = r.get_f64();
  if (!r.exhausted()) {
    throw DataError(path + ": trailing bytes at offset " +
                    std::to_string(r.offset()));
  }
  return m;
}

double infonce_loss(const InfoNceBatch& batch, double tau) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("infonce_loss: empty batch");
  if (!(tau > 0.0)) throw std::invalid_argument("infonce_loss: tau must be > 0");
  if (batch.doc_sim.size() != n) {
    throw std::invalid_argument("infonce_loss: doc_sim must be N x N");
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (batch.doc_sim[i].size() != n) {
      throw std::invalid_argument("infonce_loss: doc_sim must be N x N");
    }
    check_finite(batch.hard_sim[i], "infonce_loss");
    double max_logit = batch.hard_sim[i] / tau;
    std::vector<double> logits;
    logits.reserve(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
      check_finite(batch.doc_sim[i][j], "infonce_loss");
      logits.push_back(batch.doc_sim[i][j] / tau);
      max_logit = std::max(max_logit, logits.back());
    }
    logits.push_back(batch.hard_sim[i] / tau);

    double sum_exp = 0.0;
    for (double l : logits) sum_exp += std::exp(l - max_logit);
    const double lse = max_logit + std::log(sum_exp);
    total += lse - batch.doc_sim[i][i] / tau;
  }
  return total / static_cast<double>(n);
}

FeaturizedExample featurize_example(const TrainExample& ex,
                                    std::uint32_t feature_dim,
                                    std::uint64_t hash_seed) {
  return {featurize(ex.query, feature_dim, hash_seed),
          featurize(ex.positive, feature_dim, hash_seed),
          featurize(ex.hard_negative, feature_dim, hash_seed)};
}

namespace {

struct Embedded {
  std::vector<double> e;   // unit-norm output
  double norm = 0.0;       // pre-normalization magnitude
  bool degenerate = false; // constant fallback, no gradient flows
};

Embedded embed_sparse(const LinearEmbedder& m, const SparseVec& f) {
  Embedded out;
  std::vector<double> z;
  if (!project(m, f, z)) {
    out.e = fallback_axis(m.dim);
    out.degenerate = true;
    return out;
  }
  double norm_sq = 0.0;
  for (double v : z) norm_sq += v * v;
  out.norm = std::sqrt(norm_sq);
  out.e = std::move(z);
  for (double& v : out.e) v /= out.norm;
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return d;
}

// Backprop dL/de through e = z / |z| and accumulate the outer product
// (dL/dz) f^T into the weight gradient.
void accumulate_entity_grad(const LinearEmbedder& m, const Embedded& emb,
                            const SparseVec& f,
                            const std::vector<double>& grad_e,
                            std::vector<double>& grad_w) {
  if (emb.degenerate) return;
  const double proj = dot(grad_e, emb.e);
  for (std::uint32_t r = 0; r < m.dim; ++r) {
    const double gz = (grad_e[r] - proj * emb.e[r]) / emb.norm;
    if (gz == 0.0) continue;
    double* row = grad_w.data() + static_cast<std::size_t>(r) * m.feature_dim;
    for (std::size_t k = 0; k < f.idx.size(); ++k) {
      row[f.idx[k]] += gz * f.val[k];
    }
  }
}

}  // namespace

InfoNceBatch make_infonce_batch(const LinearEmbedder& model,
                                std::span<const FeaturizedExample> batch) {
  const std::size_t n = batch.size();
  InfoNceBatch out;
  out.doc_sim.assign(n, std::vector<double>(n, 0.0));
  out.hard_sim.assign(n, 0.0);
  std::vector<Embedded> queries(n), positives(n), hards(n);
  for (std::size_t i = 0; i < n; ++i) {
    queries[i] = embed_sparse(model, batch[i].query);
    positives[i] = embed_sparse(model, batch[i].positive);
    hards[i] = embed_sparse(model, batch[i].hard_negative);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.doc_sim[i][j] = dot(queries[i].e, positives[j].e);
    }
    out.hard_sim[i] = dot(queries[i].e, hards[i].e);
  }
  return out;
}

double infonce_loss_and_grad(const LinearEmbedder& model,
                             std::span<const FeaturizedExample> batch,
                             double tau, std::vector<double>& grad) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("infonce_loss_and_grad: empty batch");
  if (!(tau > 0.0)) {
    throw std::invalid_argument("infonce_loss_and_grad: tau must be > 0");
  }
  if (grad.size() != model.weights.size()) {
    throw std::invalid_argument("infonce_loss_and_grad: grad size mismatch");
  }

  std::vector<Embedded> queries(n), positives(n), hards(n);
  for (std::size_t i = 0; i < n; ++i) {
    queries[i] = embed_sparse(model, batch[i].query);
    positives[i] = embed_sparse(model, batch[i].positive);
    hards[i] = embed_sparse(model, batch[i].hard_negative);
  }

  // Softmax weights per query over candidates [p_0..p_{n-1}, hard_i].
  const double inv_n = 1.0 / static_cast<double>(n);
  double loss = 0.0;
  std::vector<std::vector<double>> w(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> logits(n + 1, 0.0);
    double max_logit = -1e300;
    for (std::size_t j = 0; j < n; ++j) {
      logits[j] = dot(queries[i].e, positives[j].e) / tau;
      max_logit = std::max(max_logit, logits[j]);
    }
    logits[n] = dot(queries[i].e, hards[i].e) / tau;
    max_logit = std::max(max_logit, logits[n]);

    double sum_exp = 0.0;
    for (double l : logits) sum_exp += std::exp(l - max_logit);
    for (std::size_t c = 0; c <= n; ++c) {
      w[i][c] = std::exp(logits[c] - max_logit) / sum_exp;
    }
    loss += (max_logit + std::log(sum_exp)) - logits[i];
  }
  loss *= inv_n;

  // dL/ds_ic = (w_ic - [c == i]) / (n * tau); chain into per-entity
  // embedding gradients before touching the weight matrix.
  const double coef = inv_n / tau;
  std::vector<std::vector<double>> grad_q(n, std::vector<double>(model.dim, 0.0));
  std::vector<std::vector<double>> grad_p(n, std::vector<double>(model.dim, 0.0));
  std::vector<std::vector<double>> grad_h(n, std::vector<double>(model.dim, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double g = coef * (w[i][j] - (i == j ? 1.0 : 0.0));
      if (g == 0.0) continue;
      for (std::uint32_t r = 0; r < model.dim; ++r) {
        grad_q[i][r] += g * positives[j].e[r];
        grad_p[j][r] += g * queries[i].e[r];
      }
    }
    const double gh = coef * w[i][n];
    for (std::uint32_t r = 0; r < model.dim; ++r) {
      grad_q[i][r] += gh * hards[i].e[r];
      grad_h[i][r] += gh * queries[i].e[r];
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    accumulate_entity_grad(model, queries[i], batch[i].query, grad_q[i], grad);
    accumulate_entity_grad(model, positives[i], batch[i].positive, grad_p[i],
                           grad);
    accumulate_entity_grad(model, hards[i], batch[i].hard_negative, grad_h[i],
                           grad);
  }
  return loss;
}

EmbedderTrainResult train_embedder(const std::vector<TrainExample>& examples,
                                   std::uint32_t feature_dim, std::uint32_t dim,
                                   std::uint64_t hash_seed,
                                   const TrainConfig& cfg) {
  if (examples.empty()) {
    throw std::invalid_argument("train_embedder: no training pairs");
  }
  cfg.validate();

  std::vector<FeaturizedExample> featurized;
  featurized.reserve(examples.size());
  for (const TrainExample& ex : examples) {
    featurized.push_back(featurize_example(ex, feature_dim, hash_seed));
  }

  EmbedderTrainResult result;
  result.model =
      LinearEmbedder::random_init(feature_dim, dim, hash_seed, cfg.seed);

  const std::size_t n = examples.size();
  const std::uint64_t batches_per_epoch =
      (n + cfg.batch_size - 1) / cfg.batch_size;
  const CosineSchedule schedule{cfg.learning_rate, cfg.lr_min,
                                batches_per_epoch * cfg.epochs};
  AdamW opt(result.model.weights.size(), cfg.beta1, cfg.beta2, cfg.eps,
            cfg.weight_decay);

  std::vector<double> grad(result.model.weights.size(), 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<FeaturizedExample> batch;

  std::uint64_t step = 0;
  result.first_lr = schedule.at(0);
  for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng rng(derive_seed(derive_seed(cfg.seed, "shuffle"), epoch));
    rng.shuffle(order);

    double epoch_total = 0.0;
    std::size_t epoch_batches = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t end = std::min(n, start + cfg.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch.push_back(featurized[order[k]]);
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      const double loss =
          infonce_loss_and_grad(result.model, batch, cfg.tau, grad);
      const double lr = schedule.at(step);
      result.last_lr = lr;
      opt.step(result.model.weights, grad, lr);
      ++step;
      epoch_total += loss;
      ++epoch_batches;
    }
    result.epoch_loss.push_back(epoch_total /
                                static_cast<double>(epoch_batches));
  }
  return result;
}

}  // namespace binseek
