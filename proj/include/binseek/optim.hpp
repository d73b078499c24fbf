// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace binseek {

/// Shared training hyperparameters for the desk-scale linear models.
struct TrainConfig {
  double learning_rate = 1e-4;
  double lr_min = 1e-5;
  std::uint32_t epochs = 2;
  std::uint32_t batch_size = 32;
  double tau = 0.05;  // InfoNCE temperature; unused by the reranker
  std::uint64_t seed = 0;

  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;  // throws std::invalid_argument
};

/// Cosine learning-rate decay hitting lr_max at step 0 and lr_min at the
/// final step exactly.
struct CosineSchedule {
  double lr_max = 0.0;
  double lr_min = 0.0;
  std::uint64_t total_steps = 1;

  double at(std::uint64_t step) const;
};

/// AdamW with decoupled weight decay. Moments persist across step() calls.
class AdamW {
 public:
  AdamW(std::size_t n_params, double beta1, double beta2, double eps,
        double weight_decay);

  void step(std::vector<double>& params, const std::vector<double>& grad,
            double lr);

 private:
  double beta1_, beta2_, eps_, weight_decay_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

}  // namespace binseek
