// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace binseek {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  }
  if (lr_min > learning_rate) {
    throw std::invalid_argument("TrainConfig: lr_min must be <= learning_rate");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("TrainConfig: tau must be > 0");
  if (epochs == 0) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (batch_size == 0) {
    throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
  }
}

double CosineSchedule::at(std::uint64_t step) const {
  if (total_steps <= 1) return lr_max;
  if (step >= total_steps) return lr_min;
  const double progress = static_cast<double>(step) /
                          static_cast<double>(total_steps - 1);
  const double cosine = 0.5 * (1.0 + std::cos(3.14159265358979323846 * progress));
  return lr_min + (lr_max - lr_min) * cosine;
}

AdamW::AdamW(std::size_t n_params, double beta1, double beta2, double eps,
             double weight_decay)
    : beta1_(beta1),
      beta2_(beta2),
      eps_(eps),
      weight_decay_(weight_decay),
      m_(n_params, 0.0),
      v_(n_params, 0.0) {}

void AdamW::step(std::vector<double>& params, const std::vector<double>& grad,
                 double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("AdamW::step: size mismatch");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + eps_) +
                       weight_decay_ * params[i]);
  }
}

}  // namespace binseek
