/*
 * Copyright 2026 The PACL Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PACL_OPTIMIZER_H_
#define PACL_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pacl/matrix.h"

namespace pacl {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;
};

// Adam with decoupled weight decay:
//   p <- p - lr * wd * p
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
class AdamW {
 public:
  AdamW() = default;
  explicit AdamW(AdamWConfig config) : config_(config) {}

  // Lazily sizes the moments to match `params` on first use.
  void Step(std::span<Matrix* const> params, std::span<const Matrix> grads,
            double lr);

  const AdamWConfig& config() const { return config_; }
  int64_t step_count() const { return step_; }
  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }

  // Used when restoring a checkpoint.
  void Restore(int64_t step, std::vector<Matrix> m, std::vector<Matrix> v);

 private:
  AdamWConfig config_;
  int64_t step_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

// lr(t) = base * (1 + cos(pi * t / T)) / 2, clamped to t in [0, T].
class CosineSchedule {
 public:
  CosineSchedule(double base_lr, int64_t total_steps);

  double LearningRate(int64_t step) const;
  double base_lr() const { return base_lr_; }
  int64_t total_steps() const { return total_steps_; }

 private:
  double base_lr_;
  int64_t total_steps_;
};

}  // namespace pacl

#endif  // PACL_OPTIMIZER_H_
