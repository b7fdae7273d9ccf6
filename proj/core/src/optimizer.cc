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

#include "pacl/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pacl/error.h"

namespace pacl {

void AdamW::Step(std::span<Matrix* const> params, std::span<const Matrix> grads,
                 double lr) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kDimMismatch, "parameter and gradient counts differ");
  }
  if (m_.empty()) {
    for (const Matrix* p : params) {
      m_.push_back(Matrix::Zero(p->rows(), p->cols()));
      v_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (m_.size() != params.size()) {
    throw Error(ErrorCode::kDimMismatch, "optimizer state does not match parameters");
  }
  ++step_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    const Matrix& g = grads[k];
    if (g.rows() != p.rows() || g.cols() != p.cols()) {
      throw Error(ErrorCode::kDimMismatch, "gradient shape mismatch");
    }
    p *= 1.0 - lr * config_.weight_decay;
    m_[k] = config_.beta1 * m_[k] + (1.0 - config_.beta1) * g;
    v_[k] = config_.beta2 * v_[k] + (1.0 - config_.beta2) * g.cwiseAbs2();
    const auto m_hat = m_[k].array() / bias1;
    const auto v_hat = v_[k].array() / bias2;
    p.array() -= lr * m_hat / (v_hat.sqrt() + config_.eps);
  }
}

void AdamW::Restore(int64_t step, std::vector<Matrix> m, std::vector<Matrix> v) {
  if (m.size() != v.size() || step < 0) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent optimizer state");
  }
  step_ = step;
  m_ = std::move(m);
  v_ = std::move(v);
}

CosineSchedule::CosineSchedule(double base_lr, int64_t total_steps)
    : base_lr_(base_lr), total_steps_(total_steps) {
  if (base_lr < 0.0 || total_steps <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cosine schedule needs lr >= 0 and a positive step count");
  }
}

double CosineSchedule::LearningRate(int64_t step) const {
  const double t = static_cast<double>(std::clamp<int64_t>(step, 0, total_steps_));
  return base_lr_ * 0.5 *
         (1.0 + std::cos(std::numbers::pi * t / static_cast<double>(total_steps_)));
}

}  // namespace pacl
