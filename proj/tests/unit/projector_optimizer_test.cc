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

#include <cmath>
#include <numbers>

#include "pacl/optimizer.h"
#include "pacl/projector.h"
#include "pacl/rng.h"
#include "test_util.h"

namespace pacl {
namespace {

TEST(ProjectorTest, SameSeedIsBitIdentical) {
  ProjectorInit init;
  init.hidden_dim = 6;
  const Projector a = Projector::Create(5, 4, 9, init);
  const Projector b = Projector::Create(5, 4, 9, init);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == Projector::Create(5, 4, 10, init));
  EXPECT_TRUE(a.has_hidden());
  EXPECT_EQ(a.ParameterNames().size(), a.Parameters().size());
}

TEST(ProjectorTest, XavierBoundAndZeroBias) {
  const Projector p = Projector::Create(10, 6, 1);
  const auto params = p.Parameters();
  const double bound = std::sqrt(6.0 / 16.0);
  EXPECT_LE(params[0]->cwiseAbs().maxCoeff(), bound);
  EXPECT_TRUE(params[1]->isZero(0.0));
}

TEST(ProjectorTest, IdentityNormalizesInput) {
  ProjectorInit init;
  init.identity = true;
  const Projector p = Projector::Create(2, 2, 0, init);
  Matrix x(1, 2);
  x << 3, 4;
  const Matrix z = p.Forward(x);
  EXPECT_NEAR(z(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(z(0, 1), 0.8, 1e-15);
  x.setZero();
  EXPECT_PACL_ERROR(p.Forward(x), ErrorCode::kNormalizationError);
}

TEST(ProjectorTest, OutputsAreUnitNorm) {
  Rng rng(2);
  const Projector p = Projector::Create(7, 3, 4);
  Matrix x(20, 7);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  const Matrix z = p.Forward(x);
  for (Eigen::Index i = 0; i < z.rows(); ++i) EXPECT_NEAR(z.row(i).norm(), 1.0, 1e-12);
  EXPECT_PACL_ERROR(p.Forward(Matrix(2, 6)), ErrorCode::kDimMismatch);
}

TEST(ProjectorTest, InitErrors) {
  EXPECT_PACL_ERROR(Projector::Create(0, 3, 0), ErrorCode::kBadDims);
  EXPECT_PACL_ERROR(Projector::Create(3, -1, 0), ErrorCode::kBadDims);
  ProjectorInit init;
  init.uniform_bound = 0.0;
  EXPECT_PACL_ERROR(Projector::Create(3, 3, 0, init), ErrorCode::kDegenerateInit);
  init = {};
  init.identity = true;
  EXPECT_PACL_ERROR(Projector::Create(3, 2, 0, init), ErrorCode::kBadDims);
}

TEST(ProjectorTest, BackwardMatchesFiniteDifferences) {
  Rng rng(3);
  ProjectorInit init;
  init.hidden_dim = 3;
  Projector p = Projector::Create(4, 3, 5, init);
  Matrix x(3, 4), w(3, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.Normal();
  Projector::Cache cache;
  p.Forward(x, &cache);
  const std::vector<Matrix> grads = p.Backward(cache, w);
  const auto params = p.Parameters();
  const double h = 1e-6;
  for (size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < params[k]->size(); ++i) {
      const double saved = params[k]->data()[i];
      params[k]->data()[i] = saved + h;
      const double up = p.Forward(x).cwiseProduct(w).sum();
      params[k]->data()[i] = saved - h;
      const double down = p.Forward(x).cwiseProduct(w).sum();
      params[k]->data()[i] = saved;
      EXPECT_NEAR(grads[k].data()[i], (up - down) / (2 * h), 1e-6);
    }
  }
}

TEST(AdamWTest, ZeroLearningRateIsNoOp) {
  Matrix p(2, 2);
  p << 1, -2, 3, 0.5;
  const Matrix before = p;
  Matrix g = Matrix::Ones(2, 2);
  AdamW opt;
  Matrix* params[] = {&p};
  opt.Step(params, std::span<const Matrix>(&g, 1), 0.0);
  EXPECT_EQ(p, before);
  EXPECT_EQ(opt.step_count(), 1);
}

TEST(AdamWTest, ZeroGradientWithoutDecayIsNoOp) {
  Matrix p = Matrix::Constant(2, 3, 0.7);
  const Matrix before = p;
  const Matrix g = Matrix::Zero(2, 3);
  AdamWConfig config;
  config.weight_decay = 0.0;
  AdamW opt(config);
  Matrix* params[] = {&p};
  for (int s = 0; s < 3; ++s) opt.Step(params, std::span<const Matrix>(&g, 1), 0.1);
  EXPECT_EQ(p, before);
}

TEST(AdamWTest, FirstStepMovesByLearningRate) {
  Matrix p(1, 2);
  p << 1.0, 1.0;
  Matrix g(1, 2);
  g << 0.3, -5.0;
  AdamWConfig config;
  config.weight_decay = 0.1;
  AdamW opt(config);
  Matrix* params[] = {&p};
  opt.Step(params, std::span<const Matrix>(&g, 1), 0.01);
  // Bias-corrected first step is sign(g), plus decoupled decay lr*wd*p.
  EXPECT_NEAR(p(0, 0), 1.0 - 0.01 * 0.1 - 0.01, 1e-9);
  EXPECT_NEAR(p(0, 1), 1.0 - 0.01 * 0.1 + 0.01, 1e-9);
}

TEST(CosineScheduleTest, Endpoints) {
  const CosineSchedule s(0.1, 100);
  EXPECT_DOUBLE_EQ(s.LearningRate(0), 0.1);
  EXPECT_NEAR(s.LearningRate(50), 0.05, 1e-15);
  EXPECT_NEAR(s.LearningRate(100), 0.0, 1e-18);
  EXPECT_NEAR(s.LearningRate(25), 0.1 * 0.5 * (1 + std::cos(std::numbers::pi / 4)), 1e-15);
  for (int64_t t = 1; t <= 100; ++t) EXPECT_LE(s.LearningRate(t), s.LearningRate(t - 1));
}

}  // namespace
}  // namespace pacl
