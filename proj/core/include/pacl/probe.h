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

#ifndef PACL_PROBE_H_
#define PACL_PROBE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "pacl/matrix.h"
#include "pacl/projector.h"

namespace pacl {

struct ProbeOptions {
  int max_epochs = 2000;
  double lr = 0.5;
  uint64_t seed = 0;
  // Stop when the full-batch loss changes by less than this.
  double tol = 1e-6;
  // 0 infers max(label) + 1.
  int num_classes = 0;
  // Scale of the uniform initial weights.
  double init_scale = 0.01;
};

// Multinomial logistic regression: logits = x W^T + b.
struct LinearClassifier {
  Matrix weight;  // C x d
  Matrix bias;    // 1 x C
  int epochs_run = 0;
  double final_loss = 0.0;

  Matrix Logits(const Matrix& features) const;
  // Argmax, ties to the lowest class.
  std::vector<int> Predict(const Matrix& features) const;
};

// Full-batch gradient descent on mean cross-entropy, no regularization.
// Throws kSingleClass when fewer than two distinct labels are present and
// kTooFewPoints when n < number of classes.
LinearClassifier TrainLinearProbe(const Matrix& features, std::span<const int> labels,
                                  const ProbeOptions& options = {});

// One independent sigmoid probe per class; returns n x C scores for the
// ranking metrics.
struct MultiLabelProbe {
  Matrix weight;  // C x d
  Matrix bias;    // 1 x C

  Matrix Scores(const Matrix& features) const;
};
MultiLabelProbe TrainMultiLabelProbe(const Matrix& features,
                                     const std::vector<std::vector<int>>& label_sets,
                                     int num_classes, const ProbeOptions& options = {});

// Least-squares linear map with bias (QR solve).
struct LinearRegressor {
  Matrix weight;  // out x d
  Matrix bias;    // 1 x out

  Matrix Predict(const Matrix& features) const;
};
LinearRegressor FitLinearRegressor(const Matrix& features, const Matrix& targets);

// Cosine between each projected image and the mean projected prompt of
// each class; argmax with ties to the lowest class. prompt_classes[r] is
// the class of prompt row r. Throws kNoPrompts for a class without rows.
std::vector<int> ZeroShotClassify(const Matrix& raw_images, const Matrix& raw_prompts,
                                  std::span<const int> prompt_classes, int num_classes,
                                  const Projectors& projectors);
// Same scores, n x C.
Matrix ZeroShotScores(const Matrix& raw_images, const Matrix& raw_prompts,
                      std::span<const int> prompt_classes, int num_classes,
                      const Projectors& projectors);

}  // namespace pacl

#endif  // PACL_PROBE_H_
