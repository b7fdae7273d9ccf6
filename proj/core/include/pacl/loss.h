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

#ifndef PACL_LOSS_H_
#define PACL_LOSS_H_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "pacl/matrix.h"
#include "pacl/pair_builder.h"

namespace pacl {

// Masked, set-valued InfoNCE. For image anchor i with similarities
// s_ij = zv_i . zt_j:
//
//   l_img(i) = -log( sum_{j in pos} exp(s_ij / tau)
//                    / sum_{j in pos u neg} exp(s_ij / tau) )
//
// and symmetrically for text anchors with s_ji. The batch loss is
//   (1/B) sum_i ( l_img(i) / 2 + l_txt(i) / 2 ).
// Anchors with no negatives contribute exactly zero.
struct LossValue {
  double loss = 0.0;
  // Contribution of anchor i (both directions, already divided by B).
  std::vector<double> per_anchor;
};

LossValue ContrastiveLossDetailed(const Matrix& zv, const Matrix& zt,
                                  const PairSpec& spec, double tau);
double ContrastiveLoss(const Matrix& zv, const Matrix& zt, const PairSpec& spec,
                       double tau);
double ContrastiveLoss(const BatchFeatures& features, const PairSpec& spec,
                       double tau);

struct LossGradient {
  double loss = 0.0;
  Matrix d_zv;
  Matrix d_zt;
};

// Gradient with respect to the unit-norm features.
LossGradient ContrastiveLossGrad(const Matrix& zv, const Matrix& zt,
                                 const PairSpec& spec, double tau);
LossGradient ContrastiveLossGrad(const BatchFeatures& features,
                                 const PairSpec& spec, double tau);

// Rows are L2-normalized first; the gradient is taken with respect to the
// raw rows, i.e. it includes the normalization Jacobian.
LossGradient ContrastiveLossGradRaw(const Matrix& raw_v, const Matrix& raw_t,
                                    const PairSpec& spec, double tau);

// Throws kNormalizationError on a zero row.
Matrix L2NormalizeRows(const Matrix& raw);
// Given y = raw, z = y/|y| and dL/dz, returns dL/dy = (dz - z (z . dz)) / |y|.
Matrix L2NormalizeRowsBackward(const Matrix& raw, const Matrix& d_normalized);

// Progressive schedule over thirds of training.
enum class Phase { kP1 = 1, kP2 = 2, kP3 = 3 };

// P1 for epoch < floor(E/3), P2 for epoch < floor(2E/3), P3 otherwise.
Phase PhaseForEpoch(int epoch, int total_epochs);
std::string_view PhaseName(Phase phase);
// Whether loss component k (0-based, L1..L4) is part of the phase total.
bool PhaseIncludes(Phase phase, int component);

struct LossBreakdown {
  std::array<std::optional<double>, 4> components;  // L1..L4
  double total = 0.0;
  std::vector<double> per_anchor;
};

// P1: L1. P2: L1 + L2 + L3. P3: L1 + L2 + L3 + L4.
// An active component may be absent only when its partition had nothing
// to contribute (partition_available[k] == false); it then adds 0.
// Otherwise a missing active component throws kMissingComponent.
// Components outside the phase are ignored.
LossBreakdown TotalLoss(Phase phase,
                        const std::array<std::optional<double>, 4>& components,
                        const std::array<bool, 4>& partition_available = {
                            true, true, true, true});

}  // namespace pacl

#endif  // PACL_LOSS_H_
