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

#include "pacl/loss.h"

#include <cmath>
#include <limits>

#include "pacl/error.h"

namespace pacl {
namespace {

void CheckInputs(const Matrix& zv, const Matrix& zt, const PairSpec& spec,
                 double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kNonPositiveTemperature, "temperature must be positive");
  }
  if (zv.rows() != zt.rows() || zv.cols() != zt.cols()) {
    throw Error(ErrorCode::kDimMismatch, "image and text features differ in shape");
  }
  if (spec.image_anchors.size() != static_cast<size_t>(zv.rows()) ||
      spec.text_anchors.size() != static_cast<size_t>(zv.rows())) {
    throw Error(ErrorCode::kDimMismatch, "pair spec does not match batch size");
  }
  for (size_t i = 0; i < spec.size(); ++i) {
    if (spec.image_anchors[i].pos.empty() || spec.text_anchors[i].pos.empty()) {
      throw Error(ErrorCode::kEmptyPositive,
                  "anchor " + std::to_string(i) + " has no positives");
    }
  }
}

// One anchor's term -log(sum_pos e^{x} / sum_all e^{x}) over logits x.
// If `grad` is given, accumulates d term / d logit_j into grad[j].
double AnchorTerm(const Eigen::Ref<const RowVector>& logits,
                  const AnchorPairs& pairs, double scale, RowVector* grad) {
  if (pairs.neg.empty()) return 0.0;
  // Separate shifts keep pos_sum away from underflow when a negative dominates.
  double max_pos = -std::numeric_limits<double>::infinity();
  for (int j : pairs.pos) max_pos = std::max(max_pos, logits[j]);
  double max_all = max_pos;
  for (int j : pairs.neg) max_all = std::max(max_all, logits[j]);
  double pos_sum = 0.0, all_sum = 0.0;
  for (int j : pairs.pos) {
    pos_sum += std::exp(logits[j] - max_pos);
    all_sum += std::exp(logits[j] - max_all);
  }
  for (int j : pairs.neg) all_sum += std::exp(logits[j] - max_all);
  if (grad != nullptr) {
    // d/dx_j [LSE_all - LSE_pos] = softmax_all(j) - [j in pos] softmax_pos(j)
    for (int j : pairs.pos) {
      (*grad)[j] += scale * (std::exp(logits[j] - max_all) / all_sum -
                             std::exp(logits[j] - max_pos) / pos_sum);
    }
    for (int j : pairs.neg) {
      (*grad)[j] += scale * std::exp(logits[j] - max_all) / all_sum;
    }
  }
  return (max_all + std::log(all_sum)) - (max_pos + std::log(pos_sum));
}

}  // namespace

LossValue ContrastiveLossDetailed(const Matrix& zv, const Matrix& zt,
                                  const PairSpec& spec, double tau) {
  CheckInputs(zv, zt, spec, tau);
  const Eigen::Index b = zv.rows();
  LossValue out;
  out.per_anchor.assign(b, 0.0);
  if (b == 0) return out;
  const Matrix logits = (zv * zt.transpose()) / tau;  // logits(i, j) = zv_i . zt_j / tau
  const Matrix logits_t = logits.transpose();
  for (Eigen::Index i = 0; i < b; ++i) {
    const double img = AnchorTerm(logits.row(i), spec.image_anchors[i], 0.0, nullptr);
    const double txt = AnchorTerm(logits_t.row(i), spec.text_anchors[i], 0.0, nullptr);
    out.per_anchor[i] = 0.5 * (img + txt) / static_cast<double>(b);
  }
  for (double v : out.per_anchor) out.loss += v;
  return out;
}

double ContrastiveLoss(const Matrix& zv, const Matrix& zt, const PairSpec& spec,
                       double tau) {
  return ContrastiveLossDetailed(zv, zt, spec, tau).loss;
}

double ContrastiveLoss(const BatchFeatures& features, const PairSpec& spec,
                       double tau) {
  return ContrastiveLoss(features.zv, features.zt, spec, tau);
}

LossGradient ContrastiveLossGrad(const Matrix& zv, const Matrix& zt,
                                 const PairSpec& spec, double tau) {
  CheckInputs(zv, zt, spec, tau);
  const Eigen::Index b = zv.rows();
  LossGradient out;
  out.d_zv = Matrix::Zero(zv.rows(), zv.cols());
  out.d_zt = Matrix::Zero(zt.rows(), zt.cols());
  if (b == 0) return out;
  const Matrix logits = (zv * zt.transpose()) / tau;
  const Matrix logits_t = logits.transpose();
  // g(i, j) = dL / d s_ij where s_ij = zv_i . zt_j.
  Matrix g = Matrix::Zero(b, b);
  const double scale = 0.5 / (static_cast<double>(b) * tau);
  for (Eigen::Index i = 0; i < b; ++i) {
    RowVector row = RowVector::Zero(b);
    out.loss += 0.5 * AnchorTerm(logits.row(i), spec.image_anchors[i], scale, &row);
    g.row(i) += row;
    row.setZero();
    out.loss += 0.5 * AnchorTerm(logits_t.row(i), spec.text_anchors[i], scale, &row);
    g.col(i) += row.transpose();
  }
  out.loss /= static_cast<double>(b);
  out.d_zv = g * zt;
  out.d_zt = g.transpose() * zv;
  return out;
}

LossGradient ContrastiveLossGrad(const BatchFeatures& features,
                                 const PairSpec& spec, double tau) {
  return ContrastiveLossGrad(features.zv, features.zt, spec, tau);
}

LossGradient ContrastiveLossGradRaw(const Matrix& raw_v, const Matrix& raw_t,
                                    const PairSpec& spec, double tau) {
  LossGradient g =
      ContrastiveLossGrad(L2NormalizeRows(raw_v), L2NormalizeRows(raw_t), spec, tau);
  g.d_zv = L2NormalizeRowsBackward(raw_v, g.d_zv);
  g.d_zt = L2NormalizeRowsBackward(raw_t, g.d_zt);
  return g;
}

Matrix L2NormalizeRows(const Matrix& raw) {
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double norm = raw.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kNormalizationError,
                  "row " + std::to_string(i) + " has no finite nonzero norm");
    }
    out.row(i) = raw.row(i) / norm;
  }
  return out;
}

Matrix L2NormalizeRowsBackward(const Matrix& raw, const Matrix& d_normalized) {
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    const double norm = raw.row(i).norm();
    const RowVector z = raw.row(i) / norm;
    const double proj = z.dot(d_normalized.row(i));
    out.row(i) = (d_normalized.row(i) - proj * z) / norm;
  }
  return out;
}

Phase PhaseForEpoch(int epoch, int total_epochs) {
  if (total_epochs <= 0 || epoch < 0 || epoch >= total_epochs) {
    throw Error(ErrorCode::kInvalidArgument,
                "epoch " + std::to_string(epoch) + " outside [0, " +
                    std::to_string(total_epochs) + ")");
  }
  if (epoch < total_epochs / 3) return Phase::kP1;
  if (epoch < (2 * total_epochs) / 3) return Phase::kP2;
  return Phase::kP3;
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kP1: return "P1";
    case Phase::kP2: return "P2";
    case Phase::kP3: return "P3";
  }
  return "?";
}

bool PhaseIncludes(Phase phase, int component) {
  switch (phase) {
    case Phase::kP1: return component == 0;
    case Phase::kP2: return component >= 0 && component <= 2;
    case Phase::kP3: return component >= 0 && component <= 3;
  }
  return false;
}

LossBreakdown TotalLoss(Phase phase,
                        const std::array<std::optional<double>, 4>& components,
                        const std::array<bool, 4>& partition_available) {
  LossBreakdown out;
  for (int k = 0; k < 4; ++k) {
    if (!PhaseIncludes(phase, k)) continue;
    if (components[k]) {
      out.components[k] = components[k];
      out.total += *components[k];
    } else if (partition_available[k]) {
      throw Error(ErrorCode::kMissingComponent,
                  std::string(PhaseName(phase)) + " requires L" +
                      std::to_string(k + 1));
    }
  }
  return out;
}

}  // namespace pacl
