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

#include "pacl/probe.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pacl/error.h"
#include "pacl/loss.h"
#include "pacl/rng.h"

namespace pacl {
namespace {

Matrix AddBias(Matrix m, const Matrix& bias) {
  m.rowwise() += bias.row(0);
  return m;
}

std::vector<int> RowArgmax(const Matrix& m) {
  std::vector<int> out(m.rows(), 0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < m.cols(); ++c) {
      if (m(i, c) > m(i, best)) best = static_cast<int>(c);
    }
    out[i] = best;
  }
  return out;
}

Matrix UniformInit(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(-scale, scale);
  return m;
}

}  // namespace

Matrix LinearClassifier::Logits(const Matrix& features) const {
  if (features.cols() != weight.cols()) {
    throw Error(ErrorCode::kDimMismatch, "probe feature dim mismatch");
  }
  return AddBias(features * weight.transpose(), bias);
}

std::vector<int> LinearClassifier::Predict(const Matrix& features) const {
  return RowArgmax(Logits(features));
}

LinearClassifier TrainLinearProbe(const Matrix& features, std::span<const int> labels,
                                  const ProbeOptions& options) {
  const Eigen::Index n = features.rows();
  if (static_cast<size_t>(n) != labels.size()) {
    throw Error(ErrorCode::kDimMismatch, "feature and label counts differ");
  }
  const std::set<int> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "linear probe needs at least two classes");
  }
  if (*distinct.begin() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative class label");
  }
  const int classes = std::max(options.num_classes, *distinct.rbegin() + 1);
  if (n < classes) {
    throw Error(ErrorCode::kTooFewPoints, "fewer samples than classes");
  }
  Rng rng(DeriveSeed(options.seed, SeedStream::kProbeInit));
  LinearClassifier clf;
  clf.weight = UniformInit(classes, features.cols(), options.init_scale, rng);
  clf.bias = Matrix::Zero(1, classes);

  Matrix onehot = Matrix::Zero(n, classes);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, labels[i]) = 1.0;

  double previous = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    Matrix logits = clf.Logits(features);
    Matrix probs(n, classes);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double max_logit = logits.row(i).maxCoeff();
      const auto shifted = (logits.row(i).array() - max_logit).eval();
      const double lse = std::log(shifted.exp().sum());
      probs.row(i) = (shifted - lse).exp().matrix();
      loss -= shifted(labels[i]) - lse;
    }
    loss /= static_cast<double>(n);
    clf.final_loss = loss;
    clf.epochs_run = epoch + 1;
    if (std::abs(previous - loss) < options.tol) break;
    previous = loss;
    const Matrix d_logits = (probs - onehot) / static_cast<double>(n);
    clf.weight -= options.lr * (d_logits.transpose() * features);
    clf.bias -= options.lr * d_logits.colwise().sum();
  }
  return clf;
}

Matrix MultiLabelProbe::Scores(const Matrix& features) const {
  return AddBias(features * weight.transpose(), bias);
}

MultiLabelProbe TrainMultiLabelProbe(const Matrix& features,
                                     const std::vector<std::vector<int>>& label_sets,
                                     int num_classes, const ProbeOptions& options) {
  const Eigen::Index n = features.rows();
  if (static_cast<size_t>(n) != label_sets.size()) {
    throw Error(ErrorCode::kDimMismatch, "feature and label counts differ");
  }
  if (num_classes < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one class");
  Matrix targets = Matrix::Zero(n, num_classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c : label_sets[i]) {
      if (c < 0 || c >= num_classes) {
        throw Error(ErrorCode::kInvalidArgument, "label outside class range");
      }
      targets(i, c) = 1.0;
    }
  }
  Rng rng(DeriveSeed(options.seed, SeedStream::kProbeInit));
  MultiLabelProbe probe;
  probe.weight = UniformInit(num_classes, features.cols(), options.init_scale, rng);
  probe.bias = Matrix::Zero(1, num_classes);
  double previous = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    const Matrix logits = probe.Scores(features);
    const Matrix probs = (1.0 / (1.0 + (-logits.array()).exp())).matrix();
    // Mean binary cross-entropy with log(1 + e^x) evaluated stably.
    const auto softplus = [](double x) {
      return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    };
    double loss = 0.0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
      const double x = logits.data()[i];
      loss += softplus(x) - targets.data()[i] * x;
    }
    loss /= static_cast<double>(n);
    if (std::abs(previous - loss) < options.tol) break;
    previous = loss;
    const Matrix d_logits = (probs - targets) / static_cast<double>(n);
    probe.weight -= options.lr * (d_logits.transpose() * features);
    probe.bias -= options.lr * d_logits.colwise().sum();
  }
  return probe;
}

Matrix LinearRegressor::Predict(const Matrix& features) const {
  if (features.cols() != weight.cols()) {
    throw Error(ErrorCode::kDimMismatch, "regressor feature dim mismatch");
  }
  return AddBias(features * weight.transpose(), bias);
}

LinearRegressor FitLinearRegressor(const Matrix& features, const Matrix& targets) {
  if (features.rows() != targets.rows()) {
    throw Error(ErrorCode::kDimMismatch, "feature and target counts differ");
  }
  if (features.rows() == 0) throw Error(ErrorCode::kEmptyDataset, "no samples");
  Eigen::MatrixXd design(features.rows(), features.cols() + 1);
  design.leftCols(features.cols()) = features;
  design.col(features.cols()).setOnes();
  const Eigen::MatrixXd solution = design.colPivHouseholderQr().solve(Eigen::MatrixXd(targets));
  LinearRegressor r;
  r.weight = solution.topRows(features.cols()).transpose();
  r.bias = solution.bottomRows(1);
  return r;
}

Matrix ZeroShotScores(const Matrix& raw_images, const Matrix& raw_prompts,
                      std::span<const int> prompt_classes, int num_classes,
                      const Projectors& projectors) {
  if (static_cast<size_t>(raw_prompts.rows()) != prompt_classes.size()) {
    throw Error(ErrorCode::kDimMismatch, "prompt rows and classes differ in count");
  }
  if (num_classes < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one class");
  const Matrix prompts = projectors.textual.Forward(raw_prompts);
  Matrix class_embed = Matrix::Zero(num_classes, prompts.cols());
  std::vector<int> counts(num_classes, 0);
  for (size_t r = 0; r < prompt_classes.size(); ++r) {
    const int c = prompt_classes[r];
    if (c < 0 || c >= num_classes) {
      throw Error(ErrorCode::kInvalidArgument, "prompt class outside range");
    }
    class_embed.row(c) += prompts.row(static_cast<Eigen::Index>(r));
    ++counts[c];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorCode::kNoPrompts, "class " + std::to_string(c) + " has no prompts");
    }
    class_embed.row(c) /= counts[c];
  }
  const Matrix images = projectors.visual.Forward(raw_images);
  return images * L2NormalizeRows(class_embed).transpose();
}

std::vector<int> ZeroShotClassify(const Matrix& raw_images, const Matrix& raw_prompts,
                                  std::span<const int> prompt_classes, int num_classes,
                                  const Projectors& projectors) {
  return RowArgmax(
      ZeroShotScores(raw_images, raw_prompts, prompt_classes, num_classes, projectors));
}

}  // namespace pacl
