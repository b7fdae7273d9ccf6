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

#include "pacl/experiment.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pacl/error.h"
#include "pacl/metrics.h"
#include "pacl/rng.h"

namespace pacl {

void SplitIndices(size_t n, double test_fraction, uint64_t seed,
                  std::vector<size_t>& train, std::vector<size_t>& test) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "test_fraction must lie in (0, 1)");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, SeedStream::kProbeSplit));
  rng.Shuffle(order);
  const size_t n_test = static_cast<size_t>(std::llround(test_fraction * static_cast<double>(n)));
  test.assign(order.begin(), order.begin() + n_test);
  train.assign(order.begin() + n_test, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
}

std::vector<int> ClassLabels(const PairedDataset& dataset) {
  std::vector<int> labels;
  labels.reserve(dataset.size());
  for (const PairedSample& s : dataset.samples) {
    const int* label = std::get_if<int>(&s.label);
    if (label == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "sample '" + s.id + "' has no class label");
    }
    labels.push_back(*label);
  }
  return labels;
}

namespace {

Matrix Rows(const Matrix& m, const std::vector<size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(r) = m.row(rows[r]);
  return out;
}

std::vector<int> Pick(const std::vector<int>& v, const std::vector<size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(v[r]);
  return out;
}

}  // namespace

ExperimentResult RunExperiment(const PairedDataset& dataset, const ExperimentConfig& config,
                               const std::function<void(const std::string&)>& warn) {
  config.train.Validate();
  const std::vector<int> labels = ClassLabels(dataset);
  PartitionOptions popts;
  popts.sigma = config.train.sigma;
  const PartitionAssignment assignment =
      ApplyPartitionMode(PartitionDataset(dataset, popts), config.partition_mode);

  ExperimentResult result;
  result.summary = SummarizePartition(assignment);
  Projectors projectors;
  if (config.untrained) {
    projectors = InitTrainState(dataset, config.train).projectors;
  } else {
    KMeansOptions kopts;
    kopts.k = config.train.k;
    kopts.seed = config.train.seed;
    const PseudoLabels pseudo = AssignPseudoLabels(dataset, kopts);
    TrainOptions topts;
    topts.warn = warn;
    TrainState state = Train(dataset, assignment, pseudo, config.train, topts);
    result.log = state.log;
    projectors = std::move(state.projectors);
  }
  const Matrix features = ProjectImages(projectors, dataset);

  std::vector<size_t> train_rows, test_rows;
  SplitIndices(dataset.size(), config.test_fraction, config.train.seed, train_rows, test_rows);
  ProbeOptions probe = config.probe;
  probe.seed = config.train.seed;
  if (probe.num_classes == 0) {
    probe.num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  }
  const LinearClassifier clf =
      TrainLinearProbe(Rows(features, train_rows), Pick(labels, train_rows), probe);
  const std::vector<int> preds = clf.Predict(Rows(features, test_rows));
  const std::vector<int> truth = Pick(labels, test_rows);
  result.probe_accuracy = Accuracy(preds, truth);
  result.probe_weighted_f1 = WeightedF1(preds, truth);
  return result;
}

}  // namespace pacl
