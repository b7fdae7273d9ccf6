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

#ifndef PACL_EXPERIMENT_H_
#define PACL_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pacl/cluster.h"
#include "pacl/embeddings_io.h"
#include "pacl/partition.h"
#include "pacl/probe.h"
#include "pacl/trainer.h"

namespace pacl {

// Single run of partition -> cluster -> train -> linear probe, scored on a
// held-out split of the integer labels.
struct ExperimentConfig {
  TrainConfig train;
  PartitionMode partition_mode = PartitionMode::kBoth;
  ProbeOptions probe;
  double test_fraction = 0.3;
  // Skip training and probe the freshly initialized projection.
  bool untrained = false;
};

struct ExperimentResult {
  double probe_accuracy = 0.0;
  double probe_weighted_f1 = 0.0;
  PartitionSummary summary;
  std::vector<EpochLog> log;
};

// Deterministic train/test split of [0, n) seeded by the probe stream.
// Both halves are sorted.
void SplitIndices(size_t n, double test_fraction, uint64_t seed,
                  std::vector<size_t>& train, std::vector<size_t>& test);

// Integer labels of every sample; throws kInvalidArgument when a sample
// carries no class label.
std::vector<int> ClassLabels(const PairedDataset& dataset);

ExperimentResult RunExperiment(const PairedDataset& dataset,
                               const ExperimentConfig& config,
                               const std::function<void(const std::string&)>& warn = {});

}  // namespace pacl

#endif  // PACL_EXPERIMENT_H_
