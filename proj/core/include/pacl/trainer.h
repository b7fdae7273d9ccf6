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

#ifndef PACL_TRAINER_H_
#define PACL_TRAINER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pacl/cluster.h"
#include "pacl/embeddings_io.h"
#include "pacl/loss.h"
#include "pacl/optimizer.h"
#include "pacl/pair_builder.h"
#include "pacl/partition.h"
#include "pacl/projector.h"

namespace pacl {

// Which partitions may contribute batches at all. Phases then restrict
// further.
enum class SampleUsage { kStrongOnly, kStrongPartial, kAll };

std::string_view SampleUsageName(SampleUsage usage);
SampleUsage ParseSampleUsage(std::string_view name);

struct TrainConfig {
  int epochs = 30;
  int batch_size = 64;
  double tau = 0.07;
  double sigma = 0.7;
  int k = 2;
  double lr = 1e-3;
  double weight_decay = 1e-2;
  uint64_t seed = 0;
  bool freeze_text_projector = false;
  int d_proj = 16;
  int hidden_dim = 0;
  SampleUsage usage = SampleUsage::kAll;

  // Throws kBadConfig.
  void Validate() const;
};

struct EpochLog {
  int epoch = 0;
  Phase phase = Phase::kP1;
  std::array<std::optional<double>, 4> losses;  // mean L1..L4 over the epoch
  double total = 0.0;
  double lr = 0.0;  // learning rate at the epoch's first step
  int steps = 0;

  bool operator==(const EpochLog&) const = default;
};

struct TrainState {
  Projectors projectors;
  AdamW visual_optimizer;
  AdamW text_optimizer;
  int64_t global_step = 0;
  int epochs_completed = 0;
  std::vector<EpochLog> log;
};

struct TrainOptions {
  // Checkpoint written after every epoch (atomically replaced).
  std::optional<std::filesystem::path> checkpoint_dir;
  // Continue from a checkpoint produced with the same config.
  std::optional<std::filesystem::path> resume_from;
  std::function<void(const std::string&)> warn;
  std::function<void(const EpochLog&)> on_epoch;
};

// One homogeneous minibatch drawn from a single partition.
struct PlannedBatch {
  PartitionTag tag;
  std::vector<size_t> indices;
};

// Batches of an epoch: each active partition is shuffled and chunked, and
// partitions are interleaved in proportion to their batch counts. Chunks
// smaller than two samples are dropped (no negatives to contrast).
std::vector<PlannedBatch> PlanEpoch(const PartitionAssignment& assignment,
                                    const TrainConfig& config, int epoch);

// Whether `tag` contributes batches in `phase` under `usage`.
bool PartitionActive(PartitionTag tag, Phase phase, SampleUsage usage);

BatchFeatures ProjectBatch(const Projectors& projectors,
                           const PairedDataset& dataset,
                           std::span<const size_t> indices,
                           const PseudoLabels& labels);

struct StepResult {
  double loss = 0.0;
  std::vector<double> per_anchor;
};

// Forward, pair construction for the batch's partition strategy, loss,
// backward through normalization and the affine layers, AdamW update with
// learning rate `lr`.
StepResult TrainStep(TrainState& state, const PairedDataset& dataset,
                     const PlannedBatch& batch, const PseudoLabels& labels,
                     const TrainConfig& config, double lr);

TrainState InitTrainState(const PairedDataset& dataset, const TrainConfig& config);

// Progressive training. Throws kEmptyPartition when the strong-coupled
// partition is empty but the first phase has epochs.
TrainState Train(const PairedDataset& dataset,
                 const PartitionAssignment& assignment,
                 const PseudoLabels& labels, const TrainConfig& config,
                 const TrainOptions& options = {});

int64_t PlannedTotalSteps(const PartitionAssignment& assignment,
                          const TrainConfig& config);

void SaveCheckpoint(const std::filesystem::path& dir, const TrainState& state,
                    const TrainConfig& config);
TrainState LoadCheckpoint(const std::filesystem::path& dir,
                          const TrainConfig& config);
// The config recorded in a checkpoint.
TrainConfig LoadCheckpointConfig(const std::filesystem::path& dir);

// One JSON object: {epoch, phase, l1, l2, l3, l4, total, lr, steps};
// absent components are null.
std::string EpochLogToJson(const EpochLog& entry);

// Visual-projector outputs for every sample, in dataset order.
Matrix ProjectImages(const Projectors& projectors, const PairedDataset& dataset);

// Largest |g_a - g_fd| / max(1e-8, |g_a| + |g_fd|) over all projector
// parameters, with the pair sets held at their unperturbed values.
// Throws kInvalidArgument for h <= 0.
double FiniteDiffCheck(const Projectors& projectors, const Matrix& raw_images,
                       const Matrix& raw_texts, std::span<const int> f,
                       std::span<const int> e, PairStrategy strategy, double tau,
                       double h);

}  // namespace pacl

#endif  // PACL_TRAINER_H_
