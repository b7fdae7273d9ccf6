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

#include "pacl/trainer.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "json.hpp"
#include "pacl/error.h"
#include "pacl/rng.h"

namespace pacl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr size_t kMinBatch = 2;

json OptionalToJson(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json ConfigToJson(const TrainConfig& c) {
  return json{{"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"tau", c.tau},
              {"sigma", c.sigma},
              {"k", c.k},
              {"lr", c.lr},
              {"weight_decay", c.weight_decay},
              {"seed", c.seed},
              {"freeze_text_projector", c.freeze_text_projector},
              {"d_proj", c.d_proj},
              {"hidden_dim", c.hidden_dim},
              {"usage", std::string(SampleUsageName(c.usage))}};
}

json EpochLogJson(const EpochLog& e) {
  return json{{"epoch", e.epoch},
              {"phase", std::string(PhaseName(e.phase))},
              {"l1", OptionalToJson(e.losses[0])},
              {"l2", OptionalToJson(e.losses[1])},
              {"l3", OptionalToJson(e.losses[2])},
              {"l4", OptionalToJson(e.losses[3])},
              {"total", e.total},
              {"lr", e.lr},
              {"steps", e.steps}};
}

EpochLog EpochLogFromJson(const json& j) {
  EpochLog e;
  e.epoch = j.at("epoch").get<int>();
  const std::string phase = j.at("phase").get<std::string>();
  e.phase = phase == "P1" ? Phase::kP1 : phase == "P2" ? Phase::kP2 : Phase::kP3;
  const char* keys[] = {"l1", "l2", "l3", "l4"};
  for (int k = 0; k < 4; ++k) {
    if (!j.at(keys[k]).is_null()) e.losses[k] = j.at(keys[k]).get<double>();
  }
  e.total = j.at("total").get<double>();
  e.lr = j.at("lr").get<double>();
  e.steps = j.at("steps").get<int>();
  return e;
}

size_t BatchCount(size_t partition_size, int batch_size) {
  const size_t full = partition_size / batch_size;
  const size_t rest = partition_size % batch_size;
  return full + (rest >= kMinBatch ? 1 : 0);
}

ProjectorInit InitFor(const TrainConfig& config) {
  ProjectorInit init;
  init.hidden_dim = config.hidden_dim;
  return init;
}

// Loss of the pair spec as a function of both projectors' parameters.
double LossAt(const Projectors& projectors, const Matrix& raw_images,
              const Matrix& raw_texts, const PairSpec& spec, double tau) {
  return ContrastiveLoss(projectors.visual.Forward(raw_images),
                         projectors.textual.Forward(raw_texts), spec, tau);
}

}  // namespace

std::string_view SampleUsageName(SampleUsage usage) {
  switch (usage) {
    case SampleUsage::kStrongOnly: return "strong";
    case SampleUsage::kStrongPartial: return "strong_partial";
    case SampleUsage::kAll: return "all";
  }
  return "?";
}

SampleUsage ParseSampleUsage(std::string_view name) {
  for (SampleUsage u : {SampleUsage::kStrongOnly, SampleUsage::kStrongPartial,
                        SampleUsage::kAll}) {
    if (SampleUsageName(u) == name) return u;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown sample usage '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kBadConfig, what);
  };
  if (epochs <= 0) fail("epochs must be positive");
  if (batch_size < static_cast<int>(kMinBatch)) fail("batch_size must be at least 2");
  if (!(tau > 0.0)) fail("tau must be positive");
  if (!(sigma >= -1.0 && sigma <= 1.0)) fail("sigma must lie in [-1, 1]");
  if (k <= 0) fail("k must be positive");
  if (!(lr >= 0.0) || !std::isfinite(lr)) fail("lr must be nonnegative");
  if (!(weight_decay >= 0.0)) fail("weight_decay must be nonnegative");
  if (d_proj <= 0) fail("d_proj must be positive");
  if (hidden_dim < 0) fail("hidden_dim must be nonnegative");
}

bool PartitionActive(PartitionTag tag, Phase phase, SampleUsage usage) {
  const int component = static_cast<int>(tag);
  if (!PhaseIncludes(phase, component)) return false;
  switch (usage) {
    case SampleUsage::kStrongOnly: return tag == PartitionTag::kStrongCoupled;
    case SampleUsage::kStrongPartial: return tag != PartitionTag::kWeakCoupled;
    case SampleUsage::kAll: return true;
  }
  return false;
}

std::vector<PlannedBatch> PlanEpoch(const PartitionAssignment& assignment,
                                    const TrainConfig& config, int epoch) {
  const Phase phase = PhaseForEpoch(epoch, config.epochs);
  const uint64_t epoch_seed =
      DeriveSeed(DeriveSeed(config.seed, SeedStream::kEpochShuffle),
                 static_cast<uint64_t>(epoch));
  struct Keyed {
    double key;
    int tag;
    PlannedBatch batch;
  };
  std::vector<Keyed> keyed;
  for (PartitionTag tag : kAllPartitionTags) {
    if (!PartitionActive(tag, phase, config.usage)) continue;
    std::vector<size_t> members = assignment.IndicesOf(tag);
    const size_t n_batches = BatchCount(members.size(), config.batch_size);
    if (n_batches == 0) continue;
    Rng rng(DeriveSeed(epoch_seed, static_cast<uint64_t>(tag)));
    rng.Shuffle(members);
    for (size_t b = 0; b < n_batches; ++b) {
      const size_t begin = b * config.batch_size;
      const size_t end = std::min(members.size(), begin + config.batch_size);
      keyed.push_back({(static_cast<double>(b) + 0.5) / static_cast<double>(n_batches),
                       static_cast<int>(tag),
                       {tag, std::vector<size_t>(members.begin() + begin,
                                                 members.begin() + end)}});
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.key, a.tag) < std::tie(b.key, b.tag);
  });
  std::vector<PlannedBatch> out;
  out.reserve(keyed.size());
  for (Keyed& k : keyed) out.push_back(std::move(k.batch));
  return out;
}

int64_t PlannedTotalSteps(const PartitionAssignment& assignment,
                          const TrainConfig& config) {
  std::array<size_t, 4> sizes{};
  for (PartitionTag t : assignment.tags) ++sizes[static_cast<size_t>(t)];
  int64_t total = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Phase phase = PhaseForEpoch(epoch, config.epochs);
    for (PartitionTag tag : kAllPartitionTags) {
      if (PartitionActive(tag, phase, config.usage)) {
        total += static_cast<int64_t>(
            BatchCount(sizes[static_cast<size_t>(tag)], config.batch_size));
      }
    }
  }
  return total;
}

BatchFeatures ProjectBatch(const Projectors& projectors,
                           const PairedDataset& dataset,
                           std::span<const size_t> indices,
                           const PseudoLabels& labels) {
  BatchFeatures bf;
  bf.zv = projectors.visual.Forward(dataset.ImageEmbeddings(indices));
  bf.zt = projectors.textual.Forward(dataset.TextEmbeddings(indices));
  bf.sample_indices.assign(indices.begin(), indices.end());
  for (size_t i : indices) {
    bf.f.push_back(labels.factual.at(i));
    bf.e.push_back(labels.emotional.at(i));
  }
  return bf;
}

StepResult TrainStep(TrainState& state, const PairedDataset& dataset,
                     const PlannedBatch& batch, const PseudoLabels& labels,
                     const TrainConfig& config, double lr) {
  Projectors& p = state.projectors;
  Projector::Cache visual_cache, text_cache;
  BatchFeatures bf;
  bf.zv = p.visual.Forward(dataset.ImageEmbeddings(batch.indices), &visual_cache);
  bf.zt = p.textual.Forward(dataset.TextEmbeddings(batch.indices), &text_cache);
  bf.sample_indices = batch.indices;
  bf.tags.assign(batch.indices.size(), batch.tag);
  for (size_t i : batch.indices) {
    bf.f.push_back(labels.factual.at(i));
    bf.e.push_back(labels.emotional.at(i));
  }
  const PairSpec spec = BuildPairs(StrategyForTag(batch.tag), bf);
  const LossGradient grad = ContrastiveLossGrad(bf, spec, config.tau);

  const auto visual_grads = p.visual.Backward(visual_cache, grad.d_zv);
  auto visual_params = p.visual.Parameters();
  state.visual_optimizer.Step(visual_params, visual_grads, lr);
  if (!config.freeze_text_projector) {
    const auto text_grads = p.textual.Backward(text_cache, grad.d_zt);
    auto text_params = p.textual.Parameters();
    state.text_optimizer.Step(text_params, text_grads, lr);
  }
  ++state.global_step;

  StepResult r;
  r.loss = grad.loss;
  r.per_anchor = ContrastiveLossDetailed(bf.zv, bf.zt, spec, config.tau).per_anchor;
  return r;
}

TrainState InitTrainState(const PairedDataset& dataset, const TrainConfig& config) {
  config.Validate();
  TrainState state;
  state.projectors =
      InitProjectors(static_cast<int>(dataset.matrices.images.dim),
                     static_cast<int>(dataset.matrices.texts.dim), config.d_proj,
                     config.seed, InitFor(config));
  AdamWConfig opt;
  opt.weight_decay = config.weight_decay;
  state.visual_optimizer = AdamW(opt);
  state.text_optimizer = AdamW(opt);
  return state;
}

TrainState Train(const PairedDataset& dataset,
                 const PartitionAssignment& assignment,
                 const PseudoLabels& labels, const TrainConfig& config,
                 const TrainOptions& options) {
  config.Validate();
  if (assignment.size() != dataset.size() || labels.factual.size() != dataset.size() ||
      labels.emotional.size() != dataset.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "partition / pseudo-labels do not match the dataset");
  }
  std::array<size_t, 4> sizes{};
  for (PartitionTag t : assignment.tags) ++sizes[static_cast<size_t>(t)];
  if (sizes[0] == 0 && config.epochs / 3 > 0) {
    throw Error(ErrorCode::kEmptyPartition,
                "strong-coupled partition is empty; the first phase has no data");
  }
  for (PartitionTag tag : kAllPartitionTags) {
    const size_t t = static_cast<size_t>(tag);
    const bool used = PartitionActive(tag, Phase::kP3, config.usage);
    if (used && BatchCount(sizes[t], config.batch_size) == 0 && options.warn) {
      options.warn("partition '" + std::string(PartitionTagName(tag)) +
                   "' has no usable batches; its loss is skipped");
    }
  }

  TrainState state = options.resume_from ? LoadCheckpoint(*options.resume_from, config)
                                         : InitTrainState(dataset, config);
  const int64_t total_steps = std::max<int64_t>(1, PlannedTotalSteps(assignment, config));
  const CosineSchedule schedule(config.lr, total_steps);

  for (int epoch = state.epochs_completed; epoch < config.epochs; ++epoch) {
    const Phase phase = PhaseForEpoch(epoch, config.epochs);
    const auto batches = PlanEpoch(assignment, config, epoch);
    std::array<double, 4> sums{};
    std::array<int, 4> counts{};
    EpochLog entry;
    entry.epoch = epoch;
    entry.phase = phase;
    entry.lr = schedule.LearningRate(state.global_step);
    for (const PlannedBatch& batch : batches) {
      const double lr = schedule.LearningRate(state.global_step);
      const StepResult r = TrainStep(state, dataset, batch, labels, config, lr);
      const size_t t = static_cast<size_t>(batch.tag);
      sums[t] += r.loss;
      ++counts[t];
      ++entry.steps;
    }
    std::array<std::optional<double>, 4> components;
    std::array<bool, 4> available{};
    for (size_t t = 0; t < 4; ++t) {
      if (counts[t] > 0) components[t] = sums[t] / counts[t];
      available[t] = counts[t] > 0;
    }
    const LossBreakdown breakdown = TotalLoss(phase, components, available);
    entry.losses = breakdown.components;
    entry.total = breakdown.total;
    state.log.push_back(entry);
    state.epochs_completed = epoch + 1;
    if (options.checkpoint_dir) SaveCheckpoint(*options.checkpoint_dir, state, config);
    if (options.on_epoch) options.on_epoch(entry);
  }
  return state;
}

std::string EpochLogToJson(const EpochLog& entry) {
  return EpochLogJson(entry).dump();
}

void SaveCheckpoint(const fs::path& dir, const TrainState& state,
                    const TrainConfig& config) {
  fs::path tmp = dir;
  tmp += ".tmp";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  json params = json::array();
  auto save_group = [&](const std::string& prefix, const Projector& proj,
                        const AdamW& opt) {
    const auto names = proj.ParameterNames();
    const auto values = proj.Parameters();
    for (size_t k = 0; k < names.size(); ++k) {
      const std::string base = prefix + "." + names[k];
      WriteF64Matrix(tmp / (base + ".emb"), *values[k]);
      json entry{{"name", base},
                 {"rows", values[k]->rows()},
                 {"cols", values[k]->cols()}};
      if (!opt.first_moments().empty()) {
        WriteF64Matrix(tmp / (base + ".m.emb"), opt.first_moments()[k]);
        WriteF64Matrix(tmp / (base + ".v.emb"), opt.second_moments()[k]);
        entry["moments"] = true;
      } else {
        entry["moments"] = false;
      }
      params.push_back(entry);
    }
  };
  save_group("visual", state.projectors.visual, state.visual_optimizer);
  save_group("textual", state.projectors.textual, state.text_optimizer);
  json log = json::array();
  for (const EpochLog& e : state.log) log.push_back(EpochLogJson(e));
  json meta{{"format", "pacl-checkpoint-1"},
            {"config", ConfigToJson(config)},
            {"d_img", state.projectors.visual.input_dim()},
            {"d_txt", state.projectors.textual.input_dim()},
            {"epochs_completed", state.epochs_completed},
            {"global_step", state.global_step},
            {"visual_optimizer_step", state.visual_optimizer.step_count()},
            {"text_optimizer_step", state.text_optimizer.step_count()},
            {"parameters", params},
            {"log", log}};
  WriteFileAtomically(tmp / "checkpoint.json", meta.dump(2) + "\n");
  fs::path old = dir;
  old += ".old";
  fs::remove_all(old);
  if (fs::exists(dir)) fs::rename(dir, old);
  fs::rename(tmp, dir);
  fs::remove_all(old);
}

TrainConfig LoadCheckpointConfig(const fs::path& dir) {
  try {
    const json c = json::parse(ReadFileBytes(dir / "checkpoint.json")).at("config");
    TrainConfig config;
    config.epochs = c.at("epochs").get<int>();
    config.batch_size = c.at("batch_size").get<int>();
    config.tau = c.at("tau").get<double>();
    config.sigma = c.at("sigma").get<double>();
    config.k = c.at("k").get<int>();
    config.lr = c.at("lr").get<double>();
    config.weight_decay = c.at("weight_decay").get<double>();
    config.seed = c.at("seed").get<uint64_t>();
    config.freeze_text_projector = c.at("freeze_text_projector").get<bool>();
    config.d_proj = c.at("d_proj").get<int>();
    config.hidden_dim = c.at("hidden_dim").get<int>();
    config.usage = ParseSampleUsage(c.at("usage").get<std::string>());
    return config;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "bad checkpoint config: " + std::string(e.what()));
  }
}

TrainState LoadCheckpoint(const fs::path& dir, const TrainConfig& config) {
  json meta;
  try {
    meta = json::parse(ReadFileBytes(dir / "checkpoint.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, "bad checkpoint metadata: " + std::string(e.what()));
  }
  if (meta.value("format", "") != "pacl-checkpoint-1") {
    throw Error(ErrorCode::kParseError, "unrecognized checkpoint format in " + dir.string());
  }
  config.Validate();
  TrainState state;
  state.projectors = InitProjectors(meta.at("d_img").get<int>(), meta.at("d_txt").get<int>(),
                                    config.d_proj, config.seed, InitFor(config));
  AdamWConfig opt;
  opt.weight_decay = config.weight_decay;
  state.visual_optimizer = AdamW(opt);
  state.text_optimizer = AdamW(opt);

  auto load_group = [&](const std::string& prefix, Projector& proj, AdamW& optimizer,
                        int64_t step) {
    const auto names = proj.ParameterNames();
    auto values = proj.Parameters();
    std::vector<Matrix> m, v;
    for (size_t k = 0; k < names.size(); ++k) {
      const std::string base = prefix + "." + names[k];
      Matrix loaded = LoadF64Matrix(dir / (base + ".emb"));
      if (loaded.rows() != values[k]->rows() || loaded.cols() != values[k]->cols()) {
        throw Error(ErrorCode::kDimMismatch, "checkpoint shape mismatch for " + base);
      }
      *values[k] = std::move(loaded);
      if (fs::exists(dir / (base + ".m.emb"))) {
        m.push_back(LoadF64Matrix(dir / (base + ".m.emb")));
        v.push_back(LoadF64Matrix(dir / (base + ".v.emb")));
      }
    }
    optimizer.Restore(step, std::move(m), std::move(v));
  };
  load_group("visual", state.projectors.visual, state.visual_optimizer,
             meta.at("visual_optimizer_step").get<int64_t>());
  load_group("textual", state.projectors.textual, state.text_optimizer,
             meta.at("text_optimizer_step").get<int64_t>());
  state.global_step = meta.at("global_step").get<int64_t>();
  state.epochs_completed = meta.at("epochs_completed").get<int>();
  for (const json& e : meta.at("log")) state.log.push_back(EpochLogFromJson(e));
  return state;
}

Matrix ProjectImages(const Projectors& projectors, const PairedDataset& dataset) {
  return projectors.visual.Forward(dataset.ImageEmbeddings());
}

double FiniteDiffCheck(const Projectors& projectors, const Matrix& raw_images,
                       const Matrix& raw_texts, std::span<const int> f,
                       std::span<const int> e, PairStrategy strategy, double tau,
                       double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "finite-difference step must be positive");
  }
  BatchFeatures bf;
  Projector::Cache visual_cache, text_cache;
  bf.zv = projectors.visual.Forward(raw_images, &visual_cache);
  bf.zt = projectors.textual.Forward(raw_texts, &text_cache);
  bf.f.assign(f.begin(), f.end());
  bf.e.assign(e.begin(), e.end());
  const PairSpec spec = BuildPairs(strategy, bf);
  const LossGradient grad = ContrastiveLossGrad(bf, spec, tau);
  const auto analytic_v = projectors.visual.Backward(visual_cache, grad.d_zv);
  const auto analytic_t = projectors.textual.Backward(text_cache, grad.d_zt);

  Projectors probe = projectors;
  double worst = 0.0;
  auto sweep = [&](Projector& target, const std::vector<Matrix>& analytic) {
    auto params = target.Parameters();
    for (size_t k = 0; k < params.size(); ++k) {
      Matrix& p = *params[k];
      for (Eigen::Index idx = 0; idx < p.size(); ++idx) {
        const double saved = p.data()[idx];
        p.data()[idx] = saved + h;
        const double up = LossAt(probe, raw_images, raw_texts, spec, tau);
        p.data()[idx] = saved - h;
        const double down = LossAt(probe, raw_images, raw_texts, spec, tau);
        p.data()[idx] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double ga = analytic[k].data()[idx];
        const double rel = std::abs(ga - fd) / std::max(1e-8, std::abs(ga) + std::abs(fd));
        worst = std::max(worst, rel);
      }
    }
  };
  sweep(probe.visual, analytic_v);
  sweep(probe.textual, analytic_t);
  return worst;
}

}  // namespace pacl
