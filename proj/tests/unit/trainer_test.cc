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

#include <algorithm>

#include "pacl/cluster.h"
#include "pacl/loss.h"
#include "pacl/synth.h"
#include "pacl/trainer.h"
#include "test_util.h"

namespace pacl {
namespace {

using testing::TempDir;

struct Fixture {
  SynthCorpus corpus;
  PartitionAssignment assignment;
  PseudoLabels labels;
};

Fixture MakeFixture(int n = 240, uint64_t seed = 0) {
  SynthConfig sc;
  sc.n = n;
  sc.seed = seed;
  Fixture fx{GenerateSynthetic(sc), {}, {}};
  fx.assignment = PartitionDataset(fx.corpus.dataset, {});
  KMeansOptions o;
  o.k = 4;
  fx.labels = AssignPseudoLabels(fx.corpus.dataset, o);
  return fx;
}

TrainConfig SmallConfig() {
  TrainConfig c;
  c.epochs = 6;
  c.batch_size = 32;
  c.d_proj = 8;
  c.lr = 3e-3;
  c.k = 4;
  return c;
}

TEST(TrainConfigTest, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.tau = 0.0;
  EXPECT_PACL_ERROR(c.Validate(), ErrorCode::kBadConfig);
  c = {};
  c.sigma = 1.5;
  EXPECT_PACL_ERROR(c.Validate(), ErrorCode::kBadConfig);
  c = {};
  c.batch_size = 0;
  EXPECT_PACL_ERROR(c.Validate(), ErrorCode::kBadConfig);
  EXPECT_EQ(ParseSampleUsage(SampleUsageName(SampleUsage::kStrongPartial)),
            SampleUsage::kStrongPartial);
}

TEST(TrainStepTest, OneStepDecreasesBatchLoss) {
  const Fixture fx = MakeFixture();
  TrainConfig config = SmallConfig();
  TrainState state = InitTrainState(fx.corpus.dataset, config);
  PlannedBatch batch{PartitionTag::kStrongCoupled,
                     fx.assignment.IndicesOf(PartitionTag::kStrongCoupled)};
  batch.indices.resize(16);
  const auto loss_now = [&] {
    const BatchFeatures b = ProjectBatch(state.projectors, fx.corpus.dataset, batch.indices, fx.labels);
    return ContrastiveLoss(b, BuildPairsStrong(b), config.tau);
  };
  const double before = loss_now();
  const StepResult r = TrainStep(state, fx.corpus.dataset, batch, fx.labels, config, 1e-3);
  EXPECT_NEAR(r.loss, before, 1e-12);
  EXPECT_LT(loss_now(), before);
}

TEST(TrainStepTest, ZeroLearningRateLeavesParameters) {
  const Fixture fx = MakeFixture();
  TrainConfig config = SmallConfig();
  TrainState state = InitTrainState(fx.corpus.dataset, config);
  const Projectors before = state.projectors;
  PlannedBatch batch{PartitionTag::kWeakCoupled, fx.assignment.IndicesOf(PartitionTag::kWeakCoupled)};
  ASSERT_GE(batch.indices.size(), 2u);
  TrainStep(state, fx.corpus.dataset, batch, fx.labels, config, 0.0);
  EXPECT_TRUE(state.projectors == before);
}

TEST(PlanEpochTest, PhasesGateThePartitions) {
  const Fixture fx = MakeFixture();
  TrainConfig config = SmallConfig();
  config.epochs = 3;
  for (int epoch = 0; epoch < 3; ++epoch) {
    const Phase phase = PhaseForEpoch(epoch, 3);
    EXPECT_EQ(static_cast<int>(phase), epoch + 1);
    for (const PlannedBatch& b : PlanEpoch(fx.assignment, config, epoch)) {
      EXPECT_TRUE(PartitionActive(b.tag, phase, config.usage));
      EXPECT_LE(b.indices.size(), static_cast<size_t>(config.batch_size));
      for (size_t i : b.indices) EXPECT_EQ(fx.assignment.tags[i], b.tag);
    }
  }
  EXPECT_FALSE(PartitionActive(PartitionTag::kWeakCoupled, Phase::kP3, SampleUsage::kStrongPartial));
  EXPECT_FALSE(PartitionActive(PartitionTag::kPartialFactualMatched, Phase::kP3, SampleUsage::kStrongOnly));
  EXPECT_TRUE(PartitionActive(PartitionTag::kStrongCoupled, Phase::kP1, SampleUsage::kStrongOnly));
}

TEST(TrainTest, ThreeEpochsOnePerPhaseAndLossDescends) {
  const Fixture fx = MakeFixture(400);
  TrainConfig config = SmallConfig();
  config.epochs = 3;
  const TrainState s = Train(fx.corpus.dataset, fx.assignment, fx.labels, config);
  ASSERT_EQ(s.log.size(), 3u);
  for (int e = 0; e < 3; ++e) EXPECT_EQ(static_cast<int>(s.log[e].phase), e + 1);
  EXPECT_TRUE(s.log[0].losses[0].has_value());
  EXPECT_FALSE(s.log[0].losses[1].has_value());
  EXPECT_TRUE(s.log[2].losses[3].has_value());
}

TEST(TrainTest, DefaultConfigFinalTotalBelowFirst) {
  const SynthCorpus corpus = GenerateSynthetic(SynthConfig{});
  const TrainConfig config;
  const PartitionAssignment assignment = PartitionDataset(corpus.dataset, {});
  KMeansOptions o;
  o.k = config.k;
  const PseudoLabels labels = AssignPseudoLabels(corpus.dataset, o);
  const TrainState s = Train(corpus.dataset, assignment, labels, config);
  ASSERT_EQ(s.log.size(), 30u);
  EXPECT_LT(s.log.back().total, s.log.front().total);
  EXPECT_LT(s.log.back().losses[0].value(), s.log.front().losses[0].value());
  EXPECT_EQ(s.global_step, PlannedTotalSteps(assignment, config));
}

TEST(TrainTest, DeterministicPerSeed) {
  const Fixture fx = MakeFixture();
  const TrainConfig config = SmallConfig();
  const TrainState a = Train(fx.corpus.dataset, fx.assignment, fx.labels, config);
  const TrainState b = Train(fx.corpus.dataset, fx.assignment, fx.labels, config);
  EXPECT_TRUE(a.projectors == b.projectors);
  EXPECT_EQ(a.log, b.log);
}

TEST(TrainTest, FrozenTextProjectorIsUntouched) {
  const Fixture fx = MakeFixture();
  TrainConfig config = SmallConfig();
  config.freeze_text_projector = true;
  const TrainState init = InitTrainState(fx.corpus.dataset, config);
  const TrainState s = Train(fx.corpus.dataset, fx.assignment, fx.labels, config);
  EXPECT_TRUE(s.projectors.textual == init.projectors.textual);
  EXPECT_FALSE(s.projectors.visual == init.projectors.visual);
}

TEST(TrainTest, EmptyStrongPartitionIsFatal) {
  Fixture fx = MakeFixture(60);
  std::fill(fx.assignment.tags.begin(), fx.assignment.tags.end(), PartitionTag::kWeakCoupled);
  EXPECT_PACL_ERROR(Train(fx.corpus.dataset, fx.assignment, fx.labels, SmallConfig()),
                    ErrorCode::kEmptyPartition);
}

TEST(TrainTest, EmptyLaterPartitionWarns) {
  Fixture fx = MakeFixture(60);
  for (PartitionTag& t : fx.assignment.tags) {
    if (t == PartitionTag::kWeakCoupled) t = PartitionTag::kStrongCoupled;
  }
  std::vector<std::string> warnings;
  TrainOptions options;
  options.warn = [&](const std::string& w) { warnings.push_back(w); };
  EXPECT_NO_THROW(Train(fx.corpus.dataset, fx.assignment, fx.labels, SmallConfig(), options));
  EXPECT_FALSE(warnings.empty());
}

TEST(CheckpointTest, ResumeIsBitExact) {
  TempDir dir("checkpoint_resume");
  const Fixture fx = MakeFixture();
  TrainConfig config = SmallConfig();
  const TrainState full = Train(fx.corpus.dataset, fx.assignment, fx.labels, config);

  // Stop after 4 epochs by training a shortened run that keeps the full schedule.
  TrainOptions first;
  first.checkpoint_dir = dir.path();
  int seen = 0;
  first.on_epoch = [&](const EpochLog&) {
    if (++seen == 4) throw std::runtime_error("stop");
  };
  EXPECT_THROW(Train(fx.corpus.dataset, fx.assignment, fx.labels, config, first),
               std::runtime_error);
  const TrainState partial = LoadCheckpoint(dir.path(), config);
  EXPECT_EQ(partial.epochs_completed, 4);

  TrainOptions resume;
  resume.resume_from = dir.path();
  const TrainState resumed = Train(fx.corpus.dataset, fx.assignment, fx.labels, config, resume);
  EXPECT_TRUE(resumed.projectors == full.projectors);
  EXPECT_EQ(resumed.log, full.log);

  const TrainConfig stored = LoadCheckpointConfig(dir.path());
  EXPECT_EQ(stored.epochs, config.epochs);
  EXPECT_EQ(stored.d_proj, config.d_proj);
  EXPECT_DOUBLE_EQ(stored.lr, config.lr);
}

TEST(FiniteDiffTest, AgreesAndRejectsZeroStep) {
  const Fixture fx = MakeFixture(40);
  TrainConfig config = SmallConfig();
  config.hidden_dim = 5;
  const TrainState state = InitTrainState(fx.corpus.dataset, config);
  const std::vector<size_t> idx{0, 1, 2, 3, 4};
  Matrix img(5, fx.corpus.dataset.matrices.images.dim), txt(5, fx.corpus.dataset.matrices.texts.dim);
  const Matrix all_img = fx.corpus.dataset.matrices.images.ToMatrix();
  const Matrix all_txt = fx.corpus.dataset.matrices.texts.ToMatrix();
  std::vector<int> f, e;
  for (size_t r = 0; r < idx.size(); ++r) {
    img.row(r) = all_img.row(fx.corpus.dataset.samples[idx[r]].image_row);
    txt.row(r) = all_txt.row(fx.corpus.dataset.samples[idx[r]].text_row);
    f.push_back(fx.labels.factual[idx[r]]);
    e.push_back(fx.labels.emotional[idx[r]]);
  }
  for (PairStrategy strategy : kAllPairStrategies) {
    EXPECT_LT(FiniteDiffCheck(state.projectors, img, txt, f, e, strategy, 0.5, 1e-4), 1e-4);
  }
  EXPECT_PACL_ERROR(FiniteDiffCheck(state.projectors, img, txt, f, e, PairStrategy::kStrong, 0.5, 0.0),
                    ErrorCode::kInvalidArgument);
}

TEST(EpochLogTest, JsonHasNullForInactiveComponents) {
  EpochLog entry;
  entry.epoch = 2;
  entry.losses[0] = 1.25;
  entry.total = 1.25;
  const std::string json = EpochLogToJson(entry);
  EXPECT_NE(json.find("null"), std::string::npos) << json;
  EXPECT_NE(json.find("1.25"), std::string::npos) << json;
}

}  // namespace
}  // namespace pacl
