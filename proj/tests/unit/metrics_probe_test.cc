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

#include "naive.h"
#include "pacl/cluster.h"
#include "pacl/metrics.h"
#include "pacl/probe.h"
#include "pacl/rng.h"
#include "pacl/synth.h"
#include "pacl/trainer.h"
#include "test_util.h"

namespace pacl {
namespace {

TEST(MetricsTest, AccuracyAndWeightedF1WorkedExample) {
  const std::vector<int> labels{0, 0, 1, 1}, preds{0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(Accuracy(preds, labels), 0.75);
  std::vector<ClassScore> per_class;
  const double f1 = WeightedF1(preds, labels, &per_class);
  EXPECT_NEAR(f1, 0.5 * (2.0 / 3.0) + 0.5 * 0.8, 1e-15);
  ASSERT_EQ(per_class.size(), 2u);
  EXPECT_NEAR(per_class[0].f1, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(per_class[1].f1, 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(Accuracy(labels, labels), 1.0);
  EXPECT_DOUBLE_EQ(WeightedF1(labels, labels), 1.0);
}

TEST(MetricsTest, ClassAbsentFromLabelsHasZeroWeight) {
  const std::vector<int> labels{0, 0, 1}, preds{0, 2, 1};
  EXPECT_NEAR(WeightedF1(preds, labels), (2.0 / 3.0) * (2.0 / 3.0) + (1.0 / 3.0) * 1.0, 1e-15);
}

TEST(MetricsTest, AveragePrecisionWorkedExample) {
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.6};
  const std::vector<char> pos{1, 0, 1, 0};
  EXPECT_NEAR(AveragePrecision(scores, pos), (1.0 + 2.0 / 3.0) / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(RocAuc(scores, pos), 0.75);
}

TEST(MetricsTest, AucMonotoneInvarianceAndReversal) {
  Rng rng(1);
  std::vector<double> s(30), t(30);
  std::vector<char> pos(30);
  for (int i = 0; i < 30; ++i) {
    s[i] = rng.Normal();
    t[i] = std::exp(3.0 * s[i]) + 1.0;
    pos[i] = i % 3 == 0;
  }
  EXPECT_NEAR(RocAuc(s, pos), RocAuc(t, pos), 1e-15);
  std::vector<double> reversed{0.1, 0.2, 0.8, 0.9};
  const std::vector<char> top{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(RocAuc(reversed, top), 0.0);
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_DOUBLE_EQ(RocAuc(reversed, top), 1.0);
  EXPECT_DOUBLE_EQ(AveragePrecision(reversed, top), 1.0);
}

TEST(MetricsTest, RankingExcludesDegenerateClasses) {
  Matrix scores(3, 3);
  scores << 0.9, 0.1, 0.5, 0.2, 0.8, 0.5, 0.1, 0.3, 0.5;
  const RankingScores r = MultiLabelRanking(scores, {{0}, {1}, {0, 1}});
  ASSERT_EQ(r.per_class.size(), 3u);
  EXPECT_TRUE(r.per_class[0].included);
  EXPECT_FALSE(r.per_class[2].included);
  EXPECT_EQ(r.per_class[2].positives, 0u);
  EXPECT_NEAR(r.map, (r.per_class[0].ap + r.per_class[1].ap) / 2, 1e-15);
}

TEST(MetricsTest, MatchNaiveOracles) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng.UniformInt(49));
    std::vector<int> labels(n), preds(n), positive(n);
    std::vector<double> scores(n);
    std::vector<char> pos(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.UniformInt(4));
      preds[i] = static_cast<int>(rng.UniformInt(4));
      scores[i] = std::round(rng.Normal() * 4) / 4;  // forces ties
      positive[i] = rng.Uniform() < 0.4;
      pos[i] = static_cast<char>(positive[i]);
    }
    positive[0] = pos[0] = 1;
    positive[1] = pos[1] = 0;
    EXPECT_NEAR(Accuracy(preds, labels), oracle::NaiveAccuracy(preds, labels), 1e-9);
    EXPECT_NEAR(WeightedF1(preds, labels), oracle::NaiveWeightedF1(preds, labels), 1e-9);
    EXPECT_NEAR(AveragePrecision(scores, pos), oracle::NaiveAveragePrecision(scores, positive), 1e-9);
    EXPECT_NEAR(RocAuc(scores, pos), oracle::NaiveAuc(scores, positive), 1e-9);
  }
}

TEST(MetricsTest, RegressionWorkedExamples) {
  Matrix targets(3, 3), preds(3, 3);
  targets << 0, 1, 2, 1, 2, 3, 2, 4, 7;
  RegressionScores r = RegressionMetrics(targets, targets);
  EXPECT_DOUBLE_EQ(r.mse_x100, 0.0);
  EXPECT_DOUBLE_EQ(r.r2, 1.0);
  preds = targets.colwise().mean().replicate(3, 1);
  EXPECT_NEAR(RegressionMetrics(preds, targets).r2, 0.0, 1e-15);
  preds = targets;
  preds(2, 0) = 1;  // first column targets [0,1,2], preds [0,1,1]
  r = RegressionMetrics(preds, targets);
  EXPECT_NEAR(r.mse_per_dim[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.r2_per_dim[0], 0.5, 1e-15);
  EXPECT_NEAR(r.mse_x100, 100.0 / 9.0, 1e-12);
}

TEST(MetricReportTest, JsonRoundTrip) {
  const std::vector<int> labels{0, 0, 1, 1}, preds{0, 1, 1, 1};
  const MetricReport rep = SingleLabelReport(preds, labels);
  EXPECT_DOUBLE_EQ(rep.Value("acc"), 0.75);
  const MetricReport back = MetricReport::FromJson(rep.ToJson());
  EXPECT_EQ(back.kind, TaskKind::kSingleLabel);
  EXPECT_EQ(back.values, rep.values);
  EXPECT_EQ(back.table_rows, rep.table_rows);
}

TEST(LinearProbeTest, SeparableToySetIsFit) {
  Matrix x(6, 2);
  x << -2, 0.1, -1.5, -0.4, -1, 0.3, 1, 0.2, 1.7, -0.5, 2.2, 0;
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const LinearClassifier clf = TrainLinearProbe(x, y);
  EXPECT_DOUBLE_EQ(Accuracy(clf.Predict(x), y), 1.0);
}

TEST(LinearProbeTest, SingleClassAndZeroLr) {
  const Matrix x = Matrix::Identity(3, 3);
  EXPECT_PACL_ERROR(TrainLinearProbe(x, std::vector<int>{1, 1, 1}), ErrorCode::kSingleClass);
  ProbeOptions o;
  o.lr = 0.0;
  o.max_epochs = 50;
  const LinearClassifier trained = TrainLinearProbe(x, std::vector<int>{0, 1, 2}, o);
  o.max_epochs = 0;
  const LinearClassifier init = TrainLinearProbe(x, std::vector<int>{0, 1, 2}, o);
  EXPECT_EQ(trained.weight, init.weight);
  EXPECT_EQ(trained.bias, init.bias);
}

TEST(RegressorTest, RecoversAffineMap) {
  Rng rng(3);
  Matrix x(40, 4), y(40, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.Normal();
  Matrix w(3, 4);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.Normal();
  y = x * w.transpose();
  y.rowwise() += Eigen::RowVector3d(1, -2, 0.5);
  const LinearRegressor reg = FitLinearRegressor(x, y);
  EXPECT_TRUE(reg.Predict(x).isApprox(y, 1e-8));
}

TEST(ZeroShotTest, IdentityProjectorsPickNearestPrototype) {
  ProjectorInit init;
  init.identity = true;
  const Projectors p = InitProjectors(3, 3, 3, 0, init);
  const Matrix prompts = Matrix::Identity(3, 3);
  const std::vector<int> classes{0, 1, 2};
  Matrix images(3, 3);
  images << 0.1, 0.9, 0.2, 0.8, 0.1, 0.1, 0.3, 0.3, 0.4;
  EXPECT_EQ(ZeroShotClassify(images, prompts, classes, 3, p), (std::vector<int>{1, 0, 2}));
  const Matrix single = Matrix::Ones(1, 3);
  for (int c : ZeroShotClassify(images, single, std::vector<int>{0}, 1, p)) EXPECT_EQ(c, 0);
  EXPECT_PACL_ERROR(ZeroShotClassify(images, prompts, classes, 4, p), ErrorCode::kNoPrompts);
}

TEST(ZeroShotTest, AboveChanceAfterTraining) {
  SynthConfig sc;
  sc.n = 800;
  const SynthCorpus corpus = GenerateSynthetic(sc);
  TrainConfig config;
  config.epochs = 12;
  config.k = 4;
  const PartitionAssignment a = PartitionDataset(corpus.dataset, {});
  KMeansOptions o;
  o.k = config.k;
  const TrainState s = Train(corpus.dataset, a, AssignPseudoLabels(corpus.dataset, o), config);
  const std::vector<int> preds =
      ZeroShotClassify(corpus.dataset.matrices.images.ToMatrix(), corpus.prompts,
                       corpus.prompt_classes, sc.num_emotional, s.projectors);
  EXPECT_GT(Accuracy(preds, corpus.truth.h), 1.0 / sc.num_emotional + 0.05);
}

}  // namespace
}  // namespace pacl
