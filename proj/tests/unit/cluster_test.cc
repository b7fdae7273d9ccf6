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

#include "naive.h"
#include "pacl/cluster.h"
#include "pacl/rng.h"
#include "pacl/synth.h"
#include "test_util.h"

namespace pacl {
namespace {

using testing::TempDir;

TEST(KMeansTest, FourPointExample) {
  Matrix p(4, 2);
  p << 0, 0, 0, 1, 10, 0, 10, 1;
  KMeansOptions o;
  o.k = 2;
  const ClusterResult r = KMeans(p, o);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[2], r.labels[3]);
  EXPECT_NE(r.labels[0], r.labels[2]);
  EXPECT_NEAR(r.inertia, 1.0, 1e-12);
  const int left = r.labels[0];
  EXPECT_NEAR(r.centroids(left, 0), 0.0, 1e-12);
  EXPECT_NEAR(r.centroids(left, 1), 0.5, 1e-12);
  EXPECT_NEAR(r.centroids(1 - left, 0), 10.0, 1e-12);
}

TEST(KMeansTest, KOneIsTheMean) {
  Rng rng(1);
  Matrix p(9, 3);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = rng.Normal();
  KMeansOptions o;
  o.k = 1;
  const ClusterResult r = KMeans(p, o);
  for (int l : r.labels) EXPECT_EQ(l, 0);
  EXPECT_TRUE(r.centroids.row(0).isApprox(p.colwise().mean(), 1e-12));
}

TEST(KMeansTest, KEqualsNGivesZeroInertia) {
  Matrix p(4, 2);
  p << 0, 0, 1, 0, 0, 1, 5, 5;
  KMeansOptions o;
  o.k = 4;
  EXPECT_NEAR(KMeans(p, o).inertia, 0.0, 1e-15);
}

TEST(KMeansTest, Errors) {
  Matrix p(2, 2);
  p << 0, 0, 0, 0;
  KMeansOptions o;
  o.k = 3;
  EXPECT_PACL_ERROR(KMeans(p, o), ErrorCode::kTooFewPoints);
  o.k = 2;
  EXPECT_PACL_ERROR(KMeans(p, o), ErrorCode::kDegeneratePoints);
  p(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_PACL_ERROR(KMeans(p, o), ErrorCode::kNonFiniteValue);
}

TEST(KMeansTest, InvariantsOnRandomData) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const int n = 20 + static_cast<int>(rng.UniformInt(40));
    const int k = 2 + static_cast<int>(rng.UniformInt(5));
    Matrix p(n, 3);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = rng.Normal();
    KMeansOptions o;
    o.k = k;
    o.seed = static_cast<uint64_t>(t);
    const ClusterResult r = KMeans(p, o);
    for (size_t h = 1; h < r.inertia_history.size(); ++h) {
      EXPECT_LE(r.inertia_history[h], r.inertia_history[h - 1] + 1e-9);
    }
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      ++counts[r.labels[i]];
      int nearest = 0;
      for (int c = 1; c < k; ++c) {
        if ((p.row(i) - r.centroids.row(c)).squaredNorm() <
            (p.row(i) - r.centroids.row(nearest)).squaredNorm()) {
          nearest = c;
        }
      }
      EXPECT_EQ(r.labels[i], nearest);
    }
    for (int c : counts) EXPECT_GT(c, 0);
    const ClusterResult again = KMeans(p, o);
    EXPECT_EQ(again.labels, r.labels);
    EXPECT_EQ(again.centroids, r.centroids);
  }
}

TEST(KMeansTest, MatchesBruteForceOnTinyInstances) {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const int k = 1 + t % 3;
    const int n = k + static_cast<int>(rng.UniformInt(9 - k));
    Matrix p(n, 2);
    for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = rng.Normal();
    KMeansOptions o;
    o.k = k;
    o.restarts = 20;
    o.seed = static_cast<uint64_t>(t);
    EXPECT_NEAR(KMeans(p, o).inertia, oracle::BruteForceKMeansInertia(p, k), 1e-9);
  }
}

TEST(KMeansTest, NormalizeMode) {
  Matrix p(4, 2);
  p << 1, 0, 5, 0, 0, 2, 0, 9;
  KMeansOptions o;
  o.k = 2;
  o.normalize = true;
  const ClusterResult r = KMeans(p, o);
  EXPECT_EQ(r.labels[0], r.labels[1]);
  EXPECT_EQ(r.labels[2], r.labels[3]);
  EXPECT_NEAR(r.inertia, 0.0, 1e-15);
  p.row(0).setZero();
  EXPECT_PACL_ERROR(KMeans(p, o), ErrorCode::kZeroVector);
}

TEST(PseudoLabelTest, RecoversPlantedFactualFactor) {
  SynthConfig sc;
  const SynthCorpus corpus = GenerateSynthetic(sc);
  KMeansOptions o;
  o.k = sc.num_factual;
  const PseudoLabels labels = AssignPseudoLabels(corpus.dataset, o);
  EXPECT_GE(BestPermutationAgreement(labels.factual, corpus.truth.g, o.k), 0.95);
}

TEST(PseudoLabelTest, SingletonAndKOne) {
  SynthConfig sc;
  sc.n = 1;
  const SynthCorpus one = GenerateSynthetic(sc);
  KMeansOptions o;
  o.k = 1;
  const PseudoLabels l = AssignPseudoLabels(one.dataset, o);
  EXPECT_EQ(l.factual, std::vector<int>{0});
  EXPECT_EQ(l.emotional, std::vector<int>{0});
  sc.n = 0;
  EXPECT_PACL_ERROR(AssignPseudoLabels(GenerateSynthetic(sc).dataset, o), ErrorCode::kEmptyDataset);
}

TEST(PseudoLabelTest, TsvRoundTrip) {
  TempDir dir("pseudo_tsv");
  SynthConfig sc;
  sc.n = 40;
  const SynthCorpus c = GenerateSynthetic(sc);
  KMeansOptions o;
  o.k = 3;
  const PseudoLabels l = AssignPseudoLabels(c.dataset, o);
  WritePseudoLabelsTsv(dir / "l.tsv", c.dataset, l);
  const PseudoLabels back = ReadPseudoLabelsTsv(dir / "l.tsv", c.dataset);
  EXPECT_EQ(back.k, 3);
  EXPECT_EQ(back.factual, l.factual);
  EXPECT_EQ(back.emotional, l.emotional);
}

}  // namespace
}  // namespace pacl
