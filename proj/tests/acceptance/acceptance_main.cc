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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "json.hpp"
#include "naive.h"
#include "pacl/cluster.h"
#include "pacl/embeddings_io.h"
#include "pacl/experiment.h"
#include "pacl/loss.h"
#include "pacl/metrics.h"
#include "pacl/pair_builder.h"
#include "pacl/partition.h"
#include "pacl/rng.h"
#include "pacl/synth.h"
#include "pacl/trainer.h"

namespace pacl {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

Matrix RandomUnitRows(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    do {
      for (int c = 0; c < cols; ++c) m(i, c) = rng.Normal();
    } while (m.row(i).norm() < 1e-3);
    m.row(i) /= m.row(i).norm();
  }
  return m;
}

// Small integer-valued rows make exact dot-product ties common.
Matrix RandomIntegerRows(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    do {
      for (int c = 0; c < cols; ++c) m(i, c) = static_cast<double>(rng.UniformInt(3)) - 1.0;
    } while (m.row(i).squaredNorm() == 0.0);
  }
  return m;
}

BatchFeatures RandomBatch(int b, int d, int k, Rng& rng, bool integer_rows = false) {
  BatchFeatures f;
  f.zv = integer_rows ? RandomIntegerRows(b, d, rng) : RandomUnitRows(b, d, rng);
  f.zt = integer_rows ? RandomIntegerRows(b, d, rng) : RandomUnitRows(b, d, rng);
  for (int i = 0; i < b; ++i) {
    f.sample_indices.push_back(static_cast<size_t>(i));
    f.tags.push_back(PartitionTag::kStrongCoupled);
    f.f.push_back(static_cast<int>(rng.UniformInt(k)));
    f.e.push_back(static_cast<int>(rng.UniformInt(k)));
  }
  return f;
}

void SpecSets(const PairSpec& s, std::vector<std::vector<int>>& ip,
              std::vector<std::vector<int>>& in, std::vector<std::vector<int>>& tp,
              std::vector<std::vector<int>>& tn) {
  for (const AnchorPairs& a : s.image_anchors) {
    ip.push_back(a.pos);
    in.push_back(a.neg);
  }
  for (const AnchorPairs& a : s.text_anchors) {
    tp.push_back(a.pos);
    tn.push_back(a.neg);
  }
}

// 1. Loss vs naive double loop.
Outcome LossOracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  int cases = 0;
  for (PairStrategy strategy : kAllPairStrategies) {
    for (int t = 0; t < 150; ++t) {
      const int b = 1 + static_cast<int>(rng.UniformInt(6));
      const int d = 1 + static_cast<int>(rng.UniformInt(8));
      const int k = 1 + static_cast<int>(rng.UniformInt(3));
      const double tau = rng.Uniform(0.03, 1.0);
      const BatchFeatures f = RandomBatch(b, d, k, rng);
      const PairSpec spec = BuildPairs(strategy, f);
      std::vector<std::vector<int>> ip, in, tp, tn;
      SpecSets(spec, ip, in, tp, tn);
      const double got = ContrastiveLoss(f, spec, tau);
      const double want = oracle::NaiveContrastiveLoss(f.zv, f.zt, ip, in, tp, tn, tau);
      worst = std::max(worst, std::fabs(got - want));
      ++cases;
    }
  }
  const double secs = Seconds(start);
  return {worst <= 1e-9 && secs < 10.0,
          Fmt("%.0f batches, max |diff| %.3g, %.2fs", cases, worst, secs)};
}

// 2. Analytic parameter gradients vs central differences.
Outcome GradientCheck() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(202);
  double worst = 0.0;
  int cases = 0;
  for (PairStrategy strategy : kAllPairStrategies) {
    for (int t = 0; t < 25; ++t) {
      const int b = 2 + static_cast<int>(rng.UniformInt(5));
      const int d_img = 2 + static_cast<int>(rng.UniformInt(4));
      const int d_txt = 2 + static_cast<int>(rng.UniformInt(4));
      const int d_proj = 2 + static_cast<int>(rng.UniformInt(3));
      ProjectorInit init;
      init.hidden_dim = t % 5 == 4 ? 3 : 0;
      const Projectors proj = InitProjectors(d_img, d_txt, d_proj, 1000 + t, init);
      Matrix images(b, d_img), texts(b, d_txt);
      for (Eigen::Index i = 0; i < images.size(); ++i) images.data()[i] = rng.Normal();
      for (Eigen::Index i = 0; i < texts.size(); ++i) texts.data()[i] = rng.Normal();
      std::vector<int> f(b), e(b);
      for (int i = 0; i < b; ++i) {
        f[i] = static_cast<int>(rng.UniformInt(2));
        e[i] = static_cast<int>(rng.UniformInt(2));
      }
      const double tau = rng.Uniform(0.1, 1.0);
      worst = std::max(worst, FiniteDiffCheck(proj, images, texts, f, e, strategy, tau, 1e-4));
      ++cases;
    }
  }
  const double secs = Seconds(start);
  return {worst < 1e-4 && secs < 30.0,
          Fmt("%.0f instances, max rel err %.3g, %.2fs", cases, worst, secs)};
}

// 3. Filter maps and pair sets vs brute force; duality.
Outcome PairOracle() {
  Rng rng(303);
  int cases = 0, mismatches = 0, duality_failures = 0;
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  for (int t = 0; t < 600; ++t) {
    const int b = 1 + static_cast<int>(rng.UniformInt(5));
    const int d = 1 + static_cast<int>(rng.UniformInt(4));
    const int k = 1 + static_cast<int>(rng.UniformInt(3));
    const BatchFeatures f = RandomBatch(b, d, k, rng, t % 2 == 1);
    ++cases;
    const FilterMaps maps(f);
    for (int i = 0; i < b; ++i) {
      mismatches += sorted(maps.MapF(i)) != oracle::NaiveMapF(f, i);
      mismatches += sorted(maps.MapFInv(i)) != oracle::NaiveMapFInv(f, i);
      mismatches += sorted(maps.MapE(i)) != oracle::NaiveMapE(f, i);
      mismatches += sorted(maps.MapEInv(i)) != oracle::NaiveMapEInv(f, i);
      mismatches += sorted(MapF(i, f)) != oracle::NaiveMapF(f, i);
      mismatches += sorted(MapEInv(i, f)) != oracle::NaiveMapEInv(f, i);
    }
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < b; ++j) {
        const auto fi = maps.MapFInv(i), fj = maps.MapF(j);
        const bool a = std::count(fi.begin(), fi.end(), j) > 0;
        const bool c = std::count(fj.begin(), fj.end(), i) > 0;
        duality_failures += a != c;
        const auto ei = maps.MapEInv(i), ej = maps.MapE(j);
        duality_failures += (std::count(ei.begin(), ei.end(), j) > 0) !=
                            (std::count(ej.begin(), ej.end(), i) > 0);
      }
    }
    for (PairStrategy s : kAllPairStrategies) {
      const PairSpec spec = BuildPairs(s, f);
      const oracle::NaivePairs want = oracle::NaiveBuildPairs(s, f);
      for (int i = 0; i < b; ++i) {
        mismatches += spec.image_anchors[i].pos != want.image_pos[i];
        mismatches += spec.image_anchors[i].neg != want.image_neg[i];
        mismatches += spec.text_anchors[i].pos != want.text_pos[i];
        mismatches += spec.text_anchors[i].neg != want.text_neg[i];
      }
    }
  }
  return {cases >= 500 && mismatches == 0 && duality_failures == 0,
          Fmt("%.0f cases, %.0f set mismatches, %.0f duality failures", cases, mismatches,
              duality_failures)};
}

// 4. Partition totality, sigma monotonicity, cosine scale invariance.
Outcome PartitionProperties() {
  Rng rng(404);
  int failures = 0, cases = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.UniformInt(60));
    std::vector<double> fs(n), es(n);
    for (int i = 0; i < n; ++i) {
      // Mix continuous draws with values sitting exactly on the thresholds.
      fs[i] = rng.Uniform() < 0.2 ? 0.5 + 0.2 * static_cast<double>(rng.UniformInt(3))
                                  : rng.Uniform(-1.0, 1.0);
      es[i] = rng.Uniform() < 0.2 ? 0.5 + 0.2 * static_cast<double>(rng.UniformInt(3))
                                  : rng.Uniform(-1.0, 1.0);
    }
    std::vector<std::vector<size_t>> strong;
    for (double sigma : {0.9, 0.7, 0.5}) {
      PartitionOptions o;
      o.sigma = sigma;
      const PartitionAssignment a = PartitionScores(fs, es, o);
      std::vector<int> seen(n, 0);
      for (PartitionTag tag : kAllPartitionTags) {
        for (size_t i : a.IndicesOf(tag)) ++seen[i];
      }
      failures += std::count_if(seen.begin(), seen.end(), [](int c) { return c != 1; });
      strong.push_back(a.IndicesOf(PartitionTag::kStrongCoupled));
    }
    failures += !std::includes(strong[1].begin(), strong[1].end(), strong[0].begin(),
                               strong[0].end());
    failures += !std::includes(strong[2].begin(), strong[2].end(), strong[1].begin(),
                               strong[1].end());
    ++cases;
  }
  // Evaluator embeddings: tags must not change under positive rescaling.
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng.UniformInt(30));
    const int d = 2 + static_cast<int>(rng.UniformInt(6));
    Matrix fi(n, d), ft(n, d), ei(n, d), et(n, d);
    for (Matrix* m : {&fi, &ft, &ei, &et}) {
      for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.Normal();
    }
    // Pull half of the text rows toward their image rows so both tags occur.
    for (int i = 0; i < n; i += 2) {
      ft.row(i) = fi.row(i) + 0.3 * ft.row(i);
      et.row(i) = ei.row(i) + 0.3 * et.row(i);
    }
    auto build = [&](const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& dd) {
      std::vector<PairedSample> samples;
      for (int i = 0; i < n; ++i) {
        PairedSample s;
        s.id = "x" + std::to_string(i);
        s.image_row = s.text_row = static_cast<uint32_t>(i);
        s.factual_eval_rows = RowPair{static_cast<uint32_t>(i), static_cast<uint32_t>(i)};
        s.emotional_eval_rows = s.factual_eval_rows;
        samples.push_back(s);
      }
      DatasetMatrices m;
      m.images = EmbeddingMatrix::FromMatrix(a);
      m.texts = EmbeddingMatrix::FromMatrix(b);
      m.factual_image_eval = EmbeddingMatrix::FromMatrix(a);
      m.factual_text_eval = EmbeddingMatrix::FromMatrix(b);
      m.emotional_image_eval = EmbeddingMatrix::FromMatrix(c);
      m.emotional_text_eval = EmbeddingMatrix::FromMatrix(dd);
      return PartitionDataset(AssembleDataset(std::move(samples), std::move(m)), {}).tags;
    };
    Matrix sfi = fi, sft = ft, sei = ei, set = et;
    for (int i = 0; i < n; ++i) {
      // Powers of two keep the float32 storage exact.
      sfi.row(i) *= std::ldexp(1.0, static_cast<int>(rng.UniformInt(9)) - 4);
      sft.row(i) *= std::ldexp(1.0, static_cast<int>(rng.UniformInt(9)) - 4);
      sei.row(i) *= std::ldexp(1.0, static_cast<int>(rng.UniformInt(9)) - 4);
      set.row(i) *= std::ldexp(1.0, static_cast<int>(rng.UniformInt(9)) - 4);
    }
    failures += build(fi, ft, ei, et) != build(sfi, sft, sei, set);
    ++cases;
  }
  return {failures == 0, Fmt("%.0f cases, %.0f violations", cases, failures)};
}

// 5. Filtering negatives never raises the loss.
Outcome FilterMonotonicity() {
  Rng rng(505);
  double worst = -1e300;
  int cases = 0;
  for (int t = 0; t < 200; ++t) {
    const int b = 1 + static_cast<int>(rng.UniformInt(8));
    const int d = 1 + static_cast<int>(rng.UniformInt(8));
    const int k = 1 + static_cast<int>(rng.UniformInt(3));
    const double tau = rng.Uniform(0.03, 1.0);
    const BatchFeatures f = RandomBatch(b, d, k, rng);
    for (PairStrategy s : {PairStrategy::kPartialEmotionalMatched,
                           PairStrategy::kPartialFactualMatched, PairStrategy::kWeak}) {
      const PairSpec filtered = BuildPairs(s, f);
      PairSpec full = filtered;
      for (auto* anchors : {&full.image_anchors, &full.text_anchors}) {
        for (int i = 0; i < b; ++i) {
          AnchorPairs& a = (*anchors)[i];
          a.neg.clear();
          for (int j = 0; j < b; ++j) {
            if (j != i && std::find(a.pos.begin(), a.pos.end(), j) == a.pos.end()) {
              a.neg.push_back(j);
            }
          }
        }
      }
      worst = std::max(worst, ContrastiveLoss(f, filtered, tau) - ContrastiveLoss(f, full, tau));
      ++cases;
    }
  }
  return {worst <= 1e-12,
          Fmt("%.0f batches, max L(filtered) - L(full) = %.3g", cases, worst)};
}

// 6. k-means reaches the brute-force optimum on tiny instances.
Outcome KMeansOptimality() {
  Rng rng(606);
  double worst = 0.0;
  int cases = 0;
  for (int t = 0; t < 80; ++t) {
    const int k = 1 + t % 3;
    const int n = k + static_cast<int>(rng.UniformInt(9 - k));
    const int d = 1 + static_cast<int>(rng.UniformInt(3));
    Matrix points(n, d);
    for (Eigen::Index i = 0; i < points.size(); ++i) points.data()[i] = rng.Normal();
    KMeansOptions o;
    o.k = k;
    o.seed = static_cast<uint64_t>(t);
    const ClusterResult r = KMeans(points, o);
    worst = std::max(worst, r.inertia - oracle::BruteForceKMeansInertia(points, k));
    ++cases;
  }
  return {worst <= 1e-9, Fmt("%.0f instances, max excess inertia %.3g", cases, worst)};
}

SynthConfig LearningCorpus(uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.noise_std = 0.5;
  c.p_factual_mismatch = 0.6;
  c.p_emotional_mismatch = 0.2;
  return c;
}

// 7. Partition recovers planted tags at the generator defaults.
Outcome SyntheticRecovery() {
  const auto start = std::chrono::steady_clock::now();
  const SynthCorpus corpus = GenerateSynthetic(SynthConfig{});
  const PartitionAssignment a = PartitionDataset(corpus.dataset, {});
  size_t agree = 0;
  for (size_t i = 0; i < a.size(); ++i) agree += a.tags[i] == corpus.truth.tags[i];
  const double acc = static_cast<double>(agree) / static_cast<double>(a.size());
  const double strong = SummarizePartition(a).strong;
  const double secs = Seconds(start);
  return {acc >= 0.95 && std::fabs(strong - 0.49) <= 0.03 && secs < 60.0,
          Fmt("tag accuracy %.4f, strong fraction %.4f, %.2fs", acc, strong, secs)};
}

// 8. Probe accuracy ordering: full >= strong-only >= untrained.
Outcome LearningEffect() {
  const auto start = std::chrono::steady_clock::now();
  double sums[3] = {0, 0, 0};
  const int seeds = 3;
  for (int seed = 0; seed < seeds; ++seed) {
    const SynthCorpus corpus = GenerateSynthetic(LearningCorpus(seed));
    for (int v = 0; v < 3; ++v) {
      ExperimentConfig ec;
      ec.train.seed = static_cast<uint64_t>(seed);
      ec.train.d_proj = 8;
      ec.train.lr = 3e-3;
      ec.untrained = v == 0;
      ec.train.usage = v == 1 ? SampleUsage::kStrongOnly : SampleUsage::kAll;
      sums[v] += RunExperiment(corpus.dataset, ec).probe_accuracy / seeds;
    }
  }
  const double secs = Seconds(start);
  const double gap_strong = 100.0 * (sums[1] - sums[0]);
  const double gap_full = 100.0 * (sums[2] - sums[1]);
  std::string detail = Fmt("untrained %.4f, strong-only %.4f, full %.4f", sums[0], sums[1],
                           sums[2]);
  detail += Fmt(" (gaps %.2f / %.2f points), %.1fs", gap_strong, gap_full, secs);
  return {gap_strong >= 1.0 && gap_full >= 1.0 && secs < 600.0, detail};
}

// 9. Metrics vs naive references and the worked examples.
Outcome MetricOracles() {
  Rng rng(909);
  double worst = 0.0;
  int cases = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 2 + static_cast<int>(rng.UniformInt(49));
    const int c = 2 + static_cast<int>(rng.UniformInt(4));
    std::vector<int> preds(n), labels(n);
    for (int i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.UniformInt(c));
      preds[i] = rng.Uniform() < 0.5 ? labels[i] : static_cast<int>(rng.UniformInt(c));
    }
    worst = std::max(worst, std::fabs(Accuracy(preds, labels) - oracle::NaiveAccuracy(preds, labels)));
    worst = std::max(worst,
                     std::fabs(WeightedF1(preds, labels) - oracle::NaiveWeightedF1(preds, labels)));

    Matrix scores(n, c);
    std::vector<std::vector<int>> sets(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < c; ++k) {
        // Coarse scores produce ties.
        scores(i, k) = t % 2 ? std::round(rng.Uniform() * 4.0) / 4.0 : rng.Uniform();
        if (rng.Uniform() < 0.4) sets[i].push_back(k);
      }
    }
    double ap_sum = 0.0, auc_sum = 0.0;
    int used = 0;
    for (int k = 0; k < c; ++k) {
      std::vector<double> col(n);
      std::vector<int> pos(n, 0);
      int npos = 0;
      for (int i = 0; i < n; ++i) {
        col[i] = scores(i, k);
        pos[i] = std::count(sets[i].begin(), sets[i].end(), k) > 0;
        npos += pos[i];
      }
      if (npos == 0 || npos == n) continue;
      ap_sum += oracle::NaiveAveragePrecision(col, pos);
      auc_sum += oracle::NaiveAuc(col, pos);
      ++used;
    }
    if (used > 0) {
      worst = std::max(worst, std::fabs(MeanAveragePrecision(scores, sets) - ap_sum / used));
      worst = std::max(worst, std::fabs(MeanAuc(scores, sets) - auc_sum / used));
    }
    Matrix p(n, 3), y(n, 3);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      y.data()[i] = rng.Normal();
      p.data()[i] = y.data()[i] + 0.5 * rng.Normal();
    }
    double mse = 0.0, r2 = 0.0;
    oracle::NaiveRegression(p, y, mse, r2);
    const RegressionScores rs = RegressionMetrics(p, y);
    worst = std::max(worst, std::fabs(rs.mse_x100 - mse));
    worst = std::max(worst, std::fabs(rs.r2 - r2));
    ++cases;
  }
  // Worked examples.
  const std::vector<int> l{0, 0, 1, 1}, pr{0, 1, 1, 1};
  double example_err = std::fabs(Accuracy(pr, l) - 0.75);
  example_err = std::max(example_err, std::fabs(WeightedF1(pr, l) - (0.5 * 2.0 / 3.0 + 0.5 * 0.8)));
  const std::vector<double> s{0.9, 0.8, 0.7, 0.6};
  const std::vector<char> pos{1, 0, 1, 0};
  example_err = std::max(example_err, std::fabs(AveragePrecision(s, pos) - (1.0 + 2.0 / 3.0) / 2.0));
  Matrix t(3, 1), q(3, 1);
  t << 0, 1, 2;
  q << 0, 1, 1;
  const RegressionScores rs = RegressionMetrics(q, t);
  example_err = std::max(example_err, std::fabs(rs.mse_x100 - 100.0 / 3.0));
  example_err = std::max(example_err, std::fabs(rs.r2 - 0.5));
  return {worst <= 1e-9 && example_err <= 1e-12,
          Fmt("%.0f random instances, max |diff| %.3g, worked examples max |diff| %.3g", cases,
              worst, example_err)};
}

// Runs synth -> partition -> cluster -> train -> eval through the CLI.
bool RunPipeline(const fs::path& dir, std::string& why) {
  const std::string d = dir.generic_string();
  const std::vector<std::vector<std::string>> steps = {
      {"synth", "--out", d + "/data", "--n", "400", "--seed", "7"},
      {"partition", "--data", d + "/data", "--out", d + "/partition.tsv"},
      {"cluster", "--data", d + "/data", "--k", "2", "--seed", "7", "--out", d + "/labels.tsv"},
      {"train", "--data", d + "/data", "--partition", d + "/partition.tsv", "--labels",
       d + "/labels.tsv", "--epochs", "6", "--seed", "7", "--out", d + "/run"},
      {"eval", "--probe", "linear", "--features", d + "/run/image_features.emb", "--data",
       d + "/data", "--seed", "7", "--out", d + "/report.json"},
      {"zeroshot", "--data", d + "/data", "--checkpoint", d + "/run/checkpoint", "--out",
       d + "/zeroshot.json"}};
  for (const auto& args : steps) {
    std::ostringstream out, err;
    if (cli::RunCli(args, out, err) != 0) {
      why = args[0] + " failed: " + err.str();
      return false;
    }
  }
  return true;
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), dir).generic_string()] = ReadFileBytes(entry.path());
    }
  }
  return files;
}

// 10. Two identical end-to-end runs give byte-identical artifacts.
Outcome Determinism() {
  const fs::path root = fs::temp_directory_path() / "pacl_acceptance_determinism";
  fs::remove_all(root);
  std::string why;
  std::map<std::string, std::string> first, second;
  if (!RunPipeline(root, why)) return {false, why};
  first = Snapshot(root);
  fs::remove_all(root);
  if (!RunPipeline(root, why)) return {false, why};
  second = Snapshot(root);
  fs::remove_all(root);
  size_t differing = 0;
  for (const auto& [name, bytes] : first) {
    auto it = second.find(name);
    differing += it == second.end() || it->second != bytes;
  }
  differing += second.size() > first.size() ? second.size() - first.size() : 0;
  return {!first.empty() && differing == 0 && first.count("report.json") == 1,
          Fmt("%.0f artifacts compared, %.0f differ", static_cast<double>(first.size()),
              static_cast<double>(differing))};
}

// 11. Phase boundaries and loss components in the training log.
Outcome ScheduleConformance() {
  SynthConfig sc;
  sc.n = 300;
  const SynthCorpus corpus = GenerateSynthetic(sc);
  const PartitionAssignment a = PartitionDataset(corpus.dataset, {});
  KMeansOptions ko;
  const PseudoLabels labels = AssignPseudoLabels(corpus.dataset, ko);
  int violations = 0;
  std::string epochs_checked;
  for (int epochs : {30, 10, 7, 3}) {
    TrainConfig tc;
    tc.epochs = epochs;
    tc.batch_size = 32;
    const TrainState state = Train(corpus.dataset, a, labels, tc);
    const int p2 = epochs / 3, p3 = 2 * epochs / 3;
    int first_l2 = -1, first_l3 = -1, first_l4 = -1;
    for (const EpochLog& e : state.log) {
      const Phase want = e.epoch < p2 ? Phase::kP1 : e.epoch < p3 ? Phase::kP2 : Phase::kP3;
      violations += e.phase != want;
      if (e.losses[1] && first_l2 < 0) first_l2 = e.epoch;
      if (e.losses[2] && first_l3 < 0) first_l3 = e.epoch;
      if (e.losses[3] && first_l4 < 0) first_l4 = e.epoch;
      violations += !e.losses[0].has_value();
    }
    violations += static_cast<int>(state.log.size()) != epochs;
    violations += first_l2 != (p2 < p3 ? p2 : p3 < epochs ? p3 : -1);
    violations += first_l3 != (p2 < p3 ? p2 : p3 < epochs ? p3 : -1);
    violations += first_l4 != (p3 < epochs ? p3 : -1);
    epochs_checked += (epochs_checked.empty() ? "" : ",") + std::to_string(epochs);
  }
  return {violations == 0,
          "E in {" + epochs_checked + "}, " + std::to_string(violations) + " violations"};
}

}  // namespace
}  // namespace pacl

int main() {
  using pacl::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 loss oracle equivalence", pacl::LossOracle},
      {"2 gradient correctness", pacl::GradientCheck},
      {"3 pair-set oracle and duality", pacl::PairOracle},
      {"4 partition totality and monotonicity", pacl::PartitionProperties},
      {"5 filter monotonicity", pacl::FilterMonotonicity},
      {"6 k-means small-scale optimality", pacl::KMeansOptimality},
      {"7 synthetic recovery", pacl::SyntheticRecovery},
      {"8 learning effect", pacl::LearningEffect},
      {"9 metric oracles", pacl::MetricOracles},
      {"10 determinism", pacl::Determinism},
      {"11 schedule conformance", pacl::ScheduleConformance},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
