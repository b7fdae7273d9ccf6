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

#ifndef PACL_METRICS_H_
#define PACL_METRICS_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pacl/matrix.h"

namespace pacl {

double Accuracy(std::span<const int> preds, std::span<const int> labels);

struct ClassScore {
  int label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t support = 0;
};

// Sum over classes of (support / n) * F1, where an undefined precision or
// recall makes that class's F1 zero. Classes absent from `labels` weigh 0.
double WeightedF1(std::span<const int> preds, std::span<const int> labels,
                  std::vector<ClassScore>* per_class = nullptr);

// Non-interpolated AP of one class: mean precision at the rank of each
// positive, ranking by (-score, index). Returns 0 with no positives.
double AveragePrecision(std::span<const double> scores,
                        std::span<const char> is_positive);
// Mann-Whitney statistic; tied pairs count one half.
double RocAuc(std::span<const double> scores, std::span<const char> is_positive);

struct RankingClassScore {
  int label = 0;
  size_t positives = 0;
  double ap = 0.0;
  double auc = 0.0;
  // False when the class lacks positives or negatives; excluded from means.
  bool included = false;
};

struct RankingScores {
  double map = 0.0;
  double auc = 0.0;
  std::vector<RankingClassScore> per_class;
};

// scores: n x C. label_sets[i] lists the classes of sample i.
RankingScores MultiLabelRanking(const Matrix& scores,
                                const std::vector<std::vector<int>>& label_sets);
double MeanAveragePrecision(const Matrix& scores,
                            const std::vector<std::vector<int>>& label_sets);
double MeanAuc(const Matrix& scores, const std::vector<std::vector<int>>& label_sets);

struct RegressionScores {
  double mse_x100 = 0.0;
  double r2 = 0.0;
  std::vector<double> mse_per_dim;
  std::vector<double> r2_per_dim;
};

// Means over columns of MSE (reported x100) and R^2 = 1 - SS_res / SS_tot.
// A constant target column has R^2 = 1 if predicted exactly, else 0.
RegressionScores RegressionMetrics(const Matrix& preds, const Matrix& targets);

enum class TaskKind { kSingleLabel, kMultiLabel, kRegression };
std::string_view TaskKindName(TaskKind kind);

struct MetricReport {
  TaskKind kind = TaskKind::kSingleLabel;
  std::vector<std::pair<std::string, double>> values;
  // Column names and rows of the per-class table.
  std::vector<std::string> table_columns;
  std::vector<std::vector<double>> table_rows;

  double Value(const std::string& name) const;
  std::string ToJson() const;
  static MetricReport FromJson(const std::string& text);
};

MetricReport SingleLabelReport(std::span<const int> preds, std::span<const int> labels);
MetricReport MultiLabelReport(const Matrix& scores,
                              const std::vector<std::vector<int>>& label_sets);
MetricReport RegressionReport(const Matrix& preds, const Matrix& targets);

}  // namespace pacl

#endif  // PACL_METRICS_H_
