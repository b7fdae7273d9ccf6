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

#include "pacl/metrics.h"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "json.hpp"
#include "pacl/error.h"

namespace pacl {
namespace {

using nlohmann::json;

void CheckSameLength(size_t a, size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimMismatch, "prediction and label counts differ");
  }
  if (a == 0) throw Error(ErrorCode::kEmptyDataset, "no samples to score");
}

std::vector<char> ClassColumn(const std::vector<std::vector<int>>& label_sets,
                              int cls) {
  std::vector<char> out(label_sets.size(), 0);
  for (size_t i = 0; i < label_sets.size(); ++i) {
    out[i] = std::find(label_sets[i].begin(), label_sets[i].end(), cls) !=
             label_sets[i].end();
  }
  return out;
}

}  // namespace

double Accuracy(std::span<const int> preds, std::span<const int> labels) {
  CheckSameLength(preds.size(), labels.size());
  size_t hits = 0;
  for (size_t i = 0; i < preds.size(); ++i) hits += preds[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double WeightedF1(std::span<const int> preds, std::span<const int> labels,
                  std::vector<ClassScore>* per_class) {
  CheckSameLength(preds.size(), labels.size());
  std::map<int, std::array<size_t, 3>> counts;  // tp, predicted, support
  for (size_t i = 0; i < preds.size(); ++i) {
    ++counts[preds[i]][1];
    ++counts[labels[i]][2];
    if (preds[i] == labels[i]) ++counts[labels[i]][0];
  }
  const double n = static_cast<double>(labels.size());
  double weighted = 0.0;
  if (per_class) per_class->clear();
  for (const auto& [cls, c] : counts) {
    ClassScore s;
    s.label = cls;
    s.support = c[2];
    const bool p_defined = c[1] > 0;
    const bool r_defined = c[2] > 0;
    if (p_defined) s.precision = static_cast<double>(c[0]) / c[1];
    if (r_defined) s.recall = static_cast<double>(c[0]) / c[2];
    if (p_defined && r_defined && s.precision + s.recall > 0.0) {
      s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    }
    weighted += (static_cast<double>(s.support) / n) * s.f1;
    if (per_class) per_class->push_back(s);
  }
  return weighted;
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const char> is_positive) {
  CheckSameLength(scores.size(), is_positive.size());
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });
  double hits = 0.0, sum = 0.0;
  for (size_t rank = 0; rank < order.size(); ++rank) {
    if (is_positive[order[rank]]) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  return hits > 0.0 ? sum / hits : 0.0;
}

double RocAuc(std::span<const double> scores, std::span<const char> is_positive) {
  CheckSameLength(scores.size(), is_positive.size());
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Average ranks over ties, then U = R_pos - P(P+1)/2.
  double rank_sum = 0.0;
  size_t positives = 0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) {
      if (is_positive[order[t]]) {
        rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j + 1;
  }
  const size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return 0.0;
  const double p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

RankingScores MultiLabelRanking(const Matrix& scores,
                                const std::vector<std::vector<int>>& label_sets) {
  CheckSameLength(static_cast<size_t>(scores.rows()), label_sets.size());
  RankingScores out;
  size_t included = 0;
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    const std::vector<char> positive = ClassColumn(label_sets, static_cast<int>(c));
    std::vector<double> column(scores.rows());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) column[i] = scores(i, c);
    RankingClassScore s;
    s.label = static_cast<int>(c);
    s.positives = static_cast<size_t>(std::count(positive.begin(), positive.end(), 1));
    s.included = s.positives > 0 && s.positives < positive.size();
    if (s.included) {
      s.ap = AveragePrecision(column, positive);
      s.auc = RocAuc(column, positive);
      out.map += s.ap;
      out.auc += s.auc;
      ++included;
    }
    out.per_class.push_back(s);
  }
  if (included > 0) {
    out.map /= static_cast<double>(included);
    out.auc /= static_cast<double>(included);
  }
  return out;
}

double MeanAveragePrecision(const Matrix& scores,
                            const std::vector<std::vector<int>>& label_sets) {
  return MultiLabelRanking(scores, label_sets).map;
}

double MeanAuc(const Matrix& scores, const std::vector<std::vector<int>>& label_sets) {
  return MultiLabelRanking(scores, label_sets).auc;
}

RegressionScores RegressionMetrics(const Matrix& preds, const Matrix& targets) {
  if (preds.rows() != targets.rows() || preds.cols() != targets.cols()) {
    throw Error(ErrorCode::kDimMismatch, "prediction and target shapes differ");
  }
  if (preds.rows() == 0 || preds.cols() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "no samples to score");
  }
  RegressionScores out;
  const double n = static_cast<double>(preds.rows());
  for (Eigen::Index d = 0; d < preds.cols(); ++d) {
    const double mean = targets.col(d).mean();
    const double ss_res = (preds.col(d) - targets.col(d)).squaredNorm();
    const double ss_tot = (targets.col(d).array() - mean).square().sum();
    out.mse_per_dim.push_back(ss_res / n);
    double r2;
    if (ss_tot > 0.0) {
      r2 = 1.0 - ss_res / ss_tot;
    } else {
      r2 = ss_res == 0.0 ? 1.0 : 0.0;
    }
    out.r2_per_dim.push_back(r2);
  }
  const double dims = static_cast<double>(preds.cols());
  out.mse_x100 = 100.0 *
                 std::accumulate(out.mse_per_dim.begin(), out.mse_per_dim.end(), 0.0) /
                 dims;
  out.r2 = std::accumulate(out.r2_per_dim.begin(), out.r2_per_dim.end(), 0.0) / dims;
  return out;
}

std::string_view TaskKindName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSingleLabel: return "single_label";
    case TaskKind::kMultiLabel: return "multi_label";
    case TaskKind::kRegression: return "regression";
  }
  return "?";
}

double MetricReport::Value(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "report has no metric '" + name + "'");
}

std::string MetricReport::ToJson() const {
  json j;
  j["task"] = std::string(TaskKindName(kind));
  json vals = json::object();
  for (const auto& [k, v] : values) vals[k] = v;
  j["metrics"] = vals;
  j["per_class"] = {{"columns", table_columns}, {"rows", table_rows}};
  return j.dump(2) + "\n";
}

MetricReport MetricReport::FromJson(const std::string& text) {
  MetricReport r;
  try {
    const json j = json::parse(text);
    const std::string task = j.at("task").get<std::string>();
    if (task == "single_label") r.kind = TaskKind::kSingleLabel;
    else if (task == "multi_label") r.kind = TaskKind::kMultiLabel;
    else if (task == "regression") r.kind = TaskKind::kRegression;
    else throw Error(ErrorCode::kParseError, "unknown task '" + task + "'");
    // nlohmann objects iterate in key order.
    for (const auto& [k, v] : j.at("metrics").items()) {
      r.values.emplace_back(k, v.get<double>());
    }
    r.table_columns = j.at("per_class").at("columns").get<std::vector<std::string>>();
    r.table_rows = j.at("per_class").at("rows").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("bad metric report: ") + e.what());
  }
  return r;
}

MetricReport SingleLabelReport(std::span<const int> preds, std::span<const int> labels) {
  MetricReport r;
  r.kind = TaskKind::kSingleLabel;
  std::vector<ClassScore> per_class;
  r.values.emplace_back("acc", Accuracy(preds, labels));
  r.values.emplace_back("weighted_f1", WeightedF1(preds, labels, &per_class));
  r.table_columns = {"class", "precision", "recall", "f1", "support"};
  for (const ClassScore& s : per_class) {
    r.table_rows.push_back({static_cast<double>(s.label), s.precision, s.recall, s.f1,
                            static_cast<double>(s.support)});
  }
  return r;
}

MetricReport MultiLabelReport(const Matrix& scores,
                              const std::vector<std::vector<int>>& label_sets) {
  const RankingScores s = MultiLabelRanking(scores, label_sets);
  MetricReport r;
  r.kind = TaskKind::kMultiLabel;
  r.values.emplace_back("map", s.map);
  r.values.emplace_back("auc", s.auc);
  r.table_columns = {"class", "positives", "ap", "auc", "included"};
  for (const RankingClassScore& c : s.per_class) {
    r.table_rows.push_back({static_cast<double>(c.label), static_cast<double>(c.positives),
                            c.ap, c.auc, c.included ? 1.0 : 0.0});
  }
  return r;
}

MetricReport RegressionReport(const Matrix& preds, const Matrix& targets) {
  const RegressionScores s = RegressionMetrics(preds, targets);
  MetricReport r;
  r.kind = TaskKind::kRegression;
  r.values.emplace_back("mse_x100", s.mse_x100);
  r.values.emplace_back("r2", s.r2);
  r.table_columns = {"dim", "mse", "r2"};
  for (size_t d = 0; d < s.mse_per_dim.size(); ++d) {
    r.table_rows.push_back({static_cast<double>(d), s.mse_per_dim[d], s.r2_per_dim[d]});
  }
  return r;
}

}  // namespace pacl
