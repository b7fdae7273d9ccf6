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

#include "pacl/partition.h"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "pacl/error.h"
#include "pacl/tsv.h"

namespace pacl {
namespace {

template <typename T>
double Cosine(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimMismatch,
                "cosine of vectors with dims " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine of an all-zero vector");
  }
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

MatchResult Match(const PairedSample& sample, const std::optional<double>& score,
                  const std::optional<RowPair>& rows,
                  const std::optional<EmbeddingMatrix>& image_eval,
                  const std::optional<EmbeddingMatrix>& text_eval, double sigma,
                  const char* aspect) {
  double s;
  if (score) {
    s = *score;
  } else if (rows && image_eval && text_eval) {
    s = Cosine(image_eval->row(rows->image), text_eval->row(rows->text));
  } else {
    throw Error(ErrorCode::kMissingEvaluator,
                "sample '" + sample.id + "' has no " + aspect +
                    " evaluator input");
  }
  return {s, s > sigma};
}

void CheckSigma(double sigma) {
  if (!std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be finite");
  }
}

}  // namespace

std::string_view PartitionTagName(PartitionTag tag) {
  switch (tag) {
    case PartitionTag::kStrongCoupled: return "strong";
    case PartitionTag::kPartialEmotionalMatched: return "partial_emotional";
    case PartitionTag::kPartialFactualMatched: return "partial_factual";
    case PartitionTag::kWeakCoupled: return "weak";
  }
  return "?";
}

PartitionTag ParsePartitionTag(std::string_view name) {
  for (PartitionTag t : kAllPartitionTags) {
    if (PartitionTagName(t) == name) return t;
  }
  throw Error(ErrorCode::kParseError,
              "unknown partition tag '" + std::string(name) + "'");
}

PartitionTag TagFromMatches(bool factual_matched, bool emotional_matched) {
  if (factual_matched && emotional_matched) return PartitionTag::kStrongCoupled;
  if (emotional_matched) return PartitionTag::kPartialEmotionalMatched;
  if (factual_matched) return PartitionTag::kPartialFactualMatched;
  return PartitionTag::kWeakCoupled;
}

double CosineSimilarity(std::span<const float> a, std::span<const float> b) {
  return Cosine(a, b);
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  return Cosine(a, b);
}

MatchResult FactualMatch(const PairedSample& sample, const PairedDataset& dataset,
                         double sigma) {
  const auto& m = dataset.matrices;
  return Match(sample, sample.factual_score, sample.factual_eval_rows,
               m.factual_image_eval, m.factual_text_eval, sigma, "factual");
}

MatchResult EmotionalMatch(const PairedSample& sample,
                           const PairedDataset& dataset, double sigma) {
  const auto& m = dataset.matrices;
  return Match(sample, sample.emotional_score, sample.emotional_eval_rows,
               m.emotional_image_eval, m.emotional_text_eval, sigma, "emotional");
}

std::vector<size_t> PartitionAssignment::IndicesOf(PartitionTag tag) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == tag) out.push_back(i);
  }
  return out;
}

PartitionAssignment PartitionDataset(const PairedDataset& dataset,
                                     const PartitionOptions& options) {
  CheckSigma(options.factual_threshold());
  CheckSigma(options.emotional_threshold());
  PartitionAssignment a;
  a.sigma_factual = options.factual_threshold();
  a.sigma_emotional = options.emotional_threshold();
  a.tags.reserve(dataset.size());
  for (const PairedSample& s : dataset.samples) {
    const MatchResult f = FactualMatch(s, dataset, a.sigma_factual);
    const MatchResult e = EmotionalMatch(s, dataset, a.sigma_emotional);
    a.factual_scores.push_back(f.score);
    a.emotional_scores.push_back(e.score);
    a.tags.push_back(TagFromMatches(f.matched, e.matched));
  }
  return a;
}

PartitionAssignment PartitionScores(std::span<const double> factual_scores,
                                    std::span<const double> emotional_scores,
                                    const PartitionOptions& options) {
  if (factual_scores.size() != emotional_scores.size()) {
    throw Error(ErrorCode::kDimMismatch, "score arrays differ in length");
  }
  CheckSigma(options.factual_threshold());
  CheckSigma(options.emotional_threshold());
  PartitionAssignment a;
  a.sigma_factual = options.factual_threshold();
  a.sigma_emotional = options.emotional_threshold();
  a.factual_scores.assign(factual_scores.begin(), factual_scores.end());
  a.emotional_scores.assign(emotional_scores.begin(), emotional_scores.end());
  for (size_t i = 0; i < factual_scores.size(); ++i) {
    a.tags.push_back(TagFromMatches(factual_scores[i] > a.sigma_factual,
                                    emotional_scores[i] > a.sigma_emotional));
  }
  return a;
}

PartitionSummary SummarizePartition(const PartitionAssignment& assignment) {
  if (assignment.tags.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot summarize an empty partition");
  }
  std::array<size_t, 4> counts{};
  for (PartitionTag t : assignment.tags) ++counts[static_cast<size_t>(t)];
  const double n = static_cast<double>(assignment.tags.size());
  PartitionSummary s;
  s.total = assignment.tags.size();
  s.strong = counts[0] / n;
  s.partial_emotional = counts[1] / n;
  s.partial_factual = counts[2] / n;
  s.weak = counts[3] / n;
  return s;
}

std::string_view PartitionModeName(PartitionMode mode) {
  switch (mode) {
    case PartitionMode::kNone: return "none";
    case PartitionMode::kFactual: return "factual";
    case PartitionMode::kEmotional: return "emotional";
    case PartitionMode::kBoth: return "both";
  }
  return "?";
}

PartitionMode ParsePartitionMode(std::string_view name) {
  for (PartitionMode m : {PartitionMode::kNone, PartitionMode::kFactual,
                          PartitionMode::kEmotional, PartitionMode::kBoth}) {
    if (PartitionModeName(m) == name) return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown partition mode '" + std::string(name) + "'");
}

PartitionAssignment ApplyPartitionMode(const PartitionAssignment& assignment,
                                       PartitionMode mode) {
  PartitionAssignment out = assignment;
  for (size_t i = 0; i < out.tags.size(); ++i) {
    const bool f = out.factual_scores[i] > out.sigma_factual;
    const bool e = out.emotional_scores[i] > out.sigma_emotional;
    switch (mode) {
      case PartitionMode::kNone:
        out.tags[i] = PartitionTag::kStrongCoupled;
        break;
      case PartitionMode::kFactual:
        // Factual mismatches get the factual filter map (m_f).
        out.tags[i] = f ? PartitionTag::kStrongCoupled
                        : PartitionTag::kPartialEmotionalMatched;
        break;
      case PartitionMode::kEmotional:
        out.tags[i] = e ? PartitionTag::kStrongCoupled
                        : PartitionTag::kPartialFactualMatched;
        break;
      case PartitionMode::kBoth:
        out.tags[i] = TagFromMatches(f, e);
        break;
    }
  }
  return out;
}

void WritePartitionTsv(const std::filesystem::path& path,
                       const PairedDataset& dataset,
                       const PartitionAssignment& assignment) {
  if (assignment.size() != dataset.size()) {
    throw Error(ErrorCode::kDimMismatch, "assignment does not match dataset");
  }
  TsvWriter w({"id", "tag", "factual_score", "emotional_score"});
  w.SetMeta("sigma_factual", FormatDouble(assignment.sigma_factual));
  w.SetMeta("sigma_emotional", FormatDouble(assignment.sigma_emotional));
  for (size_t i = 0; i < dataset.size(); ++i) {
    w.AddRow({dataset.samples[i].id,
              std::string(PartitionTagName(assignment.tags[i])),
              FormatDouble(assignment.factual_scores[i]),
              FormatDouble(assignment.emotional_scores[i])});
  }
  w.Write(path);
}

PartitionAssignment ReadPartitionTsv(const std::filesystem::path& path,
                                     const PairedDataset& dataset) {
  const TsvTable table = ReadTsv(path, {"id", "tag", "factual_score",
                                        "emotional_score"});
  std::unordered_map<std::string, size_t> by_id;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (!by_id.emplace(table.rows[r][0], r).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate id '" + table.rows[r][0] + "' in " + path.string());
    }
  }
  PartitionAssignment a;
  for (const PairedSample& s : dataset.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kParseError,
                  "sample '" + s.id + "' missing from " + path.string());
    }
    const auto& row = table.rows[it->second];
    a.tags.push_back(ParsePartitionTag(row[1]));
    a.factual_scores.push_back(ParseDouble(row[2]));
    a.emotional_scores.push_back(ParseDouble(row[3]));
  }
  a.sigma_factual = ParseDouble(table.MetaOr("sigma_factual", "0.7"));
  a.sigma_emotional = ParseDouble(table.MetaOr("sigma_emotional", "0.7"));
  return a;
}

}  // namespace pacl
