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

#ifndef PACL_PARTITION_H_
#define PACL_PARTITION_H_

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pacl/embeddings_io.h"

namespace pacl {

// Four-way split of image-text pairs by which of the two match tests pass.
enum class PartitionTag : uint8_t {
  kStrongCoupled = 0,
  kPartialEmotionalMatched = 1,  // emotional-matched, factual-mismatched
  kPartialFactualMatched = 2,    // factual-matched, emotional-mismatched
  kWeakCoupled = 3,
};

inline constexpr std::array<PartitionTag, 4> kAllPartitionTags = {
    PartitionTag::kStrongCoupled, PartitionTag::kPartialEmotionalMatched,
    PartitionTag::kPartialFactualMatched, PartitionTag::kWeakCoupled};

// strong, partial_emotional, partial_factual, weak
std::string_view PartitionTagName(PartitionTag tag);
PartitionTag ParsePartitionTag(std::string_view name);
PartitionTag TagFromMatches(bool factual_matched, bool emotional_matched);

// dot(a,b)/(|a||b|). Throws kDimMismatch or kZeroVector.
double CosineSimilarity(std::span<const float> a, std::span<const float> b);
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

struct MatchResult {
  double score = 0.0;
  bool matched = false;
};

// A provided score wins over evaluator embeddings. matched = score > sigma.
MatchResult FactualMatch(const PairedSample& sample, const PairedDataset& dataset,
                         double sigma);
MatchResult EmotionalMatch(const PairedSample& sample,
                           const PairedDataset& dataset, double sigma);

struct PartitionOptions {
  double sigma = 0.7;
  // Overrides sigma for the emotional test only.
  std::optional<double> emotional_sigma;

  double factual_threshold() const { return sigma; }
  double emotional_threshold() const { return emotional_sigma.value_or(sigma); }
};

struct PartitionAssignment {
  std::vector<PartitionTag> tags;
  std::vector<double> factual_scores;
  std::vector<double> emotional_scores;
  double sigma_factual = 0.7;
  double sigma_emotional = 0.7;

  size_t size() const { return tags.size(); }
  // Sample indices carrying `tag`, ascending.
  std::vector<size_t> IndicesOf(PartitionTag tag) const;
};

PartitionAssignment PartitionDataset(const PairedDataset& dataset,
                                     const PartitionOptions& options);
// Same decision rule applied to precomputed scores.
PartitionAssignment PartitionScores(std::span<const double> factual_scores,
                                    std::span<const double> emotional_scores,
                                    const PartitionOptions& options);

struct PartitionSummary {
  size_t total = 0;
  double strong = 0.0;
  double partial_emotional = 0.0;
  double partial_factual = 0.0;
  double weak = 0.0;

  double partial() const { return partial_emotional + partial_factual; }
};

// Throws kEmptyDataset on an empty assignment.
PartitionSummary SummarizePartition(const PartitionAssignment& assignment);

// Which match tests drive the split. kNone treats every pair as
// strong-coupled; kFactual / kEmotional use a single test and send its
// mismatches to the partial partition whose filter map fits them.
enum class PartitionMode { kNone, kFactual, kEmotional, kBoth };

std::string_view PartitionModeName(PartitionMode mode);
PartitionMode ParsePartitionMode(std::string_view name);
PartitionAssignment ApplyPartitionMode(const PartitionAssignment& assignment,
                                       PartitionMode mode);

// TSV: id, tag, factual_score, emotional_score (with header row).
void WritePartitionTsv(const std::filesystem::path& path,
                       const PairedDataset& dataset,
                       const PartitionAssignment& assignment);
// Tags are matched to `dataset` by id; every sample must appear.
PartitionAssignment ReadPartitionTsv(const std::filesystem::path& path,
                                     const PairedDataset& dataset);

}  // namespace pacl

#endif  // PACL_PARTITION_H_
