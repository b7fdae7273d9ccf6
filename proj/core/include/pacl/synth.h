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

#ifndef PACL_SYNTH_H_
#define PACL_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pacl/embeddings_io.h"
#include "pacl/partition.h"

namespace pacl {

// Noisy paired corpus with planted factors. Each image carries a factual
// factor g and an emotional factor h; its text carries (text_g, text_h),
// which differ from (g, h) with the given mismatch probabilities.
struct SynthConfig {
  int n = 2000;
  int d_img = 32;
  int d_txt = 32;
  int d_eval = 16;
  int num_factual = 4;    // G
  int num_emotional = 4;  // H
  double noise_std = 0.1;
  double p_factual_mismatch = 0.3;
  double p_emotional_mismatch = 0.3;
  uint64_t seed = 0;
  // Weight of the emotional prototype in image / text space.
  double image_emotional_weight = 0.7;
  double text_emotional_weight = 1.0;
  // Evaluator score model: base - drop * [mismatch] + N(0, score_noise).
  double score_match = 0.9;
  double score_drop = 0.5;
  double score_noise = 0.03;
  // Emit raw evaluator embeddings whose cosine equals the score instead of
  // the scores themselves.
  bool evaluator_embeddings = false;
  int prompts_per_class = 2;

  // Throws kBadConfig.
  void Validate() const;
};

struct GroundTruth {
  std::vector<int> g;
  std::vector<int> h;
  std::vector<int> text_g;
  std::vector<int> text_h;
  std::vector<PartitionTag> tags;

  size_t size() const { return g.size(); }
};

struct SynthCorpus {
  PairedDataset dataset;
  GroundTruth truth;
  // Text-space embeddings standing in for "a photo with [C] emotion",
  // several rows per emotional class.
  Matrix prompts;
  std::vector<int> prompt_classes;
};

SynthCorpus GenerateSynthetic(const SynthConfig& config);

// TSV: id, g, h, text_g, text_h, true_tag.
void WriteGroundTruthTsv(const std::filesystem::path& path,
                         const PairedDataset& dataset, const GroundTruth& truth);
GroundTruth ReadGroundTruthTsv(const std::filesystem::path& path,
                               const PairedDataset& dataset);

// Writes the dataset files (see DatasetPaths::InDirectory) plus
// ground_truth.tsv, prompts.emb and prompts.tsv.
void WriteSyntheticCorpus(const std::filesystem::path& dir, const SynthCorpus& corpus);

// Fraction of points whose label maps to the truth under the best
// one-to-one relabeling (exhaustive over permutations; k <= 8).
double BestPermutationAgreement(const std::vector<int>& labels,
                                const std::vector<int>& truth, int k);

}  // namespace pacl

#endif  // PACL_SYNTH_H_
