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

#ifndef PACL_PAIR_BUILDER_H_
#define PACL_PAIR_BUILDER_H_

#include <string>
#include <string_view>
#include <vector>

#include "pacl/matrix.h"
#include "pacl/partition.h"

namespace pacl {

// Projected, unit-norm features of one minibatch plus the per-sample
// pseudo-labels that drive the filter maps.
struct BatchFeatures {
  Matrix zv;  // B x d image features
  Matrix zt;  // B x d text features
  std::vector<size_t> sample_indices;
  std::vector<PartitionTag> tags;
  std::vector<int> f;  // factual pseudo-label of each image
  std::vector<int> e;  // emotional pseudo-label of each text

  size_t size() const { return static_cast<size_t>(zv.rows()); }
};

// Positive and negative index sets of one anchor, both ascending.
struct AnchorPairs {
  std::vector<int> pos;
  std::vector<int> neg;

  bool operator==(const AnchorPairs&) const = default;
};

// image_anchors[i] indexes texts; text_anchors[i] indexes images.
struct PairSpec {
  std::vector<AnchorPairs> image_anchors;
  std::vector<AnchorPairs> text_anchors;

  size_t size() const { return image_anchors.size(); }
  bool operator==(const PairSpec&) const = default;
};

enum class PairStrategy {
  kStrong,                   // L1
  kPartialEmotionalMatched,  // L2, negatives filtered by m_f
  kPartialFactualMatched,    // L3, negatives filtered by m_e
  kWeak,                     // L4, reconstructed positives, both filters
};

inline constexpr PairStrategy kAllPairStrategies[] = {
    PairStrategy::kStrong, PairStrategy::kPartialEmotionalMatched,
    PairStrategy::kPartialFactualMatched, PairStrategy::kWeak};

PairStrategy StrategyForTag(PartitionTag tag);
std::string_view PairStrategyName(PairStrategy strategy);

// Batch-scoped candidate maps. Construction finds, once, the best-matching
// text for every image and the best-matching image for every text by dot
// product (ties to the lowest index); each map query is then O(B).
class FilterMaps {
 public:
  explicit FilterMaps(const BatchFeatures& features);

  // argmax_k zv_i . zt_k
  int BestTextForImage(int i) const { return best_text_[i]; }
  // argmax_k zv_k . zt_i
  int BestImageForText(int i) const { return best_image_[i]; }

  // Images sharing the factual cluster of the image closest to text i.
  std::vector<int> MapF(int text) const;
  // Texts j with image i in MapF(j).
  std::vector<int> MapFInv(int image) const;
  // Texts sharing the emotional cluster of the text closest to image i.
  std::vector<int> MapE(int image) const;
  // Images j with text i in MapE(j).
  std::vector<int> MapEInv(int text) const;

 private:
  const BatchFeatures& features_;
  std::vector<int> best_text_;
  std::vector<int> best_image_;
};

std::vector<int> MapF(int text, const BatchFeatures& features);
std::vector<int> MapFInv(int image, const BatchFeatures& features);
std::vector<int> MapE(int image, const BatchFeatures& features);
std::vector<int> MapEInv(int text, const BatchFeatures& features);

PairSpec BuildPairsStrong(const BatchFeatures& features);
PairSpec BuildPairsPartialEmotionalMatched(const BatchFeatures& features);
PairSpec BuildPairsPartialFactualMatched(const BatchFeatures& features);
PairSpec BuildPairsWeak(const BatchFeatures& features);
PairSpec BuildPairs(PairStrategy strategy, const BatchFeatures& features);

// Throws kEmptyPositive / kInvalidArgument when an anchor breaks the
// PairSpec invariants (nonempty positives, disjoint sets, indices < B).
void ValidatePairSpec(const PairSpec& spec, size_t batch_size);

// Debug dump: direction, anchor, pos, neg (comma-separated indices).
std::string PairSpecToTsv(const PairSpec& spec);

}  // namespace pacl

#endif  // PACL_PAIR_BUILDER_H_
