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

#include "pacl/pair_builder.h"

#include <algorithm>

#include "pacl/error.h"
#include "pacl/tsv.h"

namespace pacl {
namespace {

// Indices j != anchor of [0, B) that are in neither excluded set.
std::vector<int> NegativesExcluding(int batch, int anchor,
                                    const std::vector<int>& excluded_a,
                                    const std::vector<int>& excluded_b = {}) {
  std::vector<char> drop(batch, 0);
  for (int j : excluded_a) drop[j] = 1;
  for (int j : excluded_b) drop[j] = 1;
  std::vector<int> out;
  for (int j = 0; j < batch; ++j) {
    if (j != anchor && !drop[j]) out.push_back(j);
  }
  return out;
}

std::vector<int> AllExcept(int batch, int anchor) {
  return NegativesExcluding(batch, anchor, {});
}

void RemoveIndex(std::vector<int>& v, int index) {
  v.erase(std::remove(v.begin(), v.end(), index), v.end());
}

std::string JoinIndices(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

void CheckLabels(const BatchFeatures& features) {
  const size_t b = features.size();
  if (features.zt.rows() != static_cast<Eigen::Index>(b) ||
      features.zv.cols() != features.zt.cols()) {
    throw Error(ErrorCode::kDimMismatch, "image and text features disagree in shape");
  }
  if (features.f.size() != b || features.e.size() != b) {
    throw Error(ErrorCode::kDimMismatch, "pseudo-labels do not match batch size");
  }
}

}  // namespace

PairStrategy StrategyForTag(PartitionTag tag) {
  switch (tag) {
    case PartitionTag::kStrongCoupled: return PairStrategy::kStrong;
    case PartitionTag::kPartialEmotionalMatched:
      return PairStrategy::kPartialEmotionalMatched;
    case PartitionTag::kPartialFactualMatched:
      return PairStrategy::kPartialFactualMatched;
    case PartitionTag::kWeakCoupled: return PairStrategy::kWeak;
  }
  return PairStrategy::kStrong;
}

std::string_view PairStrategyName(PairStrategy strategy) {
  switch (strategy) {
    case PairStrategy::kStrong: return "strong";
    case PairStrategy::kPartialEmotionalMatched: return "partial_emotional";
    case PairStrategy::kPartialFactualMatched: return "partial_factual";
    case PairStrategy::kWeak: return "weak";
  }
  return "?";
}

FilterMaps::FilterMaps(const BatchFeatures& features) : features_(features) {
  CheckLabels(features);
  const int b = static_cast<int>(features.size());
  const Matrix sim = features.zv * features.zt.transpose();  // sim(i, j) = zv_i . zt_j
  best_text_.assign(b, 0);
  best_image_.assign(b, 0);
  for (int i = 0; i < b; ++i) {
    int bt = 0, bi = 0;
    for (int k = 1; k < b; ++k) {
      if (sim(i, k) > sim(i, bt)) bt = k;
      if (sim(k, i) > sim(bi, i)) bi = k;
    }
    best_text_[i] = bt;
    best_image_[i] = bi;
  }
}

std::vector<int> FilterMaps::MapF(int text) const {
  const int cluster = features_.f[best_image_[text]];
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(features_.size()); ++j) {
    if (features_.f[j] == cluster) out.push_back(j);
  }
  return out;
}

std::vector<int> FilterMaps::MapFInv(int image) const {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(features_.size()); ++j) {
    if (features_.f[image] == features_.f[best_image_[j]]) out.push_back(j);
  }
  return out;
}

std::vector<int> FilterMaps::MapE(int image) const {
  const int cluster = features_.e[best_text_[image]];
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(features_.size()); ++j) {
    if (features_.e[j] == cluster) out.push_back(j);
  }
  return out;
}

std::vector<int> FilterMaps::MapEInv(int text) const {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(features_.size()); ++j) {
    if (features_.e[text] == features_.e[best_text_[j]]) out.push_back(j);
  }
  return out;
}

std::vector<int> MapF(int text, const BatchFeatures& features) {
  return FilterMaps(features).MapF(text);
}
std::vector<int> MapFInv(int image, const BatchFeatures& features) {
  return FilterMaps(features).MapFInv(image);
}
std::vector<int> MapE(int image, const BatchFeatures& features) {
  return FilterMaps(features).MapE(image);
}
std::vector<int> MapEInv(int text, const BatchFeatures& features) {
  return FilterMaps(features).MapEInv(text);
}

PairSpec BuildPairsStrong(const BatchFeatures& features) {
  const int b = static_cast<int>(features.size());
  PairSpec spec;
  spec.image_anchors.resize(b);
  spec.text_anchors.resize(b);
  for (int i = 0; i < b; ++i) {
    spec.image_anchors[i] = {{i}, AllExcept(b, i)};
    spec.text_anchors[i] = {{i}, AllExcept(b, i)};
  }
  return spec;
}

PairSpec BuildPairsPartialEmotionalMatched(const BatchFeatures& features) {
  const FilterMaps maps(features);
  const int b = static_cast<int>(features.size());
  PairSpec spec;
  spec.image_anchors.resize(b);
  spec.text_anchors.resize(b);
  for (int i = 0; i < b; ++i) {
    spec.image_anchors[i] = {{i}, NegativesExcluding(b, i, maps.MapFInv(i))};
    spec.text_anchors[i] = {{i}, NegativesExcluding(b, i, maps.MapF(i))};
  }
  return spec;
}

PairSpec BuildPairsPartialFactualMatched(const BatchFeatures& features) {
  const FilterMaps maps(features);
  const int b = static_cast<int>(features.size());
  PairSpec spec;
  spec.image_anchors.resize(b);
  spec.text_anchors.resize(b);
  for (int i = 0; i < b; ++i) {
    spec.image_anchors[i] = {{i}, NegativesExcluding(b, i, maps.MapE(i))};
    spec.text_anchors[i] = {{i}, NegativesExcluding(b, i, maps.MapEInv(i))};
  }
  return spec;
}

PairSpec BuildPairsWeak(const BatchFeatures& features) {
  const FilterMaps maps(features);
  const int b = static_cast<int>(features.size());
  PairSpec spec;
  spec.image_anchors.resize(b);
  spec.text_anchors.resize(b);
  for (int i = 0; i < b; ++i) {
    const int image_pos = maps.BestTextForImage(i);
    AnchorPairs image_anchor{{image_pos},
                             NegativesExcluding(b, i, maps.MapFInv(i), maps.MapE(i))};
    RemoveIndex(image_anchor.neg, image_pos);
    spec.image_anchors[i] = std::move(image_anchor);

    const int text_pos = maps.BestImageForText(i);
    AnchorPairs text_anchor{{text_pos},
                            NegativesExcluding(b, i, maps.MapF(i), maps.MapEInv(i))};
    RemoveIndex(text_anchor.neg, text_pos);
    spec.text_anchors[i] = std::move(text_anchor);
  }
  return spec;
}

PairSpec BuildPairs(PairStrategy strategy, const BatchFeatures& features) {
  switch (strategy) {
    case PairStrategy::kStrong: return BuildPairsStrong(features);
    case PairStrategy::kPartialEmotionalMatched:
      return BuildPairsPartialEmotionalMatched(features);
    case PairStrategy::kPartialFactualMatched:
      return BuildPairsPartialFactualMatched(features);
    case PairStrategy::kWeak: return BuildPairsWeak(features);
  }
  return BuildPairsStrong(features);
}

void ValidatePairSpec(const PairSpec& spec, size_t batch_size) {
  if (spec.image_anchors.size() != batch_size ||
      spec.text_anchors.size() != batch_size) {
    throw Error(ErrorCode::kDimMismatch, "pair spec does not match batch size");
  }
  auto check = [batch_size](const AnchorPairs& a, size_t anchor) {
    if (a.pos.empty()) {
      throw Error(ErrorCode::kEmptyPositive,
                  "anchor " + std::to_string(anchor) + " has no positives");
    }
    std::vector<char> in_pos(batch_size, 0);
    for (int j : a.pos) {
      if (j < 0 || static_cast<size_t>(j) >= batch_size) {
        throw Error(ErrorCode::kInvalidArgument, "positive index out of range");
      }
      in_pos[j] = 1;
    }
    for (int j : a.neg) {
      if (j < 0 || static_cast<size_t>(j) >= batch_size) {
        throw Error(ErrorCode::kInvalidArgument, "negative index out of range");
      }
      if (in_pos[j]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "anchor " + std::to_string(anchor) +
                        " has index in both positives and negatives");
      }
    }
  };
  for (size_t i = 0; i < batch_size; ++i) {
    check(spec.image_anchors[i], i);
    check(spec.text_anchors[i], i);
  }
}

std::string PairSpecToTsv(const PairSpec& spec) {
  TsvWriter w({"direction", "anchor", "pos", "neg"});
  for (size_t i = 0; i < spec.size(); ++i) {
    w.AddRow({"image", std::to_string(i), JoinIndices(spec.image_anchors[i].pos),
              JoinIndices(spec.image_anchors[i].neg)});
  }
  for (size_t i = 0; i < spec.size(); ++i) {
    w.AddRow({"text", std::to_string(i), JoinIndices(spec.text_anchors[i].pos),
              JoinIndices(spec.text_anchors[i].neg)});
  }
  return w.ToString();
}

}  // namespace pacl
