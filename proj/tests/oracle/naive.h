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

#ifndef PACL_TESTS_ORACLE_NAIVE_H_
#define PACL_TESTS_ORACLE_NAIVE_H_

// Straight-from-the-definition reference implementations. None of these
// call into pacl's own algorithms; they only share the container types.

#include <vector>

#include "pacl/cluster.h"
#include "pacl/pair_builder.h"

namespace pacl::oracle {

struct NaivePairs {
  std::vector<std::vector<int>> image_pos, image_neg, text_pos, text_neg;
};

int NaiveBestText(const BatchFeatures& b, int image);
int NaiveBestImage(const BatchFeatures& b, int text);
std::vector<int> NaiveMapF(const BatchFeatures& b, int text);
std::vector<int> NaiveMapFInv(const BatchFeatures& b, int image);
std::vector<int> NaiveMapE(const BatchFeatures& b, int image);
std::vector<int> NaiveMapEInv(const BatchFeatures& b, int text);
NaivePairs NaiveBuildPairs(PairStrategy strategy, const BatchFeatures& b);

// Direct double loop over anchors and candidates, no max-shift.
double NaiveContrastiveLoss(const Matrix& zv, const Matrix& zt,
                            const std::vector<std::vector<int>>& image_pos,
                            const std::vector<std::vector<int>>& image_neg,
                            const std::vector<std::vector<int>>& text_pos,
                            const std::vector<std::vector<int>>& text_neg, double tau);

double NaiveAccuracy(const std::vector<int>& preds, const std::vector<int>& labels);
double NaiveWeightedF1(const std::vector<int>& preds, const std::vector<int>& labels);
// Precision at each positive's position in the (-score, index) order.
double NaiveAveragePrecision(const std::vector<double>& scores, const std::vector<int>& positive);
// Fraction of (positive, negative) pairs ordered correctly, ties 1/2.
double NaiveAuc(const std::vector<double>& scores, const std::vector<int>& positive);
// Means over columns; MSE scaled by 100.
void NaiveRegression(const Matrix& preds, const Matrix& targets, double& mse_x100, double& r2);

// Minimum inertia over all k^n labelings.
double BruteForceKMeansInertia(const Matrix& points, int k);

}  // namespace pacl::oracle

#endif  // PACL_TESTS_ORACLE_NAIVE_H_
