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

#ifndef PACL_CLUSTER_H_
#define PACL_CLUSTER_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pacl/embeddings_io.h"
#include "pacl/matrix.h"

namespace pacl {

struct KMeansOptions {
  int k = 2;
  uint64_t seed = 0;
  int max_iter = 300;
  // Stop once no centroid moves farther than this.
  double tol = 1e-6;
  // Independent k-means++ initializations; lowest inertia wins.
  int restarts = 5;
  // Cluster L2-normalized rows (spherical k-means).
  bool normalize = false;
};

struct ClusterResult {
  int k = 0;
  Matrix centroids;
  std::vector<int> labels;
  // Sum of squared distances from points to their assigned centroid.
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after every assignment step of the winning restart.
  std::vector<double> inertia_history;
};

// Lloyd iterations from k-means++ seeding. Each point is labeled with its
// nearest centroid, ties to the lowest index. Throws kTooFewPoints when
// n < k and kDegeneratePoints when fewer than k distinct points exist.
ClusterResult KMeans(const Matrix& points, const KMeansOptions& options);

// Sum of squared distances of each point to the mean of its cluster.
double PartitionInertia(const Matrix& points, const std::vector<int>& labels,
                        int k);

struct PseudoLabels {
  std::vector<int> factual;    // cluster of each image
  std::vector<int> emotional;  // cluster of each text
  int k = 0;
};

// Independent k-means runs over the image and the text embeddings with the
// same K. Seeds for the two runs are derived from options.seed.
PseudoLabels AssignPseudoLabels(const PairedDataset& dataset,
                                const KMeansOptions& options);

// TSV: id, f, e.
void WritePseudoLabelsTsv(const std::filesystem::path& path,
                          const PairedDataset& dataset,
                          const PseudoLabels& labels);
PseudoLabels ReadPseudoLabelsTsv(const std::filesystem::path& path,
                                 const PairedDataset& dataset);

}  // namespace pacl

#endif  // PACL_CLUSTER_H_
