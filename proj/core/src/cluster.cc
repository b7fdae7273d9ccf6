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

#include "pacl/cluster.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "pacl/error.h"
#include "pacl/rng.h"
#include "pacl/tsv.h"

namespace pacl {
namespace {

double SquaredDistance(const Matrix& a, Eigen::Index i, const Matrix& b,
                       Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

size_t CountDistinctRows(const Matrix& points, size_t stop_at) {
  std::set<std::vector<double>> distinct;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    distinct.emplace(points.row(i).data(), points.row(i).data() + points.cols());
    if (distinct.size() >= stop_at) break;
  }
  return distinct.size();
}

// Index sampled with probability proportional to d2; only points with
// d2 > 0 are eligible.
Eigen::Index SampleByWeight(const std::vector<double>& d2, double total, Rng& rng) {
  const Eigen::Index n = static_cast<Eigen::Index>(d2.size());
  const double target = rng.Uniform() * total;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += d2[i];
    if (d2[i] > 0.0 && acc > target) return i;
  }
  // Rounding can leave the walk without a pick; take the last positive.
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (d2[i] > 0.0) return i;
  }
  return n - 1;
}

// Greedy k-means++: each new center is the best of 2 + floor(ln k)
// D^2-sampled candidates by resulting potential.
Matrix KMeansPlusPlus(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
  Matrix centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.UniformInt(n)));
  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = SquaredDistance(points, i, centroids, 0);
  std::vector<double> candidate_d2(n), best_d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Eigen::Index best = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      const Eigen::Index cand = SampleByWeight(d2, total, rng);
      double potential = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        candidate_d2[i] = std::min(d2[i], SquaredDistance(points, i, points, cand));
        potential += candidate_d2[i];
      }
      if (potential < best_potential) {
        best_potential = potential;
        best = cand;
        best_d2.swap(candidate_d2);
      }
    }
    centroids.row(c) = points.row(best);
    d2.swap(best_d2);
  }
  return centroids;
}

// Returns inertia; writes nearest-centroid labels (ties to lowest index).
double Assign(const Matrix& points, const Matrix& centroids,
              std::vector<int>& labels) {
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d = SquaredDistance(points, i, centroids, 0);
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double d = SquaredDistance(points, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    inertia += best_d;
  }
  return inertia;
}

Matrix Means(const Matrix& points, const std::vector<int>& labels, int k,
             std::vector<size_t>& counts) {
  Matrix sums = Matrix::Zero(k, points.cols());
  counts.assign(k, 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sums.row(labels[i]) += points.row(i);
    ++counts[labels[i]];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) sums.row(c) /= static_cast<double>(counts[c]);
  }
  return sums;
}

// Moves the point farthest from its centroid into each empty cluster.
void RepairEmptyClusters(const Matrix& points, std::vector<int>& labels,
                         Matrix& centroids, std::vector<size_t>& counts) {
  const int k = static_cast<int>(centroids.rows());
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) continue;
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (counts[labels[i]] < 2) continue;
      const double d = SquaredDistance(points, i, centroids, labels[i]);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) break;
    const int from = labels[far];
    labels[far] = c;
    --counts[from];
    counts[c] = 1;
    centroids.row(c) = points.row(far);
    RowVector sum = RowVector::Zero(points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      if (labels[i] == from) sum += points.row(i);
    }
    centroids.row(from) = sum / static_cast<double>(counts[from]);
  }
}

// Lloyd iterations from r.centroids until the largest centroid shift drops
// below tol; ends with a final assignment.
void Lloyd(const Matrix& points, const KMeansOptions& options, ClusterResult& r) {
  std::vector<size_t> counts;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    r.inertia_history.push_back(Assign(points, r.centroids, r.labels));
    Matrix next = Means(points, r.labels, r.k, counts);
    RepairEmptyClusters(points, r.labels, next, counts);
    const double shift = (next - r.centroids).rowwise().norm().maxCoeff();
    r.centroids = std::move(next);
    ++r.iterations;
    if (shift < options.tol) break;
  }
  r.inertia = Assign(points, r.centroids, r.labels);
  r.inertia_history.push_back(r.inertia);
}

// Hartigan single-point transfers: moves a point to another cluster when
// that strictly lowers the inertia. Leaves r.centroids at the cluster
// means. Returns whether any point moved.
bool TransferPass(const Matrix& points, ClusterResult& r) {
  std::vector<size_t> counts;
  r.centroids = Means(points, r.labels, r.k, counts);
  bool moved = false;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int from = r.labels[i];
    if (counts[from] < 2) continue;
    const double na = static_cast<double>(counts[from]);
    const double remove_gain = na / (na - 1.0) * SquaredDistance(points, i, r.centroids, from);
    int to = -1;
    double best_cost = remove_gain;
    for (int c = 0; c < r.k; ++c) {
      if (c == from) continue;
      const double nb = static_cast<double>(counts[c]);
      const double cost = nb / (nb + 1.0) * SquaredDistance(points, i, r.centroids, c);
      if (cost < best_cost) {
        best_cost = cost;
        to = c;
      }
    }
    if (to < 0 || remove_gain - best_cost <= 1e-12 * (1.0 + remove_gain)) continue;
    const double nb = static_cast<double>(counts[to]);
    r.centroids.row(from) = (na * r.centroids.row(from) - points.row(i)) / (na - 1.0);
    r.centroids.row(to) = (nb * r.centroids.row(to) + points.row(i)) / (nb + 1.0);
    --counts[from];
    ++counts[to];
    r.labels[i] = to;
    moved = true;
  }
  return moved;
}

ClusterResult RunKMeans(const Matrix& points, const KMeansOptions& options, Rng& rng) {
  ClusterResult r;
  r.k = options.k;
  r.centroids = KMeansPlusPlus(points, options.k, rng);
  r.labels.assign(points.rows(), 0);
  Lloyd(points, options, r);
  for (int round = 0; round < options.max_iter && TransferPass(points, r); ++round) {
    Lloyd(points, options, r);
  }
  return r;
}

}  // namespace

ClusterResult KMeans(const Matrix& input, const KMeansOptions& options) {
  const int k = options.k;
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (options.restarts < 1 || options.max_iter < 1 || !(options.tol >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "restarts and max_iter must be positive, tol nonnegative");
  }
  if (input.rows() < k) {
    throw Error(ErrorCode::kTooFewPoints,
                std::to_string(input.rows()) + " points for k=" + std::to_string(k));
  }
  if (!input.allFinite()) {
    throw Error(ErrorCode::kNonFiniteValue, "k-means input has non-finite values");
  }
  Matrix points = input;
  if (options.normalize) {
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const double norm = points.row(i).norm();
      if (norm == 0.0) {
        throw Error(ErrorCode::kZeroVector,
                    "row " + std::to_string(i) + " cannot be normalized");
      }
      points.row(i) /= norm;
    }
  }
  if (CountDistinctRows(points, static_cast<size_t>(k)) < static_cast<size_t>(k)) {
    throw Error(ErrorCode::kDegeneratePoints,
                "fewer than " + std::to_string(k) + " distinct points");
  }

  ClusterResult best;
  for (int restart = 0; restart < options.restarts; ++restart) {
    Rng rng(DeriveSeed(options.seed, static_cast<uint64_t>(restart)));
    ClusterResult r = RunKMeans(points, options, rng);
    if (restart == 0 || r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

double PartitionInertia(const Matrix& points, const std::vector<int>& labels,
                        int k) {
  std::vector<size_t> counts;
  const Matrix means = Means(points, labels, k, counts);
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    inertia += SquaredDistance(points, i, means, labels[i]);
  }
  return inertia;
}

PseudoLabels AssignPseudoLabels(const PairedDataset& dataset,
                                const KMeansOptions& options) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot cluster an empty dataset");
  }
  KMeansOptions image_opts = options;
  image_opts.seed = DeriveSeed(options.seed, SeedStream::kKMeansImages);
  KMeansOptions text_opts = options;
  text_opts.seed = DeriveSeed(options.seed, SeedStream::kKMeansTexts);
  PseudoLabels out;
  out.k = options.k;
  out.factual = KMeans(dataset.ImageEmbeddings(), image_opts).labels;
  out.emotional = KMeans(dataset.TextEmbeddings(), text_opts).labels;
  return out;
}

void WritePseudoLabelsTsv(const std::filesystem::path& path,
                          const PairedDataset& dataset,
                          const PseudoLabels& labels) {
  if (labels.factual.size() != dataset.size() ||
      labels.emotional.size() != dataset.size()) {
    throw Error(ErrorCode::kDimMismatch, "pseudo-labels do not match dataset");
  }
  TsvWriter w({"id", "f", "e"});
  w.SetMeta("k", std::to_string(labels.k));
  for (size_t i = 0; i < dataset.size(); ++i) {
    w.AddRow({dataset.samples[i].id, std::to_string(labels.factual[i]),
              std::to_string(labels.emotional[i])});
  }
  w.Write(path);
}

PseudoLabels ReadPseudoLabelsTsv(const std::filesystem::path& path,
                                 const PairedDataset& dataset) {
  const TsvTable t = ReadTsv(path, {"id", "f", "e"});
  std::unordered_map<std::string, size_t> by_id;
  for (size_t r = 0; r < t.rows.size(); ++r) by_id.emplace(t.rows[r][0], r);
  PseudoLabels out;
  out.k = static_cast<int>(ParseInt(t.MetaOr("k", "0")));
  int max_label = -1;
  for (const PairedSample& s : dataset.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kParseError,
                  "sample '" + s.id + "' missing from " + path.string());
    }
    const int f = static_cast<int>(ParseInt(t.rows[it->second][1]));
    const int e = static_cast<int>(ParseInt(t.rows[it->second][2]));
    if (f < 0 || e < 0) {
      throw Error(ErrorCode::kParseError, "negative pseudo-label in " + path.string());
    }
    out.factual.push_back(f);
    out.emotional.push_back(e);
    max_label = std::max({max_label, f, e});
  }
  if (out.k <= max_label) out.k = max_label + 1;
  return out;
}

}  // namespace pacl
