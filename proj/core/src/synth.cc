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

#include "pacl/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "pacl/error.h"
#include "pacl/rng.h"
#include "pacl/tsv.h"

namespace pacl {
namespace {

namespace fs = std::filesystem;

Matrix GaussianMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal();
  return m;
}

// Modified Gram-Schmidt over rows [begin, end).
void Orthonormalize(Matrix& m, Eigen::Index begin, Eigen::Index end) {
  for (Eigen::Index i = begin; i < end; ++i) {
    for (Eigen::Index j = begin; j < i; ++j) {
      m.row(i) -= m.row(i).dot(m.row(j)) * m.row(j);
    }
    m.row(i) /= m.row(i).norm();
  }
}

// G factual rows followed by H emotional rows, unit norm. Fully
// orthogonal when dim >= G + H, otherwise orthogonal within each group.
Matrix Prototypes(int dim, int g, int h, Rng& rng) {
  Matrix m = GaussianMatrix(g + h, dim, rng);
  if (dim >= g + h) {
    Orthonormalize(m, 0, g + h);
  } else {
    Orthonormalize(m, 0, g);
    Orthonormalize(m, g, g + h);
  }
  return m;
}

int OtherValue(int value, int count, Rng& rng) {
  const int pick = static_cast<int>(rng.UniformInt(static_cast<uint64_t>(count - 1)));
  return pick >= value ? pick + 1 : pick;
}

double Score(double base, double drop, bool mismatch, double noise, Rng& rng) {
  const double s = base - (mismatch ? drop : 0.0) + rng.Normal(0.0, noise);
  return std::clamp(s, -1.0, 1.0);
}

// Unit vector u and a vector v with cos(u, v) == score.
std::pair<RowVector, RowVector> EvaluatorPair(int dim, double score, Rng& rng) {
  RowVector u(dim), w(dim);
  for (int i = 0; i < dim; ++i) u[i] = rng.Normal();
  for (int i = 0; i < dim; ++i) w[i] = rng.Normal();
  u /= u.norm();
  w -= w.dot(u) * u;
  w /= w.norm();
  const RowVector v = score * u + std::sqrt(std::max(0.0, 1.0 - score * score)) * w;
  return {u, v};
}

std::string SampleId(int i) {
  std::string digits = std::to_string(i);
  return "s" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

}  // namespace

void SynthConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kBadConfig, what); };
  if (n < 0) fail("n must be nonnegative");
  if (num_factual < 2 || num_emotional < 2) fail("G and H must be at least 2");
  const int need = std::max(num_factual, num_emotional);
  if (d_img < need || d_txt < need) fail("embedding dims must be >= max(G, H)");
  if (evaluator_embeddings && d_eval < 2) fail("d_eval must be at least 2");
  for (double p : {p_factual_mismatch, p_emotional_mismatch}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("mismatch probabilities must lie in [0, 1]");
  }
  if (!(noise_std >= 0.0) || !(score_noise >= 0.0)) fail("noise must be nonnegative");
  if (prompts_per_class < 1) fail("prompts_per_class must be positive");
}

SynthCorpus GenerateSynthetic(const SynthConfig& config) {
  config.Validate();
  const int G = config.num_factual;
  const int H = config.num_emotional;
  Rng proto_rng(DeriveSeed(config.seed, SeedStream::kSynthPrototypes));
  const Matrix image_protos = Prototypes(config.d_img, G, H, proto_rng);
  const Matrix text_protos = Prototypes(config.d_txt, G, H, proto_rng);

  Rng rng(DeriveSeed(config.seed, SeedStream::kSynthSamples));
  SynthCorpus out;
  const int n = config.n;
  Matrix images(n, config.d_img), texts(n, config.d_txt);
  Matrix f_img_eval, f_txt_eval, e_img_eval, e_txt_eval;
  if (config.evaluator_embeddings) {
    f_img_eval.resize(n, config.d_eval);
    f_txt_eval.resize(n, config.d_eval);
    e_img_eval.resize(n, config.d_eval);
    e_txt_eval.resize(n, config.d_eval);
  }
  GroundTruth& t = out.truth;
  for (int i = 0; i < n; ++i) {
    const int g = static_cast<int>(rng.UniformInt(G));
    const int h = static_cast<int>(rng.UniformInt(H));
    const bool f_swap = rng.Uniform() < config.p_factual_mismatch;
    const bool e_swap = rng.Uniform() < config.p_emotional_mismatch;
    const int tg = f_swap ? OtherValue(g, G, rng) : g;
    const int th = e_swap ? OtherValue(h, H, rng) : h;

    RowVector img = image_protos.row(g) + config.image_emotional_weight * image_protos.row(G + h);
    for (int c = 0; c < config.d_img; ++c) img[c] += rng.Normal(0.0, config.noise_std);
    RowVector txt = text_protos.row(tg) + config.text_emotional_weight * text_protos.row(G + th);
    for (int c = 0; c < config.d_txt; ++c) txt[c] += rng.Normal(0.0, config.noise_std);
    images.row(i) = img;
    texts.row(i) = txt;

    const double fs = Score(config.score_match, config.score_drop, f_swap,
                            config.score_noise, rng);
    const double es = Score(config.score_match, config.score_drop, e_swap,
                            config.score_noise, rng);

    PairedSample s;
    s.id = SampleId(i);
    s.image_row = static_cast<uint32_t>(i);
    s.text_row = static_cast<uint32_t>(i);
    s.label = h;
    if (config.evaluator_embeddings) {
      auto [fu, fv] = EvaluatorPair(config.d_eval, fs, rng);
      auto [eu, ev] = EvaluatorPair(config.d_eval, es, rng);
      f_img_eval.row(i) = fu;
      f_txt_eval.row(i) = fv;
      e_img_eval.row(i) = eu;
      e_txt_eval.row(i) = ev;
      s.factual_eval_rows = RowPair{s.image_row, s.text_row};
      s.emotional_eval_rows = RowPair{s.image_row, s.text_row};
    } else {
      s.factual_score = fs;
      s.emotional_score = es;
    }
    out.dataset.samples.push_back(std::move(s));
    t.g.push_back(g);
    t.h.push_back(h);
    t.text_g.push_back(tg);
    t.text_h.push_back(th);
    t.tags.push_back(TagFromMatches(!f_swap, !e_swap));
  }
  DatasetMatrices& m = out.dataset.matrices;
  m.images = EmbeddingMatrix::FromMatrix(images);
  m.texts = EmbeddingMatrix::FromMatrix(texts);
  if (config.evaluator_embeddings) {
    m.factual_image_eval = EmbeddingMatrix::FromMatrix(f_img_eval);
    m.factual_text_eval = EmbeddingMatrix::FromMatrix(f_txt_eval);
    m.emotional_image_eval = EmbeddingMatrix::FromMatrix(e_img_eval);
    m.emotional_text_eval = EmbeddingMatrix::FromMatrix(e_txt_eval);
  }

  out.prompts.resize(H * config.prompts_per_class, config.d_txt);
  for (int h = 0; h < H; ++h) {
    for (int r = 0; r < config.prompts_per_class; ++r) {
      const int row = h * config.prompts_per_class + r;
      RowVector p = config.text_emotional_weight * text_protos.row(G + h);
      for (int c = 0; c < config.d_txt; ++c) p[c] += rng.Normal(0.0, config.noise_std);
      out.prompts.row(row) = p;
      out.prompt_classes.push_back(h);
    }
  }
  // Round-trip through float32 so in-memory and on-disk corpora agree.
  out.prompts = EmbeddingMatrix::FromMatrix(out.prompts).ToMatrix();
  out.dataset = AssembleDataset(std::move(out.dataset.samples),
                                std::move(out.dataset.matrices));
  return out;
}

void WriteGroundTruthTsv(const fs::path& path, const PairedDataset& dataset,
                         const GroundTruth& truth) {
  if (truth.size() != dataset.size()) {
    throw Error(ErrorCode::kDimMismatch, "ground truth does not match dataset");
  }
  TsvWriter w({"id", "g", "h", "text_g", "text_h", "true_tag"});
  for (size_t i = 0; i < truth.size(); ++i) {
    w.AddRow({dataset.samples[i].id, std::to_string(truth.g[i]),
              std::to_string(truth.h[i]), std::to_string(truth.text_g[i]),
              std::to_string(truth.text_h[i]),
              std::string(PartitionTagName(truth.tags[i]))});
  }
  w.Write(path);
}

GroundTruth ReadGroundTruthTsv(const fs::path& path, const PairedDataset& dataset) {
  const TsvTable table =
      ReadTsv(path, {"id", "g", "h", "text_g", "text_h", "true_tag"});
  std::unordered_map<std::string, size_t> by_id;
  for (size_t r = 0; r < table.rows.size(); ++r) by_id.emplace(table.rows[r][0], r);
  GroundTruth t;
  for (const PairedSample& s : dataset.samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kParseError, "sample '" + s.id + "' missing from " + path.string());
    }
    const auto& row = table.rows[it->second];
    t.g.push_back(static_cast<int>(ParseInt(row[1])));
    t.h.push_back(static_cast<int>(ParseInt(row[2])));
    t.text_g.push_back(static_cast<int>(ParseInt(row[3])));
    t.text_h.push_back(static_cast<int>(ParseInt(row[4])));
    t.tags.push_back(ParsePartitionTag(row[5]));
  }
  return t;
}

void WriteSyntheticCorpus(const fs::path& dir, const SynthCorpus& corpus) {
  fs::create_directories(dir);
  WriteDataset(DatasetPaths::InDirectory(dir), corpus.dataset);
  WriteGroundTruthTsv(dir / "ground_truth.tsv", corpus.dataset, corpus.truth);
  WriteEmbeddingMatrix(dir / "prompts.emb", EmbeddingMatrix::FromMatrix(corpus.prompts));
  TsvWriter w({"row", "class"});
  for (size_t r = 0; r < corpus.prompt_classes.size(); ++r) {
    w.AddRow({std::to_string(r), std::to_string(corpus.prompt_classes[r])});
  }
  w.Write(dir / "prompts.tsv");
}

double BestPermutationAgreement(const std::vector<int>& labels,
                                const std::vector<int>& truth, int k) {
  if (labels.size() != truth.size()) {
    throw Error(ErrorCode::kDimMismatch, "label and truth lengths differ");
  }
  if (k < 1 || k > 8) throw Error(ErrorCode::kInvalidArgument, "k must be in [1, 8]");
  if (labels.empty()) return 1.0;
  // confusion[a][b]: points labeled a whose truth is b.
  std::vector<std::vector<size_t>> confusion(k, std::vector<size_t>(k, 0));
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k || truth[i] < 0 || truth[i] >= k) {
      throw Error(ErrorCode::kInvalidArgument, "label outside [0, k)");
    }
    ++confusion[labels[i]][truth[i]];
  }
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  size_t best = 0;
  do {
    size_t agree = 0;
    for (int a = 0; a < k; ++a) agree += confusion[a][perm[a]];
    best = std::max(best, agree);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace pacl
