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

#ifndef PACL_EMBEDDINGS_IO_H_
#define PACL_EMBEDDINGS_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pacl/matrix.h"

namespace pacl {

// A count x dim block of float32 values, row-major.
//
// On disk (little endian):
//   bytes 0-7   magic "PACL-EMB"
//   u32         version (1 = float32 payload, 2 = float64 payload)
//   u32         count
//   u32         dim
//   payload     count * dim values, row-major
//
// Version 2 is used for checkpoints, where parameters must round-trip
// without loss.
struct EmbeddingMatrix {
  uint32_t count = 0;
  uint32_t dim = 0;
  std::vector<float> data;

  EmbeddingMatrix() = default;
  EmbeddingMatrix(uint32_t count, uint32_t dim);

  std::span<const float> row(size_t i) const {
    return {data.data() + i * dim, dim};
  }
  std::span<float> row(size_t i) { return {data.data() + i * dim, dim}; }

  Matrix ToMatrix() const;
  // Rows are narrowed to float32.
  static EmbeddingMatrix FromMatrix(const Matrix& m);

  bool operator==(const EmbeddingMatrix&) const = default;
};

constexpr std::string_view kEmbeddingMagic = "PACL-EMB";
constexpr uint32_t kEmbeddingVersionF32 = 1;
constexpr uint32_t kEmbeddingVersionF64 = 2;

EmbeddingMatrix LoadEmbeddingMatrix(const std::filesystem::path& path);
void WriteEmbeddingMatrix(const std::filesystem::path& path,
                          const EmbeddingMatrix& matrix);

// Version-2 container holding doubles.
Matrix LoadF64Matrix(const std::filesystem::path& path);
void WriteF64Matrix(const std::filesystem::path& path, const Matrix& matrix);

// Writes to a sibling temporary file and renames over `path`.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::string& bytes);
std::string ReadFileBytes(const std::filesystem::path& path);

using VadTriple = std::array<double, 3>;
// Class index, multi-label class set, or valence/arousal/dominance triple.
using SampleLabel =
    std::variant<std::monostate, int, std::vector<int>, VadTriple>;

struct RowPair {
  uint32_t image = 0;
  uint32_t text = 0;
  bool operator==(const RowPair&) const = default;
};

struct PairedSample {
  std::string id;
  uint32_t image_row = 0;
  uint32_t text_row = 0;
  std::optional<double> factual_score;
  std::optional<double> emotional_score;
  // Rows into the factual/emotional evaluator matrices (image side, text side).
  std::optional<RowPair> factual_eval_rows;
  std::optional<RowPair> emotional_eval_rows;
  SampleLabel label;

  bool operator==(const PairedSample&) const = default;
};

// One JSON object per line. Blank lines are skipped. Errors carry the
// 1-based line number.
std::vector<PairedSample> LoadManifest(const std::filesystem::path& path);
std::vector<PairedSample> ParseManifest(const std::string& text);
std::string SerializeManifestLine(const PairedSample& sample);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<PairedSample>& samples);

struct DatasetMatrices {
  EmbeddingMatrix images;
  EmbeddingMatrix texts;
  // Raw evaluator outputs, consulted only for samples without scores.
  std::optional<EmbeddingMatrix> factual_image_eval;
  std::optional<EmbeddingMatrix> factual_text_eval;
  std::optional<EmbeddingMatrix> emotional_image_eval;
  std::optional<EmbeddingMatrix> emotional_text_eval;
};

struct PairedDataset {
  std::vector<PairedSample> samples;
  DatasetMatrices matrices;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  // Rows of the image/text matrices in sample order.
  Matrix ImageEmbeddings() const;
  Matrix TextEmbeddings() const;
  Matrix ImageEmbeddings(std::span<const size_t> indices) const;
  Matrix TextEmbeddings(std::span<const size_t> indices) const;
};

// Validates ids, row bounds and evaluator availability.
PairedDataset AssembleDataset(std::vector<PairedSample> samples,
                              DatasetMatrices matrices);

// File names used inside a dataset directory.
struct DatasetPaths {
  std::filesystem::path manifest;
  std::filesystem::path images;
  std::filesystem::path texts;
  std::filesystem::path factual_image_eval;
  std::filesystem::path factual_text_eval;
  std::filesystem::path emotional_image_eval;
  std::filesystem::path emotional_text_eval;

  // manifest.jsonl, images.emb, texts.emb, <aspect>_<side>_eval.emb
  static DatasetPaths InDirectory(const std::filesystem::path& dir);
};

// Evaluator matrices are loaded when their files exist.
PairedDataset LoadDataset(const DatasetPaths& paths);
void WriteDataset(const DatasetPaths& paths, const PairedDataset& dataset);

}  // namespace pacl

#endif  // PACL_EMBEDDINGS_IO_H_
