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

#include "pacl/embeddings_io.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "pacl/error.h"

namespace pacl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "embedding container I/O assumes a little-endian host");

constexpr size_t kHeaderSize = 20;

void AppendU32(std::string& out, uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

uint32_t ReadU32(const std::string& bytes, size_t offset) {
  uint32_t v;
  std::memcpy(&v, bytes.data() + offset, 4);
  return v;
}

struct Header {
  uint32_t version;
  uint32_t count;
  uint32_t dim;
};

Header ParseHeader(const std::string& bytes, const fs::path& path) {
  if (bytes.size() < kEmbeddingMagic.size() ||
      std::memcmp(bytes.data(), kEmbeddingMagic.data(),
                  kEmbeddingMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic,
                "bad magic at offset 0 in " + path.string());
  }
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorCode::kTruncatedFile,
                "header truncated at offset " + std::to_string(bytes.size()) +
                    " in " + path.string());
  }
  Header h{ReadU32(bytes, 8), ReadU32(bytes, 12), ReadU32(bytes, 16)};
  if (h.dim == 0) {
    throw Error(ErrorCode::kBadDims, "dim must be positive in " + path.string());
  }
  return h;
}

template <typename T>
void CheckPayloadSize(const std::string& bytes, const Header& h,
                      const fs::path& path) {
  const uint64_t expected =
      kHeaderSize + static_cast<uint64_t>(h.count) * h.dim * sizeof(T);
  if (bytes.size() < expected) {
    throw Error(ErrorCode::kTruncatedFile,
                "payload truncated at offset " + std::to_string(bytes.size()) +
                    " (expected " + std::to_string(expected) + " bytes) in " +
                    path.string());
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kTruncatedFile,
                "trailing bytes after offset " + std::to_string(expected) +
                    " in " + path.string());
  }
}

void ThrowNonFinite(size_t row, size_t col, const fs::path& path) {
  throw Error(ErrorCode::kNonFiniteValue,
              "non-finite value at row " + std::to_string(row) + ", column " +
                  std::to_string(col) + " in " + path.string());
}

std::string HeaderBytes(uint32_t version, uint32_t count, uint32_t dim) {
  std::string out(kEmbeddingMagic);
  AppendU32(out, version);
  AppendU32(out, count);
  AppendU32(out, dim);
  return out;
}

double ParseScore(const json& j, const char* key, size_t line) {
  if (!j.is_number()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                            ": '" + key + "' is not a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
    throw Error(ErrorCode::kScoreOutOfRange,
                "line " + std::to_string(line) + ": '" + key +
                    "' outside [-1, 1]");
  }
  return v;
}

uint32_t ParseIndex(const json& j, const char* key, size_t line) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0)) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": '" + key +
                    "' is not a nonnegative integer");
  }
  const uint64_t v = j.get<uint64_t>();
  if (v > UINT32_MAX) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                            ": '" + key + "' too large");
  }
  return static_cast<uint32_t>(v);
}

RowPair ParseRowPair(const json& j, const char* key, size_t line) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                            ": '" + key +
                                            "' must be [image_row, text_row]");
  }
  return {ParseIndex(j[0], key, line), ParseIndex(j[1], key, line)};
}

SampleLabel ParseLabel(const json& j, size_t line) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_array()) {
    bool all_int = true;
    for (const auto& e : j) {
      if (!e.is_number()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line) + ": non-numeric label");
      }
      all_int = all_int && e.is_number_integer();
    }
    if (all_int) return j.get<std::vector<int>>();
    if (j.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) +
                      ": real-valued label must be a (v, a, d) triple");
    }
    return VadTriple{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }
  throw Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": unsupported label");
}

PairedSample ParseSample(const std::string& text, size_t line) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": " + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": expected an object");
  }
  PairedSample s;
  if (!j.contains("id") || !j["id"].is_string()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": missing string 'id'");
  }
  s.id = j["id"].get<std::string>();
  for (const char* key : {"image_row", "text_row"}) {
    if (!j.contains(key)) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line) +
                                              ": missing '" + key + "'");
    }
  }
  s.image_row = ParseIndex(j["image_row"], "image_row", line);
  s.text_row = ParseIndex(j["text_row"], "text_row", line);
  if (j.contains("factual_score") && !j["factual_score"].is_null())
    s.factual_score = ParseScore(j["factual_score"], "factual_score", line);
  if (j.contains("emotional_score") && !j["emotional_score"].is_null())
    s.emotional_score = ParseScore(j["emotional_score"], "emotional_score", line);
  if (j.contains("factual_eval_rows") && !j["factual_eval_rows"].is_null())
    s.factual_eval_rows =
        ParseRowPair(j["factual_eval_rows"], "factual_eval_rows", line);
  if (j.contains("emotional_eval_rows") && !j["emotional_eval_rows"].is_null())
    s.emotional_eval_rows =
        ParseRowPair(j["emotional_eval_rows"], "emotional_eval_rows", line);
  if (j.contains("label")) s.label = ParseLabel(j["label"], line);

  if (!s.factual_score && !s.factual_eval_rows) {
    throw Error(ErrorCode::kMissingEvaluator,
                "sample '" + s.id + "' has no factual score or evaluator rows");
  }
  if (!s.emotional_score && !s.emotional_eval_rows) {
    throw Error(ErrorCode::kMissingEvaluator,
                "sample '" + s.id + "' has no emotional score or evaluator rows");
  }
  return s;
}

void CheckRow(uint32_t row, const EmbeddingMatrix& m, const std::string& id,
              const char* field) {
  if (row >= m.count) {
    throw Error(ErrorCode::kIndexOutOfBounds,
                "sample '" + id + "': " + field + " " + std::to_string(row) +
                    " out of bounds (" + std::to_string(m.count) + " rows)");
  }
}

void CheckEvalRows(const std::optional<RowPair>& rows,
                   const std::optional<EmbeddingMatrix>& image_eval,
                   const std::optional<EmbeddingMatrix>& text_eval,
                   const PairedSample& s, const char* field, bool has_score) {
  if (!rows) return;
  if (!image_eval || !text_eval) {
    // Scores take precedence, so missing matrices only matter without one.
    if (has_score) return;
    throw Error(ErrorCode::kMissingEvaluator,
                "sample '" + s.id + "' references " + field +
                    " but the evaluator matrices are not loaded");
  }
  CheckRow(rows->image, *image_eval, s.id, field);
  CheckRow(rows->text, *text_eval, s.id, field);
  if (image_eval->dim != text_eval->dim) {
    throw Error(ErrorCode::kDimMismatch,
                std::string(field) + ": evaluator dims differ (" +
                    std::to_string(image_eval->dim) + " vs " +
                    std::to_string(text_eval->dim) + ")");
  }
}

Matrix GatherRows(const EmbeddingMatrix& m, const std::vector<PairedSample>& samples,
                  std::span<const size_t> indices, bool image) {
  Matrix out(indices.size(), m.dim);
  for (size_t r = 0; r < indices.size(); ++r) {
    const PairedSample& s = samples[indices[r]];
    auto src = m.row(image ? s.image_row : s.text_row);
    for (uint32_t c = 0; c < m.dim; ++c) out(r, c) = src[c];
  }
  return out;
}

std::vector<size_t> AllIndices(size_t n) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(uint32_t count, uint32_t dim)
    : count(count), dim(dim), data(static_cast<size_t>(count) * dim, 0.0f) {}

Matrix EmbeddingMatrix::ToMatrix() const {
  Matrix m(count, dim);
  for (size_t i = 0; i < data.size(); ++i) m.data()[i] = data[i];
  return m;
}

EmbeddingMatrix EmbeddingMatrix::FromMatrix(const Matrix& m) {
  EmbeddingMatrix out(static_cast<uint32_t>(m.rows()),
                      static_cast<uint32_t>(m.cols()));
  for (size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = static_cast<float>(m.data()[i]);
  }
  return out;
}

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomically(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + " to " +
                                    path.string() + ": " + ec.message());
  }
}

EmbeddingMatrix LoadEmbeddingMatrix(const fs::path& path) {
  const std::string bytes = ReadFileBytes(path);
  const Header h = ParseHeader(bytes, path);
  if (h.version != kEmbeddingVersionF32) {
    throw Error(ErrorCode::kBadMagic, "unsupported version " +
                                          std::to_string(h.version) +
                                          " at offset 8 in " + path.string());
  }
  CheckPayloadSize<float>(bytes, h, path);
  EmbeddingMatrix m(h.count, h.dim);
  std::memcpy(m.data.data(), bytes.data() + kHeaderSize,
              m.data.size() * sizeof(float));
  for (size_t i = 0; i < m.data.size(); ++i) {
    if (!std::isfinite(m.data[i])) ThrowNonFinite(i / h.dim, i % h.dim, path);
  }
  return m;
}

void WriteEmbeddingMatrix(const fs::path& path, const EmbeddingMatrix& matrix) {
  if (matrix.dim == 0) throw Error(ErrorCode::kBadDims, "dim must be positive");
  if (matrix.data.size() != static_cast<size_t>(matrix.count) * matrix.dim) {
    throw Error(ErrorCode::kDimMismatch, "data size does not match count*dim");
  }
  std::string bytes = HeaderBytes(kEmbeddingVersionF32, matrix.count, matrix.dim);
  bytes.append(reinterpret_cast<const char*>(matrix.data.data()),
               matrix.data.size() * sizeof(float));
  WriteFileAtomically(path, bytes);
}

Matrix LoadF64Matrix(const fs::path& path) {
  const std::string bytes = ReadFileBytes(path);
  const Header h = ParseHeader(bytes, path);
  if (h.version != kEmbeddingVersionF64) {
    throw Error(ErrorCode::kBadMagic, "expected float64 container at offset 8 in " +
                                          path.string());
  }
  CheckPayloadSize<double>(bytes, h, path);
  Matrix m(h.count, h.dim);
  std::memcpy(m.data(), bytes.data() + kHeaderSize,
              static_cast<size_t>(m.size()) * sizeof(double));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i])) ThrowNonFinite(i / h.dim, i % h.dim, path);
  }
  return m;
}

void WriteF64Matrix(const fs::path& path, const Matrix& matrix) {
  if (matrix.cols() == 0) throw Error(ErrorCode::kBadDims, "dim must be positive");
  std::string bytes =
      HeaderBytes(kEmbeddingVersionF64, static_cast<uint32_t>(matrix.rows()),
                  static_cast<uint32_t>(matrix.cols()));
  bytes.append(reinterpret_cast<const char*>(matrix.data()),
               static_cast<size_t>(matrix.size()) * sizeof(double));
  WriteFileAtomically(path, bytes);
}

std::vector<PairedSample> ParseManifest(const std::string& text) {
  std::vector<PairedSample> samples;
  std::unordered_set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    PairedSample s = ParseSample(line, line_no);
    if (!seen.insert(s.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + s.id +
                                               "' at line " +
                                               std::to_string(line_no));
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<PairedSample> LoadManifest(const fs::path& path) {
  return ParseManifest(ReadFileBytes(path));
}

std::string SerializeManifestLine(const PairedSample& s) {
  json j;
  j["id"] = s.id;
  j["image_row"] = s.image_row;
  j["text_row"] = s.text_row;
  if (s.factual_score) j["factual_score"] = *s.factual_score;
  if (s.emotional_score) j["emotional_score"] = *s.emotional_score;
  if (s.factual_eval_rows)
    j["factual_eval_rows"] = {s.factual_eval_rows->image, s.factual_eval_rows->text};
  if (s.emotional_eval_rows)
    j["emotional_eval_rows"] = {s.emotional_eval_rows->image,
                                s.emotional_eval_rows->text};
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, int>) {
          j["label"] = v;
        } else if constexpr (std::is_same_v<T, std::vector<int>>) {
          j["label"] = v;
        } else if constexpr (std::is_same_v<T, VadTriple>) {
          j["label"] = json::array({v[0], v[1], v[2]});
        }
      },
      s.label);
  return j.dump();
}

void WriteManifest(const fs::path& path, const std::vector<PairedSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += SerializeManifestLine(s);
    out += '\n';
  }
  WriteFileAtomically(path, out);
}

Matrix PairedDataset::ImageEmbeddings() const {
  const auto idx = AllIndices(samples.size());
  return ImageEmbeddings(idx);
}

Matrix PairedDataset::TextEmbeddings() const {
  const auto idx = AllIndices(samples.size());
  return TextEmbeddings(idx);
}

Matrix PairedDataset::ImageEmbeddings(std::span<const size_t> indices) const {
  return GatherRows(matrices.images, samples, indices, /*image=*/true);
}

Matrix PairedDataset::TextEmbeddings(std::span<const size_t> indices) const {
  return GatherRows(matrices.texts, samples, indices, /*image=*/false);
}

PairedDataset AssembleDataset(std::vector<PairedSample> samples,
                              DatasetMatrices matrices) {
  std::unordered_set<std::string> seen;
  for (const PairedSample& s : samples) {
    if (!seen.insert(s.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate id '" + s.id + "'");
    }
    CheckRow(s.image_row, matrices.images, s.id, "image_row");
    CheckRow(s.text_row, matrices.texts, s.id, "text_row");
    if (!s.factual_score && !s.factual_eval_rows) {
      throw Error(ErrorCode::kMissingEvaluator,
                  "sample '" + s.id + "' has no factual evaluator input");
    }
    if (!s.emotional_score && !s.emotional_eval_rows) {
      throw Error(ErrorCode::kMissingEvaluator,
                  "sample '" + s.id + "' has no emotional evaluator input");
    }
    CheckEvalRows(s.factual_eval_rows, matrices.factual_image_eval,
                  matrices.factual_text_eval, s, "factual_eval_rows",
                  s.factual_score.has_value());
    CheckEvalRows(s.emotional_eval_rows, matrices.emotional_image_eval,
                  matrices.emotional_text_eval, s, "emotional_eval_rows",
                  s.emotional_score.has_value());
  }
  return PairedDataset{std::move(samples), std::move(matrices)};
}

DatasetPaths DatasetPaths::InDirectory(const fs::path& dir) {
  return DatasetPaths{dir / "manifest.jsonl",
                      dir / "images.emb",
                      dir / "texts.emb",
                      dir / "factual_image_eval.emb",
                      dir / "factual_text_eval.emb",
                      dir / "emotional_image_eval.emb",
                      dir / "emotional_text_eval.emb"};
}

PairedDataset LoadDataset(const DatasetPaths& paths) {
  auto load_optional = [](const fs::path& p) -> std::optional<EmbeddingMatrix> {
    if (p.empty() || !fs::exists(p)) return std::nullopt;
    return LoadEmbeddingMatrix(p);
  };
  DatasetMatrices m;
  m.images = LoadEmbeddingMatrix(paths.images);
  m.texts = LoadEmbeddingMatrix(paths.texts);
  m.factual_image_eval = load_optional(paths.factual_image_eval);
  m.factual_text_eval = load_optional(paths.factual_text_eval);
  m.emotional_image_eval = load_optional(paths.emotional_image_eval);
  m.emotional_text_eval = load_optional(paths.emotional_text_eval);
  return AssembleDataset(LoadManifest(paths.manifest), std::move(m));
}

void WriteDataset(const DatasetPaths& paths, const PairedDataset& dataset) {
  WriteManifest(paths.manifest, dataset.samples);
  WriteEmbeddingMatrix(paths.images, dataset.matrices.images);
  WriteEmbeddingMatrix(paths.texts, dataset.matrices.texts);
  const auto& m = dataset.matrices;
  if (m.factual_image_eval) WriteEmbeddingMatrix(paths.factual_image_eval, *m.factual_image_eval);
  if (m.factual_text_eval) WriteEmbeddingMatrix(paths.factual_text_eval, *m.factual_text_eval);
  if (m.emotional_image_eval) WriteEmbeddingMatrix(paths.emotional_image_eval, *m.emotional_image_eval);
  if (m.emotional_text_eval) WriteEmbeddingMatrix(paths.emotional_text_eval, *m.emotional_text_eval);
}

}  // namespace pacl
