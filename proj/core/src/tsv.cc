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

#include "pacl/tsv.h"

#include <charconv>
#include <sstream>

#include "pacl/embeddings_io.h"
#include "pacl/error.h"

namespace pacl {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

std::string JoinTabs(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += '\t';
    out += fields[i];
  }
  return out;
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "not a number: '" + std::string(text) + "'");
  }
  return v;
}

long long ParseInt(std::string_view text) {
  long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

TsvWriter::TsvWriter(std::vector<std::string> header)
    : header_(std::move(header)) {}

void TsvWriter::SetMeta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void TsvWriter::AddRow(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    throw Error(ErrorCode::kDimMismatch, "TSV row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::string TsvWriter::ToString() const {
  std::string out;
  for (const auto& [k, v] : meta_) out += "# " + k + "=" + v + "\n";
  out += JoinTabs(header_) + "\n";
  for (const auto& row : rows_) out += JoinTabs(row) + "\n";
  return out;
}

void TsvWriter::Write(const std::filesystem::path& path) const {
  WriteFileAtomically(path, ToString());
}

std::string TsvTable::MetaOr(const std::string& key,
                             const std::string& fallback) const {
  auto it = meta.find(key);
  return it == meta.end() ? fallback : it->second;
}

TsvTable ParseTsv(const std::string& text) {
  TsvTable t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!have_header && line.rfind("# ", 0) == 0) {
      const size_t eq = line.find('=');
      if (eq != std::string::npos) {
        t.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    auto fields = SplitTabs(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(t.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

TsvTable ReadTsv(const std::filesystem::path& path,
                 const std::vector<std::string>& expected_header) {
  TsvTable t = ParseTsv(ReadFileBytes(path));
  if (t.header != expected_header) {
    throw Error(ErrorCode::kParseError,
                "unexpected header in " + path.string() + ": '" +
                    JoinTabs(t.header) + "'");
  }
  return t;
}

}  // namespace pacl
