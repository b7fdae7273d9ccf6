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

#ifndef PACL_TSV_H_
#define PACL_TSV_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pacl {

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);
double ParseDouble(std::string_view text);
long long ParseInt(std::string_view text);

// Tab-separated table with a header row. Leading "# key=value" lines carry
// metadata.
class TsvWriter {
 public:
  explicit TsvWriter(std::vector<std::string> header);

  void SetMeta(const std::string& key, const std::string& value);
  void AddRow(std::vector<std::string> row);
  std::string ToString() const;
  void Write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<std::string>> rows_;
};

struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> meta;

  std::string MetaOr(const std::string& key, const std::string& fallback) const;
};

TsvTable ParseTsv(const std::string& text);
// Throws kParseError if the header differs from `expected_header`.
TsvTable ReadTsv(const std::filesystem::path& path,
                 const std::vector<std::string>& expected_header);

}  // namespace pacl

#endif  // PACL_TSV_H_
