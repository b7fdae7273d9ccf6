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

#ifndef PACL_TOOLS_RUN_MANIFEST_H_
#define PACL_TOOLS_RUN_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace pacl::cli {

// FNV-1a 64 over the file bytes, as 16 hex digits. Directories digest
// their regular files in sorted path order.
std::string DigestPath(const std::filesystem::path& path);

// Provenance record written next to every artifact.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void SetConfig(nlohmann::ordered_json config) { config_ = std::move(config); }
  void AddInput(const std::string& role, const std::filesystem::path& path);
  void AddOutput(const std::string& role, const std::filesystem::path& path);
  // Wall-clock seconds per stage; omitted from the file unless recorded,
  // so reruns stay byte-identical by default.
  void AddTiming(const std::string& stage, double seconds);

  nlohmann::ordered_json ToJson() const;
  void Write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json inputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
  nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
};

// "<file>.run.json" for a file artifact, "<dir>/run.json" for a directory.
std::filesystem::path ManifestPathFor(const std::filesystem::path& artifact, bool is_dir);

}  // namespace pacl::cli

#endif  // PACL_TOOLS_RUN_MANIFEST_H_
