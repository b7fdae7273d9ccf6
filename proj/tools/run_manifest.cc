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

#include "run_manifest.h"

#include <algorithm>
#include <cstdio>

#include "pacl/embeddings_io.h"
#include "pacl/error.h"

#ifndef PACL_VERSION_STRING
#define PACL_VERSION_STRING "0.0.0"
#endif

namespace pacl::cli {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

uint64_t Fnv1a(uint64_t h, const std::string& bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string DigestPath(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kIo, "cannot digest missing path " + path.string());
  }
  if (!fs::is_directory(path)) return Hex(Fnv1a(kFnvOffset, ReadFileBytes(path)));
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  uint64_t h = kFnvOffset;
  for (const fs::path& f : files) {
    h = Fnv1a(h, fs::relative(f, path).generic_string());
    h = Fnv1a(h, ReadFileBytes(f));
  }
  return Hex(h);
}

RunManifest::RunManifest(std::string command) : command_(std::move(command)) {}

void RunManifest::AddInput(const std::string& role, const fs::path& path) {
  inputs_.push_back(ojson{{"role", role},
                          {"path", path.generic_string()},
                          {"fnv1a64", DigestPath(path)}});
}

void RunManifest::AddOutput(const std::string& role, const fs::path& path) {
  outputs_.push_back(ojson{{"role", role}, {"path", path.generic_string()}});
}

void RunManifest::AddTiming(const std::string& stage, double seconds) {
  timings_[stage] = seconds;
}

ojson RunManifest::ToJson() const {
  ojson j{{"format", "pacl-run-1"},
          {"version", PACL_VERSION_STRING},
          {"command", command_},
          {"config", config_},
          {"inputs", inputs_},
          {"outputs", outputs_}};
  if (!timings_.empty()) j["timings"] = timings_;
  return j;
}

void RunManifest::Write(const fs::path& path) const {
  WriteFileAtomically(path, ToJson().dump(2) + "\n");
}

fs::path ManifestPathFor(const fs::path& artifact, bool is_dir) {
  if (is_dir) return artifact / "run.json";
  fs::path p = artifact;
  p += ".run.json";
  return p;
}

}  // namespace pacl::cli
