// Copyright 2026 The mfgblind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MFGBLIND_TOOLS_ARTIFACTS_H_
#define MFGBLIND_TOOLS_ARTIFACTS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mfgblind::cli {

std::string sha256_hex(std::string_view bytes);

// 17 significant digits, shortest form that round-trips.
std::string fmt17(double x);

// Writes files under one directory and remembers their checksums.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path directory);

  void write(const std::string& name, std::string_view contents,
             bool deterministic = true);
  // manifest.json is written last and is not listed in itself.
  void write_manifest(const nlohmann::json& header);

  const std::filesystem::path& directory() const { return directory_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path directory_;
  std::vector<std::string> names_;
  nlohmann::json entries_ = nlohmann::json::array();
};

}  // namespace mfgblind::cli

#endif  // MFGBLIND_TOOLS_ARTIFACTS_H_
