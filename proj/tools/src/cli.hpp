// Copyright 2026 The mmdbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace mmdbayes::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidConfig = 1,
  kExitMalformedCsv = 2,
  kExitVerifyFailed = 3,
  kExitIoError = 4,
};

/// Entry point shared by the executable and the tests. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes `content` next to `path` under a temporary name, then renames it into
/// place, so readers never see a partial file. Throws std::runtime_error.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mmdbayes::cli
