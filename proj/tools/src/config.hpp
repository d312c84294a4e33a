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

#include "mmdbayes/harness.hpp"
#include "mmdbayes/models.hpp"
#include "mmdbayes/theory.hpp"
#include "mmdbayes/vi.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmdbayes::cli {

using Json = nlohmann::json;

/// Anything wrong with the run configuration. Maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed used when neither the config nor --seed sets one.
inline constexpr std::uint64_t kDefaultSeed = 20190930;

/// Reads a flat JSON object. Throws ConfigError on I/O or syntax errors and on
/// nested values other than arrays of scalars.
Json load_config_file(const std::string& path);

/// Applies `key=value`. The value is read as JSON when it parses, else as a string.
void apply_override(Json& config, std::string_view assignment);

/// Rejects keys outside `allowed`.
void check_keys(const Json& config, const std::vector<std::string>& allowed, std::string_view command);

std::vector<std::string> estimate_keys();
std::vector<std::string> sweep_keys();
std::vector<std::string> theory_keys();
std::vector<std::string> verify_keys();

/// Single-dataset run: either `data` names a CSV file or the data are
/// generated from a problem's defaults.
struct EstimateSettings {
  std::optional<std::string> data_path;
  ContaminationSpec generator;  ///< used when data_path is empty
  ModelSpec model;
  GaussianKernel kernel{1.0};
  bool gamma2_given = false;  ///< otherwise gamma2 = d once the data file is read
  PsgaviConfig vi;
};

EstimateSettings estimate_settings(const Json& config);
SweepOptions sweep_settings(const Json& config);
TheoryInputs theory_settings(const Json& config);

struct VerifySettings {
  std::uint64_t seed = kDefaultSeed;
  Index trials = 1000;
  std::vector<Index> sample_sizes{10, 100, 1000};
};

VerifySettings verify_settings(const Json& config);

}  // namespace mmdbayes::cli
