// Copyright 2026 The DP-LAC Simulator Authors
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

#ifndef DPLAC_CONFIG_H_
#define DPLAC_CONFIG_H_

// Flat key=value experiment configuration.
//
//   # comment
//   strategy=dp_lac
//   rounds=30
//   privacy.epsilon=8
//   privacy.q=0.2
//   partition.num_clients=50
//
// Blank lines and '#' comments are ignored. Required keys: strategy, rounds,
// privacy.q, partition.num_clients, and privacy.epsilon unless
// privacy.noise_multiplier is given. Everything else has a default; see
// SerializeConfig for the full key set. Command-line overrides use the same
// keys and are applied after the file.

#include <span>
#include <string>
#include <string_view>

#include "dplac/error.h"
#include "dplac/harness.h"

namespace dplac {

// Parse failure anchored to a line of the source (0 when not line-specific).
class ConfigError : public InvalidArgumentError {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

ExperimentConfig ParseConfig(std::string_view text, const std::string& source,
                             std::span<const std::string> overrides = {});
ExperimentConfig LoadConfig(const std::string& path,
                            std::span<const std::string> overrides = {});

// Sets one key; throws InvalidArgumentError for unknown keys or bad values.
void SetConfigValue(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value);

// Every key, one per line, with reals at round-trip precision.
std::string SerializeConfig(const ExperimentConfig& cfg);

}  // namespace dplac

#endif  // DPLAC_CONFIG_H_
