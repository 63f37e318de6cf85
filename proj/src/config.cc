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

#include "dplac/config.h"

#include <cctype>
#include <charconv>
#include <map>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace dplac {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double ParseReal(const std::string& key, const std::string& value) {
  double v = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgumentError(key + ": expected a number, got '" + value +
                               "'");
  }
  return v;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& value) {
  Int v = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgumentError(key + ": expected an integer, got '" + value +
                               "'");
  }
  return v;
}

std::vector<double> ParseList(const std::string& key,
                              const std::string& value) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const std::size_t comma = value.find(',', pos);
    const std::string cell = Trim(std::string_view(value).substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    out.push_back(ParseReal(key, cell));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string Real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string List(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += Real(values[i]);
  }
  return out;
}

bool IsRequiredSatisfied(const std::set<std::string>& seen,
                         std::string* missing) {
  for (const char* key : {"strategy", "rounds", "privacy.q",
                          "partition.num_clients"}) {
    if (!seen.count(key)) {
      *missing = key;
      return false;
    }
  }
  if (!seen.count("privacy.epsilon") &&
      !seen.count("privacy.noise_multiplier")) {
    *missing = "privacy.epsilon";
    return false;
  }
  return true;
}

// Position of `key` in `text` as a whole dotted token, or npos.
std::size_t FindKey(const std::string& text, const std::string& key) {
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  };
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + 1)) {
    const std::size_t end = pos + key.size();
    if ((pos == 0 || !is_word(text[pos - 1])) &&
        (end == text.size() || !is_word(text[end]) ||
         (text[end] == '.' && (end + 1 == text.size() ||
                               !is_word(text[end + 1]))))) {
      return pos;
    }
  }
  return std::string::npos;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line,
                         const std::string& what)
    : InvalidArgumentError(
          line > 0 ? source + ":" + std::to_string(line) + ": " + what
                   : source + ": " + what),
      line_(line) {}

void SetConfigValue(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "seed") {
    cfg.seed = ParseInt<std::uint64_t>(key, value);
  } else if (key == "rounds") {
    cfg.privacy.rounds = ParseInt<std::int64_t>(key, value);
  } else if (key == "strategy") {
    cfg.strategy.kind = ParseStrategy(value);
  } else if (key == "fraction_train") {
    cfg.strategy.fraction_train = ParseReal(key, value);
  } else if (key == "initial_C") {
    if (value.empty() || value == "none") {
      cfg.initial_c.reset();
    } else {
      cfg.initial_c = ParseReal(key, value);
    }
  } else if (key == "privacy.epsilon") {
    cfg.privacy.epsilon = ParseReal(key, value);
  } else if (key == "privacy.delta") {
    cfg.privacy.delta = ParseReal(key, value);
  } else if (key == "privacy.q") {
    cfg.privacy.q = ParseReal(key, value);
  } else if (key == "privacy.noise_multiplier") {
    if (value.empty() || value == "auto") {
      cfg.forced_noise_multiplier.reset();
    } else {
      cfg.forced_noise_multiplier = ParseReal(key, value);
    }
  } else if (key == "local.epochs") {
    cfg.local.epochs = ParseInt<int>(key, value);
  } else if (key == "local.batch_size") {
    cfg.local.batch_size = ParseInt<std::size_t>(key, value);
  } else if (key == "local.lr") {
    cfg.local.lr = ParseReal(key, value);
  } else if (key == "clip.grid") {
    cfg.grid = ThresholdGrid(ParseList(key, value));
  } else if (key == "clip.multipliers") {
    cfg.mults = MultiplierGrid(ParseList(key, value));
  } else if (key == "model.arch") {
    cfg.arch = ParseArchitecture(value);
  } else if (key == "model.hidden") {
    cfg.hidden = ParseInt<std::size_t>(key, value);
  } else if (key == "model.init_scale") {
    cfg.init_scale = ParseReal(key, value);
  } else if (key == "data.source") {
    if (value == "synth") {
      cfg.data.kind = DataSource::Kind::kSynth;
    } else if (value == "file") {
      cfg.data.kind = DataSource::Kind::kFile;
    } else {
      throw InvalidArgumentError("data.source must be synth or file");
    }
  } else if (key == "data.num_samples") {
    cfg.data.num_samples = ParseInt<std::size_t>(key, value);
  } else if (key == "data.num_features") {
    cfg.data.num_features = ParseInt<std::size_t>(key, value);
  } else if (key == "data.num_classes") {
    cfg.data.num_classes = ParseInt<std::size_t>(key, value);
  } else if (key == "data.separation") {
    cfg.data.separation = ParseReal(key, value);
  } else if (key == "data.num_val") {
    cfg.data.num_val = ParseInt<std::size_t>(key, value);
  } else if (key == "data.train") {
    cfg.data.train_path = value;
  } else if (key == "data.val") {
    cfg.data.val_path = value;
  } else if (key == "partition.num_clients") {
    cfg.num_clients = ParseInt<std::size_t>(key, value);
  } else if (key == "partition.alpha") {
    cfg.partition_alpha = ParseReal(key, value);
  } else {
    throw InvalidArgumentError("unknown key '" + key + "'");
  }
}

ExperimentConfig ParseConfig(std::string_view text, const std::string& source,
                             std::span<const std::string> overrides) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::map<std::string, std::pair<std::string, int>> origin;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, "expected key=value, got '" + line +
                                             "'");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError(source, line_no, "duplicate key '" + key + "'");
    }
    origin[key] = {source, line_no};
    try {
      SetConfigValue(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, e.what());
    }
  }
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string& ov = overrides[i];
    const auto eq = ov.find('=');
    const std::string where = "override " + std::to_string(i + 1);
    if (eq == std::string::npos) {
      throw ConfigError(where, 0, "expected key=value, got '" + ov + "'");
    }
    const std::string key = Trim(std::string_view(ov).substr(0, eq));
    try {
      SetConfigValue(cfg, key, Trim(std::string_view(ov).substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where, 0, e.what());
    }
    seen.insert(key);
    origin[key] = {where, 0};
  }
  std::string missing;
  if (!IsRequiredSatisfied(seen, &missing)) {
    throw ConfigError(source, line_no + 1,
                      "missing required field '" + missing + "'");
  }
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    // Anchor to the earliest key the message names.
    const std::string what = e.what();
    std::size_t best_pos = std::string::npos;
    std::pair<std::string, int> where{source, 0};
    for (const auto& [key, loc] : origin) {
      const std::size_t pos = FindKey(what, key);
      if (pos < best_pos) {
        best_pos = pos;
        where = loc;
      }
    }
    throw ConfigError(where.first, where.second, what);
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path,
                            std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path, overrides);
}

std::string SerializeConfig(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "seed=" << cfg.seed << '\n';
  out << "rounds=" << cfg.privacy.rounds << '\n';
  out << "strategy=" << StrategyName(cfg.strategy.kind) << '\n';
  out << "fraction_train=" << Real(cfg.strategy.fraction_train) << '\n';
  out << "initial_C=" << (cfg.initial_c ? Real(*cfg.initial_c) : "none")
      << '\n';
  out << "privacy.epsilon=" << Real(cfg.privacy.epsilon) << '\n';
  out << "privacy.delta=" << Real(cfg.privacy.delta) << '\n';
  out << "privacy.q=" << Real(cfg.privacy.q) << '\n';
  out << "privacy.noise_multiplier="
      << (cfg.forced_noise_multiplier ? Real(*cfg.forced_noise_multiplier)
                                      : "auto")
      << '\n';
  out << "local.epochs=" << cfg.local.epochs << '\n';
  out << "local.batch_size=" << cfg.local.batch_size << '\n';
  out << "local.lr=" << Real(cfg.local.lr) << '\n';
  out << "clip.grid=" << List(cfg.grid.values()) << '\n';
  out << "clip.multipliers=" << List(cfg.mults.values()) << '\n';
  out << "model.arch=" << ArchitectureName(cfg.arch) << '\n';
  out << "model.hidden=" << cfg.hidden << '\n';
  out << "model.init_scale=" << Real(cfg.init_scale) << '\n';
  out << "data.source="
      << (cfg.data.kind == DataSource::Kind::kSynth ? "synth" : "file")
      << '\n';
  out << "data.num_samples=" << cfg.data.num_samples << '\n';
  out << "data.num_features=" << cfg.data.num_features << '\n';
  out << "data.num_classes=" << cfg.data.num_classes << '\n';
  out << "data.separation=" << Real(cfg.data.separation) << '\n';
  out << "data.num_val=" << cfg.data.num_val << '\n';
  out << "data.train=" << cfg.data.train_path << '\n';
  out << "data.val=" << cfg.data.val_path << '\n';
  out << "partition.num_clients=" << cfg.num_clients << '\n';
  out << "partition.alpha=" << Real(cfg.partition_alpha) << '\n';
  return out.str();
}

}  // namespace dplac
