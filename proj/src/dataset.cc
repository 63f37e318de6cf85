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

#include "dplac/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dplac/error.h"
#include "dplac/rng.h"

namespace dplac {

Dataset::Dataset(std::size_t num_features, std::size_t num_classes,
                 std::vector<double> features, std::vector<int> labels)
    : num_features_(num_features),
      num_classes_(num_classes),
      features_(std::move(features)),
      labels_(std::move(labels)) {
  if (num_features_ == 0 || num_classes_ == 0) {
    throw InvalidArgumentError("dataset needs >= 1 feature and class");
  }
  if (features_.size() != labels_.size() * num_features_) {
    throw InvalidArgumentError("feature matrix does not match label count");
  }
  for (int y : labels_) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes_) {
      throw InvalidArgumentError("label " + std::to_string(y) +
                                 " outside [0, " +
                                 std::to_string(num_classes_) + ")");
    }
  }
  for (double x : features_) {
    if (!std::isfinite(x)) throw InvalidArgumentError("non-finite feature");
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(rows.size() * num_features_);
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto x = row(r);
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(labels_[r]);
  }
  Dataset out;
  out.num_features_ = num_features_;
  out.num_classes_ = num_classes_;
  out.features_ = std::move(features);
  out.labels_ = std::move(labels);
  return out;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  std::vector<std::size_t> counts(num_classes_, 0);
  for (int y : labels_) ++counts[y];
  return counts;
}

Dataset SynthDataset(std::size_t num_samples, std::size_t num_features,
                     std::size_t num_classes, double separation,
                     std::uint64_t seed) {
  if (num_samples == 0 || num_features == 0 || num_classes == 0) {
    throw InvalidArgumentError("synthetic dataset sizes must be positive");
  }
  if (!(separation >= 0.0)) {
    throw InvalidArgumentError("separation must be nonnegative");
  }
  // Two points on orthogonal axes at radius r are r * sqrt(2) apart.
  const double radius = separation / std::sqrt(2.0);
  std::vector<double> centres(num_classes * num_features, 0.0);
  if (num_classes <= num_features) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      centres[c * num_features + c] = radius;
    }
  } else {
    Rng rng = DeriveRng(seed, 0, 1, StreamPurpose::kData);
    for (std::size_t c = 0; c < num_classes; ++c) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < num_features; ++j) {
        const double g = rng.Gaussian();
        centres[c * num_features + j] = g;
        norm2 += g * g;
      }
      const double s = radius / std::sqrt(norm2);
      for (std::size_t j = 0; j < num_features; ++j) {
        centres[c * num_features + j] *= s;
      }
    }
  }

  Rng rng = DeriveRng(seed, 0, 0, StreamPurpose::kData);
  std::vector<double> features(num_samples * num_features);
  std::vector<int> labels(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const auto y = static_cast<int>(rng.UniformIndex(num_classes));
    labels[i] = y;
    for (std::size_t j = 0; j < num_features; ++j) {
      features[i * num_features + j] =
          centres[y * num_features + j] + rng.Gaussian();
    }
  }
  return Dataset(num_features, num_classes, std::move(features),
                 std::move(labels));
}

void WriteDataset(const Dataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < data.num_features(); ++j) {
    out << 'x' << j << ',';
  }
  out << "label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double x : data.row(i)) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      out << buf << ',';
    }
    out << data.label(i) << '\n';
  }
}

Dataset ReadDataset(std::istream& in, std::size_t min_classes,
                    const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidArgumentError(source + ": missing header row");
  }
  std::size_t columns = 1;
  for (char ch : line) columns += (ch == ',');
  if (columns < 2) {
    throw InvalidArgumentError(source + ":1: need >= 1 feature and a label");
  }
  const std::size_t num_features = columns - 1;
  {
    std::string expected;
    for (std::size_t j = 0; j < num_features; ++j) {
      expected += "x" + std::to_string(j) + ",";
    }
    expected += "label";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected) {
      throw InvalidArgumentError(source + ":1: header must be '" + expected +
                                 "'");
    }
  }

  std::vector<double> features;
  std::vector<int> labels;
  int max_label = -1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t field = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell =
          line.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (field < num_features) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
          throw InvalidArgumentError(source + ":" + std::to_string(line_no) +
                                     ": bad number '" + cell + "'");
        }
        features.push_back(v);
      } else if (field == num_features) {
        int y = 0;
        auto [ptr, ec] = std::from_chars(first, last, y);
        if (ec != std::errc() || ptr != last || y < 0) {
          throw InvalidArgumentError(source + ":" + std::to_string(line_no) +
                                     ": bad label '" + cell + "'");
        }
        labels.push_back(y);
        max_label = std::max(max_label, y);
      }
      ++field;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (field != columns) {
      throw InvalidArgumentError(source + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(columns) +
                                 " fields, found " + std::to_string(field));
    }
  }
  if (labels.empty()) throw InvalidArgumentError(source + ": no samples");
  const std::size_t num_classes =
      std::max(min_classes, static_cast<std::size_t>(max_label + 1));
  return Dataset(num_features, num_classes, std::move(features),
                 std::move(labels));
}

void SaveDataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  WriteDataset(data, out);
}

Dataset LoadDataset(const std::string& path, std::size_t min_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgumentError("cannot open dataset " + path);
  return ReadDataset(in, min_classes, path);
}

}  // namespace dplac
