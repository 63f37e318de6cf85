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

#ifndef DPLAC_DATASET_H_
#define DPLAC_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dplac {

// Row-major n x f feature matrix with integer labels in [0, num_classes).
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t num_features, std::size_t num_classes,
          std::vector<double> features, std::vector<int> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::size_t num_features() const { return num_features_; }
  std::size_t num_classes() const { return num_classes_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * num_features_, num_features_};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const int> labels() const { return labels_; }
  std::span<const double> features() const { return features_; }

  // Rows in the given order.
  Dataset Subset(std::span<const std::size_t> rows) const;
  std::vector<std::size_t> ClassCounts() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t num_features_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<double> features_;
  std::vector<int> labels_;
};

// Gaussian class clusters with unit covariance. Class centres sit
// `separation` apart pairwise (scaled basis vectors when classes <= features,
// seeded random directions otherwise); labels are drawn uniformly.
Dataset SynthDataset(std::size_t num_samples, std::size_t num_features,
                     std::size_t num_classes, double separation,
                     std::uint64_t seed);

// Tabular text: header "x0,...,x{f-1},label", one sample per line, label
// last. The class count is not stored; ReadDataset takes it as a lower bound
// and widens it to cover the labels present.
void WriteDataset(const Dataset& data, std::ostream& out);
Dataset ReadDataset(std::istream& in, std::size_t min_classes = 0,
                    const std::string& source = "<stream>");
void SaveDataset(const Dataset& data, const std::string& path);
Dataset LoadDataset(const std::string& path, std::size_t min_classes = 0);

}  // namespace dplac

#endif  // DPLAC_DATASET_H_
