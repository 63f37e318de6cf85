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

#include "dplac/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dplac/error.h"
#include "dplac/rng.h"

namespace dplac {
namespace {

// Integer counts summing to total, proportional to weights (which sum to 1),
// by largest remainder. Ties in the remainder go to the smaller index.
std::vector<std::size_t> LargestRemainder(const std::vector<double>& weights,
                                          std::size_t total) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> counts(n);
  std::vector<double> remainder(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = weights[i] * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  // Floating slop can overshoot by a unit; take it back from the largest.
  while (assigned > total) {
    const auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % n) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

}  // namespace

void PartitionSpec::Validate() const {
  if (num_clients < 1) {
    throw InvalidArgumentError("partition.num_clients must be >= 1");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgumentError("partition.alpha must be positive");
  }
}

std::vector<std::vector<std::size_t>> DirichletPartitionIndices(
    const Dataset& data, const PartitionSpec& spec) {
  spec.Validate();
  const std::size_t n_clients = spec.num_clients;
  if (data.size() < n_clients) {
    throw InvalidArgumentError("cannot split " + std::to_string(data.size()) +
                               " samples across " + std::to_string(n_clients) +
                               " clients");
  }
  std::vector<std::vector<std::size_t>> shards(n_clients);
  if (n_clients == 1) {
    shards[0].resize(data.size());
    std::iota(shards[0].begin(), shards[0].end(), 0);
    return shards;
  }

  std::vector<std::vector<std::size_t>> by_class(data.num_classes());
  for (std::size_t i = 0; i < data.size(); ++i) {
    by_class[data.label(i)].push_back(i);
  }

  Rng rng = DeriveRng(spec.seed, 0, 0, StreamPurpose::kPartition);
  std::vector<double> weights(n_clients);
  for (auto& members : by_class) {
    if (members.empty()) continue;
    double total = 0.0;
    for (double& w : weights) {
      w = rng.Gamma(spec.alpha);
      total += w;
    }
    if (!(total > 0.0)) {
      // Every gamma draw underflowed (tiny alpha): give the class to one
      // uniformly chosen client.
      std::fill(weights.begin(), weights.end(), 0.0);
      weights[rng.UniformIndex(n_clients)] = 1.0;
    } else {
      for (double& w : weights) w /= total;
    }
    rng.Shuffle(members);
    const std::vector<std::size_t> counts =
        LargestRemainder(weights, members.size());
    std::size_t next = 0;
    for (std::size_t c = 0; c < n_clients; ++c) {
      for (std::size_t j = 0; j < counts[c]; ++j) {
        shards[c].push_back(members[next++]);
      }
    }
  }

  // Repair pass: each empty client takes one sample from the largest shard.
  for (auto& shard : shards) {
    if (!shard.empty()) continue;
    auto donor = std::max_element(
        shards.begin(), shards.end(),
        [](const auto& a, const auto& b) { return a.size() < b.size(); });
    shard.push_back(donor->back());
    donor->pop_back();
  }
  for (auto& shard : shards) std::sort(shard.begin(), shard.end());
  return shards;
}

std::vector<Dataset> DirichletPartition(const Dataset& data,
                                        const PartitionSpec& spec) {
  std::vector<Dataset> out;
  for (const auto& rows : DirichletPartitionIndices(data, spec)) {
    out.push_back(data.Subset(rows));
  }
  return out;
}

}  // namespace dplac
