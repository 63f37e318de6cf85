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

#ifndef DPLAC_PARTITION_H_
#define DPLAC_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dplac/dataset.h"

namespace dplac {

struct PartitionSpec {
  std::size_t num_clients = 1;
  // Dirichlet concentration; small values give highly skewed label mixes.
  double alpha = 1.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Label-skewed federated split. For each class, client proportions are drawn
// from Dirichlet(alpha * 1_N) and the class's (shuffled) samples are dealt
// out with largest-remainder rounding. Any client left empty then receives
// one sample from the currently largest shard. Returns sorted row indices
// per client; the shards are disjoint and cover every row.
std::vector<std::vector<std::size_t>> DirichletPartitionIndices(
    const Dataset& data, const PartitionSpec& spec);

std::vector<Dataset> DirichletPartition(const Dataset& data,
                                        const PartitionSpec& spec);

}  // namespace dplac

#endif  // DPLAC_PARTITION_H_
