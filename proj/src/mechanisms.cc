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

#include "dplac/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "dplac/error.h"

namespace dplac {

ThresholdGrid::ThresholdGrid(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgumentError("threshold grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw InvalidArgumentError("threshold grid entries must be positive");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw InvalidArgumentError(
          "threshold grid must be strictly increasing at entry " +
          std::to_string(i));
    }
  }
}

MultiplierGrid::MultiplierGrid(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgumentError("multiplier grid is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0 && values_[i] <= 1.0)) {
      throw InvalidArgumentError("multipliers must lie in (0, 1]");
    }
    if (i > 0 && !(values_[i] > values_[i - 1])) {
      throw InvalidArgumentError("multipliers must be strictly increasing");
    }
  }
  if (values_.back() != 1.0) {
    throw InvalidArgumentError("the last multiplier must be 1.0");
  }
}

HistogramVote::HistogramVote(std::size_t length, std::size_t index)
    : length_(length), index_(index) {
  if (index >= length) {
    throw InvalidArgumentError("vote index " + std::to_string(index) +
                               " outside grid of length " +
                               std::to_string(length));
  }
}

HistogramVote HistogramVote::FromDense(std::span<const double> dense) {
  std::size_t ones = 0;
  std::size_t index = 0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] == 1.0) {
      ++ones;
      index = i;
    } else if (dense[i] != 0.0) {
      throw InvalidArgumentError("vote entries must be 0 or 1");
    }
  }
  if (ones != 1) {
    throw InvalidArgumentError("vote must contain exactly one 1, found " +
                               std::to_string(ones));
  }
  return HistogramVote(dense.size(), index);
}

std::vector<double> HistogramVote::Dense() const {
  std::vector<double> out(length_, 0.0);
  out[index_] = 1.0;
  return out;
}

ParamVector Clip(const ParamVector& delta, double c) {
  if (!(c > 0.0)) {
    throw InvalidArgumentError("clipping threshold must be positive");
  }
  const double norm = delta.Norm();
  if (norm <= c * (1.0 + 1e-12)) return delta;
  ParamVector out = delta;
  out.Scale(c / norm);
  return out;
}

ParamVector GaussianPerturb(ParamVector v, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) {
    throw InvalidArgumentError("noise std must be nonnegative");
  }
  if (sigma == 0.0) return v;
  for (double& x : v.values()) x += sigma * rng.Gaussian();
  return v;
}

NoisyHistogram AggregateVotes(std::span<const HistogramVote> votes,
                              NoiseMultiplier z, Rng& rng) {
  if (votes.empty()) throw InvalidArgumentError("no votes to aggregate");
  const std::size_t length = votes.front().length();
  std::vector<double> sum(length, 0.0);
  for (const HistogramVote& vote : votes) {
    if (vote.length() != length) {
      throw InvalidArgumentError("votes differ in length");
    }
    sum[vote.index()] += 1.0;
  }
  ParamVector noisy =
      GaussianPerturb(ParamVector(std::move(sum)), z.value(), rng);
  const double count = static_cast<double>(votes.size());
  NoisyHistogram hist;
  hist.counts.assign(noisy.values().begin(), noisy.values().end());
  for (double& c : hist.counts) c /= count;
  return hist;
}

std::size_t ArgMaxFirst(std::span<const double> values) {
  if (values.empty()) throw InvalidArgumentError("argmax of empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

double SelectMode(const NoisyHistogram& hist, const ThresholdGrid& grid) {
  if (hist.counts.size() != grid.size()) {
    throw InvalidArgumentError("histogram length " +
                               std::to_string(hist.counts.size()) +
                               " does not match grid length " +
                               std::to_string(grid.size()));
  }
  return grid[ArgMaxFirst(hist.counts)];
}

std::size_t NearestBucket(double value, const ThresholdGrid& grid) {
  if (!(value > 0.0)) {
    throw InvalidArgumentError("bucket lookup needs a positive value");
  }
  std::size_t best = 0;
  double best_dist = std::abs(grid[0] - value);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double dist = std::abs(grid[j] - value);
    if (dist < best_dist) {
      best = j;
      best_dist = dist;
    }
  }
  return best;
}

double PrivateScalarMean(std::span<const double> values, double clip_at,
                         NoiseMultiplier z, Rng& rng) {
  if (values.empty()) throw InvalidArgumentError("no values to average");
  if (!(clip_at > 0.0)) {
    throw InvalidArgumentError("clip_at must be positive");
  }
  double sum = 0.0;
  for (double v : values) sum += std::clamp(v, 0.0, clip_at);
  if (z.value() > 0.0) sum += z.value() * clip_at * rng.Gaussian();
  return sum / static_cast<double>(values.size());
}

}  // namespace dplac
