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

#ifndef DPLAC_MECHANISMS_H_
#define DPLAC_MECHANISMS_H_

// Primitive DP operations: l2 clipping, Gaussian perturbation, the
// unit-sensitivity histogram of one-hot votes and the clamped scalar mean.

#include <cstddef>
#include <span>
#include <vector>

#include "dplac/accountant.h"
#include "dplac/param_vector.h"
#include "dplac/rng.h"

namespace dplac {

// Public candidate clipping thresholds, strictly increasing and positive.
class ThresholdGrid {
 public:
  explicit ThresholdGrid(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const ThresholdGrid&, const ThresholdGrid&) = default;

 private:
  std::vector<double> values_;
};

// Candidate multipliers in (0, 1], strictly increasing, ending at 1.0.
class MultiplierGrid {
 public:
  explicit MultiplierGrid(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const MultiplierGrid&,
                         const MultiplierGrid&) = default;

 private:
  std::vector<double> values_;
};

// One-hot vote over a grid. Exactly one entry is 1, so the vote has unit l2
// norm and the histogram sum has sensitivity 1.
class HistogramVote {
 public:
  HistogramVote() = default;
  HistogramVote(std::size_t length, std::size_t index);
  // Validates that `dense` is a 0/1 vector with exactly one 1.
  static HistogramVote FromDense(std::span<const double> dense);

  std::size_t length() const { return length_; }
  std::size_t index() const { return index_; }
  std::vector<double> Dense() const;

  friend bool operator==(const HistogramVote&, const HistogramVote&) = default;

 private:
  std::size_t length_ = 0;
  std::size_t index_ = 0;
};

struct NoisyHistogram {
  std::vector<double> counts;
};

// delta * min(1, c / ||delta||). Vectors already within c (up to a 1e-12
// relative slack) are returned untouched, which also makes clipping
// idempotent.
ParamVector Clip(const ParamVector& delta, double c);

// v + N(0, sigma^2 I). sigma == 0 returns v unchanged.
ParamVector GaussianPerturb(ParamVector v, double sigma, Rng& rng);

// (sum of votes + N(0, z^2 I)) / number of votes.
NoisyHistogram AggregateVotes(std::span<const HistogramVote> votes,
                              NoiseMultiplier z, Rng& rng);

// Index of the largest entry; ties go to the smaller index.
std::size_t ArgMaxFirst(std::span<const double> values);

// Grid value at the histogram mode.
double SelectMode(const NoisyHistogram& hist, const ThresholdGrid& grid);

// Index of the grid entry closest to value; ties go to the smaller index.
std::size_t NearestBucket(double value, const ThresholdGrid& grid);

// Clamps each value to [0, clip_at], sums, adds N(0, (z * clip_at)^2) and
// divides by the count.
double PrivateScalarMean(std::span<const double> values, double clip_at,
                         NoiseMultiplier z, Rng& rng);

}  // namespace dplac

#endif  // DPLAC_MECHANISMS_H_
