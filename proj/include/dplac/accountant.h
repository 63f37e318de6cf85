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

#ifndef DPLAC_ACCOUNTANT_H_
#define DPLAC_ACCOUNTANT_H_

// Renyi-DP accounting for the Poisson-subsampled Gaussian mechanism and the
// noise-multiplier search built on it.
//
// One round of user-level DP-FedAvg is a Gaussian mechanism with
// sensitivity C and noise std z * C, applied to a cohort in which each client
// participates independently with probability q. Its RDP at integer order
// alpha has the closed form
//
//   eps'(alpha) = log( sum_{i=0}^{alpha} binom(alpha, i) q^i (1-q)^(alpha-i)
//                      * exp((i^2 - i) / (2 z^2)) ) / (alpha - 1),
//
// which reduces to alpha / (2 z^2) at q = 1. Rounds compose by adding curves,
// and a curve converts to (eps, delta)-DP through
// eps = min_alpha eps'(alpha) + log(1/delta) / (alpha - 1).

#include <cstdint>
#include <span>
#include <vector>

namespace dplac {

struct PrivacySpec {
  double epsilon = 0.0;
  double delta = 1e-5;
  // Per-round client sampling probability.
  double q = 1.0;
  std::int64_t rounds = 1;

  // Throws InvalidArgumentError naming the offending field.
  void Validate() const;

  friend bool operator==(const PrivacySpec&, const PrivacySpec&) = default;
};

// Ratio of the Gaussian noise std to the clipping threshold.
class NoiseMultiplier {
 public:
  NoiseMultiplier() = default;
  explicit NoiseMultiplier(double z);
  double value() const { return z_; }

  friend bool operator==(NoiseMultiplier, NoiseMultiplier) = default;

 private:
  double z_ = 0.0;
};

class RdpCurve {
 public:
  RdpCurve() = default;
  // orders strictly increasing and > 1; values nonnegative; same length.
  RdpCurve(std::vector<double> orders, std::vector<double> values);

  std::span<const double> orders() const { return orders_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return orders_.size(); }
  bool empty() const { return orders_.empty(); }

 private:
  std::vector<double> orders_;
  std::vector<double> values_;
};

// {2, 3, ..., 64} plus {80, 96, 128, 192, 256}.
const std::vector<double>& DefaultOrders();

// Per-round RDP of the Poisson-subsampled Gaussian mechanism. Requires z > 0,
// q in (0, 1] and integer orders >= 2; throws DomainError otherwise.
RdpCurve RdpSubsampledGaussian(double z, double q,
                               std::span<const double> orders);

RdpCurve Compose(const RdpCurve& curve, std::int64_t rounds);

double RdpToDp(const RdpCurve& curve, double delta);

// Forward direction: epsilon spent by `rounds` rounds at noise multiplier z.
double ComputeEpsilon(double z, double q, std::int64_t rounds, double delta,
                      std::span<const double> orders = DefaultOrders());

struct NoiseSearchOptions {
  double lower = 0.3;
  double upper = 1000.0;
  double tolerance = 1e-3;
  int max_iterations = 60;
};

// Smallest z in the search bracket (to the tolerance) whose composed epsilon
// does not exceed spec.epsilon. Throws SearchBracketError when the target is
// not bracketed.
NoiseMultiplier GetNoiseMultiplier(const PrivacySpec& spec,
                                   const NoiseSearchOptions& options = {});

struct SplitNoise {
  NoiseMultiplier train;
  NoiseMultiplier loss;
};

// Splits (epsilon, delta) between the model-update channel and the private
// loss channel by simple composition: the training mechanism receives
// (fraction_train * epsilon, delta / 2), the loss channel the rest.
SplitNoise SplitBudget(const PrivacySpec& spec, double fraction_train,
                       const NoiseSearchOptions& options = {});

}  // namespace dplac

#endif  // DPLAC_ACCOUNTANT_H_
