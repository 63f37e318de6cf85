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

#ifndef DPLAC_CLIPSTRAT_H_
#define DPLAC_CLIPSTRAT_H_

// Clipping-threshold strategies.
//
//   fixed    C never changes (plain DP-FedAvg).
//   dp_lac   C_t = C_{t-1} * min(1, v_{t-1} / v_{t-2}), v = server validation
//            loss. Round 1 estimates C from a private histogram of client
//            votes unless a starting threshold is configured.
//   dp_clac  Same update, but v is a privately aggregated mean of client
//            training losses, paid for with a share of the privacy budget.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dplac/accountant.h"
#include "dplac/dataset.h"
#include "dplac/mechanisms.h"
#include "dplac/model.h"
#include "dplac/rng.h"

namespace dplac {

struct ClipState {
  double threshold = 1.0;  // C_{t-1}
  double v_prev = 0.0;     // v_{t-1}
  double v_prev2 = 0.0;    // v_{t-2}
};

enum class StrategyKind { kFixed, kDpLac, kDpClac };

const char* StrategyName(StrategyKind kind);
StrategyKind ParseStrategy(const std::string& name);

struct Strategy {
  StrategyKind kind = StrategyKind::kDpLac;
  // Share of epsilon spent on model updates; dp_clac only.
  double fraction_train = 2.0 / 3.0;

  bool adaptive() const { return kind != StrategyKind::kFixed; }
  void Validate() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct ThresholdUpdate {
  double threshold;
  // True when a nonpositive loss made the ratio meaningless and C was held.
  bool held;
};

// C * min(1, v_prev / v_prev2). Holds C when either loss is not positive.
ThresholdUpdate UpdateThreshold(const ClipState& state);

// Threshold for the coming round under the given strategy.
ThresholdUpdate NextThreshold(const Strategy& strategy, const ClipState& state);

// Advances the server state by one round: C <- NextThreshold, then the loss
// history shifts to (v_new, v_prev).
ClipState StrategyStep(const Strategy& strategy, const ClipState& state,
                       double v_new);

struct ClientVoteResult {
  HistogramVote vote;
  std::size_t multiplier_index = 0;  // pi; meaningless for a zero update
  double update_norm = 0.0;          // C_k
  double local_loss = 0.0;           // l_k
};

// One client's round-1 threshold vote. Trains locally from `model`, then for
// every multiplier m clips the update at m * C_k, simulates aggregation noise
// with per-coordinate variance (z m C_k)^2 / total_clients, and keeps the
// multiplier whose noisy loss lands closest to the noiseless one. The vote is
// the grid bucket nearest to m * C_k. A zero update votes for bucket 0.
//
// `rng` drives local training first and the simulated noise after it.
ClientVoteResult ClientVote(const Model& model, const Dataset& data,
                            const LocalConfig& cfg, const ThresholdGrid& grid,
                            const MultiplierGrid& mults, NoiseMultiplier z,
                            std::size_t total_clients, Rng& rng);

enum class InitSource { kHistogram, kConfigured };

const char* InitSourceName(InitSource source);

struct InitCReport {
  double c0 = 0.0;
  InitSource source = InitSource::kConfigured;
  std::optional<NoisyHistogram> histogram;
};

// Private histogram of the votes and its mode.
InitCReport InitC(std::span<const HistogramVote> votes,
                  const ThresholdGrid& grid, NoiseMultiplier z, Rng& rng);

// Private mean of client losses clipped at the previous round's private mean.
double ClacLossChannel(std::span<const double> losses, double prev_mean,
                       NoiseMultiplier z_loss, Rng& rng);

// 25 log-spaced buckets from 0.01 to 100, used by dp_clac to estimate the
// initial loss.
const ThresholdGrid& DefaultLossGrid();

}  // namespace dplac

#endif  // DPLAC_CLIPSTRAT_H_
