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

#include "dplac/clipstrat.h"

#include <algorithm>
#include <cmath>

#include "dplac/error.h"

namespace dplac {

const char* StrategyName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kFixed:
      return "fixed";
    case StrategyKind::kDpLac:
      return "dp_lac";
    case StrategyKind::kDpClac:
      return "dp_clac";
  }
  return "unknown";
}

StrategyKind ParseStrategy(const std::string& name) {
  if (name == "fixed") return StrategyKind::kFixed;
  if (name == "dp_lac") return StrategyKind::kDpLac;
  if (name == "dp_clac") return StrategyKind::kDpClac;
  throw InvalidArgumentError("unknown strategy '" + name +
                             "' (expected fixed, dp_lac or dp_clac)");
}

void Strategy::Validate() const {
  if (!(fraction_train > 0.0 && fraction_train < 1.0)) {
    throw InvalidArgumentError("fraction_train must lie in (0, 1)");
  }
}

ThresholdUpdate UpdateThreshold(const ClipState& state) {
  if (!(state.v_prev2 > 0.0) || !(state.v_prev > 0.0)) {
    return {state.threshold, true};
  }
  return {state.threshold * std::min(1.0, state.v_prev / state.v_prev2),
          false};
}

ThresholdUpdate NextThreshold(const Strategy& strategy,
                              const ClipState& state) {
  if (!strategy.adaptive()) return {state.threshold, false};
  return UpdateThreshold(state);
}

ClipState StrategyStep(const Strategy& strategy, const ClipState& state,
                       double v_new) {
  return {NextThreshold(strategy, state).threshold, v_new, state.v_prev};
}

ClientVoteResult ClientVote(const Model& model, const Dataset& data,
                            const LocalConfig& cfg, const ThresholdGrid& grid,
                            const MultiplierGrid& mults, NoiseMultiplier z,
                            std::size_t total_clients, Rng& rng) {
  if (total_clients < 1) {
    throw InvalidArgumentError("total_clients must be >= 1");
  }
  const ParamVector delta = UserUpdate(model, data, cfg, rng);
  const double norm = delta.Norm();

  Model trained = model;
  trained.mutable_params() += delta;
  const double local_loss = Loss(trained, data);

  if (norm == 0.0) {
    return {HistogramVote(grid.size(), 0), mults.size() - 1, 0.0, local_loss};
  }

  const double inv_sqrt_clients =
      1.0 / std::sqrt(static_cast<double>(total_clients));
  std::size_t best = 0;
  double best_gap = 0.0;
  for (std::size_t i = 0; i < mults.size(); ++i) {
    const double c = mults[i] * norm;
    const double sigma = z.value() * c * inv_sqrt_clients;
    ParamVector noisy = GaussianPerturb(Clip(delta, c), sigma, rng);
    Model candidate = model;
    candidate.mutable_params() += noisy;
    const double gap = std::abs(Loss(candidate, data) - local_loss);
    if (i == 0 || gap < best_gap) {
      best = i;
      best_gap = gap;
    }
  }
  const std::size_t bucket = NearestBucket(mults[best] * norm, grid);
  return {HistogramVote(grid.size(), bucket), best, norm, local_loss};
}

const char* InitSourceName(InitSource source) {
  return source == InitSource::kHistogram ? "hist" : "configured";
}

InitCReport InitC(std::span<const HistogramVote> votes,
                  const ThresholdGrid& grid, NoiseMultiplier z, Rng& rng) {
  NoisyHistogram hist = AggregateVotes(votes, z, rng);
  InitCReport report;
  report.c0 = SelectMode(hist, grid);
  report.source = InitSource::kHistogram;
  report.histogram = std::move(hist);
  return report;
}

double ClacLossChannel(std::span<const double> losses, double prev_mean,
                       NoiseMultiplier z_loss, Rng& rng) {
  if (!(prev_mean > 0.0)) {
    throw InvalidArgumentError("loss channel clip must be positive");
  }
  return PrivateScalarMean(losses, prev_mean, z_loss, rng);
}

const ThresholdGrid& DefaultLossGrid() {
  static const ThresholdGrid grid = [] {
    std::vector<double> v(25);
    for (int i = 0; i < 25; ++i) {
      v[i] = std::pow(10.0, -2.0 + 4.0 * i / 24.0);
    }
    return ThresholdGrid(std::move(v));
  }();
  return grid;
}

}  // namespace dplac
