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

#ifndef DPLAC_HARNESS_H_
#define DPLAC_HARNESS_H_

// The federated server loop with DP aggregation and threshold adaptation.
//
// Round 1 either collects threshold votes from the sampled cohort and sets
// C_1 from the private histogram (leaving the model and loss untouched), or,
// when initial_c is configured, trains like any other round with C_1 set to
// that value. Every later round t:
//
//   C_t  <- strategy threshold from (C_{t-1}, v_{t-1}, v_{t-2})
//   each sampled client trains locally and returns a pseudo-gradient
//   W_t  <- W_{t-1} + (N(0, (z C_t)^2 I) + sum_k clip(Delta_k, C_t)) / |K_t|
//   v_t  <- validation loss of W_t (fixed, dp_lac) or the private client-loss
//           mean (dp_clac)
//
// Results are a pure function of the config: every random draw comes from a
// stream derived from (seed, round, client, purpose), so the worker count has
// no effect on the output.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dplac/accountant.h"
#include "dplac/clipstrat.h"
#include "dplac/dataset.h"
#include "dplac/mechanisms.h"
#include "dplac/model.h"
#include "dplac/partition.h"
#include "dplac/rng.h"

namespace dplac {

struct DataSource {
  enum class Kind { kSynth, kFile };
  Kind kind = Kind::kSynth;

  // kSynth: num_samples training rows plus num_val validation rows drawn from
  // the same clusters.
  std::size_t num_samples = 2000;
  std::size_t num_features = 10;
  std::size_t num_classes = 2;
  double separation = 3.0;
  std::size_t num_val = 500;

  // kFile
  std::string train_path;
  std::string val_path;

  friend bool operator==(const DataSource&, const DataSource&) = default;
};

// Default public threshold and multiplier grids.
ThresholdGrid DefaultThresholdGrid();
MultiplierGrid DefaultMultiplierGrid();

struct ExperimentConfig {
  PrivacySpec privacy;  // privacy.rounds is the number of rounds T
  // Bypasses the accountant (and the budget split) when set.
  std::optional<double> forced_noise_multiplier;
  LocalConfig local;
  Strategy strategy;
  ThresholdGrid grid = DefaultThresholdGrid();
  MultiplierGrid mults = DefaultMultiplierGrid();
  Architecture arch = Architecture::kLogistic;
  std::size_t hidden = 16;
  // Std of the i.i.d. Gaussian initial weights; 0 starts from zeros.
  double init_scale = 0.0;
  DataSource data;
  std::size_t num_clients = 50;
  double partition_alpha = 1.0;
  // Skips the round-1 histogram and starts from this threshold.
  std::optional<double> initial_c;
  std::uint64_t seed = 1;

  void Validate() const;

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

struct RoundRecord {
  int round = 0;
  std::vector<std::size_t> cohort;
  double threshold = 0.0;  // C_t
  double v = 0.0;          // v_t
  double sigma = 0.0;      // z * C_t
  double accuracy = 0.0;   // on the validation set
  double loss = 0.0;       // validation loss
  double wall_ms = 0.0;
  std::vector<std::string> flags;
};

struct ExperimentResult {
  std::vector<RoundRecord> records;
  Model final_model;
  InitCReport init;
  NoiseMultiplier z;
  std::optional<NoiseMultiplier> z_loss;
  double v0 = 0.0;
  std::size_t num_params = 0;
};

struct FederatedData {
  std::vector<Dataset> clients;
  Dataset validation;
};

FederatedData PrepareData(const ExperimentConfig& cfg);
Model InitialModel(const ExperimentConfig& cfg, const Dataset& validation);

// Poisson sampling: each of n clients joins independently with probability q.
std::vector<std::size_t> SampleCohort(std::size_t n, double q, Rng& rng);

// Clips every delta at c, sums, adds one N(0, (z c)^2 I) draw, divides by the
// cohort size and adds the result to the model.
Model UpdateW(const Model& model, std::span<const ParamVector> deltas,
              double c, NoiseMultiplier z, Rng& rng);

struct RunOptions {
  int workers = 1;
};

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const RunOptions& options = {});

// Row-by-row check of the logged thresholds against the strategy rule.
// Returns a description of the first violation, or nullopt.
std::optional<std::string> CheckThresholdLog(const ExperimentResult& result,
                                             const Strategy& strategy,
                                             double rel_tol = 1e-12);

}  // namespace dplac

#endif  // DPLAC_HARNESS_H_
