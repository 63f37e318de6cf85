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

#include "dplac/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "dplac/error.h"
#include "dplac/parallel.h"

namespace dplac {
namespace {

// Round-1 threshold when the voting cohort comes up empty.
constexpr double kFallbackThreshold = 8.0;

std::string Str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct ClientOutputs {
  std::vector<ParamVector> deltas;
  std::vector<double> losses;  // post-training local losses, dp_clac only
};

ClientOutputs TrainCohort(const ExperimentConfig& cfg, const Model& model,
                          const FederatedData& data,
                          std::span<const std::size_t> cohort, int round,
                          bool want_losses, int workers) {
  ClientOutputs out;
  out.deltas.resize(cohort.size());
  if (want_losses) out.losses.resize(cohort.size());
  ParallelFor(cohort.size(), workers, [&](std::size_t i) {
    const std::size_t k = cohort[i];
    Rng rng = DeriveRng(cfg.seed, round, k, StreamPurpose::kLocal);
    out.deltas[i] = UserUpdate(model, data.clients[k], cfg.local, rng);
    if (want_losses) {
      Model trained = model;
      trained.mutable_params() += out.deltas[i];
      out.losses[i] = Loss(trained, data.clients[k]);
    }
  });
  return out;
}

// Private estimate of the initial loss for dp_clac: each client votes for the
// loss-grid bucket nearest its post-training local loss.
double LossHistogramMode(const ExperimentConfig& cfg,
                         std::span<const double> losses,
                         NoiseMultiplier z_loss) {
  const ThresholdGrid& grid = DefaultLossGrid();
  std::vector<HistogramVote> votes;
  votes.reserve(losses.size());
  for (double l : losses) {
    votes.emplace_back(grid.size(), NearestBucket(std::max(l, 1e-300), grid));
  }
  Rng rng = DeriveRng(cfg.seed, 1, 0, StreamPurpose::kLossVote);
  return SelectMode(AggregateVotes(votes, z_loss, rng), grid);
}

}  // namespace

ThresholdGrid DefaultThresholdGrid() {
  static const double kBase[] = {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0};
  std::vector<double> v;
  for (double scale : {0.1, 1.0, 10.0}) {
    for (double b : kBase) v.push_back(b * scale);
  }
  return ThresholdGrid(std::move(v));
}

MultiplierGrid DefaultMultiplierGrid() {
  return MultiplierGrid({0.1, 0.3, 0.5, 0.7, 0.9, 1.0});
}

void ExperimentConfig::Validate() const {
  if (forced_noise_multiplier) {
    NoiseMultiplier check(*forced_noise_multiplier);
    PrivacySpec p = privacy;
    p.epsilon = 1.0;  // unused when z is forced
    p.Validate();
  } else {
    privacy.Validate();
  }
  if (privacy.rounds < 2) {
    throw InvalidArgumentError("rounds must be >= 2 so that training happens");
  }
  local.Validate();
  strategy.Validate();
  if (num_clients < 1) {
    throw InvalidArgumentError("partition.num_clients must be >= 1");
  }
  if (privacy.q * static_cast<double>(num_clients) < 1.0) {
    throw InvalidArgumentError(
        "privacy.q * partition.num_clients = " +
        Str(privacy.q * static_cast<double>(num_clients)) +
        " expects fewer than one client per round");
  }
  if (!(partition_alpha > 0.0)) {
    throw InvalidArgumentError("partition.alpha must be positive");
  }
  if (initial_c && !(*initial_c > 0.0 && std::isfinite(*initial_c))) {
    throw InvalidArgumentError("initial_C must be positive and finite");
  }
  if (arch == Architecture::kMlp && (hidden == 0 || !(init_scale > 0.0))) {
    throw InvalidArgumentError(
        "model.arch=mlp needs model.hidden >= 1 and model.init_scale > 0");
  }
  if (!(init_scale >= 0.0)) {
    throw InvalidArgumentError("model.init_scale must be >= 0");
  }
  if (data.kind == DataSource::Kind::kSynth) {
    if (data.num_samples < num_clients) {
      throw InvalidArgumentError("data.num_samples is below num_clients");
    }
    if (data.num_val < 1 || data.num_features < 1 || data.num_classes < 1) {
      throw InvalidArgumentError("synthetic data sizes must be positive");
    }
    if (!(data.separation >= 0.0)) {
      throw InvalidArgumentError("data.separation must be >= 0");
    }
  } else if (data.train_path.empty() || data.val_path.empty()) {
    throw InvalidArgumentError("file data needs data.train and data.val");
  }
}

FederatedData PrepareData(const ExperimentConfig& cfg) {
  Dataset train;
  FederatedData out;
  if (cfg.data.kind == DataSource::Kind::kSynth) {
    const DataSource& d = cfg.data;
    Dataset all = SynthDataset(d.num_samples + d.num_val, d.num_features,
                               d.num_classes, d.separation, cfg.seed);
    std::vector<std::size_t> rows(all.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    const auto split = rows.begin() + static_cast<long>(d.num_samples);
    train = all.Subset(std::vector<std::size_t>(rows.begin(), split));
    out.validation = all.Subset(std::vector<std::size_t>(split, rows.end()));
  } else {
    train = LoadDataset(cfg.data.train_path);
    out.validation = LoadDataset(cfg.data.val_path, train.num_classes());
    if (out.validation.num_features() != train.num_features()) {
      throw InvalidArgumentError("train and validation feature counts differ");
    }
    if (out.validation.num_classes() > train.num_classes()) {
      train = LoadDataset(cfg.data.train_path, out.validation.num_classes());
    }
  }
  PartitionSpec spec{cfg.num_clients, cfg.partition_alpha, cfg.seed};
  out.clients = DirichletPartition(train, spec);
  return out;
}

Model InitialModel(const ExperimentConfig& cfg, const Dataset& validation) {
  ModelSpec spec{cfg.arch, validation.num_features(), validation.num_classes(),
                 cfg.hidden};
  Rng rng = DeriveRng(cfg.seed, 0, 0, StreamPurpose::kInit);
  return Model::Random(spec, cfg.init_scale, rng);
}

std::vector<std::size_t> SampleCohort(std::size_t n, double q, Rng& rng) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw InvalidArgumentError("sampling rate must lie in (0, 1]");
  }
  std::vector<std::size_t> cohort;
  for (std::size_t k = 0; k < n; ++k) {
    if (q == 1.0 || rng.Bernoulli(q)) cohort.push_back(k);
  }
  return cohort;
}

Model UpdateW(const Model& model, std::span<const ParamVector> deltas,
              double c, NoiseMultiplier z, Rng& rng) {
  if (deltas.empty()) {
    throw InvalidArgumentError("update_w needs at least one client update");
  }
  const std::size_t d = model.params().size();
  ParamVector sum(d);
  for (const ParamVector& delta : deltas) {
    if (delta.size() != d) {
      throw InvalidArgumentError("client update has the wrong dimension");
    }
    sum += Clip(delta, c);
  }
  sum = GaussianPerturb(std::move(sum), z.value() * c, rng);
  const double count = static_cast<double>(deltas.size());
  Model out = model;
  ParamVector& params = out.mutable_params();
  for (std::size_t i = 0; i < d; ++i) params[i] += sum[i] / count;
  return out;
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg,
                               const RunOptions& options) {
  cfg.Validate();
  const bool clac = cfg.strategy.kind == StrategyKind::kDpClac;
  const FederatedData data = PrepareData(cfg);
  Model model = InitialModel(cfg, data.validation);

  ExperimentResult result;
  if (cfg.forced_noise_multiplier) {
    result.z = NoiseMultiplier(*cfg.forced_noise_multiplier);
    if (clac) result.z_loss = result.z;
  } else if (clac) {
    const SplitNoise split =
        SplitBudget(cfg.privacy, cfg.strategy.fraction_train);
    result.z = split.train;
    result.z_loss = split.loss;
  } else {
    result.z = GetNoiseMultiplier(cfg.privacy);
  }
  const NoiseMultiplier z = result.z;
  const std::size_t n_clients = data.clients.size();
  const int workers = options.workers;
  result.num_params = model.params().size();

  if (!clac) result.v0 = Loss(model, data.validation);

  ClipState state;
  double loss_clip = 0.0;  // dp_clac: last positive private loss mean
  const int rounds = static_cast<int>(cfg.privacy.rounds);
  for (int t = 1; t <= rounds; ++t) {
    const auto start = std::chrono::steady_clock::now();
    RoundRecord rec;
    rec.round = t;
    Rng sample_rng = DeriveRng(cfg.seed, t, 0, StreamPurpose::kSample);
    rec.cohort = SampleCohort(n_clients, cfg.privacy.q, sample_rng);
    const std::vector<std::size_t>& cohort = rec.cohort;
    if (cohort.empty()) rec.flags.push_back("empty");

    double c = 0.0;
    double v = 0.0;
    if (t == 1) {
      std::vector<double> local_losses;
      if (cfg.initial_c) {
        c = *cfg.initial_c;
        result.init.c0 = c;
        result.init.source = InitSource::kConfigured;
        if (!cohort.empty()) {
          ClientOutputs outs =
              TrainCohort(cfg, model, data, cohort, t, clac, workers);
          Rng noise = DeriveRng(cfg.seed, t, 0, StreamPurpose::kNoise);
          model = UpdateW(model, outs.deltas, c, z, noise);
          local_losses = std::move(outs.losses);
        }
      } else if (cohort.empty()) {
        c = kFallbackThreshold;
        result.init.c0 = c;
        result.init.source = InitSource::kConfigured;
        rec.flags.push_back("init_fallback");
      } else {
        std::vector<ClientVoteResult> votes(cohort.size());
        ParallelFor(cohort.size(), workers, [&](std::size_t i) {
          const std::size_t k = cohort[i];
          Rng rng = DeriveRng(cfg.seed, t, k, StreamPurpose::kVote);
          votes[i] = ClientVote(model, data.clients[k], cfg.local, cfg.grid,
                                cfg.mults, z, n_clients, rng);
        });
        std::vector<HistogramVote> ballots;
        for (const auto& r : votes) {
          ballots.push_back(r.vote);
          local_losses.push_back(r.local_loss);
        }
        Rng noise = DeriveRng(cfg.seed, t, 0, StreamPurpose::kNoise);
        result.init = InitC(ballots, cfg.grid, z, noise);
        c = result.init.c0;
        rec.flags.push_back("init_hist");
      }

      if (clac) {
        if (local_losses.empty()) {
          // Nothing to estimate from; start at the geometric middle of the
          // loss grid.
          result.v0 = 1.0;
          rec.flags.push_back("loss_fallback");
        } else {
          result.v0 = LossHistogramMode(cfg, local_losses, *result.z_loss);
        }
        loss_clip = result.v0;
        v = result.v0;
      } else if (cfg.initial_c && !cohort.empty()) {
        v = Loss(model, data.validation);
      } else {
        v = result.v0;
      }
      state = ClipState{c, v, result.v0};
    } else {
      const ThresholdUpdate next = NextThreshold(cfg.strategy, state);
      c = next.threshold;
      if (next.held) rec.flags.push_back("hold");
      if (cohort.empty()) {
        v = state.v_prev;
      } else {
        ClientOutputs outs =
            TrainCohort(cfg, model, data, cohort, t, clac, workers);
        Rng noise = DeriveRng(cfg.seed, t, 0, StreamPurpose::kNoise);
        model = UpdateW(model, outs.deltas, c, z, noise);
        if (clac) {
          Rng loss_rng = DeriveRng(cfg.seed, t, 0, StreamPurpose::kLossNoise);
          v = ClacLossChannel(outs.losses, loss_clip, *result.z_loss,
                              loss_rng);
          if (v > 0.0) {
            loss_clip = v;
          } else {
            rec.flags.push_back("loss_nonpositive");
          }
        } else {
          v = Loss(model, data.validation);
        }
      }
      state = StrategyStep(cfg.strategy, state, v);
    }

    rec.threshold = c;
    rec.v = v;
    rec.sigma = z.value() * c;
    rec.loss = Loss(model, data.validation);
    rec.accuracy = Accuracy(model, data.validation);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    result.records.push_back(std::move(rec));
  }
  result.final_model = std::move(model);
  return result;
}

std::optional<std::string> CheckThresholdLog(const ExperimentResult& result,
                                             const Strategy& strategy,
                                             double rel_tol) {
  const auto& recs = result.records;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const RoundRecord& r = recs[i];
    if (r.round != static_cast<int>(i) + 1) {
      return "round index out of sequence at row " + std::to_string(i);
    }
    if (std::abs(r.sigma - result.z.value() * r.threshold) >
        rel_tol * std::abs(result.z.value() * r.threshold)) {
      return "sigma != z * C at round " + std::to_string(r.round);
    }
    if (i == 0) continue;
    const RoundRecord& prev = recs[i - 1];
    if (strategy.adaptive() && r.threshold > prev.threshold) {
      return "threshold increased at round " + std::to_string(r.round);
    }
    const double v_prev2 = i >= 2 ? recs[i - 2].v : result.v0;
    const ClipState state{prev.threshold, prev.v, v_prev2};
    const double expected = NextThreshold(strategy, state).threshold;
    if (std::abs(r.threshold - expected) > rel_tol * std::abs(expected)) {
      return "round " + std::to_string(r.round) + ": C=" + Str(r.threshold) +
             " but the update rule gives " + Str(expected);
    }
  }
  return std::nullopt;
}

}  // namespace dplac
