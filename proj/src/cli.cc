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

#include "dplac/cli.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dplac/accountant.h"
#include "dplac/config.h"
#include "dplac/dataset.h"
#include "dplac/error.h"
#include "dplac/harness.h"
#include "dplac/partition.h"
#include "dplac/run_io.h"

namespace dplac {
namespace {

namespace fs = std::filesystem;

std::string Sig6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir;
};

int ResolveWorkers(const GlobalFlags& flags) {
  if (flags.workers) return std::max(1, *flags.workers);
  if (const char* env = std::getenv("DPLAC_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void RequireOutDir(const GlobalFlags& flags) {
  if (flags.out_dir.empty()) {
    throw InvalidArgumentError("--out <dir> is required");
  }
}

ExperimentResult RunAndWrite(const ExperimentConfig& cfg, int workers,
                             const fs::path& dir) {
  ExperimentResult result = RunExperiment(cfg, RunOptions{workers});
  fs::create_directories(dir);
  {
    std::ofstream out = OpenOut(dir / "rounds.csv");
    WriteRoundsCsv(result.records, out);
  }
  {
    std::ofstream out = OpenOut(dir / "summary.txt");
    WriteSummary(cfg, result, out);
  }
  {
    std::ofstream out = OpenOut(dir / "model.bin");
    WriteModelSnapshot(result.final_model.params(), out);
  }
  return result;
}

std::vector<std::string> WithSeed(std::vector<std::string> overrides,
                                  const GlobalFlags& flags) {
  if (flags.seed) overrides.push_back("seed=" + std::to_string(*flags.seed));
  return overrides;
}

int CmdRun(const std::string& config_path,
           const std::vector<std::string>& overrides, const GlobalFlags& flags,
           std::ostream& out) {
  RequireOutDir(flags);
  const ExperimentConfig cfg = LoadConfig(config_path, WithSeed(overrides, flags));
  const ExperimentResult result =
      RunAndWrite(cfg, ResolveWorkers(flags), flags.out_dir);
  const RoundRecord& last = result.records.back();
  out << "z=" << Sig6(result.z.value()) << '\n'
      << "C0=" << Sig6(result.init.c0) << '\n'
      << "final_acc=" << Sig6(last.accuracy) << '\n'
      << "final_C=" << Sig6(last.threshold) << '\n';
  return kExitOk;
}

struct AccountantArgs {
  std::string mode;
  std::optional<double> epsilon;
  std::optional<double> z;
  double delta = 1e-5;
  double q = 1.0;
  std::int64_t rounds = 1;
};

int CmdAccountant(const AccountantArgs& a, std::ostream& out) {
  PrivacySpec spec;
  spec.delta = a.delta;
  spec.q = a.q;
  spec.rounds = a.rounds;
  if (a.mode == "solve-z") {
    if (!a.epsilon) throw InvalidArgumentError("solve-z needs --epsilon");
    spec.epsilon = *a.epsilon;
    spec.Validate();
    const NoiseMultiplier z = GetNoiseMultiplier(spec);
    out << "z=" << Sig6(z.value()) << '\n'
        << "epsilon=" << Sig6(ComputeEpsilon(z.value(), a.q, a.rounds, a.delta))
        << '\n';
  } else {
    if (!a.z) throw InvalidArgumentError("solve-eps needs --z");
    spec.epsilon = 1.0;
    spec.Validate();
    if (!(*a.z > 0.0)) throw InvalidArgumentError("--z must be positive");
    out << "epsilon=" << Sig6(ComputeEpsilon(*a.z, a.q, a.rounds, a.delta))
        << '\n';
  }
  return kExitOk;
}

struct PartitionArgs {
  std::string data_path;
  std::string synth;
  std::size_t clients = 0;
  double alpha = 1.0;
};

int CmdPartition(const PartitionArgs& a, const GlobalFlags& flags,
                 std::ostream& out) {
  RequireOutDir(flags);
  const std::uint64_t seed = flags.seed.value_or(1);
  Dataset data;
  if (!a.data_path.empty() == !a.synth.empty()) {
    throw InvalidArgumentError("give exactly one of --data or --synth");
  }
  if (!a.data_path.empty()) {
    data = LoadDataset(a.data_path);
  } else {
    // n,f,k,separation
    std::vector<double> parts;
    std::stringstream ss(a.synth);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        parts.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidArgumentError("--synth expects n,f,k,separation");
      }
    }
    if (parts.size() != 4 || parts[0] < 1 || parts[1] < 1 || parts[2] < 1) {
      throw InvalidArgumentError("--synth expects n,f,k,separation");
    }
    data = SynthDataset(static_cast<std::size_t>(parts[0]),
                        static_cast<std::size_t>(parts[1]),
                        static_cast<std::size_t>(parts[2]), parts[3], seed);
  }
  const PartitionSpec spec{a.clients, a.alpha, seed};
  const auto shards = DirichletPartitionIndices(data, spec);

  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  std::ofstream manifest = OpenOut(dir / "manifest.csv");
  manifest << "shard,size";
  for (std::size_t c = 0; c < data.num_classes(); ++c) manifest << ",class_" << c;
  manifest << '\n';
  for (std::size_t i = 0; i < shards.size(); ++i) {
    const Dataset shard = data.Subset(shards[i]);
    char name[32];
    std::snprintf(name, sizeof(name), "shard_%04zu.csv", i);
    std::ofstream f = OpenOut(dir / name);
    WriteDataset(shard, f);
    manifest << i << ',' << shard.size();
    for (std::size_t count : shard.ClassCounts()) manifest << ',' << count;
    manifest << '\n';
  }
  out << "shards=" << shards.size() << '\n' << "samples=" << data.size() << '\n';
  return kExitOk;
}

int CmdSweep(const std::string& config_path, const std::string& param,
             const std::vector<std::string>& values,
             const std::vector<std::string>& overrides,
             const GlobalFlags& flags, std::ostream& out) {
  RequireOutDir(flags);
  if (values.empty()) throw InvalidArgumentError("--values is empty");
  const auto base_overrides = WithSeed(overrides, flags);
  const ExperimentConfig base = LoadConfig(config_path, base_overrides);
  // Validate every point before spending time on any run.
  std::vector<ExperimentConfig> configs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::string> ov = base_overrides;
    ov.push_back(param + "=" + values[i]);
    ov.push_back("seed=" + std::to_string(base.seed + i));
    configs.push_back(LoadConfig(config_path, ov));
  }
  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  std::ostringstream table;
  table << "value,final_acc,final_C\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "run_%03zu", i);
    const ExperimentResult r =
        RunAndWrite(configs[i], ResolveWorkers(flags), dir / name);
    table << values[i] << ',' << FormatReal(r.records.back().accuracy) << ','
          << FormatReal(r.records.back().threshold) << '\n';
  }
  std::ofstream f = OpenOut(dir / "sweep.csv");
  f << table.str();
  out << table.str();
  return kExitOk;
}

int CmdPlotData(const std::string& run_dir, const std::string& series,
                std::ostream& out, std::ostream& err) {
  static const char* kSeries[] = {"C", "v", "sigma", "acc"};
  if (std::find(std::begin(kSeries), std::end(kSeries), series) ==
      std::end(kSeries)) {
    err << "unknown series '" << series << "'; valid: C, v, sigma, acc\n";
    return kExitConfig;
  }
  std::ifstream in(fs::path(run_dir) / "rounds.csv");
  if (!in) throw InvalidArgumentError("no rounds.csv in " + run_dir);
  const RoundsTable table = ReadRoundsCsv(in);
  const int col = table.Column(series);
  out << "round," << series << '\n';
  for (const auto& row : table.rows) out << row[0] << ',' << row[col] << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Differentially private federated learning simulator with "
               "adaptive clipping"};
  app.require_subcommand(1);
  GlobalFlags flags;
  std::uint64_t seed_value = 0;
  int workers_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Master seed")
                       ->configurable();
  auto* workers_opt = app.add_option(
      "--workers", workers_value,
      "Worker threads (default: $DPLAC_WORKERS or hardware concurrency)");
  app.add_option("--out", flags.out_dir, "Output directory");
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("overrides", overrides, "key=value overrides");

  AccountantArgs acc;
  auto* accountant =
      app.add_subcommand("accountant", "Noise multiplier / epsilon queries");
  accountant->add_option("mode", acc.mode, "solve-z or solve-eps")
      ->required()
      ->check(CLI::IsMember({"solve-z", "solve-eps"}));
  accountant->add_option("--epsilon", acc.epsilon, "Target epsilon");
  accountant->add_option("--z", acc.z, "Noise multiplier");
  accountant->add_option("--delta", acc.delta, "Delta")->default_val(1e-5);
  accountant->add_option("--q", acc.q, "Sampling rate")->default_val(1.0);
  accountant->add_option("--rounds", acc.rounds, "Rounds T")->default_val(1);

  PartitionArgs part;
  auto* partition =
      app.add_subcommand("partition", "Dirichlet split into client shards");
  partition->add_option("--data", part.data_path, "Dataset file");
  partition->add_option("--synth", part.synth, "n,f,k,separation");
  partition->add_option("-N,--clients", part.clients, "Number of clients")
      ->required();
  partition->add_option("--alpha", part.alpha, "Dirichlet concentration")
      ->default_val(1.0);

  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Grid sweep over one config key");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("overrides", overrides, "key=value overrides");
  sweep->add_option("--param", sweep_param, "Config key to vary")->required();
  sweep->add_option("--values", sweep_values, "Values")
      ->required()
      ->delimiter(',');

  std::string run_dir;
  std::string series;
  auto* plot = app.add_subcommand("plotdata", "Export one series of a run");
  plot->add_option("run_dir", run_dir, "Run output directory")->required();
  plot->add_option("--series", series, "C, v, sigma or acc")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
  if (seed_opt->count() > 0) flags.seed = seed_value;
  if (workers_opt->count() > 0) flags.workers = workers_value;

  try {
    if (*run) return CmdRun(config_path, overrides, flags, out);
    if (*accountant) return CmdAccountant(acc, out);
    if (*partition) return CmdPartition(part, flags, out);
    if (*sweep) {
      return CmdSweep(config_path, sweep_param, sweep_values, overrides, flags,
                      out);
    }
    if (*plot) return CmdPlotData(run_dir, series, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace dplac
