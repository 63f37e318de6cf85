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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dplac/accountant.h"
#include "dplac/clipstrat.h"
#include "dplac/harness.h"
#include "dplac/model.h"
#include "dplac/run_io.h"

namespace dplac {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// Every adaptive run produced anywhere in the suite, for the threshold-log
// check.
std::vector<std::pair<std::string, ExperimentResult>> g_adaptive_runs;

void Remember(const std::string& label, const ExperimentConfig& cfg,
              const ExperimentResult& r) {
  if (cfg.strategy.adaptive()) g_adaptive_runs.emplace_back(label, r);
}

// ---------------------------------------------------------------------------

Outcome A1() {
  double worst = 0.0;
  for (double z : {0.5, 1.0, 2.0, 4.0}) {
    for (double a : {2.0, 4.0, 16.0, 64.0}) {
      const std::vector<double> orders = {a};
      const double got = RdpSubsampledGaussian(z, 1.0, orders).values()[0];
      const double want = a / (2 * z * z);
      worst = std::max(worst, std::abs(got - want) / want);
    }
  }
  return {worst <= 1e-9, Fmt("max relative error %.3g over 16 cases", worst)};
}

Outcome A2() {
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> eps_dist(0.5, 10.0);
  const double qs[] = {0.01, 0.1, 1.0};
  const std::int64_t ts[] = {10, 200};
  int ok = 0;
  double worst_ratio = 1.0;
  std::string failures;
  for (int i = 0; i < 20; ++i) {
    const PrivacySpec spec{eps_dist(gen), 1e-5, qs[gen() % 3], ts[gen() % 2]};
    const double z = GetNoiseMultiplier(spec).value();
    const double got = ComputeEpsilon(z, spec.q, spec.rounds, spec.delta);
    const double ratio = got / spec.epsilon;
    worst_ratio = std::min(worst_ratio, ratio);
    if (got <= spec.epsilon && got > 0.95 * spec.epsilon) {
      ++ok;
    } else {
      failures += Fmt(" [eps=%.4g q=%g T=%lld got %.6g]", spec.epsilon, spec.q,
                      static_cast<long long>(spec.rounds), got);
    }
  }
  return {ok == 20,
          Fmt("%d/20 tuples in (0.95 eps, eps]; lowest ratio %.4f", ok,
              worst_ratio) +
              failures};
}

// Plain FedAvg written against the raw parameter arrays.
ParamVector FedAvgOracle(const ExperimentConfig& cfg) {
  const FederatedData data = PrepareData(cfg);
  const Model init = InitialModel(cfg, data.validation);
  std::vector<double> w = init.params().raw();
  for (int t = 1; t <= cfg.privacy.rounds; ++t) {
    Rng sample = DeriveRng(cfg.seed, t, 0, StreamPurpose::kSample);
    std::vector<std::size_t> cohort;
    for (std::size_t k = 0; k < data.clients.size(); ++k) {
      if (cfg.privacy.q == 1.0 || sample.Uniform() < cfg.privacy.q) {
        cohort.push_back(k);
      }
    }
    if (cohort.empty()) continue;
    const Model current(init.spec(), ParamVector(w));
    std::vector<double> sum(w.size(), 0.0);
    for (std::size_t k : cohort) {
      Rng local = DeriveRng(cfg.seed, t, k, StreamPurpose::kLocal);
      const ParamVector d =
          UserUpdate(current, data.clients[k], cfg.local, local);
      for (std::size_t i = 0; i < w.size(); ++i) sum[i] += d[i];
    }
    const double n = static_cast<double>(cohort.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += sum[i] / n;
  }
  return ParamVector(w);
}

Outcome A3() {
  int identical = 0;
  std::string detail;
  for (std::uint64_t seed : {1, 2, 3}) {
    ExperimentConfig cfg;
    cfg.strategy.kind = StrategyKind::kFixed;
    cfg.forced_noise_multiplier = 0.0;
    cfg.initial_c = 1e18;
    cfg.privacy.q = 0.5;
    cfg.privacy.rounds = 10;
    cfg.num_clients = 20;
    cfg.data.num_samples = 1000;
    cfg.local = {2, 8, 0.2};
    cfg.seed = seed;
    const ExperimentResult r = RunExperiment(cfg, {4});
    const ParamVector oracle = FedAvgOracle(cfg);
    const bool same = r.final_model.params() == oracle;
    identical += same;
    double max_diff = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      max_diff = std::max(max_diff,
                          std::abs(oracle[i] - r.final_model.params()[i]));
    }
    detail += Fmt(" seed%llu:%s", static_cast<unsigned long long>(seed),
                  same ? "bit-identical" : Fmt("max diff %.3g", max_diff).c_str());
  }
  return {identical == 3, Fmt("%d/3 seeds;", identical) + detail};
}

// Literal row-by-row check of the logged thresholds.
Outcome A4() {
  std::size_t rows = 0, held = 0;
  std::string problems;
  double worst = 0.0;
  for (const auto& [label, r] : g_adaptive_runs) {
    const auto& recs = r.records;
    for (std::size_t i = 1; i < recs.size(); ++i) {
      ++rows;
      const double c_prev = recs[i - 1].threshold;
      const double c = recs[i].threshold;
      if (c > c_prev) {
        problems += Fmt(" [%s round %d increased]", label.c_str(),
                        recs[i].round);
        continue;
      }
      const double v1 = recs[i - 1].v;
      const double v2 = i >= 2 ? recs[i - 2].v : r.v0;
      const bool flagged = std::count(recs[i].flags.begin(),
                                      recs[i].flags.end(), "hold") > 0;
      double want;
      if (flagged) {
        ++held;
        if (v1 > 0.0 && v2 > 0.0) {
          problems += Fmt(" [%s round %d held without cause]", label.c_str(),
                          recs[i].round);
        }
        want = c_prev;
      } else {
        want = c_prev * std::min(1.0, v1 / v2);
      }
      const double rel = std::abs(c - want) / want;
      worst = std::max(worst, rel);
      if (rel > 1e-12) {
        problems += Fmt(" [%s round %d rel err %.3g]", label.c_str(),
                        recs[i].round, rel);
      }
    }
  }
  return {problems.empty() && rows > 0,
          Fmt("%zu adaptive runs, %zu rows checked, %zu held, max rel err "
              "%.3g",
              g_adaptive_runs.size(), rows, held, worst) +
              problems};
}

// Desk-scale task shared by A5-A7.
ExperimentConfig DeskTask(double epsilon, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.privacy = {epsilon, 1e-5, 0.2, 30};
  cfg.data.num_samples = 4000;
  cfg.data.num_features = 10;
  cfg.data.num_classes = 2;
  cfg.data.separation = 3.0;
  cfg.num_clients = 100;
  cfg.init_scale = 1.0;
  cfg.seed = seed;
  return cfg;
}

struct Sweep {
  double epsilon;
  // accuracy[seed][grid index]
  std::vector<std::vector<double>> accuracy;
  std::vector<double> c_star;
  std::vector<double> c_hist;
};

std::vector<Sweep> g_sweeps;
const std::uint64_t kSeeds[] = {1, 2, 3};

void RunSweeps() {
  const ThresholdGrid grid = DefaultThresholdGrid();
  for (double eps : {4.0, 8.0}) {
    Sweep s{eps, {}, {}, {}};
    for (std::uint64_t seed : kSeeds) {
      std::vector<double> acc;
      for (double c : grid.values()) {
        ExperimentConfig cfg = DeskTask(eps, seed);
        cfg.strategy.kind = StrategyKind::kFixed;
        cfg.initial_c = c;
        acc.push_back(RunExperiment(cfg).records.back().accuracy);
      }
      // Ties go to the smaller threshold.
      const std::size_t best =
          std::max_element(acc.begin(), acc.end()) - acc.begin();
      s.c_star.push_back(grid[best]);
      s.accuracy.push_back(std::move(acc));

      ExperimentConfig lac = DeskTask(eps, seed);
      lac.strategy.kind = StrategyKind::kDpLac;
      const ExperimentResult r = RunExperiment(lac);
      Remember(Fmt("lac eps%g seed%llu", eps,
                   static_cast<unsigned long long>(seed)),
               lac, r);
      s.c_hist.push_back(r.init.c0);

      ExperimentConfig clac = DeskTask(eps, seed);
      clac.strategy.kind = StrategyKind::kDpClac;
      Remember(Fmt("clac eps%g seed%llu", eps,
                   static_cast<unsigned long long>(seed)),
               clac, RunExperiment(clac));
    }
    g_sweeps.push_back(std::move(s));
  }
}

Outcome A5() {
  bool pass = true;
  std::string detail;
  for (const Sweep& s : g_sweeps) {
    int within = 0;
    detail += Fmt(" eps=%g:", s.epsilon);
    for (std::size_t i = 0; i < s.c_star.size(); ++i) {
      const bool ok =
          s.c_hist[i] >= s.c_star[i] / 10 && s.c_hist[i] <= 10 * s.c_star[i];
      within += ok;
      detail += Fmt(" (C*=%g C_hist=%g%s)", s.c_star[i], s.c_hist[i],
                    ok ? "" : " OUT");
    }
    detail += Fmt(" %d/3 within 10x;", within);
    pass = pass && within >= 2;
  }
  return {pass, detail};
}

Outcome A6() {
  bool pass = true;
  std::string detail;
  for (const Sweep& s : g_sweeps) {
    const std::size_t n = s.accuracy.front().size();
    std::vector<double> mean(n, 0.0);
    for (const auto& row : s.accuracy) {
      for (std::size_t i = 0; i < n; ++i) mean[i] += row[i] / s.accuracy.size();
    }
    const std::size_t peak =
        std::max_element(mean.begin() + 1, mean.end() - 1) - mean.begin();
    int inversions = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (i < peak && mean[i + 1] < mean[i]) ++inversions;
      if (i >= peak && mean[i + 1] > mean[i]) ++inversions;
    }
    const double margin =
        mean[peak] - std::max(mean.front(), mean.back());
    const bool ok = inversions <= 1 && margin >= 0.02;
    pass = pass && ok;
    detail += Fmt(
        " eps=%g: peak %.4f at C=%g, ends %.4f/%.4f, margin %.1f pts, "
        "%d inversion(s)%s;",
        s.epsilon, mean[peak], DefaultThresholdGrid()[peak], mean.front(),
        mean.back(), 100 * margin, inversions, ok ? "" : " FAIL");
  }
  return {pass, detail};
}

Outcome A7() {
  const Sweep& s = g_sweeps.front();  // eps = 4
  double fixed_sum = 0.0, lac_sum = 0.0;
  std::string detail;
  for (std::size_t i = 0; i < std::size(kSeeds); ++i) {
    ExperimentConfig cfg = DeskTask(4.0, kSeeds[i]);
    cfg.initial_c = 10 * s.c_star[i];
    cfg.strategy.kind = StrategyKind::kFixed;
    const double fixed = RunExperiment(cfg).records.back().accuracy;
    cfg.strategy.kind = StrategyKind::kDpLac;
    const ExperimentResult r = RunExperiment(cfg);
    Remember(Fmt("lac defhp seed%llu",
                 static_cast<unsigned long long>(kSeeds[i])),
             cfg, r);
    const double lac = r.records.back().accuracy;
    fixed_sum += fixed;
    lac_sum += lac;
    detail += Fmt(" seed%llu C0=%g fixed=%.3f lac=%.3f;",
                  static_cast<unsigned long long>(kSeeds[i]), cfg.initial_c.value(),
                  fixed, lac);
  }
  const double n = static_cast<double>(std::size(kSeeds));
  const double diff = (lac_sum - fixed_sum) / n;
  return {diff >= -0.01,
          Fmt("mean fixed %.4f, DP-LAC %.4f (%+.1f pts);", fixed_sum / n,
              lac_sum / n, 100 * diff) +
              detail};
}

Outcome A8() {
  const Dataset data = SynthDataset(50, 4, 2, 2.0, 8);
  const ModelSpec spec{Architecture::kLogistic, 4, 2};
  Rng rng(3);
  const Model model = Model::Random(spec, 0.7, rng);
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  ParamVector grad;
  LossAndGradient(model, data, rows, grad);
  double worst = 0.0;
  constexpr double kStep = 1e-6;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    Model plus = model, minus = model;
    plus.mutable_params()[i] += kStep;
    minus.mutable_params()[i] -= kStep;
    const double numeric = (Loss(plus, data) - Loss(minus, data)) / (2 * kStep);
    worst = std::max(worst, std::abs(grad[i] - numeric) / std::abs(numeric));
  }
  return {grad.size() == 10 && worst <= 1e-4,
          Fmt("%zu params, max relative error %.3g", grad.size(), worst)};
}

Outcome A9() {
  ExperimentConfig cfg;
  cfg.strategy.kind = StrategyKind::kDpLac;
  cfg.privacy = {8.0, 1e-5, 0.2, 20};
  cfg.num_clients = 50;
  cfg.seed = 11;
  std::ostringstream one, eight;
  const ExperimentResult r1 = RunExperiment(cfg, {1});
  const ExperimentResult r8 = RunExperiment(cfg, {8});
  Remember("lac workers1", cfg, r1);
  Remember("lac workers8", cfg, r8);
  WriteRoundsCsv(r1.records, one);
  WriteRoundsCsv(r8.records, eight);
  const bool same = one.str() == eight.str() && !one.str().empty();
  return {same, Fmt("rounds.csv %zu bytes, %s", one.str().size(),
                    same ? "byte-identical" : "DIFFERENT")};
}

// Independent brute-force version of the zero-noise vote.
Outcome A10() {
  std::mt19937_64 gen(99);
  int ok = 0;
  std::string failures;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t f = 1 + gen() % 4;
    const std::size_t k = 2 + gen() % 2;
    const std::size_t n = 5 + gen() % 26;
    const Dataset data = SynthDataset(n, f, k, 2.0, gen());
    const ModelSpec spec{Architecture::kLogistic, f, k};
    Rng init(gen());
    const Model model = Model::Random(spec, 0.5, init);
    const LocalConfig local{1 + static_cast<int>(gen() % 2), 1 + gen() % 8,
                            0.05 * static_cast<double>(1 + gen() % 20)};
    // Random positive grid, sorted.
    std::vector<double> g(5 + gen() % 20);
    std::uniform_real_distribution<double> u(-2.0, 1.5);
    for (double& x : g) x = std::pow(10.0, u(gen));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    const ThresholdGrid grid(g);
    const MultiplierGrid mults = DefaultMultiplierGrid();

    Rng rng(gen());
    Rng copy = rng;
    const ClientVoteResult vote =
        ClientVote(model, data, local, grid, mults, NoiseMultiplier(0), 50, rng);

    const ParamVector delta = UserUpdate(model, data, local, copy);
    double sq = 0.0;
    for (double x : delta.values()) sq += x * x;
    const double norm = std::sqrt(sq);
    std::size_t nearest = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (std::abs(g[j] - norm) < std::abs(g[nearest] - norm)) nearest = j;
    }
    const bool good = mults[vote.multiplier_index] == 1.0 &&
                      vote.vote.index() == nearest;
    ok += good;
    if (!good) {
      failures += Fmt(" [instance %d: mult %g bucket %zu vs %zu]", inst,
                      mults[vote.multiplier_index], vote.vote.index(), nearest);
    }
  }
  return {ok == 20, Fmt("%d/20 instances agree", ok) + failures};
}

}  // namespace
}  // namespace dplac

int main() {
  using dplac::Outcome;
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    const char* id;
    const char* title;
    std::function<Outcome()> run;
    double limit_s;
  };
  // A4 runs last because it audits every adaptive run made by the others;
  // the sweep behind A5-A7 is timed as part of A5.
  std::vector<Criterion> order = {
      {"A1", "accountant closed form", dplac::A1, 1},
      {"A2", "accountant round trip", dplac::A2, 10},
      {"A3", "zero-noise FedAvg reduction", dplac::A3, 30},
      {"A5", "histogram threshold tracks tuned C",
       [] {
         dplac::RunSweeps();
         return dplac::A5();
       },
       20 * 60},
      {"A6", "bias-variance shape", dplac::A6, 0},
      {"A7", "adaptive clipping vs oversized fixed C", dplac::A7, 0},
      {"A8", "gradient finite differences", dplac::A8, 1},
      {"A9", "worker-count independence", dplac::A9, 120},
      {"A10", "zero-noise vote", dplac::A10, 0},
      {"A4", "threshold log invariants", dplac::A4, 0},
  };
  std::vector<std::string> lines(order.size());
  bool all = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = order[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (order[i].limit_s > 0 && secs > order[i].limit_s) {
      o.pass = false;
      o.detail += dplac::Fmt(" (over the %.0f s limit)", order[i].limit_s);
    }
    all = all && o.pass;
    lines[i] = dplac::Fmt("%-4s %s  %s [%.2fs]: ", order[i].id,
                          o.pass ? "PASS" : "FAIL", order[i].title, secs) +
               o.detail;
    std::fprintf(stderr, "%s done\n", order[i].id);
  }
  // Report in criterion order.
  std::vector<std::size_t> idx(order.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::stoi(order[a].id + 1) < std::stoi(order[b].id + 1);
  });
  for (std::size_t i : idx) std::printf("%s\n", lines[i].c_str());
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
