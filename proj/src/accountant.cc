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

#include "dplac/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "dplac/error.h"

namespace dplac {
namespace {

std::string Str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// log of the per-order moment A_alpha, accumulated as a log-sum-exp over the
// binomial expansion. Every term is positive, so no sign tracking is needed.
double LogMoment(double z, double q, int alpha) {
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double inv_two_var = 1.0 / (2.0 * z * z);

  std::vector<double> terms;
  terms.reserve(alpha + 1);
  double log_binom = 0.0;  // log C(alpha, 0)
  for (int i = 0; i <= alpha; ++i) {
    if (i > 0) {
      log_binom += std::log(static_cast<double>(alpha - i + 1)) -
                   std::log(static_cast<double>(i));
    }
    const int rest = alpha - i;
    if (rest > 0 && q == 1.0) continue;  // (1 - q)^rest == 0
    const double di = static_cast<double>(i);
    double term = log_binom + (i > 0 ? di * log_q : 0.0) +
                  (rest > 0 ? rest * log_1mq : 0.0) +
                  (di * di - di) * inv_two_var;
    terms.push_back(term);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

}  // namespace

void PrivacySpec::Validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("privacy.epsilon must be positive, got " +
                               Str(epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgumentError("privacy.delta must lie in (0, 1), got " +
                               Str(delta));
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw InvalidArgumentError("privacy.q must lie in (0, 1], got " + Str(q));
  }
  if (rounds < 1) {
    throw InvalidArgumentError("rounds must be >= 1, got " +
                               std::to_string(rounds));
  }
}

NoiseMultiplier::NoiseMultiplier(double z) : z_(z) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw InvalidArgumentError("noise multiplier must be finite and >= 0, got " +
                               Str(z));
  }
}

RdpCurve::RdpCurve(std::vector<double> orders, std::vector<double> values)
    : orders_(std::move(orders)), values_(std::move(values)) {
  if (orders_.size() != values_.size()) {
    throw InvalidArgumentError("RDP curve: orders and values differ in length");
  }
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    if (!(orders_[i] > 1.0)) {
      throw InvalidArgumentError("RDP curve: order must exceed 1, got " +
                                 Str(orders_[i]));
    }
    if (i > 0 && !(orders_[i] > orders_[i - 1])) {
      throw InvalidArgumentError("RDP curve: orders must strictly increase");
    }
    if (!(values_[i] >= 0.0)) {
      throw InvalidArgumentError("RDP curve: values must be nonnegative");
    }
  }
}

const std::vector<double>& DefaultOrders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o;
    for (int a = 2; a <= 64; ++a) o.push_back(a);
    for (int a : {80, 96, 128, 192, 256}) o.push_back(a);
    return o;
  }();
  return orders;
}

RdpCurve RdpSubsampledGaussian(double z, double q,
                               std::span<const double> orders) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("RDP is infinite for noise multiplier " + Str(z));
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("sampling rate must lie in (0, 1], got " + Str(q));
  }
  std::vector<double> values;
  values.reserve(orders.size());
  for (double order : orders) {
    if (order < 2.0 || order != std::floor(order) || order > 1e6) {
      throw DomainError("RDP order must be an integer >= 2, got " +
                        Str(order));
    }
    const int alpha = static_cast<int>(order);
    // A_alpha >= 1 mathematically; clamp tiny negative rounding.
    const double rdp = std::max(0.0, LogMoment(z, q, alpha) / (alpha - 1));
    values.push_back(rdp);
  }
  return RdpCurve(std::vector<double>(orders.begin(), orders.end()),
                  std::move(values));
}

RdpCurve Compose(const RdpCurve& curve, std::int64_t rounds) {
  if (rounds < 1) {
    throw InvalidArgumentError("compose: rounds must be >= 1");
  }
  std::vector<double> values(curve.values().begin(), curve.values().end());
  for (double& v : values) v *= static_cast<double>(rounds);
  return RdpCurve(std::vector<double>(curve.orders().begin(),
                                      curve.orders().end()),
                  std::move(values));
}

double RdpToDp(const RdpCurve& curve, double delta) {
  if (curve.empty()) throw InvalidArgumentError("rdp_to_dp: empty curve");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgumentError("rdp_to_dp: delta must lie in (0, 1)");
  }
  const double log_inv_delta = -std::log(delta);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    best = std::min(best, curve.values()[i] +
                              log_inv_delta / (curve.orders()[i] - 1.0));
  }
  return best;
}

double ComputeEpsilon(double z, double q, std::int64_t rounds, double delta,
                      std::span<const double> orders) {
  return RdpToDp(Compose(RdpSubsampledGaussian(z, q, orders), rounds), delta);
}

NoiseMultiplier GetNoiseMultiplier(const PrivacySpec& spec,
                                   const NoiseSearchOptions& options) {
  spec.Validate();
  auto eps_at = [&](double z) {
    return ComputeEpsilon(z, spec.q, spec.rounds, spec.delta);
  };
  double lo = options.lower;
  double hi = options.upper;
  if (eps_at(hi) > spec.epsilon) {
    throw SearchBracketError(
        "target epsilon " + Str(spec.epsilon) +
        " unreachable: even z=" + Str(hi) + " gives epsilon " +
        Str(eps_at(hi)));
  }
  if (eps_at(lo) <= spec.epsilon) {
    throw SearchBracketError(
        "target epsilon " + Str(spec.epsilon) +
        " already met at the search lower bound z=" + Str(lo));
  }
  // Invariant: eps(lo) > target >= eps(hi).
  for (int it = 0; it < options.max_iterations && hi - lo > options.tolerance;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eps_at(mid) > spec.epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return NoiseMultiplier(hi);
}

SplitNoise SplitBudget(const PrivacySpec& spec, double fraction_train,
                       const NoiseSearchOptions& options) {
  if (!(fraction_train > 0.0 && fraction_train < 1.0)) {
    throw InvalidArgumentError("fraction_train must lie in (0, 1), got " +
                               Str(fraction_train));
  }
  PrivacySpec train = spec;
  train.epsilon = spec.epsilon * fraction_train;
  train.delta = spec.delta / 2.0;
  PrivacySpec loss = train;
  loss.epsilon = spec.epsilon * (1.0 - fraction_train);
  return {GetNoiseMultiplier(train, options), GetNoiseMultiplier(loss, options)};
}

}  // namespace dplac
