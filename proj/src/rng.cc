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

#include "dplac/rng.h"

#include <cmath>
#include <utility>

namespace dplac {

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::UniformOpen() {
  return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * Uniform() - 1.0;
    v = 2.0 * Uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

double Rng::Gamma(double shape) {
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back down.
    const double g = Gamma(shape + 1.0);
    return g * std::pow(UniformOpen(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = Gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = UniformOpen();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

void Rng::Shuffle(std::span<std::size_t> items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(UniformIndex(i));
    std::swap(items[i - 1], items[j]);
  }
}

Rng DeriveRng(std::uint64_t master_seed, std::uint64_t round,
              std::uint64_t client, StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(round),
                    static_cast<std::uint32_t>(round >> 32),
                    static_cast<std::uint32_t>(client),
                    static_cast<std::uint32_t>(client >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Rng(seq);
}

}  // namespace dplac
