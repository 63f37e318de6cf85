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

#include "dplac/param_vector.h"

#include <cmath>
#include <string>

#include "dplac/error.h"
#include "dplac/kernels.h"

namespace dplac {
namespace {

void CheckSameSize(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) {
    throw InvalidArgumentError("parameter dimension mismatch: " +
                               std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()));
  }
}

}  // namespace

double ParamVector::Norm() const {
  return std::sqrt(kernels::SumSquares(values_));
}

bool ParamVector::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

ParamVector& ParamVector::operator+=(const ParamVector& other) {
  CheckSameSize(*this, other);
  kernels::Add(other.values(), values_);
  return *this;
}

void ParamVector::AddScaled(double a, const ParamVector& other) {
  CheckSameSize(*this, other);
  kernels::Axpy(a, other.values(), values_);
}

void ParamVector::Scale(double a) { kernels::Scale(a, values_); }

ParamVector Difference(const ParamVector& a, const ParamVector& b) {
  CheckSameSize(a, b);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return ParamVector(std::move(out));
}

}  // namespace dplac
