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

#ifndef DPLAC_PARAM_VECTOR_H_
#define DPLAC_PARAM_VECTOR_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dplac {

// Flat model parameters or pseudo-gradient, with l2 geometry.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim) : values_(dim, 0.0) {}
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& raw() const { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double Norm() const;
  bool AllFinite() const;

  // this += other; dimensions must match.
  ParamVector& operator+=(const ParamVector& other);
  // this += a * other
  void AddScaled(double a, const ParamVector& other);
  void Scale(double a);

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> values_;
};

// a - b, elementwise.
ParamVector Difference(const ParamVector& a, const ParamVector& b);

}  // namespace dplac

#endif  // DPLAC_PARAM_VECTOR_H_
