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

#ifndef DPLAC_MODEL_H_
#define DPLAC_MODEL_H_

// Desk-scale models over a flat parameter vector: multinomial logistic
// regression and a one-hidden-layer tanh MLP. Loss is mean cross-entropy
// with logits clamped to [-30, 30].

#include <cstddef>
#include <span>
#include <string>

#include "dplac/dataset.h"
#include "dplac/param_vector.h"
#include "dplac/rng.h"

namespace dplac {

enum class Architecture { kLogistic, kMlp };

const char* ArchitectureName(Architecture arch);
Architecture ParseArchitecture(const std::string& name);

struct ModelSpec {
  Architecture arch = Architecture::kLogistic;
  std::size_t num_features = 1;
  std::size_t num_classes = 2;
  // Hidden units; MLP only.
  std::size_t hidden = 16;

  // Logistic: k x f weights then k biases.
  // MLP: h x f, h, k x h, k.
  std::size_t NumParams() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

class Model {
 public:
  Model() = default;
  Model(ModelSpec spec, ParamVector params);

  static Model Zeros(const ModelSpec& spec);
  // Entries i.i.d. N(0, scale^2).
  static Model Random(const ModelSpec& spec, double scale, Rng& rng);

  const ModelSpec& spec() const { return spec_; }
  const ParamVector& params() const { return params_; }
  ParamVector& mutable_params() { return params_; }

 private:
  ModelSpec spec_;
  ParamVector params_;
};

inline constexpr double kLogitClamp = 30.0;

struct LocalConfig {
  int epochs = 1;
  std::size_t batch_size = 10;
  double lr = 0.1;

  void Validate() const;

  friend bool operator==(const LocalConfig&, const LocalConfig&) = default;
};

// Mean cross-entropy over the dataset.
double Loss(const Model& model, const Dataset& data);

// Mean cross-entropy over `rows`; writes its gradient into `grad` (resized to
// the parameter count).
double LossAndGradient(const Model& model, const Dataset& data,
                       std::span<const std::size_t> rows, ParamVector& grad);

// Fraction of rows whose argmax logit (ties toward the smaller class) equals
// the label. Empty data gives 0.
double Accuracy(const Model& model, const Dataset& data);

// Runs cfg.epochs of minibatch SGD from `model` on `data` (reshuffled each
// epoch, final short batch kept) and returns the trained-minus-initial
// parameters.
ParamVector UserUpdate(const Model& model, const Dataset& data,
                       const LocalConfig& cfg, Rng& rng);

}  // namespace dplac

#endif  // DPLAC_MODEL_H_
