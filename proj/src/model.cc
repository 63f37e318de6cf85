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

#include "dplac/model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dplac/error.h"
#include "dplac/kernels.h"

namespace dplac {
namespace {

void CheckCompatible(const Model& model, const Dataset& data) {
  const ModelSpec& s = model.spec();
  if (s.num_features != data.num_features() ||
      s.num_classes < data.num_classes()) {
    throw InvalidArgumentError(
        "model expects " + std::to_string(s.num_features) + " features / " +
        std::to_string(s.num_classes) + " classes, data has " +
        std::to_string(data.num_features()) + " / " +
        std::to_string(data.num_classes()));
  }
}

// Per-sample scratch shared by the forward and backward passes.
struct Workspace {
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> probs;
  std::vector<double> dhidden;
};

// Fills ws.logits (clamped) and, for the MLP, ws.hidden.
void Forward(const ModelSpec& s, std::span<const double> p,
             std::span<const double> x, Workspace& ws) {
  const std::size_t f = s.num_features;
  const std::size_t k = s.num_classes;
  ws.logits.resize(k);
  if (s.arch == Architecture::kLogistic) {
    const double* bias = p.data() + k * f;
    for (std::size_t c = 0; c < k; ++c) {
      ws.logits[c] = kernels::Dot(p.subspan(c * f, f), x) + bias[c];
    }
  } else {
    const std::size_t h = s.hidden;
    const double* b1 = p.data() + h * f;
    const std::size_t w2_off = h * f + h;
    const double* b2 = p.data() + w2_off + k * h;
    ws.hidden.resize(h);
    for (std::size_t u = 0; u < h; ++u) {
      ws.hidden[u] = std::tanh(kernels::Dot(p.subspan(u * f, f), x) + b1[u]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      ws.logits[c] =
          kernels::Dot(p.subspan(w2_off + c * h, h), ws.hidden) + b2[c];
    }
  }
  for (double& z : ws.logits) z = std::clamp(z, -kLogitClamp, kLogitClamp);
}

// Cross-entropy of the clamped logits against label y; leaves softmax in
// ws.probs.
double CrossEntropy(int y, Workspace& ws) {
  const double peak = *std::max_element(ws.logits.begin(), ws.logits.end());
  ws.probs.resize(ws.logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < ws.logits.size(); ++c) {
    ws.probs[c] = std::exp(ws.logits[c] - peak);
    sum += ws.probs[c];
  }
  for (double& pr : ws.probs) pr /= sum;
  return peak + std::log(sum) - ws.logits[y];
}

// Accumulates weight * dLoss/dparams for one sample into grad.
void Backward(const ModelSpec& s, std::span<const double> p,
              std::span<const double> x, int y, double weight, Workspace& ws,
              std::span<double> grad) {
  const std::size_t f = s.num_features;
  const std::size_t k = s.num_classes;
  // dL/dlogit = softmax - onehot; zero where the clamp is active.
  for (std::size_t c = 0; c < k; ++c) {
    double g = ws.probs[c] - (static_cast<int>(c) == y ? 1.0 : 0.0);
    if (std::abs(ws.logits[c]) >= kLogitClamp) g = 0.0;
    ws.probs[c] = g * weight;
  }
  if (s.arch == Architecture::kLogistic) {
    for (std::size_t c = 0; c < k; ++c) {
      kernels::Axpy(ws.probs[c], x, grad.subspan(c * f, f));
      grad[k * f + c] += ws.probs[c];
    }
    return;
  }
  const std::size_t h = s.hidden;
  const std::size_t w2_off = h * f + h;
  const std::size_t b2_off = w2_off + k * h;
  ws.dhidden.assign(h, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    kernels::Axpy(ws.probs[c], ws.hidden, grad.subspan(w2_off + c * h, h));
    grad[b2_off + c] += ws.probs[c];
    kernels::Axpy(ws.probs[c], p.subspan(w2_off + c * h, h), ws.dhidden);
  }
  for (std::size_t u = 0; u < h; ++u) {
    const double a = ws.hidden[u];
    const double g = ws.dhidden[u] * (1.0 - a * a);
    kernels::Axpy(g, x, grad.subspan(u * f, f));
    grad[h * f + u] += g;
  }
}

}  // namespace

const char* ArchitectureName(Architecture arch) {
  return arch == Architecture::kLogistic ? "logistic" : "mlp";
}

Architecture ParseArchitecture(const std::string& name) {
  if (name == "logistic") return Architecture::kLogistic;
  if (name == "mlp") return Architecture::kMlp;
  throw InvalidArgumentError("unknown model architecture '" + name +
                             "' (expected logistic or mlp)");
}

std::size_t ModelSpec::NumParams() const {
  if (arch == Architecture::kLogistic) {
    return num_classes * num_features + num_classes;
  }
  return hidden * num_features + hidden + num_classes * hidden + num_classes;
}

Model::Model(ModelSpec spec, ParamVector params)
    : spec_(spec), params_(std::move(params)) {
  if (spec_.num_features == 0 || spec_.num_classes == 0 ||
      (spec_.arch == Architecture::kMlp && spec_.hidden == 0)) {
    throw InvalidArgumentError("model dimensions must be positive");
  }
  if (params_.size() != spec_.NumParams()) {
    throw InvalidArgumentError(
        "model expects " + std::to_string(spec_.NumParams()) +
        " parameters, got " + std::to_string(params_.size()));
  }
}

Model Model::Zeros(const ModelSpec& spec) {
  return Model(spec, ParamVector(spec.NumParams()));
}

Model Model::Random(const ModelSpec& spec, double scale, Rng& rng) {
  ParamVector p(spec.NumParams());
  if (scale != 0.0) {
    for (double& v : p.values()) v = scale * rng.Gaussian();
  }
  return Model(spec, std::move(p));
}

void LocalConfig::Validate() const {
  if (epochs < 1) throw InvalidArgumentError("local.epochs must be >= 1");
  if (batch_size < 1) {
    throw InvalidArgumentError("local.batch_size must be >= 1");
  }
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw InvalidArgumentError("local.lr must be finite and >= 0");
  }
}

double Loss(const Model& model, const Dataset& data) {
  CheckCompatible(model, data);
  if (data.empty()) throw InvalidArgumentError("loss of empty dataset");
  Workspace ws;
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(model.spec(), model.params().values(), data.row(i), ws);
    total += CrossEntropy(data.label(i), ws);
  }
  return total / static_cast<double>(data.size());
}

double LossAndGradient(const Model& model, const Dataset& data,
                       std::span<const std::size_t> rows, ParamVector& grad) {
  CheckCompatible(model, data);
  if (rows.empty()) throw InvalidArgumentError("gradient of empty batch");
  grad = ParamVector(model.spec().NumParams());
  const double weight = 1.0 / static_cast<double>(rows.size());
  Workspace ws;
  double total = 0.0;
  for (std::size_t r : rows) {
    Forward(model.spec(), model.params().values(), data.row(r), ws);
    total += CrossEntropy(data.label(r), ws);
    Backward(model.spec(), model.params().values(), data.row(r),
             data.label(r), weight, ws, grad.values());
  }
  return total / static_cast<double>(rows.size());
}

double Accuracy(const Model& model, const Dataset& data) {
  CheckCompatible(model, data);
  if (data.empty()) return 0.0;
  Workspace ws;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    Forward(model.spec(), model.params().values(), data.row(i), ws);
    std::size_t best = 0;
    for (std::size_t c = 1; c < ws.logits.size(); ++c) {
      if (ws.logits[c] > ws.logits[best]) best = c;
    }
    correct += (static_cast<int>(best) == data.label(i));
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

ParamVector UserUpdate(const Model& model, const Dataset& data,
                       const LocalConfig& cfg, Rng& rng) {
  cfg.Validate();
  if (data.empty()) throw InvalidArgumentError("client has no data");
  CheckCompatible(model, data);

  Model local = model;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const bool single_batch = cfg.batch_size >= data.size();
  ParamVector grad;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // A single full batch sees every row regardless of order.
    if (!single_batch) rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      LossAndGradient(local, data,
                      std::span<const std::size_t>(order).subspan(start, len),
                      grad);
      local.mutable_params().AddScaled(-cfg.lr, grad);
    }
  }
  return Difference(local.params(), model.params());
}

}  // namespace dplac
