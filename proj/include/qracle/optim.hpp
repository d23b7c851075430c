// Copyright 2026 The Qracle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Adam with decoupled weight decay and bias correction, plus learning-rate
// schedules. Shared by the VQE loop and the tensor engine.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace qracle {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

/// First/second moment buffers for one parameter block.
struct AdamMoments {
  std::vector<double> m;
  std::vector<double> v;
};

/// One update of `params` in place. `step` is 1-based (bias correction uses
/// beta^step); `lr` overrides opts.lr so callers can schedule it.
inline void adam_update(std::span<double> params, std::span<const double> grads, AdamMoments& state,
                        const AdamOptions& opts, double lr, std::size_t step) {
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  const double bc1 = 1.0 - std::pow(opts.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(opts.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = opts.beta1 * state.m[i] + (1.0 - opts.beta1) * g;
    state.v[i] = opts.beta2 * state.v[i] + (1.0 - opts.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params[i] -= lr * opts.weight_decay * params[i];
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + opts.eps);
  }
}

enum class Schedule { Constant, CosineAnnealing };

/// Learning rate for 0-based update `t` of `total`.
inline double scheduled_lr(Schedule s, double base, std::size_t t, std::size_t total) {
  if (s == Schedule::Constant || total == 0) return base;
  return base * 0.5 *
         (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) / static_cast<double>(total)));
}

}  // namespace qracle
