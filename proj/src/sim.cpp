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

#include "qracle/sim.hpp"

#include "qracle/errors.hpp"
#include "qracle/json_io.hpp"

#include <cmath>
#include <numbers>

namespace qracle {

namespace {

enum class Axis { X, Y, Z };

// Applies a 2x2 unitary [[a, b], [c, d]] to `qubit` (qubit 0 is the MSB).
void apply_1q(StateVector& psi, std::size_t n, std::size_t qubit, Complex a, Complex b, Complex c,
              Complex d) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - qubit);
  const Eigen::Index dim = psi.size();
  for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
    for (Eigen::Index i = base; i < base + stride; ++i) {
      const Complex x0 = psi[i];
      const Complex x1 = psi[i + stride];
      psi[i] = a * x0 + b * x1;
      psi[i + stride] = c * x0 + d * x1;
    }
  }
}

void apply_rotation(StateVector& psi, std::size_t n, std::size_t qubit, Axis axis, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  switch (axis) {
    case Axis::X:
      apply_1q(psi, n, qubit, {c, 0}, {0, -s}, {0, -s}, {c, 0});
      break;
    case Axis::Y:
      apply_1q(psi, n, qubit, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
      break;
    case Axis::Z: {
      const Eigen::Index stride = Eigen::Index{1} << (n - 1 - qubit);
      const Complex lo{c, -s};
      const Complex hi{c, s};
      for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] *= (i & stride) ? hi : lo;
      break;
    }
  }
}

void apply_cnot(StateVector& psi, std::size_t n, std::size_t control, std::size_t target) {
  const Eigen::Index cbit = Eigen::Index{1} << (n - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (n - 1 - target);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(psi[i], psi[i | tbit]);
  }
}

void apply_cz(StateVector& psi, std::size_t n, std::size_t a, std::size_t b) {
  const Eigen::Index abit = Eigen::Index{1} << (n - 1 - a);
  const Eigen::Index bbit = Eigen::Index{1} << (n - 1 - b);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if ((i & abit) && (i & bbit)) psi[i] = -psi[i];
  }
}

void rotation_block(StateVector& psi, const AnsatzSpec& spec, std::span<const double> params,
                    std::size_t layer, std::size_t first_slot, std::span<const Axis> axes) {
  const std::size_t n = spec.n_qubits;
  const std::size_t ppq = spec.params_per_qubit_per_layer();
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t base = (layer * n + q) * ppq + first_slot;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      apply_rotation(psi, n, q, axes[k], params[base + k]);
    }
  }
}

}  // namespace

std::string_view to_string(AnsatzFamily f) {
  switch (f) {
    case AnsatzFamily::ManyBody: return "many_body";
    case AnsatzFamily::Molecular: return "molecular";
    case AnsatzFamily::Random: return "random";
  }
  return "unknown";
}

AnsatzFamily ansatz_family_from_string(std::string_view name) {
  if (name == "many_body") return AnsatzFamily::ManyBody;
  if (name == "molecular") return AnsatzFamily::Molecular;
  if (name == "random") return AnsatzFamily::Random;
  throw FormatError("unknown ansatz family '" + std::string(name) + "'");
}

std::size_t params_per_qubit(AnsatzFamily f) {
  switch (f) {
    case AnsatzFamily::ManyBody: return 2;
    case AnsatzFamily::Molecular: return 3;
    case AnsatzFamily::Random: return 6;
  }
  return 0;
}

AnsatzSpec ansatz_for(Application app) {
  switch (app) {
    case Application::HeisenbergXYZ: return {AnsatzFamily::ManyBody, 4, 1};
    case Application::Ising2D: return {AnsatzFamily::ManyBody, 8, 1};
    case Application::FermiHubbard: return {AnsatzFamily::ManyBody, 8, 1};
    case Application::H2: return {AnsatzFamily::Molecular, 4, 2};
    case Application::RandomVQE: return {AnsatzFamily::Random, 4, 2};
  }
  return {};
}

std::vector<std::pair<std::size_t, std::size_t>> ring_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n < 2) return pairs;
  if (n == 2) return {{0, 1}};
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return pairs;
}

StateVector apply_ansatz(const AnsatzSpec& spec, std::span<const double> params) {
  const std::size_t n = spec.n_qubits;
  if (n == 0 || n > kMaxExpandQubits) throw CapacityError("apply_ansatz: qubit count out of range");
  if (params.size() != spec.n_params()) {
    throw ShapeError("apply_ansatz: expected " + std::to_string(spec.n_params()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  StateVector psi = StateVector::Zero(Eigen::Index{1} << n);
  psi[0] = 1.0;

  static constexpr Axis kYZ[] = {Axis::Y, Axis::Z};
  static constexpr Axis kXYZ[] = {Axis::X, Axis::Y, Axis::Z};
  const auto ring = ring_pairs(n);
  for (std::size_t layer = 0; layer < spec.n_layers; ++layer) {
    switch (spec.family) {
      case AnsatzFamily::ManyBody:
        rotation_block(psi, spec, params, layer, 0, kYZ);
        for (const auto& [c, t] : ring) apply_cnot(psi, n, c, t);
        break;
      case AnsatzFamily::Molecular:
        rotation_block(psi, spec, params, layer, 0, kXYZ);
        for (const auto& [c, t] : ring) apply_cnot(psi, n, c, t);
        break;
      case AnsatzFamily::Random:
        rotation_block(psi, spec, params, layer, 0, kXYZ);
        for (const auto& [a, b] : ring) apply_cz(psi, n, a, b);
        rotation_block(psi, spec, params, layer, 3, kXYZ);
        break;
    }
  }
  return psi;
}

Observable::Observable(const SparseHermitian& h)
    : dim_(h.dim),
      matrix_(static_cast<Eigen::Index>(h.dim), static_cast<Eigen::Index>(h.dim)) {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(h.entries.size());
  for (const auto& [key, value] : h.entries) {
    triplets.emplace_back(static_cast<Eigen::Index>(key.first),
                          static_cast<Eigen::Index>(key.second), value);
  }
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

double Observable::expectation(const StateVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != dim_) {
    throw ShapeError("expectation: state dimension " + std::to_string(psi.size()) +
                     " vs operator dimension " + std::to_string(dim_));
  }
  const Complex value = psi.dot(matrix_ * psi);  // dot conjugates the left side
  if (std::abs(value.imag()) > 1e-8) {
    throw NumericalError("expectation: imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}

double expectation(const SparseHermitian& h, const StateVector& psi) {
  return Observable(h).expectation(psi);
}

double energy(const Observable& h, const AnsatzSpec& spec, std::span<const double> params) {
  return h.expectation(apply_ansatz(spec, params));
}

std::vector<double> parameter_shift_grad(const Observable& h, const AnsatzSpec& spec,
                                         std::span<const double> params) {
  constexpr double kShift = std::numbers::pi / 2.0;
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kShift;
    const double plus = energy(h, spec, shifted);
    shifted[k] = params[k] - kShift;
    const double minus = energy(h, spec, shifted);
    shifted[k] = params[k];
    grad[k] = 0.5 * (plus - minus);
  }
  return grad;
}

std::vector<double> parameter_shift_grad(const SparseHermitian& h, const AnsatzSpec& spec,
                                         std::span<const double> params) {
  return parameter_shift_grad(Observable(h), spec, params);
}

VqeConfig vqe_config_for(Application app) {
  VqeConfig cfg;
  if (app == Application::RandomVQE) {
    cfg.learning_rate = 5e-3;
    cfg.weight_decay = 1e-4;
    cfg.scheduler = Schedule::CosineAnnealing;
  }
  return cfg;
}

std::optional<std::size_t> convergence_step(std::span<const double> losses, double rel_tol) {
  for (std::size_t t = 1; t < losses.size(); ++t) {
    const double denom = std::max(std::abs(losses[t - 1]), 1e-12);
    if (std::abs(losses[t] - losses[t - 1]) / denom < rel_tol) return t;
  }
  return std::nullopt;
}

VqeTrace run_vqe(const Observable& h, const AnsatzSpec& spec, const VqeConfig& cfg,
                 std::span<const double> init) {
  if (init.size() != spec.n_params()) {
    throw ShapeError("run_vqe: init has " + std::to_string(init.size()) + " parameters, ansatz needs " +
                     std::to_string(spec.n_params()));
  }
  if (!(cfg.learning_rate > 0.0)) throw DomainError("run_vqe: learning_rate must be > 0");
  if (cfg.max_steps == 0) throw DomainError("run_vqe: max_steps must be >= 1");

  AdamOptions opts;
  opts.lr = cfg.learning_rate;
  opts.weight_decay = cfg.weight_decay;
  AdamMoments moments;

  VqeTrace trace;
  trace.loss_history.reserve(cfg.max_steps);
  std::vector<double> theta(init.begin(), init.end());
  for (std::size_t t = 0; t < cfg.max_steps; ++t) {
    const double loss = energy(h, spec, theta);
    if (!std::isfinite(loss)) throw DivergenceError(t, "non-finite VQE loss");
    trace.loss_history.push_back(loss);
    if (t >= 1 && !trace.converged_step) {
      const double prev = trace.loss_history[t - 1];
      if (std::abs(loss - prev) / std::max(std::abs(prev), 1e-12) < cfg.convergence_rel_tol) {
        trace.converged_step = t;
        if (cfg.early_stop) break;
      }
    }
    const auto grad = parameter_shift_grad(h, spec, theta);
    adam_update(theta, grad, moments, opts,
                scheduled_lr(cfg.scheduler, cfg.learning_rate, t, cfg.max_steps), t + 1);
  }
  trace.final_loss = energy(h, spec, theta);
  if (!std::isfinite(trace.final_loss)) {
    throw DivergenceError(trace.loss_history.size(), "non-finite VQE loss");
  }
  trace.final_params = std::move(theta);
  return trace;
}

VqeTrace run_vqe(const SparseHermitian& h, const AnsatzSpec& spec, const VqeConfig& cfg,
                 std::span<const double> init) {
  return run_vqe(Observable(h), spec, cfg, init);
}

std::string vqe_trace_to_json(const VqeTrace& trace, const VqeConfig& cfg) {
  JsonWriter w;
  w.begin_object();
  w.key("loss_history").array(trace.loss_history);
  w.key("final_params").array(trace.final_params);
  w.key("final_loss").value(trace.final_loss);
  w.key("converged_step");
  if (trace.converged_step) {
    w.value(static_cast<std::uint64_t>(*trace.converged_step));
  } else {
    w.null();
  }
  w.key("config").begin_object();
  w.key("learning_rate").value(cfg.learning_rate);
  w.key("max_steps").value(static_cast<std::uint64_t>(cfg.max_steps));
  w.key("weight_decay").value(cfg.weight_decay);
  w.key("scheduler").value(cfg.scheduler == Schedule::Constant ? "constant" : "cosine");
  w.key("convergence_rel_tol").value(cfg.convergence_rel_tol);
  w.key("early_stop").value(cfg.early_stop);
  w.end_object();
  w.key("seed").value(cfg.seed);
  w.end_object();
  return w.take();
}

}  // namespace qracle
