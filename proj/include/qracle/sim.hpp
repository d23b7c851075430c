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

// Dense statevector simulation of the three hardware-efficient ansatz
// families, expectation values, parameter-shift gradients and the VQE loop.

#include "qracle/models.hpp"
#include "qracle/optim.hpp"
#include "qracle/pauli.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qracle {

using StateVector = Eigen::VectorXcd;

enum class AnsatzFamily {
  /// Per layer: RY, RZ on every qubit, then a CNOT ring.
  ManyBody,
  /// Per layer: RX, RY, RZ on every qubit, then a CNOT ring.
  Molecular,
  /// Per layer: RX, RY, RZ, a CZ ring, then RX, RY, RZ again.
  Random,
};

std::string_view to_string(AnsatzFamily f);
AnsatzFamily ansatz_family_from_string(std::string_view name);

/// Rotation parameters per qubit per layer: 2, 3 or 6.
std::size_t params_per_qubit(AnsatzFamily f);

struct AnsatzSpec {
  AnsatzFamily family = AnsatzFamily::ManyBody;
  std::size_t n_qubits = 1;
  std::size_t n_layers = 1;

  std::size_t params_per_qubit_per_layer() const { return params_per_qubit(family); }
  /// n_layers * params_per_qubit_per_layer * n_qubits. Parameter k of qubit
  /// q in layer l sits at ((l * n_qubits) + q) * params_per_qubit + k.
  std::size_t n_params() const { return n_layers * params_per_qubit_per_layer() * n_qubits; }

  bool operator==(const AnsatzSpec&) const = default;
};

/// Ansatz configuration used for each application's labels.
AnsatzSpec ansatz_for(Application app);

/// Entangler pairs (control, target) of the ring on n qubits. Two qubits
/// form a single pair; one qubit has none.
std::vector<std::pair<std::size_t, std::size_t>> ring_pairs(std::size_t n);

/// Circuit output on |0...0>. ShapeError on a wrong parameter count.
StateVector apply_ansatz(const AnsatzSpec& spec, std::span<const double> params);

/// Compressed copy of a SparseHermitian for repeated expectation values.
class Observable {
 public:
  explicit Observable(const SparseHermitian& h);

  std::size_t dim() const noexcept { return dim_; }
  /// <psi|H|psi>; NumericalError when the imaginary residue exceeds 1e-8.
  double expectation(const StateVector& psi) const;

 private:
  std::size_t dim_;
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> matrix_;
};

double expectation(const SparseHermitian& h, const StateVector& psi);

/// Energy of the ansatz state at `params`.
double energy(const Observable& h, const AnsatzSpec& spec, std::span<const double> params);

/// d energy / d theta_k = [f(theta_k + pi/2) - f(theta_k - pi/2)] / 2.
std::vector<double> parameter_shift_grad(const Observable& h, const AnsatzSpec& spec,
                                         std::span<const double> params);
std::vector<double> parameter_shift_grad(const SparseHermitian& h, const AnsatzSpec& spec,
                                         std::span<const double> params);

struct VqeConfig {
  double learning_rate = 1e-3;
  std::size_t max_steps = 2000;
  double weight_decay = 0.0;
  Schedule scheduler = Schedule::Constant;
  double convergence_rel_tol = 1e-5;
  std::uint64_t seed = 0;
  /// Stop at the first converged step instead of running max_steps.
  bool early_stop = false;

  bool operator==(const VqeConfig&) const = default;
};

/// Optimizer settings used to produce each application's labels.
VqeConfig vqe_config_for(Application app);

struct VqeTrace {
  /// Entry t is the loss at the parameters before update t.
  std::vector<double> loss_history;
  /// Parameters after the last update.
  std::vector<double> final_params;
  /// Loss at final_params.
  double final_loss = 0.0;
  /// First t >= 1 with |L_t - L_{t-1}| / max(|L_{t-1}|, 1e-12) below the
  /// tolerance.
  std::optional<std::size_t> converged_step;

  double initial_loss() const { return loss_history.front(); }
};

/// First step meeting the relative-change tolerance, if any.
std::optional<std::size_t> convergence_step(std::span<const double> losses, double rel_tol);

/// Adam descent from `init`. DivergenceError on a non-finite loss.
VqeTrace run_vqe(const SparseHermitian& h, const AnsatzSpec& spec, const VqeConfig& cfg,
                 std::span<const double> init);
VqeTrace run_vqe(const Observable& h, const AnsatzSpec& spec, const VqeConfig& cfg,
                 std::span<const double> init);

std::string vqe_trace_to_json(const VqeTrace& trace, const VqeConfig& cfg);

}  // namespace qracle
