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

// Reference implementations used only by tests. They deliberately avoid the
// library's own algebra: dense Kronecker products, a character-table Pauli
// multiplier, occupation-basis fermion operators and finite differences.

#include "qracle/pauli.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

Eigen::Matrix2cd pauli2(char letter);
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
/// P_0 ⊗ P_1 ⊗ ... for a letter string.
Eigen::MatrixXcd dense_string(const std::string& letters);
Eigen::MatrixXcd dense_sum(const qracle::PauliSum& h);

/// Pauli polynomial keyed by letter strings.
using Poly = std::map<std::string, Complex>;
std::pair<Complex, char> multiply_letters(char a, char b);
Poly multiply(const Poly& a, const Poly& b);
Poly add(Poly a, const Poly& b, Complex scale = 1.0);
Poly pruned(const Poly& p, double tol = 1e-12);
/// Jordan-Wigner images built letter by letter.
Poly annihilation(std::size_t site, std::size_t n);
Poly creation(std::size_t site, std::size_t n);
/// -t sum_i (c†_i c_{i+1} + c†_{i+1} c_i) + U sum_i n_i n_{i+1}, i+1 mod n.
Poly hubbard(std::size_t n, double t, double u);
Poly to_poly(const qracle::PauliSum& h);

/// Annihilation operator on the occupation basis; qubit 0 is the leftmost
/// bit and the sign counts occupied modes to the right of `site`.
Eigen::MatrixXcd fock_annihilation(std::size_t site, std::size_t n);

/// Dense statevector: gates applied as full 2^n matrices.
Eigen::VectorXcd dense_ansatz(const std::string& family, std::size_t n, std::size_t layers,
                              const std::vector<double>& params);

/// Central finite difference of f at x along every coordinate.
std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, double h);

/// ||a - b|| / max(||b||, floor) in the Euclidean norm.
double rel_err(const std::vector<double>& a, const std::vector<double>& b, double floor = 1e-12);

}  // namespace oracle
