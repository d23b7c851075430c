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

// Hamiltonian families used for dataset construction.

#include "qracle/pauli.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qracle {

enum class Application { HeisenbergXYZ, Ising2D, FermiHubbard, H2, RandomVQE };

/// Short CLI names: heisenberg, ising, hubbard, h2, random.
std::string_view to_string(Application app);
/// Accepts the short names and the enum spellings; UsageError otherwise.
Application application_from_string(std::string_view name);

/// Per-instance metadata. `params` are the application's named scalars in
/// feature order (J1,J2,J3 | j,mu | t,U | bond_length_angstrom | none).
struct InstanceMeta {
  Application application = Application::HeisenbergXYZ;
  std::size_t index = 0;
  std::size_t n_qubits = 0;
  std::vector<std::pair<std::string, double>> params;

  std::optional<double> param(std::string_view key) const;
  bool operator==(const InstanceMeta&) const = default;
};

/// Parameter names in feature order for an application.
std::vector<std::string> param_names(Application app);

/// Sum over i of J1 XX + J2 YY + J3 ZZ on bonds (i, i+1 mod n).
PauliSum heisenberg_xyz(std::size_t n, double j1, double j2, double j3);

/// -j sum_<a,b> Z_a Z_b - mu sum_a Z_a on an open rows x cols grid, sites
/// numbered row-major.
PauliSum ising_2d(std::size_t rows, std::size_t cols, double j, double mu);
/// Same, checking rows * cols against a requested qubit count.
PauliSum ising_2d(std::size_t n_qubits, std::size_t rows, std::size_t cols, double j, double mu);

/// Grid adjacencies (a < b) of an open rows x cols lattice.
std::vector<std::pair<std::size_t, std::size_t>> grid_bonds(std::size_t rows, std::size_t cols);

/// Fermionic form of the spinless Hubbard ring: hopping -t (c†_i c_{i+1} +
/// h.c.) and interaction U n_i n_{i+1}, i+1 taken mod n.
std::vector<FermionicTerm> fermi_hubbard_terms(std::size_t n, double t, double u);
/// Jordan-Wigner image of `fermi_hubbard_terms`.
PauliSum fermi_hubbard(std::size_t n, double t, double u);

/// `n_terms` distinct non-identity strings with real coefficients uniform in
/// [lo, hi].
PauliSum random_hamiltonian(std::size_t n, std::size_t n_terms, std::pair<double, double> coeff_range,
                            std::uint64_t seed);

struct H2Instance {
  InstanceMeta meta;
  PauliSum hamiltonian;
};

/// Reads blocks introduced by `# bond_length=<angstrom>`; other comments are
/// ignored. ParseError carries the line number.
std::vector<H2Instance> parse_h2(std::string_view text);
std::vector<H2Instance> load_h2(const std::filesystem::path& path);
std::string format_h2(const std::vector<H2Instance>& instances);

/// Path of the bundled STO-3G fixture.
std::filesystem::path default_h2_path();

struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double step = 0.1;

  /// Number of grid points, min + k * step for k = 0..points()-1.
  std::size_t points() const;
  double value(std::size_t k) const;
};

struct CouplingGrid {
  std::vector<GridAxis> axes;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  std::size_t cardinality() const;
};

/// `count` distinct grid tuples, drawn without replacement.
std::vector<std::vector<double>> sample_grid(const CouplingGrid& g);

/// Default coupling grid for the grid-sampled applications.
CouplingGrid default_grid(Application app, std::size_t count, std::uint64_t seed);

}  // namespace qracle
