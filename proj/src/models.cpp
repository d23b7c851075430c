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

#include "qracle/models.hpp"

#include "qracle/errors.hpp"
#include "qracle/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qracle {

std::string_view to_string(Application app) {
  switch (app) {
    case Application::HeisenbergXYZ: return "heisenberg";
    case Application::Ising2D: return "ising";
    case Application::FermiHubbard: return "hubbard";
    case Application::H2: return "h2";
    case Application::RandomVQE: return "random";
  }
  return "unknown";
}

Application application_from_string(std::string_view name) {
  if (name == "heisenberg" || name == "HeisenbergXYZ") return Application::HeisenbergXYZ;
  if (name == "ising" || name == "Ising2D") return Application::Ising2D;
  if (name == "hubbard" || name == "FermiHubbard") return Application::FermiHubbard;
  if (name == "h2" || name == "H2") return Application::H2;
  if (name == "random" || name == "RandomVQE") return Application::RandomVQE;
  throw UsageError("unknown application '" + std::string(name) +
                   "' (expected heisenberg, ising, hubbard, h2, random)");
}

std::optional<double> InstanceMeta::param(std::string_view key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::vector<std::string> param_names(Application app) {
  switch (app) {
    case Application::HeisenbergXYZ: return {"J1", "J2", "J3"};
    case Application::Ising2D: return {"j", "mu"};
    case Application::FermiHubbard: return {"t", "U"};
    case Application::H2: return {"bond_length_angstrom"};
    case Application::RandomVQE: return {};
  }
  return {};
}

PauliSum heisenberg_xyz(std::size_t n, double j1, double j2, double j3) {
  if (n < 2) throw DomainError("heisenberg_xyz needs n >= 2");
  PauliSum h(n);
  const std::pair<Pauli, double> couplings[] = {{Pauli::X, j1}, {Pauli::Y, j2}, {Pauli::Z, j3}};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    for (const auto& [p, coupling] : couplings) {
      auto s = PauliString::identity(n);
      s[i] = p;
      s[next] = p;
      h.add(coupling, std::move(s));
    }
  }
  return h.simplified();
}

std::vector<std::pair<std::size_t, std::size_t>> grid_bonds(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t site = r * cols + c;
      if (c + 1 < cols) bonds.emplace_back(site, site + 1);
      if (r + 1 < rows) bonds.emplace_back(site, site + cols);
    }
  }
  return bonds;
}

PauliSum ising_2d(std::size_t rows, std::size_t cols, double j, double mu) {
  if (rows == 0 || cols == 0) throw ShapeError("ising_2d: lattice sides must be >= 1");
  const std::size_t n = rows * cols;
  PauliSum h(n);
  for (const auto& [a, b] : grid_bonds(rows, cols)) {
    auto s = PauliString::identity(n);
    s[a] = Pauli::Z;
    s[b] = Pauli::Z;
    h.add(-j, std::move(s));
  }
  for (std::size_t a = 0; a < n; ++a) h.add(-mu, PauliString::single(n, a, Pauli::Z));
  return h.simplified();
}

PauliSum ising_2d(std::size_t n_qubits, std::size_t rows, std::size_t cols, double j, double mu) {
  if (rows * cols != n_qubits) {
    throw ShapeError("ising_2d: " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " lattice does not have " + std::to_string(n_qubits) + " sites");
  }
  return ising_2d(rows, cols, j, mu);
}

std::vector<FermionicTerm> fermi_hubbard_terms(std::size_t n, double t, double u) {
  if (n < 2) throw DomainError("fermi_hubbard needs n >= 2");
  std::vector<FermionicTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    terms.push_back({{{i, true}, {j, false}}, {-t, 0.0}});
    terms.push_back({{{j, true}, {i, false}}, {-t, 0.0}});
    terms.push_back({{{i, true}, {i, false}, {j, true}, {j, false}}, {u, 0.0}});
  }
  return terms;
}

PauliSum fermi_hubbard(std::size_t n, double t, double u) {
  return jordan_wigner(fermi_hubbard_terms(n, t, u), n);
}

PauliSum random_hamiltonian(std::size_t n, std::size_t n_terms, std::pair<double, double> coeff_range,
                            std::uint64_t seed) {
  if (n == 0 || n > 31) throw DomainError("random_hamiltonian: n must be in [1, 31]");
  if (n_terms == 0) throw DomainError("random_hamiltonian: n_terms must be >= 1");
  const std::uint64_t available = (std::uint64_t{1} << (2 * n)) - 1;
  if (n_terms > available) {
    throw CapacityError("random_hamiltonian: " + std::to_string(n_terms) + " terms requested, only " +
                        std::to_string(available) + " non-identity strings exist");
  }
  Rng rng(seed);
  // Floyd's sampling over codes 1..available (code 0 is the identity).
  std::set<std::uint64_t> codes;
  for (std::uint64_t j = available - n_terms; j < available; ++j) {
    const std::uint64_t pick = rng.below(j + 1);
    codes.insert(codes.contains(pick + 1) ? j + 1 : pick + 1);
  }
  PauliSum h(n);
  for (std::uint64_t code : codes) {
    std::vector<Pauli> ops(n);
    for (std::size_t k = 0; k < n; ++k) {
      ops[n - 1 - k] = static_cast<Pauli>((code >> (2 * k)) & 3U);
    }
    h.add(rng.uniform(coeff_range.first, coeff_range.second), PauliString(std::move(ops)));
  }
  return h.simplified();
}

// H2 fixture

std::vector<H2Instance> parse_h2(std::string_view text) {
  std::vector<H2Instance> out;
  std::vector<PauliTerm> block;
  std::size_t block_line = 0;
  std::optional<double> bond;

  auto flush = [&] {
    if (!bond) return;
    if (block.empty()) throw ParseError(block_line, "bond_length block has no terms");
    const std::size_t n = block.front().string.size();
    InstanceMeta meta{Application::H2, out.size(), n, {{"bond_length_angstrom", *bond}}};
    out.push_back({std::move(meta), PauliSum(n, std::move(block))});
    block.clear();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  static constexpr std::string_view kHeader = "# bond_length=";
  while (std::getline(in, raw)) {
    ++line_no;
    const auto b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = raw.find_last_not_of(" \t\r");
    const std::string line = raw.substr(b, e - b + 1);
    if (line.starts_with(kHeader)) {
      flush();
      const std::string value = line.substr(kHeader.size());
      char* end = nullptr;
      const double v = std::strtod(value.c_str(), &end);
      if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v) || v <= 0.0) {
        throw ParseError(line_no, "malformed bond_length header: " + line);
      }
      bond = v;
      block_line = line_no;
      continue;
    }
    if (line.front() == '#') continue;
    if (!bond) throw ParseError(line_no, "term before any '# bond_length=' header");
    auto term = parse_term(line, line_no);
    if (!block.empty() && term.string.size() != block.front().string.size()) {
      throw ParseError(line_no, "string length differs within block");
    }
    block.push_back(std::move(term));
  }
  flush();
  return out;
}

std::vector<H2Instance> load_h2(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open H2 file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_h2(buf.str());
}

std::string format_h2(const std::vector<H2Instance>& instances) {
  std::string out;
  char buf[64];
  for (const auto& inst : instances) {
    std::snprintf(buf, sizeof buf, "# bond_length=%.17g\n",
                  inst.meta.param("bond_length_angstrom").value_or(0.0));
    out += buf;
    out += to_text(inst.hamiltonian);
  }
  return out;
}

std::filesystem::path default_h2_path() {
  return std::filesystem::path(QRACLE_DATA_DIR) / "h2_sto3g.txt";
}

// Coupling grids

std::size_t GridAxis::points() const {
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

double GridAxis::value(std::size_t k) const {
  // Snap to 1e-12 so 0.1-spaced points print and compare as written.
  return std::round((min + static_cast<double>(k) * step) * 1e12) / 1e12;
}

std::size_t CouplingGrid::cardinality() const {
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.points();
  return total;
}

std::vector<std::vector<double>> sample_grid(const CouplingGrid& g) {
  for (const auto& a : g.axes) {
    if (!(a.step > 0.0)) throw DomainError("grid axis '" + a.name + "' needs step > 0");
    if (a.min > a.max) throw DomainError("grid axis '" + a.name + "' has min > max");
  }
  const std::size_t total = g.cardinality();
  if (g.count > total) {
    throw CapacityError("grid has " + std::to_string(total) + " points, " +
                        std::to_string(g.count) + " requested");
  }
  std::vector<std::size_t> order(total);
  for (std::size_t k = 0; k < total; ++k) order[k] = k;
  Rng rng(g.seed);
  rng.shuffle(order);

  std::vector<std::vector<double>> out;
  out.reserve(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    std::size_t flat = order[i];
    std::vector<double> tuple(g.axes.size());
    for (std::size_t a = g.axes.size(); a-- > 0;) {
      const std::size_t pts = g.axes[a].points();
      tuple[a] = g.axes[a].value(flat % pts);
      flat /= pts;
    }
    out.push_back(std::move(tuple));
  }
  return out;
}

CouplingGrid default_grid(Application app, std::size_t count, std::uint64_t seed) {
  CouplingGrid g;
  g.count = count;
  g.seed = seed;
  switch (app) {
    case Application::HeisenbergXYZ:
      g.axes = {{"J1", -3.0, 3.0, 0.1}, {"J2", -3.0, 3.0, 0.1}, {"J3", -3.0, 3.0, 0.1}};
      break;
    case Application::Ising2D:
      g.axes = {{"j", 0.0, 5.0, 0.1}, {"mu", 0.0, 5.0, 0.1}};
      break;
    case Application::FermiHubbard:
      g.axes = {{"t", 0.0, 5.0, 0.1}, {"U", 0.0, 5.0, 0.1}};
      break;
    case Application::H2:
    case Application::RandomVQE:
      throw DomainError("application '" + std::string(to_string(app)) + "' is not grid-sampled");
  }
  return g;
}

}  // namespace qracle
