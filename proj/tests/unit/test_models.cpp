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

#include "qracle/errors.hpp"
#include "qracle/models.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace qracle;

namespace {

// Sorted (coefficient, lexicographically smallest rotation) pairs.
std::vector<std::pair<double, std::string>> rotation_classes(const PauliSum& h) {
  std::vector<std::pair<double, std::string>> out;
  for (const auto& t : h.terms()) {
    std::string s = t.string.str(), best = s;
    for (std::size_t k = 0; k < s.size(); ++k) {
      std::rotate(s.begin(), s.begin() + 1, s.end());
      best = std::min(best, s);
    }
    out.emplace_back(t.coeff.real(), best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PauliSum relabel_cyclic(const PauliSum& h) {
  PauliSum out(h.n_qubits());
  for (const auto& t : h.terms()) {
    std::string s = t.string.str();
    std::rotate(s.rbegin(), s.rbegin() + 1, s.rend());
    out.add(t.coeff, s);
  }
  return out.simplified();
}

}  // namespace

TEST(Application, Names) {
  EXPECT_EQ(application_from_string("heisenberg"), Application::HeisenbergXYZ);
  EXPECT_EQ(application_from_string("h2"), Application::H2);
  EXPECT_EQ(to_string(Application::RandomVQE), "random");
  EXPECT_THROW(application_from_string("lithium"), UsageError);
}

TEST(Heisenberg, ZeroCouplingsGiveEmptySum) { EXPECT_TRUE(heisenberg_xyz(4, 0, 0, 0).empty()); }

TEST(Heisenberg, UniformRing) {
  const auto h = heisenberg_xyz(4, 1, 1, 1);
  EXPECT_EQ(h.size(), 12u);
  for (const auto& t : h.terms()) EXPECT_EQ(t.coeff, Complex(1, 0));
  EXPECT_EQ(h.coefficient(PauliString::parse("XIIX")), Complex(1, 0));
  EXPECT_NEAR(min_eigenvalue(expand_to_matrix(h)), -8.0, 1e-9);
}

TEST(Heisenberg, TooFewSites) { EXPECT_THROW(heisenberg_xyz(1, 1, 1, 1), DomainError); }

TEST(Heisenberg, CyclicRelabelingInvariance) {
  const auto h = heisenberg_xyz(5, 0.3, -1.2, 2.5);
  EXPECT_EQ(relabel_cyclic(h), h);
  EXPECT_EQ(rotation_classes(relabel_cyclic(h)), rotation_classes(h));
}

TEST(Ising, SingleSite) {
  const auto h = ising_2d(1, 1, 1.0, 2.0);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h.terms()[0].string.str(), "Z");
  EXPECT_EQ(h.terms()[0].coeff, Complex(-2, 0));
}

TEST(Ising, CouplingOnlyMatchesEnumeratedBonds) {
  // Enumerate grid adjacencies directly from coordinates.
  std::set<std::string> expect;
  const std::size_t rows = 2, cols = 4;
  for (std::size_t a = 0; a < rows * cols; ++a) {
    for (std::size_t b = a + 1; b < rows * cols; ++b) {
      const auto ra = a / cols, ca = a % cols, rb = b / cols, cb = b % cols;
      const auto dist = (ra > rb ? ra - rb : rb - ra) + (ca > cb ? ca - cb : cb - ca);
      if (dist != 1) continue;
      std::string s(rows * cols, 'I');
      s[a] = s[b] = 'Z';
      expect.insert(s);
    }
  }
  const auto h = ising_2d(8, 2, 4, 1.0, 0.0);
  EXPECT_EQ(h.size(), 10u);
  EXPECT_EQ(expect.size(), 10u);
  for (const auto& t : h.terms()) {
    EXPECT_EQ(t.coeff, Complex(-1, 0));
    EXPECT_EQ(t.string.weight(), 2u);
    EXPECT_TRUE(expect.count(t.string.str())) << t.string.str();
  }
}

TEST(Ising, FieldOnly) {
  const auto h = ising_2d(2, 4, 0.0, 1.0);
  EXPECT_EQ(h.size(), 8u);
  for (const auto& t : h.terms()) {
    EXPECT_EQ(t.coeff, Complex(-1, 0));
    EXPECT_EQ(t.string.weight(), 1u);
  }
}

TEST(Ising, ShapeMismatch) { EXPECT_THROW(ising_2d(8, 3, 3, 1.0, 1.0), ShapeError); }

TEST(Hubbard, ZeroParametersGiveEmptySum) { EXPECT_TRUE(fermi_hubbard(4, 0, 0).empty()); }

TEST(Hubbard, TwoSiteRingCountsTheBondTwice) {
  const auto h = fermi_hubbard(2, 1.0, 0.0);
  const auto expect = oracle::hubbard(2, 1.0, 0.0);
  EXPECT_EQ(oracle::to_poly(h), expect);
  // The single bond is visited as (0,1) and (1,0), doubling the open-chain -0.5.
  EXPECT_EQ(h.coefficient(PauliString::parse("XX")), Complex(-1.0, 0));
  EXPECT_EQ(h.coefficient(PauliString::parse("YY")), Complex(-1.0, 0));
}

TEST(Hubbard, EightSitesMatchSymbolicOracle) {
  const auto h = fermi_hubbard(8, 1.0, 1.0);
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_TRUE(expand_to_matrix(h).is_hermitian());
  const auto expect = oracle::hubbard(8, 1.0, 1.0);
  EXPECT_EQ(h.size(), expect.size());
  EXPECT_EQ(oracle::to_poly(h), expect);
}

TEST(Hubbard, CyclicRelabelingInvariance) {
  const auto h = fermi_hubbard(4, 0.75, 2.5);
  EXPECT_EQ(rotation_classes(relabel_cyclic(h)), rotation_classes(h));
}

TEST(Hubbard, TooFewSites) { EXPECT_THROW(fermi_hubbard(1, 1, 1), DomainError); }

TEST(RandomHamiltonian, Deterministic) {
  EXPECT_EQ(random_hamiltonian(4, 10, {-1, 1}, 42), random_hamiltonian(4, 10, {-1, 1}, 42));
  EXPECT_NE(random_hamiltonian(4, 10, {-1, 1}, 42), random_hamiltonian(4, 10, {-1, 1}, 43));
}

TEST(RandomHamiltonian, OneQubitUsesEveryString) {
  const auto h = random_hamiltonian(1, 3, {-1, 1}, 7);
  std::set<std::string> seen;
  for (const auto& t : h.terms()) seen.insert(t.string.str());
  EXPECT_EQ(seen, (std::set<std::string>{"X", "Y", "Z"}));
}

TEST(RandomHamiltonian, HermitianRealAndInRange) {
  const auto h = random_hamiltonian(4, 10, {-1, 1}, 3);
  EXPECT_EQ(h.size(), 10u);
  EXPECT_TRUE(expand_to_matrix(h).is_hermitian());
  for (const auto& t : h.terms()) {
    EXPECT_FALSE(t.string.is_identity());
    EXPECT_EQ(t.coeff.imag(), 0.0);
    EXPECT_GE(t.coeff.real(), -1.0);
    EXPECT_LE(t.coeff.real(), 1.0);
  }
}

TEST(RandomHamiltonian, CapacityAndDomain) {
  EXPECT_THROW(random_hamiltonian(1, 4, {-1, 1}, 1), CapacityError);
  EXPECT_THROW(random_hamiltonian(2, 0, {-1, 1}, 1), DomainError);
}

TEST(H2, EmptyFile) { EXPECT_TRUE(parse_h2("").empty()); }

TEST(H2, SingleIdentityBlock) {
  const auto v = parse_h2("# bond_length=0.74\n1.0+0.0i IIII\n");
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].meta.param("bond_length_angstrom"), 0.74);
  EXPECT_EQ(v[0].meta.n_qubits, 4u);
  EXPECT_DOUBLE_EQ(min_eigenvalue(expand_to_matrix(v[0].hamiltonian)), 1.0);
}

TEST(H2, MalformedInputsCarryLineNumbers) {
  try {
    parse_h2("1.0+0.0i IIII\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_h2("# bond_length=0.5\n1.0+0.0i IIII\n# bond_length=abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_h2("# bond_length=0.5\n1.0+0.0i IIII\n0.5+0.0i IQII\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(H2, ShippedFixture) {
  const auto v = load_h2(default_h2_path());
  ASSERT_EQ(v.size(), 150u);
  EXPECT_NEAR(*v.front().meta.param("bond_length_angstrom"), 0.5, 1e-12);
  EXPECT_NEAR(*v.back().meta.param("bond_length_angstrom"), 4.97, 1e-12);
  bool found = false;
  for (const auto& inst : v) {
    EXPECT_EQ(inst.hamiltonian.n_qubits(), 4u);
    EXPECT_TRUE(inst.hamiltonian.is_hermitian());
    if (std::abs(*inst.meta.param("bond_length_angstrom") - 0.74) < 1e-9) {
      found = true;
      EXPECT_NEAR(min_eigenvalue(expand_to_matrix(inst.hamiltonian)), -1.136, 5e-3);
    }
  }
  EXPECT_TRUE(found);
}

TEST(H2, FormatRoundTrip) {
  const auto v = load_h2(default_h2_path());
  const auto back = parse_h2(format_h2(v));
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_EQ(back[k].meta, v[k].meta);
    EXPECT_EQ(back[k].hamiltonian, v[k].hamiltonian);
  }
}

TEST(Grid, ExhaustiveDraw) {
  CouplingGrid g{{{"a", 0.0, 0.2, 0.1}}, 3, 1};
  auto s = sample_grid(g);
  std::sort(s.begin(), s.end());
  EXPECT_EQ(s, (std::vector<std::vector<double>>{{0.0}, {0.1}, {0.2}}));
}

TEST(Grid, Cardinality) {
  CouplingGrid g{{{"a", -3, 3, 0.1}, {"b", -3, 3, 0.1}}, 1, 0};
  EXPECT_EQ(g.cardinality(), 3721u);
}

TEST(Grid, DeterministicAndDistinct) {
  const auto g = default_grid(Application::HeisenbergXYZ, 500, 99);
  const auto a = sample_grid(g);
  EXPECT_EQ(a, sample_grid(g));
  EXPECT_EQ(std::set<std::vector<double>>(a.begin(), a.end()).size(), 500u);
  for (const auto& t : a) {
    for (double v : t) {
      EXPECT_GE(v, -3.0);
      EXPECT_LE(v, 3.0);
    }
  }
}

TEST(Grid, CountAboveCardinality) {
  CouplingGrid g{{{"a", 0.0, 0.2, 0.1}}, 4, 1};
  EXPECT_THROW(sample_grid(g), CapacityError);
}
