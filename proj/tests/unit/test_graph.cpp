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
#include "qracle/graph.hpp"
#include "qracle/rng.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace qracle;

namespace {

InstanceMeta random_meta(std::size_t n) { return {Application::RandomVQE, 0, n, {}}; }

PauliSum single(std::string_view letters, double c = 1.0) {
  PauliSum h(letters.size());
  h.add(c, letters);
  return h;
}

}  // namespace

TEST(FeatureDim, PerApplication) {
  EXPECT_EQ(feature_dim(Application::HeisenbergXYZ), 5u);
  EXPECT_EQ(feature_dim(Application::Ising2D), 4u);
  EXPECT_EQ(feature_dim(Application::FermiHubbard), 4u);
  EXPECT_EQ(feature_dim(Application::H2), 3u);
  EXPECT_EQ(feature_dim(Application::RandomVQE), 2u);
}

TEST(AdjacencyWeight, Magnitude) {
  EXPECT_EQ(adjacency_weight({1, 0}), 1.0);
  EXPECT_EQ(adjacency_weight({0, -1}), 1.0);
  EXPECT_EQ(adjacency_weight({3, 4}), 5.0);
}

TEST(HamiltonianToGraph, IdentityHasOnlySelfLoops) {
  const auto g = hamiltonian_to_graph(single("II"), random_meta(2));
  EXPECT_EQ(g.n_nodes, 4u);
  ASSERT_EQ(g.edges.size(), 4u);
  for (std::size_t e = 0; e < 4; ++e) {
    EXPECT_EQ(g.edges[e].first, g.edges[e].second);
    EXPECT_EQ(g.edge_weights[e], std::make_pair(1.0, 0.0));
  }
}

TEST(HamiltonianToGraph, SingleZ) {
  const auto g = hamiltonian_to_graph(single("Z"), random_meta(1));
  EXPECT_EQ(g.n_nodes, 2u);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], std::make_pair(std::size_t{0}, std::size_t{0}));
  EXPECT_EQ(g.edge_weights[0], std::make_pair(1.0, 0.0));
  EXPECT_EQ(g.edges[1], std::make_pair(std::size_t{1}, std::size_t{1}));
  EXPECT_EQ(g.edge_weights[1], std::make_pair(-1.0, 0.0));
}

TEST(HamiltonianToGraph, SingleX) {
  const auto g = hamiltonian_to_graph(single("X"), random_meta(1));
  ASSERT_EQ(g.edges.size(), 2u);
  const std::set<std::pair<std::size_t, std::size_t>> edges(g.edges.begin(), g.edges.end());
  EXPECT_EQ(edges, (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 0}}));
  for (const auto& w : g.edge_weights) EXPECT_EQ(w, std::make_pair(1.0, 0.0));
}

TEST(HamiltonianToGraph, FeatureRows) {
  InstanceMeta meta{Application::HeisenbergXYZ, 3, 2, {{"J1", 0.5}, {"J2", -1.0}, {"J3", 2.0}}};
  const auto g = hamiltonian_to_graph(heisenberg_xyz(2, 0.5, -1.0, 2.0), meta);
  ASSERT_EQ(g.node_features.rows(), 4);
  ASSERT_EQ(g.node_features.cols(), 5);
  for (Eigen::Index p = 0; p < 4; ++p) {
    EXPECT_DOUBLE_EQ(g.node_features(p, 0), (p + 1) / 4.0);
    EXPECT_EQ(g.node_features.row(p).tail(4), g.node_features.row(0).tail(4));
  }
  EXPECT_EQ(g.node_features(0, 1), 2.0);
  EXPECT_EQ(g.node_features(0, 4), 2.0);
}

TEST(HamiltonianToGraph, Errors) {
  PauliSum complex_h(1);
  complex_h.add(Complex(0, 1), "X");
  EXPECT_THROW(hamiltonian_to_graph(complex_h, random_meta(1)), ValidityError);
  EXPECT_THROW(hamiltonian_to_graph(single("XX"), random_meta(1)), ShapeError);
}

TEST(HamiltonianToGraph, StructuralInvariants) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_hamiltonian(3, 1 + rng.below(20), {-1, 1}, rng.below(1000));
    const auto m = expand_to_matrix(h);
    const auto g = hamiltonian_to_graph(h, random_meta(3));
    EXPECT_EQ(g.edges.size(), m.entries.size());
    EXPECT_LE(g.n_nodes, 8u);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto [p, q] = g.edges[e];
      EXPECT_LT(p, g.n_nodes);
      EXPECT_LT(q, g.n_nodes);
      EXPECT_TRUE(seen.insert(g.edges[e]).second);
      // Reverse edge carries the conjugate weight.
      const auto it = std::find(g.edges.begin(), g.edges.end(), std::make_pair(q, p));
      ASSERT_NE(it, g.edges.end());
      const auto& w = g.edge_weights[static_cast<std::size_t>(it - g.edges.begin())];
      EXPECT_EQ(w.first, g.edge_weights[e].first);
      EXPECT_EQ(w.second, -g.edge_weights[e].second);
    }
    const auto back = graph_to_matrix(g);
    EXPECT_EQ(back.entries, m.entries);
  }
}

TEST(GraphJson, RoundTripIsExact) {
  InstanceMeta meta{Application::HeisenbergXYZ, 7, 3, {{"J1", 0.1}, {"J2", -2.9}, {"J3", 1.0 / 3.0}}};
  const auto g = hamiltonian_to_graph(heisenberg_xyz(3, 0.1, -2.9, 1.0 / 3.0), meta);
  const std::string line = graph_to_json(g);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(line.rfind("{\"meta\":", 0), 0u);
  const auto back = graph_from_json(std::string_view(line));
  EXPECT_EQ(back, g);
  EXPECT_EQ(graph_to_json(back), line);
}

TEST(GraphJson, MalformedInput) {
  EXPECT_THROW(graph_from_json(std::string_view("{")), FormatError);
  EXPECT_THROW(graph_from_json(std::string_view("{\"meta\":{}}")), FormatError);
}

TEST(PermuteNodes, RelabelsFeaturesAndEdges) {
  const auto g = hamiltonian_to_graph(single("XZ"), random_meta(2));
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  const auto p = permute_nodes(g, perm);
  for (std::size_t v = 0; v < 4; ++v) {
    EXPECT_EQ(p.node_features.row(static_cast<Eigen::Index>(perm[v])),
              g.node_features.row(static_cast<Eigen::Index>(v)));
  }
  const auto mg = graph_to_matrix(g), mp = graph_to_matrix(p);
  for (const auto& [key, v] : mg.entries) EXPECT_EQ(mp.at(perm[key.first], perm[key.second]), v);
}
