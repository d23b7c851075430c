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

// Hamiltonian-to-graph encoding: one node per computational basis state and
// a directed edge p -> q for every nonzero matrix element H_pq.

#include "qracle/json_io.hpp"
#include "qracle/models.hpp"
#include "qracle/pauli.hpp"

#include <Eigen/Dense>

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace qracle {

struct HamiltonianGraph {
  std::size_t n_nodes = 0;
  /// n_nodes x feature_dim(meta.application).
  Eigen::MatrixXd node_features;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  /// (re, im) of H_pq, aligned with `edges`.
  std::vector<std::pair<double, double>> edge_weights;
  InstanceMeta meta;

  std::size_t feature_dim() const noexcept {
    return static_cast<std::size_t>(node_features.cols());
  }
  bool operator==(const HamiltonianGraph& other) const;
};

/// Node feature width: index, n_q, then the application's parameters.
std::size_t feature_dim(Application app);

/// |w| of a complex edge weight given as (re, im).
double adjacency_weight(std::pair<double, double> w);

/// Builds the graph from a simplified Hermitian sum. Node p (0-based) gets
/// features [(p + 1) / 2^n, n_q, params...]. ValidityError for non-Hermitian
/// input, ShapeError when meta disagrees with the Hamiltonian.
HamiltonianGraph hamiltonian_to_graph(const PauliSum& h, const InstanceMeta& meta);

/// Places each edge weight back at (src, dst).
SparseHermitian graph_to_matrix(const HamiltonianGraph& g);

/// Relabels nodes: node v of the input becomes node perm[v].
HamiltonianGraph permute_nodes(const HamiltonianGraph& g, const std::vector<std::size_t>& perm);

/// JSON object with fields in the order meta, n_nodes, features, edges.
void write_graph_fields(JsonWriter& w, const HamiltonianGraph& g);
std::string graph_to_json(const HamiltonianGraph& g);

void write_meta(JsonWriter& w, const InstanceMeta& meta);
InstanceMeta meta_from_json(const nlohmann::ordered_json& j);
/// Reads the graph fields of a parsed object; FormatError when any is
/// missing or malformed.
HamiltonianGraph graph_from_json(const nlohmann::ordered_json& j);
HamiltonianGraph graph_from_json(std::string_view line);

}  // namespace qracle
