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

#include "qracle/graph.hpp"

#include "qracle/errors.hpp"

#include <cmath>

namespace qracle {

bool HamiltonianGraph::operator==(const HamiltonianGraph& other) const {
  return n_nodes == other.n_nodes && node_features.rows() == other.node_features.rows() &&
         node_features.cols() == other.node_features.cols() &&
         node_features == other.node_features && edges == other.edges &&
         edge_weights == other.edge_weights && meta == other.meta;
}

std::size_t feature_dim(Application app) { return 2 + param_names(app).size(); }

double adjacency_weight(std::pair<double, double> w) { return std::hypot(w.first, w.second); }

HamiltonianGraph hamiltonian_to_graph(const PauliSum& h, const InstanceMeta& meta) {
  if (!h.is_hermitian()) throw ValidityError("hamiltonian_to_graph: complex Pauli coefficients");
  if (meta.n_qubits != h.n_qubits()) {
    throw ShapeError("hamiltonian_to_graph: meta has " + std::to_string(meta.n_qubits) +
                     " qubits, Hamiltonian has " + std::to_string(h.n_qubits()));
  }
  const auto names = param_names(meta.application);
  if (meta.params.size() != names.size()) {
    throw ShapeError("hamiltonian_to_graph: expected " + std::to_string(names.size()) +
                     " application parameters, got " + std::to_string(meta.params.size()));
  }
  const SparseHermitian m = expand_to_matrix(h);
  if (!m.is_hermitian()) throw ValidityError("hamiltonian_to_graph: matrix is not Hermitian");

  HamiltonianGraph g;
  g.meta = meta;
  g.n_nodes = m.dim;
  const auto n = static_cast<Eigen::Index>(m.dim);
  g.node_features.resize(n, static_cast<Eigen::Index>(feature_dim(meta.application)));
  for (Eigen::Index p = 0; p < n; ++p) {
    g.node_features(p, 0) = static_cast<double>(p + 1) / static_cast<double>(m.dim);
    g.node_features(p, 1) = static_cast<double>(meta.n_qubits);
    for (std::size_t k = 0; k < meta.params.size(); ++k) {
      g.node_features(p, static_cast<Eigen::Index>(2 + k)) = meta.params[k].second;
    }
  }
  g.edges.reserve(m.entries.size());
  g.edge_weights.reserve(m.entries.size());
  for (const auto& [key, value] : m.entries) {
    g.edges.push_back(key);
    g.edge_weights.emplace_back(value.real(), value.imag());
  }
  return g;
}

SparseHermitian graph_to_matrix(const HamiltonianGraph& g) {
  SparseHermitian m;
  m.dim = g.n_nodes;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    m.entries[g.edges[e]] = Complex{g.edge_weights[e].first, g.edge_weights[e].second};
  }
  return m;
}

HamiltonianGraph permute_nodes(const HamiltonianGraph& g, const std::vector<std::size_t>& perm) {
  if (perm.size() != g.n_nodes) throw ShapeError("permute_nodes: permutation length mismatch");
  HamiltonianGraph out = g;
  for (std::size_t v = 0; v < g.n_nodes; ++v) {
    out.node_features.row(static_cast<Eigen::Index>(perm[v])) =
        g.node_features.row(static_cast<Eigen::Index>(v));
  }
  for (auto& [src, dst] : out.edges) {
    src = perm[src];
    dst = perm[dst];
  }
  return out;
}

void write_meta(JsonWriter& w, const InstanceMeta& meta) {
  w.begin_object();
  w.key("application").value(to_string(meta.application));
  w.key("index").value(static_cast<std::uint64_t>(meta.index));
  w.key("n_qubits").value(static_cast<std::uint64_t>(meta.n_qubits));
  w.key("params").begin_object();
  for (const auto& [k, v] : meta.params) w.key(k).value(v);
  w.end_object();
  w.end_object();
}

void write_graph_fields(JsonWriter& w, const HamiltonianGraph& g) {
  w.key("meta");
  write_meta(w, g.meta);
  w.key("n_nodes").value(static_cast<std::uint64_t>(g.n_nodes));
  w.key("features").begin_array();
  for (Eigen::Index r = 0; r < g.node_features.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.node_features.cols(); ++c) w.value(g.node_features(r, c));
  }
  w.end_array();
  w.key("edges").begin_array();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    w.begin_array()
        .value(static_cast<std::uint64_t>(g.edges[e].first))
        .value(static_cast<std::uint64_t>(g.edges[e].second))
        .value(g.edge_weights[e].first)
        .value(g.edge_weights[e].second)
        .end_array();
  }
  w.end_array();
}

std::string graph_to_json(const HamiltonianGraph& g) {
  JsonWriter w;
  w.begin_object();
  write_graph_fields(w, g);
  w.end_object();
  return w.take();
}

InstanceMeta meta_from_json(const nlohmann::ordered_json& j) {
  try {
    InstanceMeta meta;
    meta.application = application_from_string(j.at("application").get<std::string>());
    meta.index = j.at("index").get<std::size_t>();
    meta.n_qubits = j.at("n_qubits").get<std::size_t>();
    for (const auto& [k, v] : j.at("params").items()) meta.params.emplace_back(k, v.get<double>());
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed meta: ") + e.what());
  } catch (const UsageError& e) {
    throw FormatError(e.what());
  }
}

HamiltonianGraph graph_from_json(const nlohmann::ordered_json& j) {
  try {
    HamiltonianGraph g;
    g.meta = meta_from_json(j.at("meta"));
    g.n_nodes = j.at("n_nodes").get<std::size_t>();
    const auto& feats = j.at("features");
    const std::size_t dim = feature_dim(g.meta.application);
    if (feats.size() != g.n_nodes * dim) {
      throw FormatError("features length " + std::to_string(feats.size()) + " != n_nodes * " +
                        std::to_string(dim));
    }
    g.node_features.resize(static_cast<Eigen::Index>(g.n_nodes), static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < feats.size(); ++k) {
      g.node_features(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) =
          feats[k].get<double>();
    }
    for (const auto& e : j.at("edges")) {
      if (e.size() != 4) throw FormatError("edge entries must be [src, dst, re, im]");
      const auto src = e[0].get<std::size_t>();
      const auto dst = e[1].get<std::size_t>();
      if (src >= g.n_nodes || dst >= g.n_nodes) throw FormatError("edge endpoint out of range");
      g.edges.emplace_back(src, dst);
      g.edge_weights.emplace_back(e[2].get<double>(), e[3].get<double>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed graph: ") + e.what());
  }
}

HamiltonianGraph graph_from_json(std::string_view line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return graph_from_json(j);
}

}  // namespace qracle
