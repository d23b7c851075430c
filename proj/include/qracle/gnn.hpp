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

// Graph network mapping Hamiltonian graphs to ansatz parameter vectors:
// two symmetric-normalized graph convolutions, three multi-head attention
// layers, a graph readout and a two-layer MLP head.

#include "qracle/graph.hpp"
#include "qracle/tensor.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qracle {

enum class Readout { Mean, Sum, Max };

std::string_view to_string(Readout r);
Readout readout_from_string(std::string_view name);

struct GnnConfig {
  Application application = Application::HeisenbergXYZ;
  std::size_t in_dim = 5;
  std::size_t gcn_hidden = 256;
  std::size_t gat_hidden = 512;
  std::size_t mlp_hidden = 1024;
  std::size_t out_dim = 8;
  std::size_t gat_heads = 4;
  double lr = 1e-3;
  double weight_decay = 0.0;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  Readout readout = Readout::Mean;
  std::uint64_t seed = 0;

  bool operator==(const GnnConfig&) const = default;
};

/// Table defaults for an application: in_dim from the node features,
/// out_dim from the ansatz parameter count.
GnnConfig gnn_config_for(Application app);

std::string gnn_config_to_json(const GnnConfig& cfg);
GnnConfig gnn_config_from_json(std::string_view json);

/// Per-graph message lists precomputed from a HamiltonianGraph.
struct PreparedGraph {
  std::size_t n_nodes = 0;
  ad::Matrix features;
  /// Graph convolution messages u -> v with weight A~_vu / sqrt(d~_v d~_u),
  /// where A~ = |H| + I.
  std::vector<ad::Index> conv_src, conv_dst;
  std::vector<double> conv_coeff;
  /// Attention neighborhoods: distinct off-diagonal edges plus one self
  /// loop per node.
  std::vector<ad::Index> att_src, att_dst;
};

PreparedGraph prepare_graph(const HamiltonianGraph& g);

/// Disjoint union of graphs for one forward pass.
struct GraphBatch {
  ad::Index n_nodes = 0;
  ad::Index n_graphs = 0;
  ad::Matrix features;
  std::vector<ad::Index> conv_src, conv_dst;
  ad::Matrix conv_coeff;  // column vector
  std::vector<ad::Index> att_src, att_dst;
  std::vector<ad::Index> node_graph;
};

GraphBatch make_batch(std::span<const PreparedGraph* const> graphs);
GraphBatch make_batch(const PreparedGraph& g);

struct GcnLayer {
  ad::Tensor weight;  // in x out
  ad::Tensor bias;    // 1 x out
};

struct GatHead {
  ad::Tensor weight;   // in x out
  ad::Tensor att_src;  // out x 1, applied to the sender W h_j
  ad::Tensor att_dst;  // out x 1, applied to the receiver W h_i
};

struct GatLayer {
  std::vector<GatHead> heads;
};

struct LinearLayer {
  ad::Tensor weight;
  ad::Tensor bias;
};

class GnnModel {
 public:
  /// Glorot-uniform weights and zero biases from cfg.seed.
  explicit GnnModel(const GnnConfig& cfg);

  const GnnConfig& config() const noexcept { return cfg_; }
  std::vector<ad::NamedTensor> named_parameters() const;
  std::vector<ad::Tensor> parameters() const;

  /// (n_graphs, out_dim) predictions.
  ad::Tensor forward(ad::Tape& tape, const GraphBatch& batch) const;

  std::array<GcnLayer, 2> gcn;
  std::array<GatLayer, 3> gat;
  std::array<LinearLayer, 2> mlp;

 private:
  GnnConfig cfg_;
};

/// ReLU((sum_u A~_vu h_u / sqrt(d~_v d~_u)) W + b).
ad::Tensor gcn_forward(ad::Tape& tape, const ad::Tensor& x, const GraphBatch& batch,
                       const GcnLayer& layer);

/// ReLU((1/K) sum_k sum_j e^k_ij W^k h_j) with e^k the neighborhood softmax
/// of LeakyReLU_0.2(a_dst . W^k h_i + a_src . W^k h_j).
ad::Tensor gat_forward(ad::Tape& tape, const ad::Tensor& x, const GraphBatch& batch,
                       const GatLayer& layer);

/// Attention coefficients of one head, aligned with batch.att_src/att_dst.
ad::Matrix gat_attention(const ad::Matrix& x, const GraphBatch& batch, const GatHead& head);

/// Forward pass on a single graph without recording.
std::vector<double> model_forward(const GnnModel& m, const HamiltonianGraph& g);

struct LabeledGraph {
  const HamiltonianGraph* graph;
  std::span<const double> label;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_mse = 0.0;
  std::optional<double> val_mse;
};

struct TrainReport {
  GnnConfig config;
  double initial_train_mse = 0.0;
  std::optional<double> initial_val_mse;
  std::vector<EpochLog> epochs;
  /// 0 means the initial weights were kept.
  std::size_t best_epoch = 0;
  double best_score = 0.0;

  std::string to_json() const;
};

/// Mean per-graph MSE of the model over a labeled set.
double evaluate_mse(const GnnModel& m, std::span<const LabeledGraph> data);

/// Adam on mean MSE over mini-batches; the weights of the epoch with the
/// best validation MSE (training MSE when `validation` is empty) are restored
/// at the end. DivergenceError on a non-finite loss.
TrainReport train(GnnModel& m, std::span<const LabeledGraph> training,
                  std::span<const LabeledGraph> validation, const GnnConfig& cfg);

/// Model output for a graph, checked against the application's ansatz.
std::vector<double> predict_init(const GnnModel& m, const HamiltonianGraph& g);

void save_model(const GnnModel& m, const std::filesystem::path& dir);
GnnModel load_model(const std::filesystem::path& dir);

}  // namespace qracle
