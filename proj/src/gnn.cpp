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

#include "qracle/gnn.hpp"

#include "qracle/errors.hpp"
#include "qracle/json_io.hpp"
#include "qracle/rng.hpp"
#include "qracle/sim.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace qracle {

using ad::Index;
using ad::Matrix;
using ad::Tape;
using ad::Tensor;

std::string_view to_string(Readout r) {
  switch (r) {
    case Readout::Mean: return "mean";
    case Readout::Sum: return "sum";
    case Readout::Max: return "max";
  }
  return "mean";
}

Readout readout_from_string(std::string_view name) {
  if (name == "mean") return Readout::Mean;
  if (name == "sum") return Readout::Sum;
  if (name == "max") return Readout::Max;
  throw UsageError("unknown readout '" + std::string(name) + "' (expected mean, sum, max)");
}

GnnConfig gnn_config_for(Application app) {
  GnnConfig cfg;
  cfg.application = app;
  cfg.in_dim = feature_dim(app);
  cfg.out_dim = ansatz_for(app).n_params();
  return cfg;
}

std::string gnn_config_to_json(const GnnConfig& cfg) {
  JsonWriter w;
  w.begin_object();
  w.key("application").value(to_string(cfg.application));
  w.key("in_dim").value(static_cast<std::uint64_t>(cfg.in_dim));
  w.key("gcn_hidden").value(static_cast<std::uint64_t>(cfg.gcn_hidden));
  w.key("gat_hidden").value(static_cast<std::uint64_t>(cfg.gat_hidden));
  w.key("mlp_hidden").value(static_cast<std::uint64_t>(cfg.mlp_hidden));
  w.key("out_dim").value(static_cast<std::uint64_t>(cfg.out_dim));
  w.key("gat_heads").value(static_cast<std::uint64_t>(cfg.gat_heads));
  w.key("lr").value(cfg.lr);
  w.key("weight_decay").value(cfg.weight_decay);
  w.key("epochs").value(static_cast<std::uint64_t>(cfg.epochs));
  w.key("batch_size").value(static_cast<std::uint64_t>(cfg.batch_size));
  w.key("readout").value(to_string(cfg.readout));
  w.key("seed").value(cfg.seed);
  w.end_object();
  return w.take();
}

GnnConfig gnn_config_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    GnnConfig cfg;
    cfg.application = application_from_string(j.at("application").get<std::string>());
    cfg.in_dim = j.at("in_dim").get<std::size_t>();
    cfg.gcn_hidden = j.at("gcn_hidden").get<std::size_t>();
    cfg.gat_hidden = j.at("gat_hidden").get<std::size_t>();
    cfg.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
    cfg.out_dim = j.at("out_dim").get<std::size_t>();
    cfg.gat_heads = j.at("gat_heads").get<std::size_t>();
    cfg.lr = j.at("lr").get<double>();
    cfg.weight_decay = j.at("weight_decay").get<double>();
    cfg.epochs = j.at("epochs").get<std::size_t>();
    cfg.batch_size = j.at("batch_size").get<std::size_t>();
    cfg.readout = readout_from_string(j.at("readout").get<std::string>());
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model config: ") + e.what());
  }
}

// Graph preparation

PreparedGraph prepare_graph(const HamiltonianGraph& g) {
  PreparedGraph p;
  p.n_nodes = g.n_nodes;
  p.features = g.node_features;

  // A~ = |H| + I as a row map: adjacency[v][u] weights the message u -> v.
  std::vector<std::map<Index, double>> adjacency(g.n_nodes);
  for (std::size_t v = 0; v < g.n_nodes; ++v) adjacency[v][static_cast<Index>(v)] = 1.0;
  std::set<std::pair<Index, Index>> att_edges;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto [src, dst] = g.edges[e];
    adjacency[dst][static_cast<Index>(src)] += adjacency_weight(g.edge_weights[e]);
    if (src != dst) att_edges.emplace(static_cast<Index>(dst), static_cast<Index>(src));
  }
  std::vector<double> degree(g.n_nodes, 0.0);
  for (std::size_t v = 0; v < g.n_nodes; ++v) {
    for (const auto& [u, w] : adjacency[v]) degree[v] += w;
  }
  for (std::size_t v = 0; v < g.n_nodes; ++v) {
    for (const auto& [u, w] : adjacency[v]) {
      p.conv_src.push_back(u);
      p.conv_dst.push_back(static_cast<Index>(v));
      p.conv_coeff.push_back(w / std::sqrt(degree[v] * degree[static_cast<std::size_t>(u)]));
    }
  }
  for (std::size_t v = 0; v < g.n_nodes; ++v) att_edges.emplace(static_cast<Index>(v), static_cast<Index>(v));
  for (const auto& [dst, src] : att_edges) {
    p.att_src.push_back(src);
    p.att_dst.push_back(dst);
  }
  return p;
}

GraphBatch make_batch(std::span<const PreparedGraph* const> graphs) {
  GraphBatch b;
  b.n_graphs = static_cast<Index>(graphs.size());
  std::size_t n_conv = 0;
  Index cols = 0;
  for (const auto* g : graphs) {
    b.n_nodes += static_cast<Index>(g->n_nodes);
    n_conv += g->conv_coeff.size();
    cols = g->features.cols();
  }
  b.features.resize(b.n_nodes, cols);
  b.conv_coeff.resize(static_cast<Index>(n_conv), 1);
  Index offset = 0;
  Index conv_row = 0;
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    const auto& g = *graphs[k];
    if (g.features.cols() != cols) throw ShapeError("make_batch: feature widths differ");
    b.features.middleRows(offset, static_cast<Index>(g.n_nodes)) = g.features;
    for (std::size_t e = 0; e < g.conv_coeff.size(); ++e) {
      b.conv_src.push_back(g.conv_src[e] + offset);
      b.conv_dst.push_back(g.conv_dst[e] + offset);
      b.conv_coeff(conv_row++, 0) = g.conv_coeff[e];
    }
    for (std::size_t e = 0; e < g.att_src.size(); ++e) {
      b.att_src.push_back(g.att_src[e] + offset);
      b.att_dst.push_back(g.att_dst[e] + offset);
    }
    b.node_graph.insert(b.node_graph.end(), g.n_nodes, static_cast<Index>(k));
    offset += static_cast<Index>(g.n_nodes);
  }
  return b;
}

GraphBatch make_batch(const PreparedGraph& g) {
  const PreparedGraph* one[] = {&g};
  return make_batch(one);
}

// Layers

Tensor gcn_forward(Tape& tape, const Tensor& x, const GraphBatch& batch, const GcnLayer& layer) {
  if (x.rows() != batch.n_nodes) {
    throw ShapeError("gcn_forward: " + std::to_string(x.rows()) + " feature rows for " +
                     std::to_string(batch.n_nodes) + " nodes");
  }
  const Tensor coeff = Tensor::constant(batch.conv_coeff);
  const Tensor messages = ad::scale_rows(tape, ad::gather_rows(tape, x, batch.conv_src), coeff);
  const Tensor aggregated = ad::scatter_add_rows(tape, messages, batch.conv_dst, batch.n_nodes);
  return ad::relu(tape, ad::add_row(tape, ad::matmul(tape, aggregated, layer.weight), layer.bias));
}

namespace {

constexpr double kAttentionSlope = 0.2;

Tensor head_attention(Tape& tape, const Tensor& wh, const GraphBatch& batch, const GatHead& head) {
  const Tensor score_dst = ad::matmul(tape, wh, head.att_dst);
  const Tensor score_src = ad::matmul(tape, wh, head.att_src);
  const Tensor raw = ad::add(tape, ad::gather_rows(tape, score_dst, batch.att_dst),
                             ad::gather_rows(tape, score_src, batch.att_src));
  return ad::segment_softmax(tape, ad::leaky_relu(tape, raw, kAttentionSlope), batch.att_dst,
                             batch.n_nodes);
}

}  // namespace

Tensor gat_forward(Tape& tape, const Tensor& x, const GraphBatch& batch, const GatLayer& layer) {
  if (x.rows() != batch.n_nodes) {
    throw ShapeError("gat_forward: " + std::to_string(x.rows()) + " feature rows for " +
                     std::to_string(batch.n_nodes) + " nodes");
  }
  if (layer.heads.empty()) throw ShapeError("gat_forward: layer has no heads");
  Tensor total;
  for (const auto& head : layer.heads) {
    const Tensor wh = ad::matmul(tape, x, head.weight);
    const Tensor alpha = head_attention(tape, wh, batch, head);
    const Tensor messages = ad::scale_rows(tape, ad::gather_rows(tape, wh, batch.att_src), alpha);
    const Tensor aggregated = ad::scatter_add_rows(tape, messages, batch.att_dst, batch.n_nodes);
    total = total.defined() ? ad::add(tape, total, aggregated) : aggregated;
  }
  return ad::relu(tape, ad::scale(tape, total, 1.0 / static_cast<double>(layer.heads.size())));
}

Matrix gat_attention(const Matrix& x, const GraphBatch& batch, const GatHead& head) {
  Tape tape;
  tape.set_recording(false);
  const Tensor wh = ad::matmul(tape, Tensor::constant(x), head.weight);
  return head_attention(tape, wh, batch, head).value();
}

// Model

namespace {

Matrix glorot(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Matrix m(static_cast<Index>(fan_in), static_cast<Index>(fan_out));
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-a, a);
  return m;
}

}  // namespace

GnnModel::GnnModel(const GnnConfig& cfg) : cfg_(cfg) {
  if (cfg.in_dim == 0 || cfg.out_dim == 0 || cfg.gcn_hidden == 0 || cfg.gat_hidden == 0 ||
      cfg.mlp_hidden == 0 || cfg.gat_heads == 0) {
    throw DomainError("GnnModel: every layer width and the head count must be positive");
  }
  std::uint64_t stream = 0;
  auto init = [&](std::size_t in, std::size_t out) {
    Rng rng(derive_seed(cfg.seed, stream++));
    return Tensor::parameter(glorot(rng, in, out));
  };
  auto zeros = [](std::size_t out) { return Tensor::zeros(1, static_cast<Index>(out), true); };

  gcn[0] = {init(cfg.in_dim, cfg.gcn_hidden), zeros(cfg.gcn_hidden)};
  gcn[1] = {init(cfg.gcn_hidden, cfg.gcn_hidden), zeros(cfg.gcn_hidden)};
  std::size_t in = cfg.gcn_hidden;
  for (auto& layer : gat) {
    for (std::size_t k = 0; k < cfg.gat_heads; ++k) {
      GatHead h;
      h.weight = init(in, cfg.gat_hidden);
      h.att_src = init(cfg.gat_hidden, 1);
      h.att_dst = init(cfg.gat_hidden, 1);
      layer.heads.push_back(std::move(h));
    }
    in = cfg.gat_hidden;
  }
  mlp[0] = {init(cfg.gat_hidden, cfg.mlp_hidden), zeros(cfg.mlp_hidden)};
  mlp[1] = {init(cfg.mlp_hidden, cfg.out_dim), zeros(cfg.out_dim)};
}

std::vector<ad::NamedTensor> GnnModel::named_parameters() const {
  std::vector<ad::NamedTensor> out;
  for (std::size_t l = 0; l < gcn.size(); ++l) {
    out.push_back({"gcn" + std::to_string(l) + ".weight", gcn[l].weight});
    out.push_back({"gcn" + std::to_string(l) + ".bias", gcn[l].bias});
  }
  for (std::size_t l = 0; l < gat.size(); ++l) {
    for (std::size_t k = 0; k < gat[l].heads.size(); ++k) {
      const std::string prefix = "gat" + std::to_string(l) + ".head" + std::to_string(k);
      out.push_back({prefix + ".weight", gat[l].heads[k].weight});
      out.push_back({prefix + ".att_src", gat[l].heads[k].att_src});
      out.push_back({prefix + ".att_dst", gat[l].heads[k].att_dst});
    }
  }
  for (std::size_t l = 0; l < mlp.size(); ++l) {
    out.push_back({"mlp" + std::to_string(l) + ".weight", mlp[l].weight});
    out.push_back({"mlp" + std::to_string(l) + ".bias", mlp[l].bias});
  }
  return out;
}

std::vector<Tensor> GnnModel::parameters() const {
  std::vector<Tensor> out;
  for (auto& nt : named_parameters()) out.push_back(nt.tensor);
  return out;
}

Tensor GnnModel::forward(Tape& tape, const GraphBatch& batch) const {
  if (batch.features.cols() != static_cast<Index>(cfg_.in_dim)) {
    throw ShapeError("model_forward: feature width " + std::to_string(batch.features.cols()) +
                     ", model expects " + std::to_string(cfg_.in_dim));
  }
  Tensor h = Tensor::constant(batch.features);
  for (const auto& layer : gcn) h = gcn_forward(tape, h, batch, layer);
  for (const auto& layer : gat) h = gat_forward(tape, h, batch, layer);
  Tensor pooled;
  switch (cfg_.readout) {
    case Readout::Mean: pooled = ad::segment_mean(tape, h, batch.node_graph, batch.n_graphs); break;
    case Readout::Sum: pooled = ad::scatter_add_rows(tape, h, batch.node_graph, batch.n_graphs); break;
    case Readout::Max: pooled = ad::segment_max(tape, h, batch.node_graph, batch.n_graphs); break;
  }
  const Tensor hidden =
      ad::relu(tape, ad::add_row(tape, ad::matmul(tape, pooled, mlp[0].weight), mlp[0].bias));
  return ad::add_row(tape, ad::matmul(tape, hidden, mlp[1].weight), mlp[1].bias);
}

std::vector<double> model_forward(const GnnModel& m, const HamiltonianGraph& g) {
  if (g.feature_dim() != m.config().in_dim) {
    throw ShapeError("model_forward: graph feature width " + std::to_string(g.feature_dim()) +
                     ", model expects " + std::to_string(m.config().in_dim));
  }
  Tape tape;
  tape.set_recording(false);
  const Tensor out = m.forward(tape, make_batch(prepare_graph(g)));
  return {out.value().data(), out.value().data() + out.value().size()};
}

std::vector<double> predict_init(const GnnModel& m, const HamiltonianGraph& g) {
  const auto& cfg = m.config();
  if (g.meta.application != cfg.application) {
    throw CompatibilityError("predict_init: model trained for '" + std::string(to_string(cfg.application)) +
                             "', graph is '" + std::string(to_string(g.meta.application)) + "'");
  }
  const std::size_t n_params = ansatz_for(g.meta.application).n_params();
  if (cfg.out_dim != n_params) {
    throw CompatibilityError("predict_init: model emits " + std::to_string(cfg.out_dim) +
                             " values, ansatz has " + std::to_string(n_params) + " parameters");
  }
  return model_forward(m, g);
}

// Training

namespace {

struct PreparedSet {
  std::vector<PreparedGraph> graphs;
  Matrix labels;
};

PreparedSet prepare_set(std::span<const LabeledGraph> data, std::size_t out_dim) {
  PreparedSet set;
  set.labels.resize(static_cast<Index>(data.size()), static_cast<Index>(out_dim));
  set.graphs.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].label.size() != out_dim) {
      throw CompatibilityError("label of length " + std::to_string(data[i].label.size()) +
                               " for a model with out_dim " + std::to_string(out_dim));
    }
    set.graphs.push_back(prepare_graph(*data[i].graph));
    for (std::size_t c = 0; c < out_dim; ++c) {
      set.labels(static_cast<Index>(i), static_cast<Index>(c)) = data[i].label[c];
    }
  }
  return set;
}

// Loss on the rows `order[begin, end)` of a prepared set.
Tensor batch_loss(Tape& tape, const GnnModel& m, const PreparedSet& set,
                  std::span<const std::size_t> rows) {
  std::vector<const PreparedGraph*> graphs;
  Matrix target(static_cast<Index>(rows.size()), set.labels.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    graphs.push_back(&set.graphs[rows[k]]);
    target.row(static_cast<Index>(k)) = set.labels.row(static_cast<Index>(rows[k]));
  }
  const Tensor pred = m.forward(tape, make_batch(graphs));
  return ad::mse(tape, pred, Tensor::constant(std::move(target)));
}

double evaluate_prepared(const GnnModel& m, const PreparedSet& set, std::size_t batch_size) {
  if (set.graphs.empty()) return 0.0;
  double total = 0.0;
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < set.graphs.size(); begin += batch_size) {
    rows.clear();
    for (std::size_t i = begin; i < std::min(begin + batch_size, set.graphs.size()); ++i) rows.push_back(i);
    Tape tape;
    tape.set_recording(false);
    total += batch_loss(tape, m, set, rows).item() * static_cast<double>(rows.size());
  }
  return total / static_cast<double>(set.graphs.size());
}

std::vector<Matrix> snapshot(const GnnModel& m) {
  std::vector<Matrix> out;
  for (const auto& p : m.parameters()) out.push_back(p.value());
  return out;
}

void restore(GnnModel& m, const std::vector<Matrix>& values) {
  auto params = m.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i].value() = values[i];
}

}  // namespace

double evaluate_mse(const GnnModel& m, std::span<const LabeledGraph> data) {
  return evaluate_prepared(m, prepare_set(data, m.config().out_dim), 32);
}

TrainReport train(GnnModel& m, std::span<const LabeledGraph> training,
                  std::span<const LabeledGraph> validation, const GnnConfig& cfg) {
  const std::size_t out_dim = m.config().out_dim;
  const PreparedSet train_set = prepare_set(training, out_dim);
  const PreparedSet val_set = prepare_set(validation, out_dim);
  const std::size_t batch_size = std::max<std::size_t>(cfg.batch_size, 1);
  const bool has_val = !val_set.graphs.empty();

  TrainReport report;
  report.config = cfg;
  report.initial_train_mse = evaluate_prepared(m, train_set, batch_size);
  if (has_val) report.initial_val_mse = evaluate_prepared(m, val_set, batch_size);
  report.best_epoch = 0;
  report.best_score = has_val ? *report.initial_val_mse : report.initial_train_mse;
  if (train_set.graphs.empty() || cfg.epochs == 0) return report;

  AdamOptions opts;
  opts.lr = cfg.lr;
  opts.weight_decay = cfg.weight_decay;
  ad::Adam optimizer(m.parameters(), opts);
  std::vector<Matrix> best = snapshot(m);
  Rng rng(derive_seed(cfg.seed, 0x7472'6169'6eULL));
  std::vector<std::size_t> order(train_set.graphs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      const std::span<const std::size_t> rows(order.data() + begin, end - begin);
      optimizer.zero_grad();
      Tape tape;
      const Tensor loss = batch_loss(tape, m, train_set, rows);
      if (!std::isfinite(loss.item())) throw DivergenceError(epoch, "non-finite training loss");
      tape.backward(loss);
      optimizer.step();
      epoch_loss += loss.item() * static_cast<double>(rows.size());
    }
    EpochLog log;
    log.epoch = epoch;
    log.train_mse = epoch_loss / static_cast<double>(order.size());
    double score = log.train_mse;
    if (has_val) {
      log.val_mse = evaluate_prepared(m, val_set, batch_size);
      score = *log.val_mse;
    }
    if (!std::isfinite(score)) throw DivergenceError(epoch, "non-finite validation loss");
    report.epochs.push_back(log);
    if (score < report.best_score) {
      report.best_score = score;
      report.best_epoch = epoch;
      best = snapshot(m);
    }
  }
  restore(m, best);
  return report;
}

std::string TrainReport::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("config").raw(gnn_config_to_json(config));
  w.key("seed").value(config.seed);
  w.key("initial_train_mse").value(initial_train_mse);
  w.key("initial_val_mse");
  initial_val_mse ? w.value(*initial_val_mse) : w.null();
  w.key("epochs").begin_array();
  for (const auto& e : epochs) {
    w.begin_object();
    w.key("epoch").value(static_cast<std::uint64_t>(e.epoch));
    w.key("train_mse").value(e.train_mse);
    w.key("val_mse");
    e.val_mse ? w.value(*e.val_mse) : w.null();
    w.end_object();
  }
  w.end_array();
  w.key("best_epoch").value(static_cast<std::uint64_t>(best_epoch));
  w.key("best_score").value(best_score);
  w.end_object();
  return w.take();
}

void save_model(const GnnModel& m, const std::filesystem::path& dir) {
  ad::save_checkpoint(dir, m.named_parameters(), gnn_config_to_json(m.config()));
}

GnnModel load_model(const std::filesystem::path& dir) {
  std::vector<ad::NamedTensor> probe;
  const std::string extra = ad::load_checkpoint(dir, probe);
  GnnModel m(gnn_config_from_json(extra));
  auto named = m.named_parameters();
  ad::load_checkpoint(dir, named);
  return m;
}

}  // namespace qracle
