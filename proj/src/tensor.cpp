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

#include "qracle/tensor.hpp"

#include "qracle/errors.hpp"
#include "qracle/json_io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace qracle::ad {

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " +
                   b.shape_str());
}

void check_index(const char* op, std::span<const Index> index, Index bound) {
  for (Index i : index) {
    if (i < 0 || i >= bound) {
      throw IndexError(std::string(op) + ": row index " + std::to_string(i) + " outside [0, " +
                       std::to_string(bound) + ")");
    }
  }
}

}  // namespace

// Tensor

Tensor Tensor::make(Matrix value, bool requires_grad) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::constant(Matrix value) { return make(std::move(value), false); }

Tensor Tensor::parameter(Matrix value) { return make(std::move(value), true); }

Tensor Tensor::zeros(Index rows, Index cols, bool requires_grad) {
  return make(Matrix::Zero(rows, cols), requires_grad);
}

std::string Tensor::shape_str() const {
  if (!node_) return "(undefined)";
  return "(" + std::to_string(rows()) + ", " + std::to_string(cols()) + ")";
}

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) throw ShapeError("item: tensor of shape " + shape_str());
  return node_->value(0, 0);
}

void Tensor::zero_grad() const { node_->grad = Matrix::Zero(rows(), cols()); }

void Tensor::accumulate_grad(const Matrix& g) const {
  if (node_->grad.size() == 0) {
    node_->grad = g;
  } else {
    node_->grad += g;
  }
}

// Tape

void Tape::backward(const Tensor& loss) {
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ShapeError("backward: loss must be 1x1, got " + loss.shape_str());
  }
  Tensor seed = loss;
  seed.accumulate_grad(Matrix::Ones(1, 1));
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
}

// Primitives

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
  Matrix v(a.rows(), b.cols());
  v.noalias() = a.value() * b.value();
  Tensor out = Tensor::make(std::move(v), a.requires_grad() || b.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, b, out]() mutable {
      if (!out.has_grad()) return;
      if (a.requires_grad()) {
        Matrix ga(a.rows(), a.cols());
        ga.noalias() = out.grad() * b.value().transpose();
        a.accumulate_grad(ga);
      }
      if (b.requires_grad()) {
        Matrix gb(b.rows(), b.cols());
        gb.noalias() = a.value().transpose() * out.grad();
        b.accumulate_grad(gb);
      }
    });
  }
  return out;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) shape_mismatch("add", a, b);
  Tensor out = Tensor::make(a.value() + b.value(), a.requires_grad() || b.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, b, out]() mutable {
      if (!out.has_grad()) return;
      if (a.requires_grad()) a.accumulate_grad(out.grad());
      if (b.requires_grad()) b.accumulate_grad(out.grad());
    });
  }
  return out;
}

Tensor add_row(Tape& tape, const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) shape_mismatch("add_row", a, row);
  Matrix v = a.value();
  v.rowwise() += row.value().row(0);
  Tensor out = Tensor::make(std::move(v), a.requires_grad() || row.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, row, out]() mutable {
      if (!out.has_grad()) return;
      if (a.requires_grad()) a.accumulate_grad(out.grad());
      if (row.requires_grad()) row.accumulate_grad(out.grad().colwise().sum());
    });
  }
  return out;
}

Tensor scale(Tape& tape, const Tensor& a, double factor) {
  Tensor out = Tensor::make(a.value() * factor, a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out, factor]() mutable {
      if (out.has_grad()) a.accumulate_grad(out.grad() * factor);
    });
  }
  return out;
}

Tensor scale_rows(Tape& tape, const Tensor& a, const Tensor& weights) {
  if (weights.cols() != 1 || weights.rows() != a.rows()) shape_mismatch("scale_rows", a, weights);
  Matrix v = a.value().array().colwise() * weights.value().col(0).array();
  Tensor out = Tensor::make(std::move(v), a.requires_grad() || weights.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, weights, out]() mutable {
      if (!out.has_grad()) return;
      if (a.requires_grad()) {
        Matrix ga = out.grad().array().colwise() * weights.value().col(0).array();
        a.accumulate_grad(ga);
      }
      if (weights.requires_grad()) {
        Matrix gw = (out.grad().array() * a.value().array()).rowwise().sum();
        weights.accumulate_grad(gw);
      }
    });
  }
  return out;
}

Tensor relu(Tape& tape, const Tensor& a) {
  Tensor out = Tensor::make(a.value().cwiseMax(0.0), a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out]() mutable {
      if (!out.has_grad()) return;
      Matrix g = (a.value().array() > 0.0).select(out.grad(), 0.0);
      a.accumulate_grad(g);
    });
  }
  return out;
}

Tensor leaky_relu(Tape& tape, const Tensor& a, double slope) {
  Matrix v = (a.value().array() > 0.0).select(a.value(), a.value() * slope);
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out, slope]() mutable {
      if (!out.has_grad()) return;
      Matrix g = (a.value().array() > 0.0).select(out.grad(), out.grad() * slope);
      a.accumulate_grad(g);
    });
  }
  return out;
}

Tensor row_softmax(Tape& tape, const Tensor& a) {
  Matrix v(a.rows(), a.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    const double m = a.value().row(r).maxCoeff();
    v.row(r) = (a.value().row(r).array() - m).exp();
    v.row(r) /= v.row(r).sum();
  }
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out]() mutable {
      if (!out.has_grad()) return;
      const Matrix& y = out.value();
      const Matrix& g = out.grad();
      Matrix ga(y.rows(), y.cols());
      for (Index r = 0; r < y.rows(); ++r) {
        const double dot = y.row(r).dot(g.row(r));
        ga.row(r) = y.row(r).array() * (g.row(r).array() - dot);
      }
      a.accumulate_grad(ga);
    });
  }
  return out;
}

Tensor segment_softmax(Tape& tape, const Tensor& scores, std::span<const Index> segment,
                       Index n_segments) {
  if (scores.cols() != 1 || static_cast<std::size_t>(scores.rows()) != segment.size()) {
    throw ShapeError("segment_softmax: scores " + scores.shape_str() + " vs " +
                     std::to_string(segment.size()) + " segment ids");
  }
  check_index("segment_softmax", segment, n_segments);
  const auto& s = scores.value();
  Eigen::VectorXd seg_max = Eigen::VectorXd::Constant(n_segments, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < segment.size(); ++e) {
    seg_max[segment[e]] = std::max(seg_max[segment[e]], s(static_cast<Index>(e), 0));
  }
  Matrix v(scores.rows(), 1);
  Eigen::VectorXd seg_sum = Eigen::VectorXd::Zero(n_segments);
  for (std::size_t e = 0; e < segment.size(); ++e) {
    const auto i = static_cast<Index>(e);
    v(i, 0) = std::exp(s(i, 0) - seg_max[segment[e]]);
    seg_sum[segment[e]] += v(i, 0);
  }
  for (std::size_t e = 0; e < segment.size(); ++e) v(static_cast<Index>(e), 0) /= seg_sum[segment[e]];

  Tensor out = Tensor::make(std::move(v), scores.requires_grad());
  if (out.requires_grad()) {
    std::vector<Index> seg(segment.begin(), segment.end());
    tape.record([scores, out, seg = std::move(seg), n_segments]() mutable {
      if (!out.has_grad()) return;
      const Matrix& y = out.value();
      const Matrix& g = out.grad();
      Eigen::VectorXd dot = Eigen::VectorXd::Zero(n_segments);
      for (std::size_t e = 0; e < seg.size(); ++e) {
        const auto i = static_cast<Index>(e);
        dot[seg[e]] += y(i, 0) * g(i, 0);
      }
      Matrix gs(y.rows(), 1);
      for (std::size_t e = 0; e < seg.size(); ++e) {
        const auto i = static_cast<Index>(e);
        gs(i, 0) = y(i, 0) * (g(i, 0) - dot[seg[e]]);
      }
      scores.accumulate_grad(gs);
    });
  }
  return out;
}

Tensor gather_rows(Tape& tape, const Tensor& a, std::span<const Index> index) {
  check_index("gather_rows", index, a.rows());
  Matrix v(static_cast<Index>(index.size()), a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) v.row(static_cast<Index>(k)) = a.value().row(index[k]);
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    std::vector<Index> idx(index.begin(), index.end());
    tape.record([a, out, idx = std::move(idx)]() mutable {
      if (!out.has_grad()) return;
      Matrix ga = Matrix::Zero(a.rows(), a.cols());
      for (std::size_t k = 0; k < idx.size(); ++k) ga.row(idx[k]) += out.grad().row(static_cast<Index>(k));
      a.accumulate_grad(ga);
    });
  }
  return out;
}

Tensor scatter_add_rows(Tape& tape, const Tensor& a, std::span<const Index> index, Index n_out) {
  if (static_cast<std::size_t>(a.rows()) != index.size()) {
    throw ShapeError("scatter_add_rows: " + a.shape_str() + " with " + std::to_string(index.size()) +
                     " indices");
  }
  check_index("scatter_add_rows", index, n_out);
  Matrix v = Matrix::Zero(n_out, a.cols());
  for (std::size_t k = 0; k < index.size(); ++k) v.row(index[k]) += a.value().row(static_cast<Index>(k));
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    std::vector<Index> idx(index.begin(), index.end());
    tape.record([a, out, idx = std::move(idx)]() mutable {
      if (!out.has_grad()) return;
      Matrix ga(a.rows(), a.cols());
      for (std::size_t k = 0; k < idx.size(); ++k) ga.row(static_cast<Index>(k)) = out.grad().row(idx[k]);
      a.accumulate_grad(ga);
    });
  }
  return out;
}

Tensor segment_mean(Tape& tape, const Tensor& a, std::span<const Index> segment, Index n_segments) {
  if (static_cast<std::size_t>(a.rows()) != segment.size()) {
    throw ShapeError("segment_mean: " + a.shape_str() + " with " + std::to_string(segment.size()) +
                     " segment ids");
  }
  check_index("segment_mean", segment, n_segments);
  std::vector<double> counts(static_cast<std::size_t>(n_segments), 0.0);
  for (Index s : segment) counts[static_cast<std::size_t>(s)] += 1.0;
  Matrix inv(static_cast<Index>(segment.size()), 1);
  for (std::size_t r = 0; r < segment.size(); ++r) {
    inv(static_cast<Index>(r), 0) = 1.0 / counts[static_cast<std::size_t>(segment[r])];
  }
  return scatter_add_rows(tape, scale_rows(tape, a, Tensor::constant(std::move(inv))), segment,
                          n_segments);
}

Tensor segment_max(Tape& tape, const Tensor& a, std::span<const Index> segment, Index n_segments) {
  if (static_cast<std::size_t>(a.rows()) != segment.size()) {
    throw ShapeError("segment_max: " + a.shape_str() + " with " + std::to_string(segment.size()) +
                     " segment ids");
  }
  check_index("segment_max", segment, n_segments);
  Matrix v = Matrix::Constant(n_segments, a.cols(), -std::numeric_limits<double>::infinity());
  Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> arg =
      Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Constant(n_segments, a.cols(), -1);
  for (std::size_t r = 0; r < segment.size(); ++r) {
    const auto row = static_cast<Index>(r);
    for (Index c = 0; c < a.cols(); ++c) {
      if (a.value()(row, c) > v(segment[r], c)) {
        v(segment[r], c) = a.value()(row, c);
        arg(segment[r], c) = row;
      }
    }
  }
  for (Index s = 0; s < n_segments; ++s) {
    if (arg(s, 0) < 0) throw ShapeError("segment_max: empty segment " + std::to_string(s));
  }
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out, arg = std::move(arg)]() mutable {
      if (!out.has_grad()) return;
      Matrix ga = Matrix::Zero(a.rows(), a.cols());
      for (Index s = 0; s < arg.rows(); ++s) {
        for (Index c = 0; c < arg.cols(); ++c) ga(arg(s, c), c) += out.grad()(s, c);
      }
      a.accumulate_grad(ga);
    });
  }
  return out;
}

Tensor sum_all(Tape& tape, const Tensor& a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().sum();
  Tensor out = Tensor::make(std::move(v), a.requires_grad());
  if (out.requires_grad()) {
    tape.record([a, out]() mutable {
      if (out.has_grad()) a.accumulate_grad(Matrix::Constant(a.rows(), a.cols(), out.grad()(0, 0)));
    });
  }
  return out;
}

Tensor mean_all(Tape& tape, const Tensor& a) {
  if (a.value().size() == 0) throw ShapeError("mean_all: empty tensor");
  return scale(tape, sum_all(tape, a), 1.0 / static_cast<double>(a.value().size()));
}

Tensor mse(Tape& tape, const Tensor& pred, const Tensor& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols()) shape_mismatch("mse", pred, target);
  if (pred.value().size() == 0) throw ShapeError("mse: empty tensor");
  const double n = static_cast<double>(pred.value().size());
  Matrix diff = pred.value() - target.value();
  Matrix v(1, 1);
  v(0, 0) = diff.squaredNorm() / n;
  Tensor out = Tensor::make(std::move(v), pred.requires_grad());
  if (out.requires_grad()) {
    tape.record([pred, out, diff = std::move(diff), n]() mutable {
      if (out.has_grad()) pred.accumulate_grad(diff * (2.0 * out.grad()(0, 0) / n));
    });
  }
  return out;
}

// Adam

Adam::Adam(std::vector<Tensor> params, AdamOptions opts)
    : params_(std::move(params)), moments_(params_.size()), opts_(opts) {}

void Adam::step() {
  for (const auto& p : params_) {
    if (!p.has_grad()) throw StateError("adam_step: parameter " + p.shape_str() + " has no gradient");
  }
  ++step_;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Matrix& value = params_[i].value();
    const Matrix& grad = params_[i].grad();
    adam_update({value.data(), static_cast<std::size_t>(value.size())},
                {grad.data(), static_cast<std::size_t>(grad.size())}, moments_[i], opts_, opts_.lr,
                step_);
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void adam_step(Adam& optimizer) { optimizer.step(); }

// Checkpoints

namespace {

std::filesystem::path blob_path(const std::filesystem::path& dir, const std::string& name) {
  return dir / (name + ".f64");
}

void to_little_endian(std::vector<double>& values) {
  if constexpr (std::endian::native == std::endian::big) {
    for (double& x : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      bits = __builtin_bswap64(bits);
      std::memcpy(&x, &bits, sizeof bits);
    }
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const std::vector<NamedTensor>& tensors,
                     const std::string& extra_json) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint directory " + dir.string() + ": " + ec.message());

  JsonWriter w;
  w.begin_object();
  w.key("format").value("qracle-checkpoint-v1");
  w.key("dtype").value("float64-le");
  w.key("tensors").begin_array();
  for (const auto& nt : tensors) {
    w.begin_object();
    w.key("name").value(nt.name);
    w.key("shape").begin_array().value(static_cast<std::int64_t>(nt.tensor.rows()))
        .value(static_cast<std::int64_t>(nt.tensor.cols())).end_array();
    w.key("file").value(blob_path({}, nt.name).string());
    w.end_object();

    std::vector<double> data(nt.tensor.value().data(),
                             nt.tensor.value().data() + nt.tensor.value().size());
    to_little_endian(data);
    std::ofstream out(blob_path(dir, nt.name), std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!out) throw IoError("cannot write tensor blob for " + nt.name);
  }
  w.end_array();
  w.key("extra").raw(extra_json);
  w.end_object();

  std::ofstream manifest(dir / "manifest.json", std::ios::trunc);
  manifest << w.str() << '\n';
  if (!manifest) throw IoError("cannot write " + (dir / "manifest.json").string());
}

std::string load_checkpoint(const std::filesystem::path& dir, std::vector<NamedTensor>& tensors) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "qracle-checkpoint-v1") {
    throw FormatError("checkpoint manifest has unsupported format");
  }
  for (auto& nt : tensors) {
    const nlohmann::json* entry = nullptr;
    for (const auto& e : manifest.at("tensors")) {
      if (e.at("name") == nt.name) entry = &e;
    }
    if (!entry) throw FormatError("checkpoint lacks tensor '" + nt.name + "'");
    const auto rows = (*entry).at("shape").at(0).get<Index>();
    const auto cols = (*entry).at("shape").at(1).get<Index>();
    if (rows != nt.tensor.rows() || cols != nt.tensor.cols()) {
      throw ShapeError("checkpoint tensor '" + nt.name + "' has shape (" + std::to_string(rows) + ", " +
                       std::to_string(cols) + "), model expects " + nt.tensor.shape_str());
    }
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    std::ifstream blob(dir / (*entry).at("file").get<std::string>(), std::ios::binary);
    blob.read(reinterpret_cast<char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!blob || blob.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double))) {
      throw FormatError("checkpoint blob for '" + nt.name + "' is truncated");
    }
    to_little_endian(data);
    std::memcpy(nt.tensor.value().data(), data.data(), data.size() * sizeof(double));
  }
  return manifest.contains("extra") ? manifest["extra"].dump() : "{}";
}

}  // namespace qracle::ad
