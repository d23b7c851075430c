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

// Dense 2-D tensors with tape-based reverse-mode differentiation. Only the
// primitives the graph network needs are provided; sparsity is expressed by
// gathering and scattering rows along explicit edge lists.
//
// A Tape and the tensors recorded on it belong to one thread.

#include "qracle/optim.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qracle::ad {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tensor {
 public:
  Tensor() = default;

  /// Untracked input.
  static Tensor constant(Matrix value);
  /// Trainable leaf; gradients accumulate until zero_grad().
  static Tensor parameter(Matrix value);
  static Tensor zeros(Index rows, Index cols, bool requires_grad = false);
  static Tensor make(Matrix value, bool requires_grad);

  bool defined() const noexcept { return node_ != nullptr; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  std::vector<Index> shape() const { return {rows(), cols()}; }
  std::string shape_str() const;

  const Matrix& value() const { return node_->value; }
  Matrix& value() { return node_->value; }
  /// Scalar value of a 1x1 tensor.
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return node_->grad.size() != 0; }
  /// Zero-shaped when no gradient has reached this tensor.
  const Matrix& grad() const { return node_->grad; }
  void zero_grad() const;

  /// Adds `g` into the gradient buffer, allocating it on first use.
  void accumulate_grad(const Matrix& g) const;

  bool same_node(const Tensor& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
  };
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  std::shared_ptr<Node> node_;
};

/// Ordered record of primitive applications; backward() replays it in
/// reverse.
class Tape {
 public:
  void record(std::function<void()> backward) {
    if (recording_) records_.push_back(std::move(backward));
  }
  /// A non-recording tape evaluates forward passes only.
  void set_recording(bool on) noexcept { recording_ = on; }
  bool recording() const noexcept { return recording_; }
  std::size_t size() const noexcept { return records_.size(); }
  void clear() { records_.clear(); }

  /// Seeds d loss / d loss = 1 for a 1x1 `loss` and propagates.
  void backward(const Tensor& loss);

 private:
  std::vector<std::function<void()>> records_;
  bool recording_ = true;
};

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
/// Elementwise sum of equal shapes.
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
/// Adds a 1 x cols row to every row of `a`.
Tensor add_row(Tape& tape, const Tensor& a, const Tensor& row);
Tensor scale(Tape& tape, const Tensor& a, double factor);
/// Multiplies row r of `a` by weights(r, 0); `weights` is rows x 1.
Tensor scale_rows(Tape& tape, const Tensor& a, const Tensor& weights);

/// max(x, 0); the subgradient at 0 is 0.
Tensor relu(Tape& tape, const Tensor& a);
Tensor leaky_relu(Tape& tape, const Tensor& a, double slope);
Tensor row_softmax(Tape& tape, const Tensor& a);
/// Softmax of a column of scores within groups sharing segment[e].
Tensor segment_softmax(Tape& tape, const Tensor& scores, std::span<const Index> segment,
                       Index n_segments);

/// out.row(k) = a.row(index[k]).
Tensor gather_rows(Tape& tape, const Tensor& a, std::span<const Index> index);
/// out.row(index[k]) += a.row(k), out has n_out rows.
Tensor scatter_add_rows(Tape& tape, const Tensor& a, std::span<const Index> index, Index n_out);
/// Per-segment row means; rows with segment[r] = s average into out.row(s).
Tensor segment_mean(Tape& tape, const Tensor& a, std::span<const Index> segment, Index n_segments);
/// Per-segment column maxima; the gradient goes to the first maximal row.
Tensor segment_max(Tape& tape, const Tensor& a, std::span<const Index> segment, Index n_segments);

Tensor sum_all(Tape& tape, const Tensor& a);
Tensor mean_all(Tape& tape, const Tensor& a);
/// mean((pred - target)^2); target is not differentiated.
Tensor mse(Tape& tape, const Tensor& pred, const Tensor& target);

/// Adam over a fixed parameter list with per-tensor moments.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions opts);

  /// One update with bias correction; StateError if a parameter never
  /// received a gradient.
  void step();
  void zero_grad();
  std::size_t step_count() const noexcept { return step_; }
  AdamOptions& options() noexcept { return opts_; }

 private:
  std::vector<Tensor> params_;
  std::vector<AdamMoments> moments_;
  AdamOptions opts_;
  std::size_t step_ = 0;
};

/// Functional form of Adam::step().
void adam_step(Adam& optimizer);

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Writes manifest.json (names, shapes, extra metadata) and one raw
/// little-endian float64 blob per tensor into `dir`.
void save_checkpoint(const std::filesystem::path& dir, const std::vector<NamedTensor>& tensors,
                     const std::string& extra_json = "{}");
/// Loads values into existing tensors by name; ShapeError or FormatError on
/// disagreement. Returns the manifest's extra metadata as JSON text.
std::string load_checkpoint(const std::filesystem::path& dir, std::vector<NamedTensor>& tensors);

}  // namespace qracle::ad
