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

// Dataset construction: sample instances, label them with VQE runs, write
// JSON-lines files and train/test splits.

#include "qracle/graph.hpp"
#include "qracle/models.hpp"
#include "qracle/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qracle {

inline constexpr std::string_view kDatasetSchema = "qracle-v1";

/// Table 1 instance counts (2000/1000/1000/150/2800).
std::size_t default_count(Application app);

/// Qubit count of the dataset instances of an application.
std::size_t dataset_qubits(Application app);

/// One labeled instance.
struct VqeRecord {
  HamiltonianGraph graph;
  /// Final VQE parameters.
  std::vector<double> label;
  /// Losses at steps 0, s, 2s, ... plus the last step, s = history_stride.
  std::vector<double> loss_history;
  std::size_t history_stride = 1;
  /// Number of optimizer steps the history covers.
  std::size_t n_steps = 0;
  std::optional<std::size_t> converged_step;
  double final_loss = 0.0;
  double ground_energy = 0.0;

  const InstanceMeta& meta() const noexcept { return graph.meta; }
  double initial_loss() const { return loss_history.front(); }
  bool operator==(const VqeRecord&) const = default;
};

/// How label-generating VQE runs are initialized.
enum class LabelInit {
  /// Independent standard-normal draw per instance.
  PerInstance,
  /// One standard-normal vector shared by every instance of the dataset.
  Shared,
};

std::string_view to_string(LabelInit mode);
LabelInit label_init_from_string(std::string_view name);

struct DatasetOptions {
  /// Coupling grid axes; the application default when empty.
  std::vector<GridAxis> grid_axes;
  std::filesystem::path h2_path = default_h2_path();
  std::size_t random_min_terms = 4;
  std::size_t random_max_terms = 20;
  std::pair<double, double> random_coeff_range{-1.0, 1.0};
  /// Shared starts make labels a smooth function of the couplings; independent
  /// starts land in unrelated minima and leave nothing for the network to learn.
  LabelInit label_init = LabelInit::Shared;
  /// Histories longer than this are decimated to every 10th step.
  std::size_t history_cap = 1000;
  std::size_t jobs = 1;
  /// Receives one line per skipped instance.
  std::function<void(const std::string&)> warn;
};

/// An unlabeled instance.
struct Instance {
  InstanceMeta meta;
  PauliSum hamiltonian;
};

/// `count` instances of an application, deterministic in `seed`.
std::vector<Instance> sample_instances(Application app, std::size_t count, const DatasetOptions& opts,
                                       std::uint64_t seed);

/// Initial parameters of the label-generating run of instance `index`.
std::vector<double> label_init_params(const AnsatzSpec& spec, LabelInit mode, std::uint64_t seed,
                                      std::size_t index);

/// Runs VQE on one instance and packages the record.
VqeRecord label_instance(const Instance& inst, const VqeConfig& vqe_cfg, std::span<const double> init,
                         std::size_t history_cap);

struct BuildResult {
  std::vector<VqeRecord> records;
  /// Instance indices whose VQE run diverged.
  std::vector<std::size_t> skipped;
};

/// Samples, labels and orders records by instance index. Diverged runs are
/// skipped; ConsistencyError when more than 5% are skipped.
BuildResult build_dataset(Application app, std::size_t count, const DatasetOptions& opts,
                          const VqeConfig& vqe_cfg, std::uint64_t seed);

struct SplitManifest {
  std::uint64_t seed = 0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;

  bool operator==(const SplitManifest&) const = default;
};

/// Seeded shuffle, then round(0.7 n) training and the rest test positions.
SplitManifest split(std::size_t n_records, std::uint64_t seed);
SplitManifest split(const std::vector<VqeRecord>& records, std::uint64_t seed);

std::string split_to_json(const SplitManifest& m);
SplitManifest split_from_json(std::string_view json);

std::string record_to_json(const VqeRecord& r);
VqeRecord record_from_json(std::string_view line);

/// Header line followed by one record per line.
std::string dataset_to_jsonl(const std::vector<VqeRecord>& records);
std::vector<VqeRecord> dataset_from_jsonl(std::string_view text);

void save_dataset(const std::vector<VqeRecord>& records, const std::filesystem::path& path);
std::vector<VqeRecord> load_dataset(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace qracle
