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

// Metrics and the Random-vs-GNN initialization comparison.

#include "qracle/dataset.hpp"
#include "qracle/gnn.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qracle {

/// Symmetric MAPE in percent, denominator (|p| + |t|) / 2; terms with
/// |p| + |t| < 1e-12 contribute 0. Range [0, 200].
double smape(std::span<const double> pred, std::span<const double> truth);
/// Mean relative error in percent; DomainError when some |truth| <= 1e-12.
double mre(std::span<const double> pred, std::span<const double> truth);
/// DomainError when either norm is <= 1e-12.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

enum class Scheme { Random, Gnn };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

struct SchemeResult {
  Scheme scheme = Scheme::Random;
  Application application = Application::HeisenbergXYZ;
  /// meta.index of each evaluated record.
  std::vector<std::size_t> instance_ids;
  std::vector<double> initial_loss;
  std::vector<double> final_energy;
  std::vector<double> ground_energy;
  /// Unconverged runs count as max_steps.
  std::vector<double> converged_step;

  double mean_initial_loss = 0.0;
  double mean_final_energy = 0.0;
  double mean_ground_energy = 0.0;
  double mean_converged_step = 0.0;
  /// smape(final_energy, ground_energy).
  double smape = 0.0;

  std::size_t size() const noexcept { return instance_ids.size(); }
  bool operator==(const SchemeResult&) const = default;
};

struct EvalOptions {
  VqeConfig vqe;
  /// Seeds the standard-normal initializations of the Random scheme.
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

/// Runs VQE from each record's initialization: a seeded standard-normal
/// draw (Random) or the model prediction (Gnn). `model` is required for Gnn.
SchemeResult evaluate_scheme(Scheme scheme, const GnnModel* model, std::span<const VqeRecord> test,
                             const EvalOptions& opts);

std::string scheme_result_to_json(const SchemeResult& r);
SchemeResult scheme_result_from_json(std::string_view json);

/// Initial parameters the Random scheme uses for one record.
std::vector<double> random_init(const AnsatzSpec& spec, std::uint64_t seed, std::size_t instance_id);

struct ReportRow {
  std::string scheme;  // "random", "gnn" or "delta"
  std::string metric;  // "initial_loss", "smape", "convergence_step"
  double mean = 0.0;
  std::size_t n = 0;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::vector<ReportRow> rows;

  /// Aligned text table, one column per row group.
  std::string table() const;
  /// Header `scheme,metric,mean,n`.
  std::string csv() const;
  std::string json() const;
};

/// Per-scheme means and, when both schemes are present, delta = Gnn - Random.
/// ConsistencyError when the results cover different applications or test
/// sets.
Report report(std::span<const SchemeResult> results);

std::vector<ReportRow> parse_report_csv(std::string_view csv);

}  // namespace qracle
