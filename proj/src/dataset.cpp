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

#include "qracle/dataset.hpp"

#include "qracle/errors.hpp"
#include "qracle/json_io.hpp"
#include "qracle/parallel.hpp"
#include "qracle/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace qracle {

namespace {

// Independent random streams derived from the dataset seed.
constexpr std::uint64_t kGridStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kRandomHamStream = 3;
constexpr std::uint64_t kH2Stream = 4;
constexpr std::uint64_t kSplitStream = 5;

constexpr std::size_t kDecimation = 10;

}  // namespace

std::size_t default_count(Application app) {
  switch (app) {
    case Application::HeisenbergXYZ: return 2000;
    case Application::Ising2D: return 1000;
    case Application::FermiHubbard: return 1000;
    case Application::H2: return 150;
    case Application::RandomVQE: return 2800;
  }
  return 0;
}

std::size_t dataset_qubits(Application app) { return ansatz_for(app).n_qubits; }

std::string_view to_string(LabelInit mode) {
  return mode == LabelInit::PerInstance ? "per_instance" : "shared";
}

LabelInit label_init_from_string(std::string_view name) {
  if (name == "per_instance") return LabelInit::PerInstance;
  if (name == "shared") return LabelInit::Shared;
  throw UsageError("unknown label init '" + std::string(name) + "' (expected per_instance, shared)");
}

std::vector<Instance> sample_instances(Application app, std::size_t count, const DatasetOptions& opts,
                                       std::uint64_t seed) {
  const std::size_t n = dataset_qubits(app);
  std::vector<Instance> out;
  out.reserve(count);
  auto make_meta = [&](std::size_t index, std::vector<std::pair<std::string, double>> params) {
    return InstanceMeta{app, index, n, std::move(params)};
  };

  switch (app) {
    case Application::HeisenbergXYZ:
    case Application::Ising2D:
    case Application::FermiHubbard: {
      CouplingGrid grid = default_grid(app, count, derive_seed(seed, kGridStream));
      if (!opts.grid_axes.empty()) {
        if (opts.grid_axes.size() != grid.axes.size()) {
          throw ShapeError("grid for '" + std::string(to_string(app)) + "' needs " +
                           std::to_string(grid.axes.size()) + " axes");
        }
        grid.axes = opts.grid_axes;
      }
      const auto tuples = sample_grid(grid);
      const auto names = param_names(app);
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& c = tuples[i];
        std::vector<std::pair<std::string, double>> params;
        for (std::size_t k = 0; k < names.size(); ++k) params.emplace_back(names[k], c[k]);
        PauliSum h = app == Application::HeisenbergXYZ ? heisenberg_xyz(n, c[0], c[1], c[2])
                     : app == Application::Ising2D     ? ising_2d(n, 2, n / 2, c[0], c[1])
                                                       : fermi_hubbard(n, c[0], c[1]);
        out.push_back({make_meta(i, std::move(params)), std::move(h)});
      }
      break;
    }
    case Application::H2: {
      auto fixtures = load_h2(opts.h2_path);
      if (count > fixtures.size()) {
        throw CapacityError("requested " + std::to_string(count) + " H2 instances, fixture has " +
                            std::to_string(fixtures.size()));
      }
      std::vector<std::size_t> pick(fixtures.size());
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      if (count < fixtures.size()) {
        Rng rng(derive_seed(seed, kH2Stream));
        rng.shuffle(pick);
        pick.resize(count);
        std::sort(pick.begin(), pick.end());
      }
      for (std::size_t i = 0; i < count; ++i) {
        auto& f = fixtures[pick[i]];
        out.push_back({make_meta(i, f.meta.params), std::move(f.hamiltonian)});
      }
      break;
    }
    case Application::RandomVQE: {
      if (opts.random_min_terms < 1 || opts.random_min_terms > opts.random_max_terms) {
        throw DomainError("random term range must satisfy 1 <= min <= max");
      }
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t s = derive_seed(derive_seed(seed, kRandomHamStream), i);
        Rng rng(s);
        const std::size_t span = opts.random_max_terms - opts.random_min_terms + 1;
        const std::size_t n_terms = opts.random_min_terms + rng.below(span);
        out.push_back({make_meta(i, {}),
                       random_hamiltonian(n, n_terms, opts.random_coeff_range, derive_seed(s, 1))});
      }
      break;
    }
  }
  return out;
}

std::vector<double> label_init_params(const AnsatzSpec& spec, LabelInit mode, std::uint64_t seed,
                                      std::size_t index) {
  const std::uint64_t base = derive_seed(seed, kInitStream);
  Rng rng(mode == LabelInit::Shared ? base : derive_seed(base, index));
  return rng.normal_vector(spec.n_params());
}

VqeRecord label_instance(const Instance& inst, const VqeConfig& vqe_cfg, std::span<const double> init,
                         std::size_t history_cap) {
  const SparseHermitian h = expand_to_matrix(inst.hamiltonian);
  VqeRecord r;
  r.graph = hamiltonian_to_graph(inst.hamiltonian, inst.meta);
  r.ground_energy = min_eigenvalue(h);
  VqeTrace trace = run_vqe(h, ansatz_for(inst.meta.application), vqe_cfg, init);
  r.label = std::move(trace.final_params);
  r.final_loss = trace.final_loss;
  r.converged_step = trace.converged_step;
  r.n_steps = trace.loss_history.size();
  if (trace.loss_history.size() > history_cap) {
    r.history_stride = kDecimation;
    const auto& full = trace.loss_history;
    for (std::size_t t = 0; t < full.size(); t += kDecimation) r.loss_history.push_back(full[t]);
    if ((full.size() - 1) % kDecimation != 0) r.loss_history.push_back(full.back());
  } else {
    r.loss_history = std::move(trace.loss_history);
  }
  return r;
}

BuildResult build_dataset(Application app, std::size_t count, const DatasetOptions& opts,
                          const VqeConfig& vqe_cfg, std::uint64_t seed) {
  const auto instances = sample_instances(app, count, opts, seed);
  const AnsatzSpec spec = ansatz_for(app);
  std::vector<std::optional<VqeRecord>> slots(instances.size());
  std::vector<std::string> failures(instances.size());

  parallel_for(instances.size(), opts.jobs, [&](std::size_t i) {
    const auto init = label_init_params(spec, opts.label_init, seed, i);
    try {
      slots[i] = label_instance(instances[i], vqe_cfg, init, opts.history_cap);
    } catch (const DivergenceError& e) {
      failures[i] = e.what();
    }
  });

  BuildResult out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.records.push_back(std::move(*slots[i]));
    } else {
      out.skipped.push_back(i);
      if (opts.warn) opts.warn("instance " + std::to_string(i) + " skipped: " + failures[i]);
    }
  }
  if (out.skipped.size() * 20 > instances.size()) {
    throw ConsistencyError(std::to_string(out.skipped.size()) + " of " + std::to_string(instances.size()) +
                           " instances diverged (more than 5%)");
  }
  return out;
}

SplitManifest split(std::size_t n_records, std::uint64_t seed) {
  if (n_records < 2) throw ShapeError("split needs at least 2 records, got " + std::to_string(n_records));
  std::vector<std::size_t> order(n_records);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, kSplitStream));
  rng.shuffle(order);
  const auto n_train = static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(n_records)));
  SplitManifest m;
  m.seed = seed;
  m.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  m.test_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return m;
}

SplitManifest split(const std::vector<VqeRecord>& records, std::uint64_t seed) {
  return split(records.size(), seed);
}

std::string split_to_json(const SplitManifest& m) {
  JsonWriter w;
  w.begin_object();
  w.key("seed").value(m.seed);
  w.key("train_indices").begin_array();
  for (auto i : m.train_indices) w.value(static_cast<std::uint64_t>(i));
  w.end_array();
  w.key("test_indices").begin_array();
  for (auto i : m.test_indices) w.value(static_cast<std::uint64_t>(i));
  w.end_array();
  w.end_object();
  return w.take();
}

SplitManifest split_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    SplitManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train_indices = j.at("train_indices").get<std::vector<std::size_t>>();
    m.test_indices = j.at("test_indices").get<std::vector<std::size_t>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("split manifest: ") + e.what());
  }
}

std::string record_to_json(const VqeRecord& r) {
  JsonWriter w;
  w.begin_object();
  write_graph_fields(w, r.graph);
  w.key("label").array(r.label);
  w.key("loss_history").array(r.loss_history);
  w.key("history_stride").value(static_cast<std::uint64_t>(r.history_stride));
  w.key("n_steps").value(static_cast<std::uint64_t>(r.n_steps));
  w.key("converged_step");
  if (r.converged_step) {
    w.value(static_cast<std::uint64_t>(*r.converged_step));
  } else {
    w.null();
  }
  w.key("final_loss").value(r.final_loss);
  w.key("ground_energy").value(r.ground_energy);
  w.end_object();
  return w.take();
}

namespace {

VqeRecord record_from_parsed(const nlohmann::ordered_json& j) {
  VqeRecord r;
  r.graph = graph_from_json(j);
  try {
    r.label = j.at("label").get<std::vector<double>>();
    r.loss_history = j.at("loss_history").get<std::vector<double>>();
    r.history_stride = j.at("history_stride").get<std::size_t>();
    r.n_steps = j.at("n_steps").get<std::size_t>();
    if (!j.at("converged_step").is_null()) r.converged_step = j.at("converged_step").get<std::size_t>();
    r.final_loss = j.at("final_loss").get<double>();
    r.ground_energy = j.at("ground_energy").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed record: ") + e.what());
  }
  if (r.loss_history.empty()) throw FormatError("record has an empty loss history");
  return r;
}

}  // namespace

VqeRecord record_from_json(std::string_view line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return record_from_parsed(j);
}

std::string dataset_to_jsonl(const std::vector<VqeRecord>& records) {
  std::string out = "{\"schema\":\"" + std::string(kDatasetSchema) + "\"}\n";
  for (const auto& r : records) {
    out += record_to_json(r);
    out += '\n';
  }
  return out;
}

std::vector<VqeRecord> dataset_from_jsonl(std::string_view text) {
  std::vector<VqeRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!header) {
      if (!j.is_object() || !j.contains("schema")) throw FormatError("dataset file lacks a schema header");
      const auto schema = j["schema"].is_string() ? j["schema"].get<std::string>() : std::string();
      if (schema != kDatasetSchema) {
        throw FormatError("dataset schema '" + schema + "', expected '" + std::string(kDatasetSchema) + "'");
      }
      header = true;
      continue;
    }
    try {
      out.push_back(record_from_parsed(j));
    } catch (const FormatError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!header) throw FormatError("dataset file lacks a schema header");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void save_dataset(const std::vector<VqeRecord>& records, const std::filesystem::path& path) {
  write_file(path, dataset_to_jsonl(records));
}

std::vector<VqeRecord> load_dataset(const std::filesystem::path& path) {
  return dataset_from_jsonl(read_file(path));
}

}  // namespace qracle
