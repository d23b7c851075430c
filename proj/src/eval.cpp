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

#include "qracle/eval.hpp"

#include "qracle/errors.hpp"
#include "qracle/json_io.hpp"
#include "qracle/parallel.hpp"
#include "qracle/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace qracle {

namespace {

constexpr double kTiny = 1e-12;
constexpr std::uint64_t kRandomInitStream = 0x65'76'61'6cULL;

void check_lengths(const char* op, std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": lengths " + std::to_string(a) + " and " + std::to_string(b) +
                     " differ");
  }
  if (a == 0) throw ShapeError(std::string(op) + ": empty input");
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

double smape(std::span<const double> pred, std::span<const double> truth) {
  check_lengths("smape", pred.size(), truth.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double denom = std::abs(pred[i]) + std::abs(truth[i]);
    if (denom < kTiny) continue;
    total += 2.0 * std::abs(pred[i] - truth[i]) / denom;
  }
  return 100.0 * total / static_cast<double>(pred.size());
}

double mre(std::span<const double> pred, std::span<const double> truth) {
  check_lengths("mre", pred.size(), truth.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (std::abs(truth[i]) <= kTiny) {
      throw DomainError("mre: truth[" + std::to_string(i) + "] is zero");
    }
    total += std::abs(pred[i] - truth[i]) / std::abs(truth[i]);
  }
  return 100.0 * total / static_cast<double>(pred.size());
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  check_lengths("cosine_similarity", a.size(), b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na <= kTiny || nb <= kTiny) throw DomainError("cosine_similarity: zero vector");
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

std::string_view to_string(Scheme s) { return s == Scheme::Random ? "random" : "gnn"; }

Scheme scheme_from_string(std::string_view name) {
  if (name == "random") return Scheme::Random;
  if (name == "gnn") return Scheme::Gnn;
  throw UsageError("unknown scheme '" + std::string(name) + "' (expected random, gnn)");
}

std::vector<double> random_init(const AnsatzSpec& spec, std::uint64_t seed, std::size_t instance_id) {
  Rng rng(derive_seed(derive_seed(seed, kRandomInitStream), instance_id));
  return rng.normal_vector(spec.n_params());
}

SchemeResult evaluate_scheme(Scheme scheme, const GnnModel* model, std::span<const VqeRecord> test,
                             const EvalOptions& opts) {
  if (test.empty()) throw ShapeError("evaluate_scheme: empty test set");
  if (scheme == Scheme::Gnn && model == nullptr) {
    throw UsageError("evaluate_scheme: the gnn scheme needs a trained model");
  }
  const Application app = test.front().meta().application;
  for (const auto& r : test) {
    if (r.meta().application != app) throw ConsistencyError("evaluate_scheme: mixed applications");
  }
  const AnsatzSpec spec = ansatz_for(app);

  SchemeResult res;
  res.scheme = scheme;
  res.application = app;
  const std::size_t n = test.size();
  res.instance_ids.resize(n);
  res.initial_loss.resize(n);
  res.final_energy.resize(n);
  res.ground_energy.resize(n);
  res.converged_step.resize(n);

  parallel_for(n, opts.jobs, [&](std::size_t i) {
    const VqeRecord& r = test[i];
    const auto init = scheme == Scheme::Random ? random_init(spec, opts.seed, r.meta().index)
                                               : predict_init(*model, r.graph);
    const VqeTrace trace = run_vqe(graph_to_matrix(r.graph), spec, opts.vqe, init);
    res.instance_ids[i] = r.meta().index;
    res.initial_loss[i] = trace.initial_loss();
    res.final_energy[i] = trace.final_loss;
    res.ground_energy[i] = r.ground_energy;
    res.converged_step[i] = static_cast<double>(trace.converged_step.value_or(opts.vqe.max_steps));
  });

  res.mean_initial_loss = mean(res.initial_loss);
  res.mean_final_energy = mean(res.final_energy);
  res.mean_ground_energy = mean(res.ground_energy);
  res.mean_converged_step = mean(res.converged_step);
  res.smape = smape(res.final_energy, res.ground_energy);
  return res;
}

std::string scheme_result_to_json(const SchemeResult& r) {
  JsonWriter w;
  w.begin_object();
  w.key("scheme").value(to_string(r.scheme));
  w.key("application").value(to_string(r.application));
  w.key("instance_ids").begin_array();
  for (auto id : r.instance_ids) w.value(static_cast<std::uint64_t>(id));
  w.end_array();
  w.key("initial_loss").array(r.initial_loss);
  w.key("final_energy").array(r.final_energy);
  w.key("ground_energy").array(r.ground_energy);
  w.key("converged_step").array(r.converged_step);
  w.key("mean_initial_loss").value(r.mean_initial_loss);
  w.key("mean_final_energy").value(r.mean_final_energy);
  w.key("mean_ground_energy").value(r.mean_ground_energy);
  w.key("mean_converged_step").value(r.mean_converged_step);
  w.key("smape").value(r.smape);
  w.end_object();
  return w.take();
}

SchemeResult scheme_result_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    SchemeResult r;
    r.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    r.application = application_from_string(j.at("application").get<std::string>());
    r.instance_ids = j.at("instance_ids").get<std::vector<std::size_t>>();
    r.initial_loss = j.at("initial_loss").get<std::vector<double>>();
    r.final_energy = j.at("final_energy").get<std::vector<double>>();
    r.ground_energy = j.at("ground_energy").get<std::vector<double>>();
    r.converged_step = j.at("converged_step").get<std::vector<double>>();
    r.mean_initial_loss = j.at("mean_initial_loss").get<double>();
    r.mean_final_energy = j.at("mean_final_energy").get<double>();
    r.mean_ground_energy = j.at("mean_ground_energy").get<double>();
    r.mean_converged_step = j.at("mean_converged_step").get<double>();
    r.smape = j.at("smape").get<double>();
    const std::size_t n = r.instance_ids.size();
    if (r.initial_loss.size() != n || r.final_energy.size() != n || r.ground_energy.size() != n ||
        r.converged_step.size() != n) {
      throw FormatError("scheme result lists differ in length");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("scheme result: ") + e.what());
  } catch (const UsageError& e) {
    throw FormatError(std::string("scheme result: ") + e.what());
  }
}

Report report(std::span<const SchemeResult> results) {
  if (results.empty()) throw ShapeError("report: no results");
  for (const auto& r : results) {
    if (r.application != results.front().application) {
      throw ConsistencyError("report: results cover different applications");
    }
    if (r.instance_ids != results.front().instance_ids || r.ground_energy != results.front().ground_energy) {
      throw ConsistencyError("report: results cover different test sets");
    }
  }
  Report rep;
  const SchemeResult* random = nullptr;
  const SchemeResult* gnn = nullptr;
  auto add = [&](std::string scheme, double init, double sm, double conv, std::size_t n) {
    rep.rows.push_back({scheme, "initial_loss", init, n});
    rep.rows.push_back({scheme, "smape", sm, n});
    rep.rows.push_back({scheme, "convergence_step", conv, n});
  };
  for (const auto& r : results) {
    add(std::string(to_string(r.scheme)), r.mean_initial_loss, r.smape, r.mean_converged_step, r.size());
    (r.scheme == Scheme::Random ? random : gnn) = &r;
  }
  if (random && gnn) {
    add("delta", gnn->mean_initial_loss - random->mean_initial_loss, gnn->smape - random->smape,
        gnn->mean_converged_step - random->mean_converged_step, gnn->size());
  }
  return rep;
}

std::string Report::table() const {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-8s %-18s %14s %6s\n", "scheme", "metric", "mean", "n");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-8s %-18s %14.6f %6zu\n", r.scheme.c_str(), r.metric.c_str(), r.mean, r.n);
    out << buf;
  }
  return out.str();
}

std::string Report::csv() const {
  std::string out = "scheme,metric,mean,n\n";
  for (const auto& r : rows) {
    out += r.scheme + "," + r.metric + "," + format_double(r.mean) + "," + std::to_string(r.n) + "\n";
  }
  return out;
}

std::string Report::json() const {
  JsonWriter w;
  w.begin_array();
  for (const auto& r : rows) {
    w.begin_object();
    w.key("scheme").value(r.scheme);
    w.key("metric").value(r.metric);
    w.key("mean").value(r.mean);
    w.key("n").value(static_cast<std::uint64_t>(r.n));
    w.end_object();
  }
  w.end_array();
  return w.take();
}

std::vector<ReportRow> parse_report_csv(std::string_view csv) {
  std::vector<ReportRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "scheme,metric,mean,n") throw ParseError(1, "unexpected CSV header: " + line);
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    if (cells.size() != 4) throw ParseError(line_no, "expected 4 columns");
    try {
      rows.push_back({cells[0], cells[1], std::stod(cells[2]), std::stoul(cells[3])});
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad number in: " + line);
    }
  }
  return rows;
}

}  // namespace qracle
