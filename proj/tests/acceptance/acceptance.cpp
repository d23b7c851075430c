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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails. `acceptance 1 3 7` runs a subset.

#include "qracle/dataset.hpp"
#include "qracle/errors.hpp"
#include "qracle/eval.hpp"
#include "qracle/gnn.hpp"
#include "qracle/parallel.hpp"
#include "qracle/rng.hpp"
#include "qracle/sim.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace qracle;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t hw_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

PauliSum random_sum(Rng& rng, std::size_t n) {
  static const char letters[] = "IXYZ";
  PauliSum h(n);
  const std::size_t terms = 1 + rng.below(12);
  for (std::size_t t = 0; t < terms; ++t) {
    std::string s(n, 'I');
    for (auto& c : s) c = letters[rng.below(4)];
    h.add(Complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), s);
  }
  return h;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto h = random_sum(rng, 1 + rng.below(4));
    const Eigen::MatrixXcd got = expand_to_matrix(h).to_dense();
    worst = std::max(worst, (got - oracle::dense_sum(h)).cwiseAbs().maxCoeff());
  }
  const double t = seconds(t0);
  return {worst <= 1e-12 && t < 10.0, fmt("max |diff| %.3g over 200 sums, %.2fs", worst, t)};
}

Outcome jw_correctness() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::size_t compared = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    Rng rng(n);
    for (int trial = 0; trial < 5; ++trial) {
      const double t = rng.uniform(-2, 2), u = rng.uniform(-2, 2);
      const auto h = fermi_hubbard(n, t, u);
      ok = ok && oracle::to_poly(h) == oracle::hubbard(n, t, u);
      for (const auto& term : h.terms()) ok = ok && term.coeff.imag() == 0.0;
      compared += h.size();
    }
  }
  const double t = seconds(t0);
  return {ok && t < 5.0, fmt("%zu coefficients compared, %.2fs", compared, t)};
}

Outcome ground_energies() {
  const double heis = min_eigenvalue(expand_to_matrix(heisenberg_xyz(4, 1, 1, 1)));
  double h2 = std::nan("");
  for (const auto& inst : load_h2(default_h2_path())) {
    if (std::abs(*inst.meta.param("bond_length_angstrom") - 0.74) < 1e-9) {
      h2 = min_eigenvalue(expand_to_matrix(inst.hamiltonian));
    }
  }
  const bool ok = std::abs(heis + 8.0) <= 1e-9 && std::abs(h2 + 1.136) <= 5e-3;
  return {ok, fmt("Heisenberg %.12f, H2(0.74) %.6f", heis, h2)};
}

Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (auto f : {AnsatzFamily::ManyBody, AnsatzFamily::Molecular, AnsatzFamily::Random}) {
    const AnsatzSpec spec{f, 4, 2};
    const Observable obs(expand_to_matrix(random_hamiltonian(4, 15, {-1, 1}, 77)));
    Rng rng(static_cast<std::uint64_t>(f) + 10);
    for (int point = 0; point < 20; ++point) {
      std::vector<double> theta(spec.n_params());
      for (auto& x : theta) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const auto g = parameter_shift_grad(obs, spec, theta);
      const auto fd =
          oracle::central_diff([&](const std::vector<double>& x) { return energy(obs, spec, x); }, theta, 1e-5);
      worst = std::max(worst, oracle::rel_err(g, fd));
    }
  }
  const double t = seconds(t0);
  return {worst <= 1e-6 && t < 30.0, fmt("max relative error %.3g, %.2fs", worst, t)};
}

Outcome variational_bound() {
  const auto t0 = Clock::now();
  DatasetOptions opts;
  opts.history_cap = std::numeric_limits<std::size_t>::max();
  opts.jobs = hw_jobs();
  const auto vqe = vqe_config_for(Application::HeisenbergXYZ);
  const auto res = build_dataset(Application::HeisenbergXYZ, 50, opts, vqe, 5);
  std::size_t checked = 0, violations = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : res.records) {
    // Ground energy recomputed here rather than taken from the record.
    const auto& p = r.meta().params;
    const double e0 = min_eigenvalue(expand_to_matrix(heisenberg_xyz(4, p[0].second, p[1].second, p[2].second)));
    for (double l : r.loss_history) {
      ++checked;
      min_gap = std::min(min_gap, l - e0);
      if (l < e0 - 1e-9) ++violations;
    }
    ++checked;
    if (r.final_loss < e0 - 1e-9) ++violations;
  }
  const bool ok = res.records.size() == 50 && violations == 0;
  return {ok, fmt("%zu records, %zu losses, %zu violations, min gap %.3g, %.1fs", res.records.size(), checked,
                  violations, min_gap, seconds(t0))};
}

Outcome gnn_fidelity() {
  // 3-node graph with distinct features and weights.
  HamiltonianGraph g;
  g.n_nodes = 3;
  g.node_features.resize(3, 2);
  g.node_features << -1.5, 2.0, 0.8, -0.3, 2.2, 1.1;
  g.meta = {Application::RandomVQE, 0, 1, {}};
  for (auto [p, q, w] : {std::tuple{0, 1, 0.6}, {1, 0, 0.6}, {1, 2, 1.3}, {2, 1, 1.3}, {2, 2, -0.4}}) {
    g.edges.emplace_back(p, q);
    g.edge_weights.emplace_back(w, 0.0);
  }

  // Reduced widths keep finite differences over every weight tractable.
  GnnConfig cfg = gnn_config_for(Application::RandomVQE);
  cfg.gcn_hidden = 6;
  cfg.gat_hidden = 5;
  cfg.mlp_hidden = 7;
  cfg.gat_heads = 2;
  cfg.out_dim = 4;
  cfg.seed = 42;
  GnnModel m(cfg);
  // Glorot weights shrink the signal layer by layer at these widths; wider
  // draws keep every attention path well above finite-difference noise.
  Rng wrng(5);
  for (auto& nt : m.named_parameters()) {
    const bool bias = nt.name.find("bias") != std::string::npos;
    for (Eigen::Index k = 0; k < nt.tensor.value().size(); ++k) {
      nt.tensor.value().data()[k] = bias ? wrng.uniform(0.0, 0.5) : wrng.uniform(-1.0, 1.0);
    }
  }
  const auto batch = make_batch(prepare_graph(g));
  Rng rng(43);
  ad::Matrix target(1, 4);
  for (Eigen::Index k = 0; k < 4; ++k) target(0, k) = rng.uniform(-1, 1);
  auto loss = [&] {
    ad::Tape tape;
    tape.set_recording(false);
    return ad::mse(tape, m.forward(tape, batch), ad::Tensor::constant(target)).item();
  };
  {
    ad::Tape tape;
    for (auto& p : m.parameters()) p.zero_grad();
    tape.backward(ad::mse(tape, m.forward(tape, batch), ad::Tensor::constant(target)));
  }
  double worst_grad = 0.0, min_norm = std::numeric_limits<double>::infinity(), att_dst_norm = 0.0;
  for (auto& nt : m.named_parameters()) {
    ad::Matrix& v = nt.tensor.value();
    ad::Matrix fd(v.rows(), v.cols());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const double x0 = v.data()[k], h = 1e-4;
      v.data()[k] = x0 + h;
      const double fp = loss();
      v.data()[k] = x0 - h;
      const double fm = loss();
      v.data()[k] = x0;
      fd.data()[k] = (fp - fm) / (2 * h);
    }
    worst_grad = std::max(worst_grad, (nt.tensor.grad() - fd).norm() / std::max(fd.norm(), 1e-8));
    // A receiver-side score shifts all incoming logits equally, so its
    // gradient vanishes whenever those logits share a LeakyReLU branch.
    if (nt.name.find("att_dst") != std::string::npos) {
      att_dst_norm = std::max(att_dst_norm, fd.norm());
    } else {
      min_norm = std::min(min_norm, fd.norm());
    }
  }

  // Attention normalization and permutation invariance at full width.
  const GnnModel full(gnn_config_for(Application::RandomVQE));
  double worst_rows = 0.0, worst_perm = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto hg = hamiltonian_to_graph(random_hamiltonian(4, 12, {-1, 1}, seed), {Application::RandomVQE, 0, 4, {}});
    const auto b = make_batch(prepare_graph(hg));
    ad::Tape tape;
    tape.set_recording(false);
    ad::Tensor x = ad::Tensor::constant(b.features);
    for (const auto& l : full.gcn) x = gcn_forward(tape, x, b, l);
    for (const auto& layer : full.gat) {
      for (const auto& head : layer.heads) {
        const ad::Matrix alpha = gat_attention(x.value(), b, head);
        std::vector<double> sum(hg.n_nodes, 0.0);
        for (std::size_t e = 0; e < b.att_dst.size(); ++e) sum[b.att_dst[e]] += alpha(static_cast<Eigen::Index>(e), 0);
        for (double s : sum) worst_rows = std::max(worst_rows, std::abs(s - 1.0));
      }
      x = gat_forward(tape, x, b, layer);
    }
    std::vector<std::size_t> perm(hg.n_nodes);
    std::iota(perm.begin(), perm.end(), 0);
    Rng(seed + 100).shuffle(perm);
    const auto a = model_forward(full, hg), c = model_forward(full, permute_nodes(hg, perm));
    for (std::size_t k = 0; k < a.size(); ++k) worst_perm = std::max(worst_perm, std::abs(a[k] - c[k]));
  }
  // A dead network would pass vacuously.
  const bool ok = min_norm > 1e-9 && att_dst_norm > 1e-9 && worst_grad <= 1e-4 && worst_rows <= 1e-12 && worst_perm <= 1e-9;
  return {ok, fmt("grad rel err %.3g (smallest tensor gradient %.3g), attention row error %.3g, "
                  "permutation diff %.3g",
                  worst_grad, min_norm, worst_rows, worst_perm)};
}

Outcome metric_values() {
  using V = std::vector<double>;
  const double trace[] = {1.5, 1.5, 1.5, 1.5};
  const bool ok = smape(V{1, -2, 3}, V{1, -2, 3}) == 0.0 && smape(V{1}, V{3}) == 100.0 &&
                  mre(V{2}, V{1}) == 100.0 && cosine_similarity(V{0.3, -1.7, 2}, V{0.3, -1.7, 2}) == 1.0 &&
                  convergence_step(trace, 1e-5) == std::optional<std::size_t>(1);
  return {ok, "smape 0/100, mre 100, cosine 1, constant trace converges at step 1"};
}

struct SeedOutcome {
  SchemeResult random, gnn;
  double seconds = 0.0;
};

SeedOutcome reproduce_seed(std::uint64_t seed, std::size_t jobs) {
  const auto t0 = Clock::now();
  DatasetOptions opts;
  opts.jobs = jobs;
  VqeConfig vqe = vqe_config_for(Application::HeisenbergXYZ);
  vqe.max_steps = 500;
  vqe.seed = seed;
  const auto built = build_dataset(Application::HeisenbergXYZ, 300, opts, vqe, seed);
  const auto sp = split(built.records, seed);

  // Model selection holds out 15% of the training split.
  const auto n_val = static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(sp.train_indices.size())));
  std::vector<LabeledGraph> fit, val;
  for (std::size_t k = 0; k < sp.train_indices.size(); ++k) {
    const auto& r = built.records[sp.train_indices[k]];
    (k < n_val ? val : fit).push_back({&r.graph, r.label});
  }
  GnnConfig cfg = gnn_config_for(Application::HeisenbergXYZ);
  cfg.seed = seed;
  cfg.epochs = 100;
  GnnModel model(cfg);
  train(model, fit, val, cfg);

  std::vector<VqeRecord> test;
  for (auto i : sp.test_indices) test.push_back(built.records[i]);
  EvalOptions eo;
  eo.vqe = vqe;
  eo.seed = seed;
  eo.jobs = jobs;
  SeedOutcome out;
  out.random = evaluate_scheme(Scheme::Random, nullptr, test, eo);
  out.gnn = evaluate_scheme(Scheme::Gnn, &model, test, eo);
  out.seconds = seconds(t0);
  return out;
}

Outcome directional_reproduction() {
  const auto t0 = Clock::now();
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<SeedOutcome> res(seeds.size());
  const std::size_t outer = std::min(seeds.size(), hw_jobs());
  const std::size_t inner = std::max<std::size_t>(1, hw_jobs() / outer);
  parallel_for(seeds.size(), outer, [&](std::size_t i) { res[i] = reproduce_seed(seeds[i], inner); });

  int a = 0, b = 0, c = 0;
  std::ostringstream detail;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& r = res[i];
    const bool pa = r.gnn.mean_initial_loss < r.random.mean_initial_loss;
    const bool pb = r.gnn.mean_converged_step <= 0.95 * r.random.mean_converged_step;
    const bool pc = r.gnn.smape <= r.random.smape + 2.0;
    a += pa;
    b += pb;
    c += pc;
    std::printf("    seed %llu: initial loss gnn %.4f random %.4f | convergence gnn %.2f random %.2f | "
                "smape gnn %.3f random %.3f | %.0fs\n",
                static_cast<unsigned long long>(seeds[i]), r.gnn.mean_initial_loss, r.random.mean_initial_loss,
                r.gnn.mean_converged_step, r.random.mean_converged_step, r.gnn.smape, r.random.smape, r.seconds);
  }
  detail << "(a) " << a << "/3, (b) " << b << "/3, (c) " << c << "/3 seeds; " << fmt("%.0fs", seconds(t0));
  return {a >= 2 && b >= 2 && c >= 2, detail.str()};
}

std::vector<char> bytes_of_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<char> out;
  for (const auto& f : files) {
    const auto name = fs::relative(f, dir).string();
    out.insert(out.end(), name.begin(), name.end());
    const auto body = read_file(f);
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "qracle_acceptance_determinism";
  fs::remove_all(root);
  auto run_once = [&](int k) {
    DatasetOptions opts;
    opts.jobs = hw_jobs();
    VqeConfig vqe = vqe_config_for(Application::HeisenbergXYZ);
    vqe.max_steps = 200;
    const auto recs = build_dataset(Application::HeisenbergXYZ, 24, opts, vqe, 9).records;
    const auto dir = root / std::to_string(k);
    save_dataset(recs, dir / "dataset.jsonl");
    const auto sp = split(recs, 9);
    write_file(dir / "split.json", split_to_json(sp));
    std::vector<LabeledGraph> fit;
    for (auto i : sp.train_indices) fit.push_back({&recs[i].graph, recs[i].label});
    GnnConfig cfg = gnn_config_for(Application::HeisenbergXYZ);
    cfg.seed = 9;
    cfg.epochs = 2;
    cfg.batch_size = 8;
    GnnModel m(cfg);
    const auto rep = train(m, fit, {}, cfg);
    save_model(m, dir / "model");
    write_file(dir / "report.json", rep.to_json());
    return bytes_of_dir(dir);
  };
  const auto first = run_once(1), second = run_once(2);
  fs::remove_all(root);
  return {first == second, fmt("dataset, split, checkpoint and report: %zu bytes compared", first.size())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "Jordan-Wigner correctness", jw_correctness},
      {3, "ground energies", ground_energies},
      {4, "parameter-shift gradient fidelity", gradient_fidelity},
      {5, "variational bound", variational_bound},
      {6, "GNN gradient fidelity", gnn_fidelity},
      {7, "metric unit values", metric_values},
      {8, "desk-scale directional reproduction", directional_reproduction},
      {9, "determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
