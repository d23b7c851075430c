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

#include "cli_commands.hpp"

#include "qracle/dataset.hpp"
#include "qracle/errors.hpp"
#include "qracle/eval.hpp"
#include "qracle/gnn.hpp"
#include "qracle/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace qracle::cli {

namespace fs = std::filesystem;

namespace {

struct Global {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string out_dir = "runs";
};

struct GenDataArgs {
  std::string app;
  std::optional<std::size_t> count;
  std::optional<std::size_t> steps;
  std::optional<double> lr;
  std::string label_init = "shared";
  std::size_t history_cap = 1000;
  std::size_t min_terms = 4;
  std::size_t max_terms = 20;
  std::string h2_file;
  std::string output;
};

struct SplitArgs {
  std::string dataset;
  std::string output;
};

struct TrainArgs {
  std::string dataset;
  std::string split;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<double> lr;
  std::optional<double> weight_decay;
  std::optional<std::string> readout;
  std::optional<std::size_t> gcn_hidden;
  std::optional<std::size_t> gat_hidden;
  std::optional<std::size_t> mlp_hidden;
  std::optional<std::size_t> heads;
  double val_fraction = 0.15;
  std::string resume;
  std::string output;
};

struct InitArgs {
  std::string model;
  std::string graph;
  std::string dataset;
  std::size_t index = 0;
};

struct EvalArgs {
  std::string model;
  std::string dataset;
  std::string split;
  std::vector<std::string> schemes{"random", "gnn"};
  std::optional<std::size_t> steps;
  std::optional<double> lr;
};

struct CompareArgs {
  std::vector<std::string> results;
};

std::uint64_t resolve_seed(const Global& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("QRACLE_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("QRACLE_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value in " + path.string());
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

bool has_long_option(const CLI::App& app, const std::string& key) {
  for (const CLI::Option* opt : app.get_options()) {
    for (const auto& name : opt->get_lnames()) {
      if (name == key) return true;
    }
  }
  return false;
}

// Inserts the config file entries right after the subcommand name so that
// explicit flags, which come later, take precedence.
std::vector<std::string> apply_config(CLI::App& app, const std::vector<std::string>& args) {
  std::string config;
  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    if (sub_pos == args.size()) {
      for (const CLI::App* sub : app.get_subcommands({})) {
        if (sub->get_name() == args[i]) sub_pos = i;
      }
    }
  }
  if (config.empty() || sub_pos == args.size()) return args;
  const CLI::App* sub = app.get_subcommand(args[sub_pos]);

  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config(config)) {
    if (key == "config") continue;
    if (has_long_option(*sub, key) || has_long_option(app, key)) {
      injected.push_back("--" + key + "=" + value);
      continue;
    }
    bool known = false;
    for (const CLI::App* other : app.get_subcommands({})) known = known || has_long_option(*other, key);
    if (!known) throw UsageError("unknown config key '" + key + "' in " + config);
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1));
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos + 1), args.end());
  return out;
}

std::string option_value(const CLI::Option* opt) {
  if (opt->count() == 0) return opt->get_default_str();
  std::string joined;
  for (const auto& r : opt->reduced_results()) joined += (joined.empty() ? "" : ",") + r;
  return joined;
}

// Every effective option, one key=value line, readable back via --config.
std::string echo_config(const CLI::App& app, const CLI::App& sub, std::uint64_t seed) {
  std::ostringstream out;
  out << "# qracle " << sub.get_name() << "\n";
  out << "seed=" << seed << "\n";
  for (const CLI::App* scope : {&app, &sub}) {
    for (const CLI::Option* opt : scope->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string& key = opt->get_lnames().front();
      if (key == "help" || key == "config" || key == "seed") continue;
      const std::string value = option_value(opt);
      if (value.empty()) continue;
      out << key << "=" << value << "\n";
    }
  }
  return out.str();
}

fs::path make_run_dir(const Global& g, const std::string& command, std::uint64_t seed) {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream name;
  name << std::put_time(&tm, "%Y%m%dT%H%M%S") << "-" << command << "-seed" << seed;
  fs::path dir = fs::path(g.out_dir) / name.str();
  for (int k = 2; fs::exists(dir); ++k) dir = fs::path(g.out_dir) / (name.str() + "-" + std::to_string(k));
  fs::create_directories(dir);
  return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<VqeRecord> select(const std::vector<VqeRecord>& records, const std::vector<std::size_t>& idx) {
  std::vector<VqeRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) {
    if (i >= records.size()) {
      throw ConsistencyError("split index " + std::to_string(i) + " out of range for " +
                             std::to_string(records.size()) + " records");
    }
    out.push_back(records[i]);
  }
  return out;
}

std::vector<VqeRecord> load_nonempty(const std::string& path) {
  auto records = load_dataset(path);
  if (records.empty()) throw ShapeError("dataset " + path + " has no records");
  return records;
}

int cmd_gen_data(const GenDataArgs& a, std::uint64_t seed, std::size_t jobs, const fs::path& run_dir,
                 std::ostream& out, std::ostream& err) {
  const Application app = application_from_string(a.app);
  const auto t0 = std::chrono::steady_clock::now();
  DatasetOptions opts;
  opts.label_init = label_init_from_string(a.label_init);
  opts.history_cap = a.history_cap;
  opts.random_min_terms = a.min_terms;
  opts.random_max_terms = a.max_terms;
  if (!a.h2_file.empty()) opts.h2_path = a.h2_file;
  opts.jobs = jobs;
  opts.warn = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
  VqeConfig vqe = vqe_config_for(app);
  vqe.seed = seed;
  if (a.steps) vqe.max_steps = *a.steps;
  if (a.lr) vqe.learning_rate = *a.lr;

  const std::size_t count = a.count.value_or(default_count(app));
  const BuildResult built = build_dataset(app, count, opts, vqe, seed);
  const fs::path path = a.output.empty() ? run_dir / "dataset.jsonl" : fs::path(a.output);
  save_dataset(built.records, path);
  out << "records: " << built.records.size() << "\n"
      << "skipped: " << built.skipped.size() << "\n"
      << "wall_time_s: " << std::fixed << std::setprecision(2) << seconds_since(t0) << "\n"
      << "output: " << path.string() << "\n";
  return kOk;
}

int cmd_split(const SplitArgs& a, std::uint64_t seed, const fs::path& run_dir, std::ostream& out) {
  const auto records = load_dataset(a.dataset);
  const SplitManifest m = split(records, seed);
  const fs::path path = a.output.empty() ? run_dir / "split.json" : fs::path(a.output);
  write_file(path, split_to_json(m) + "\n");
  out << "train: " << m.train_indices.size() << "\n"
      << "test: " << m.test_indices.size() << "\n"
      << "output: " << path.string() << "\n";
  return kOk;
}

int cmd_train(const TrainArgs& a, std::uint64_t seed, const fs::path& run_dir, std::ostream& out) {
  const auto records = load_nonempty(a.dataset);
  const SplitManifest m = split_from_json(read_file(a.split));
  const auto train_records = select(records, m.train_indices);
  const Application app = records.front().meta().application;

  GnnConfig cfg = gnn_config_for(app);
  cfg.seed = seed;
  std::optional<GnnModel> model;
  if (!a.resume.empty()) {
    model.emplace(load_model(a.resume));
    const GnnConfig& saved = model->config();
    if (saved.application != app) {
      throw CompatibilityError("checkpoint was trained for '" + std::string(to_string(saved.application)) +
                               "', dataset is '" + std::string(to_string(app)) + "'");
    }
    cfg = saved;
    cfg.seed = seed;
  } else {
    if (a.gcn_hidden) cfg.gcn_hidden = *a.gcn_hidden;
    if (a.gat_hidden) cfg.gat_hidden = *a.gat_hidden;
    if (a.mlp_hidden) cfg.mlp_hidden = *a.mlp_hidden;
    if (a.heads) cfg.gat_heads = *a.heads;
    if (a.readout) cfg.readout = readout_from_string(*a.readout);
  }
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (a.lr) cfg.lr = *a.lr;
  if (a.weight_decay) cfg.weight_decay = *a.weight_decay;
  if (!model) model.emplace(cfg);

  if (!(a.val_fraction >= 0.0 && a.val_fraction < 1.0)) throw UsageError("val-fraction must be in [0, 1)");
  const auto n_val =
      static_cast<std::size_t>(std::llround(a.val_fraction * static_cast<double>(train_records.size())));
  std::vector<LabeledGraph> fit, val;
  for (std::size_t k = 0; k < train_records.size(); ++k) {
    const auto& r = train_records[k];
    (k < n_val ? val : fit).push_back({&r.graph, r.label});
  }

  const auto t0 = std::chrono::steady_clock::now();
  const TrainReport rep = train(*model, fit, val, cfg);
  const fs::path model_dir = a.output.empty() ? run_dir / "model" : fs::path(a.output);
  save_model(*model, model_dir);
  write_file(model_dir / "report.json", rep.to_json() + "\n");
  out << "train_graphs: " << fit.size() << "\n"
      << "val_graphs: " << val.size() << "\n"
      << "epochs: " << rep.epochs.size() << "\n"
      << "best_epoch: " << rep.best_epoch << "\n"
      << "best_score: " << format_double(rep.best_score) << "\n"
      << "wall_time_s: " << std::fixed << std::setprecision(2) << seconds_since(t0) << "\n"
      << "checkpoint: " << model_dir.string() << "\n";
  return kOk;
}

int cmd_init(const InitArgs& a, std::ostream& out) {
  const GnnModel model = load_model(a.model);
  HamiltonianGraph graph;
  if (!a.graph.empty()) {
    std::istringstream in(read_file(a.graph));
    std::string line;
    while (std::getline(in, line) && line.empty()) {
    }
    if (line.empty()) throw FormatError(a.graph + " contains no graph");
    graph = graph_from_json(std::string_view(line));
  } else if (!a.dataset.empty()) {
    const auto records = load_dataset(a.dataset);
    if (a.index >= records.size()) {
      throw IndexError("index " + std::to_string(a.index) + " out of range for " +
                       std::to_string(records.size()) + " records");
    }
    graph = records[a.index].graph;
  } else {
    throw UsageError("init needs --graph or --dataset");
  }
  JsonWriter w;
  w.array(predict_init(model, graph));
  out << w.str() << "\n";
  return kOk;
}

void emit_report(std::span<const SchemeResult> results, const fs::path& run_dir, std::ostream& out) {
  const Report rep = report(results);
  write_file(run_dir / "report.csv", rep.csv());
  write_file(run_dir / "report.json", rep.json() + "\n");
  write_file(run_dir / "report.txt", rep.table());
  out << rep.table();
}

int cmd_eval(const EvalArgs& a, std::uint64_t seed, std::size_t jobs, const fs::path& run_dir,
             std::ostream& out) {
  const auto records = load_nonempty(a.dataset);
  const SplitManifest m = split_from_json(read_file(a.split));
  const auto test = select(records, m.test_indices);
  if (test.empty()) throw ShapeError("split has no test indices");
  const Application app = test.front().meta().application;

  std::vector<Scheme> schemes;
  for (const auto& s : a.schemes) schemes.push_back(scheme_from_string(s));
  std::optional<GnnModel> model;
  for (auto s : schemes) {
    if (s == Scheme::Gnn && !model) {
      if (a.model.empty()) throw UsageError("the gnn scheme needs --model");
      model.emplace(load_model(a.model));
    }
  }

  EvalOptions opts;
  opts.vqe = vqe_config_for(app);
  opts.vqe.seed = seed;
  if (a.steps) opts.vqe.max_steps = *a.steps;
  if (a.lr) opts.vqe.learning_rate = *a.lr;
  opts.seed = seed;
  opts.jobs = jobs;

  std::vector<SchemeResult> results;
  for (auto s : schemes) {
    results.push_back(evaluate_scheme(s, model ? &*model : nullptr, test, opts));
    write_file(run_dir / (std::string(to_string(s)) + ".json"), scheme_result_to_json(results.back()) + "\n");
  }
  emit_report(results, run_dir, out);
  return kOk;
}

int cmd_compare(const CompareArgs& a, const fs::path& run_dir, std::ostream& out) {
  std::vector<SchemeResult> results;
  for (const auto& path : a.results) results.push_back(scheme_result_from_json(read_file(path)));
  emit_report(results, run_dir, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph-network initialization of variational quantum eigensolvers", "qracle"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--config", g.config, "key=value file; explicit flags override it");
  app.add_option("--seed", g.seed, "Global seed (falls back to QRACLE_SEED, then 0)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Root of the per-run output directories");

  GenDataArgs gd;
  auto* gen = app.add_subcommand("gen-data", "Sample instances and label them with VQE runs");
  gen->add_option("--app", gd.app, "heisenberg, ising, hubbard, h2 or random")->required();
  gen->add_option("--count", gd.count, "Number of instances (default: full dataset size)");
  gen->add_option("--steps", gd.steps, "VQE steps per instance");
  gen->add_option("--lr", gd.lr, "VQE learning rate");
  gen->add_option("--label-init", gd.label_init, "shared (default) or per_instance");
  gen->add_option("--history-cap", gd.history_cap, "Loss histories longer than this are decimated");
  gen->add_option("--min-terms", gd.min_terms, "Random Hamiltonians: fewest terms");
  gen->add_option("--max-terms", gd.max_terms, "Random Hamiltonians: most terms");
  gen->add_option("--h2-file", gd.h2_file, "H2 coefficient file");
  gen->add_option("--output", gd.output, "Dataset path (default: <run dir>/dataset.jsonl)");

  SplitArgs sa;
  auto* spl = app.add_subcommand("split", "Seeded 70/30 train/test split");
  spl->add_option("--dataset", sa.dataset)->required();
  spl->add_option("--output", sa.output, "Manifest path (default: <run dir>/split.json)");

  TrainArgs ta;
  auto* trn = app.add_subcommand("train", "Train the graph network on a dataset split");
  trn->add_option("--dataset", ta.dataset)->required();
  trn->add_option("--split", ta.split)->required();
  trn->add_option("--epochs", ta.epochs);
  trn->add_option("--batch-size", ta.batch_size);
  trn->add_option("--lr", ta.lr);
  trn->add_option("--weight-decay", ta.weight_decay);
  trn->add_option("--readout", ta.readout, "mean, sum or max");
  trn->add_option("--gcn-hidden", ta.gcn_hidden);
  trn->add_option("--gat-hidden", ta.gat_hidden);
  trn->add_option("--mlp-hidden", ta.mlp_hidden);
  trn->add_option("--heads", ta.heads);
  trn->add_option("--val-fraction", ta.val_fraction, "Share of the training split held out for model selection");
  trn->add_option("--resume", ta.resume, "Checkpoint directory to continue from");
  trn->add_option("--output", ta.output, "Checkpoint directory (default: <run dir>/model)");

  InitArgs ia;
  auto* ini = app.add_subcommand("init", "Print predicted initial parameters for one graph");
  ini->add_option("--model", ia.model)->required();
  ini->add_option("--graph", ia.graph, "File holding one graph or record JSON line");
  ini->add_option("--dataset", ia.dataset);
  ini->add_option("--index", ia.index);

  EvalArgs ea;
  auto* evl = app.add_subcommand("eval", "Compare Random and GNN initialization on the test split");
  evl->add_option("--model", ea.model);
  evl->add_option("--dataset", ea.dataset)->required();
  evl->add_option("--split", ea.split)->required();
  evl->add_option("--schemes", ea.schemes, "random, gnn or both")->delimiter(',');
  evl->add_option("--steps", ea.steps, "VQE steps per instance");
  evl->add_option("--lr", ea.lr, "VQE learning rate");

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Report from saved per-scheme results");
  cmp->add_option("--results", ca.results, "Scheme result JSON files")->required()->delimiter(',');

  try {
    std::vector<std::string> argv = apply_config(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  try {
    const std::uint64_t seed = resolve_seed(g);
    CLI::App* sub = app.get_subcommands().front();
    if (sub == ini) return cmd_init(ia, out);
    const std::string name = sub->get_name();
    const fs::path run_dir = make_run_dir(g, name, seed);
    write_file(run_dir / "config.txt", echo_config(app, *sub, seed));
    out << "run_dir: " << run_dir.string() << "\n";
    if (sub == gen) return cmd_gen_data(gd, seed, g.jobs, run_dir, out, err);
    if (sub == spl) return cmd_split(sa, seed, run_dir, out);
    if (sub == trn) return cmd_train(ta, seed, run_dir, out);
    if (sub == evl) return cmd_eval(ea, seed, g.jobs, run_dir, out);
    return cmd_compare(ca, run_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace qracle::cli
