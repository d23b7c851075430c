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

#include "qracle/errors.hpp"
#include "qracle/eval.hpp"
#include "qracle/rng.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>

using namespace qracle;

namespace {

using V = std::vector<double>;

std::vector<VqeRecord> small_dataset(std::size_t count = 4) {
  auto cfg = vqe_config_for(Application::HeisenbergXYZ);
  cfg.max_steps = 20;
  return build_dataset(Application::HeisenbergXYZ, count, DatasetOptions{}, cfg, 21).records;
}

EvalOptions short_eval() {
  EvalOptions opts;
  opts.vqe.max_steps = 30;
  opts.seed = 5;
  return opts;
}

}  // namespace

TEST(Metrics, Examples) {
  EXPECT_EQ(smape(V{1, 2, 3}, V{1, 2, 3}), 0.0);
  EXPECT_EQ(smape(V{1}, V{3}), 100.0);
  EXPECT_EQ(smape(V{0}, V{0}), 0.0);
  EXPECT_EQ(mre(V{2}, V{1}), 100.0);
  EXPECT_EQ(cosine_similarity(V{1, 2, 3}, V{1, 2, 3}), 1.0);
  EXPECT_EQ(cosine_similarity(V{1, 0}, V{0, 1}), 0.0);
  EXPECT_EQ(cosine_similarity(V{1, 0}, V{-2, 0}), -1.0);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(smape(V{1}, V{1, 2}), ShapeError);
  EXPECT_THROW(smape(V{}, V{}), ShapeError);
  EXPECT_THROW(mre(V{1}, V{0}), DomainError);
  EXPECT_THROW(cosine_similarity(V{0, 0}, V{1, 0}), DomainError);
}

TEST(Metrics, Properties) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    V a(5), b(5);
    for (auto& x : a) x = rng.uniform(-3, 3);
    for (auto& x : b) x = rng.uniform(-3, 3);
    const double s = smape(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 200.0);
    EXPECT_DOUBLE_EQ(s, smape(b, a));
    const double c = cosine_similarity(a, b);
    EXPECT_LE(std::abs(c), 1.0);
    V scaled = a;
    for (auto& x : scaled) x *= 2.5;
    EXPECT_NEAR(cosine_similarity(a, scaled), 1.0, 1e-12);
    EXPECT_GE(mre(a, b), 0.0);
  }
}

TEST(Schemes, Names) {
  EXPECT_EQ(scheme_from_string("gnn"), Scheme::Gnn);
  EXPECT_EQ(to_string(Scheme::Random), "random");
  EXPECT_THROW(scheme_from_string("zero"), UsageError);
}

TEST(Evaluate, RandomSchemeIsDeterministic) {
  const auto data = small_dataset();
  auto opts = short_eval();
  const auto a = evaluate_scheme(Scheme::Random, nullptr, data, opts);
  opts.jobs = 3;
  const auto b = evaluate_scheme(Scheme::Random, nullptr, data, opts);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), data.size());
}

TEST(Evaluate, InitialLossRecomputedIndependently) {
  const auto data = small_dataset();
  const auto opts = short_eval();
  const auto res = evaluate_scheme(Scheme::Random, nullptr, data, opts);
  const auto spec = ansatz_for(Application::HeisenbergXYZ);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& p = data[i].meta().params;
    const auto h = expand_to_matrix(heisenberg_xyz(4, p[0].second, p[1].second, p[2].second));
    const auto init = random_init(spec, opts.seed, data[i].meta().index);
    EXPECT_NEAR(res.initial_loss[i], energy(Observable(h), spec, init), 1e-12);
    EXPECT_EQ(res.ground_energy[i], data[i].ground_energy);
    EXPECT_GE(res.final_energy[i], res.ground_energy[i] - 1e-9);
  }
}

TEST(Evaluate, GnnSchemeUsesPredictions) {
  const auto data = small_dataset(2);
  auto cfg = gnn_config_for(Application::HeisenbergXYZ);
  cfg.gcn_hidden = cfg.gat_hidden = cfg.mlp_hidden = 8;
  const GnnModel m(cfg);
  const auto res = evaluate_scheme(Scheme::Gnn, &m, data, short_eval());
  const auto h = graph_to_matrix(data[0].graph);
  EXPECT_NEAR(res.initial_loss[0],
              energy(Observable(h), ansatz_for(Application::HeisenbergXYZ), predict_init(m, data[0].graph)), 1e-12);
  EXPECT_THROW(evaluate_scheme(Scheme::Gnn, nullptr, data, short_eval()), UsageError);
}

TEST(Report, IdenticalResultsGiveZeroDelta) {
  const auto data = small_dataset();
  auto a = evaluate_scheme(Scheme::Random, nullptr, data, short_eval());
  auto b = a;
  b.scheme = Scheme::Gnn;
  const std::vector<SchemeResult> both{a, b};
  const auto rep = report(both);
  ASSERT_EQ(rep.rows.size(), 9u);
  for (const auto& row : rep.rows) {
    if (row.scheme == "delta") {
      EXPECT_EQ(row.mean, 0.0) << row.metric;
    }
  }
}

TEST(Report, SingleSchemeHasNoDelta) {
  const auto data = small_dataset();
  const std::vector<SchemeResult> one{evaluate_scheme(Scheme::Random, nullptr, data, short_eval())};
  const auto rep = report(one);
  EXPECT_EQ(rep.rows.size(), 3u);
  for (const auto& row : rep.rows) EXPECT_NE(row.scheme, "delta");
}

TEST(Report, CsvRoundTripAndSmapeColumn) {
  const auto data = small_dataset();
  const auto r = evaluate_scheme(Scheme::Random, nullptr, data, short_eval());
  auto g = r;
  g.scheme = Scheme::Gnn;
  g.smape += 1.5;
  const std::vector<SchemeResult> both{r, g};
  const auto rep = report(both);
  const auto rows = parse_report_csv(rep.csv());
  ASSERT_EQ(rows.size(), rep.rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].scheme, rep.rows[k].scheme);
    EXPECT_EQ(rows[k].metric, rep.rows[k].metric);
    EXPECT_EQ(rows[k].mean, rep.rows[k].mean);
    EXPECT_EQ(rows[k].n, rep.rows[k].n);
  }
  bool saw = false;
  for (const auto& row : rows) {
    if (row.scheme == "random" && row.metric == "smape") {
      saw = true;
      EXPECT_EQ(row.mean, smape(r.final_energy, r.ground_energy));
    }
    if (row.scheme == "delta" && row.metric == "smape") {
      EXPECT_NEAR(row.mean, 1.5, 1e-12);
    }
  }
  EXPECT_TRUE(saw);
  EXPECT_FALSE(rep.table().empty());
  EXPECT_EQ(nlohmann::json::parse(rep.json()).size(), rep.rows.size());
}

TEST(Report, InconsistentResults) {
  const auto data = small_dataset();
  const auto a = evaluate_scheme(Scheme::Random, nullptr, data, short_eval());
  auto b = evaluate_scheme(Scheme::Random, nullptr, std::span(data).first(3), short_eval());
  b.scheme = Scheme::Gnn;
  const std::vector<SchemeResult> mixed{a, b};
  EXPECT_THROW(report(mixed), ConsistencyError);
  auto c = a;
  c.application = Application::Ising2D;
  const std::vector<SchemeResult> apps{a, c};
  EXPECT_THROW(report(apps), ConsistencyError);
  EXPECT_THROW(parse_report_csv("a,b\n"), ParseError);
}

TEST(SchemeResultJson, RoundTrip) {
  const auto data = small_dataset();
  const auto a = evaluate_scheme(Scheme::Random, nullptr, data, short_eval());
  EXPECT_EQ(scheme_result_from_json(scheme_result_to_json(a)), a);
  EXPECT_THROW(scheme_result_from_json("{}"), FormatError);
}
