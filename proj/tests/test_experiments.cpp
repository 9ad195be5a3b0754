#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wingit/estimators.hpp"
#include "wingit/experiments.hpp"
#include "wingit/functionals.hpp"

namespace wingit {

namespace {

ExperimentSpec small_sticky_spec() {
  ExperimentSpec spec;
  spec.source = ChainSource{0.5, UniformAlphabet::scaled("1.2"), false};
  spec.n_grid = {60, 120};
  spec.tau_list = {TauLabel::fixed(1), TauLabel::fixed(4), TauLabel::tuned()};
  spec.trials = 25;
  spec.base_seed = Seed{8};
  return spec;
}

std::string csv(const std::vector<MseRow>& rows) {
  std::ostringstream out;
  write_mse_csv(out, rows);
  return out.str();
}

}  // namespace

TEST(UniformAlphabet, ParseAndScale) {
  EXPECT_EQ(UniformAlphabet::parse("uniform:600").size_for(123), 600U);
  const auto scaled = UniformAlphabet::parse("uniform:1.2n");
  EXPECT_EQ(scaled.size_for(500), 600U);
  EXPECT_EQ(scaled.size_for(8000), 9600U);
  EXPECT_EQ(scaled.size_for(1001), 1201U);
  EXPECT_EQ(scaled.size_for(1), 1U);
  EXPECT_EQ(scaled.descriptor(), "uniform:1.2n");
  EXPECT_EQ(UniformAlphabet::parse("uniform:4n").size_for(4000), 16000U);
  for (const char* bad : {"uniform:", "uniform:0", "zipf:3", "uniform:-3", "uniform:1.2.3n", "uniform:xn"}) {
    EXPECT_THROW((void)UniformAlphabet::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(SpecJson, ParsesAndRoundTrips) {
  const auto spec = parse_experiment_spec(R"({
    "source": {"kind": "sticky", "p": 0.5, "alphabet": "uniform:1.2n"},
    "n_grid": [500, 1000], "tau_list": [1, 4, "tuned"], "zeta": 2, "trials": 10, "base_seed": 7, "c_tune": 2.5})");
  EXPECT_EQ(std::get<ChainSource>(spec.source).p, 0.5);
  EXPECT_EQ(spec.n_grid, (std::vector<std::size_t>{500, 1000}));
  EXPECT_EQ(spec.tau_list.size(), 3U);
  EXPECT_FALSE(spec.tau_list[2].tau.has_value());
  EXPECT_EQ(spec.zeta, 2U);
  EXPECT_EQ(spec.base_seed.value, 7U);
  EXPECT_EQ(spec.c_tune, 2.5);
  const auto again = parse_experiment_spec(experiment_spec_to_json(spec));
  EXPECT_EQ(experiment_spec_to_json(again), experiment_spec_to_json(spec));
}

TEST(SpecJson, ErrorsCarryJsonPointer) {
  auto path_of = [](const char* text) {
    try {
      (void)parse_experiment_spec(text);
    } catch (const SpecError& e) {
      return e.path();
    }
    return std::string("<no error>");
  };
  const char* base_src = R"("source": {"kind": "iid"})";
  EXPECT_EQ(path_of((std::string("{") + base_src + R"(, "n_grid": [], "tau_list": [1], "trials": 3})").c_str()),
            "/n_grid");
  EXPECT_EQ(path_of((std::string("{") + base_src + R"(, "n_grid": [5, 0], "tau_list": [1], "trials": 3})").c_str()),
            "/n_grid/1");
  EXPECT_EQ(path_of((std::string("{") + base_src + R"(, "n_grid": [5], "tau_list": [1, "x"], "trials": 3})").c_str()),
            "/tau_list/1");
  EXPECT_EQ(path_of((std::string("{") + base_src + R"(, "n_grid": [5], "tau_list": [1], "trials": 0})").c_str()),
            "/trials");
  EXPECT_EQ(path_of((std::string("{") + base_src + R"(, "n_grid": [5], "tau_list": [1], "trials": 1, "tau": 3})").c_str()),
            "/tau");
  EXPECT_EQ(path_of(R"({"source": {"kind": "sticky", "p": 1.5}, "n_grid": [5], "tau_list": [1], "trials": 1})"),
            "/source/p");
  EXPECT_EQ(path_of(R"({"n_grid": [5], "tau_list": [1], "trials": 1})"), "/source");
  EXPECT_EQ(path_of("[1, 2"), "");
}

TEST(Percentile, NearestRank) {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  EXPECT_EQ(nearest_rank_percentile(v, 5), 5.0);
  EXPECT_EQ(nearest_rank_percentile(v, 95), 95.0);
  EXPECT_EQ(nearest_rank_percentile({3, 1, 2, 4, 5, 6, 7, 8, 9, 10}, 5), 1.0);
  EXPECT_EQ(nearest_rank_percentile({3, 1, 2, 4, 5, 6, 7, 8, 9, 10}, 95), 10.0);
  EXPECT_EQ(nearest_rank_percentile({0.4}, 5), 0.4);
  EXPECT_THROW((void)nearest_rank_percentile({}, 5), std::invalid_argument);
}

TEST(Summary, SingleTrialIsSquaredDifference) {
  const std::vector<double> e = {0.3};
  const std::vector<double> t = {0.55};
  const MseRow r = summarize_trials(e, t);
  EXPECT_DOUBLE_EQ(r.mse, 0.25 * 0.25);
  EXPECT_EQ(r.trials, 1U);
  EXPECT_EQ(r.est_p5, 0.3);
  EXPECT_EQ(r.true_p95, 0.55);
}

TEST(MseExperiment, OneTrialMatchesDirectComputation) {
  ExperimentSpec spec = small_sticky_spec();
  spec.trials = 1;
  spec.n_grid = {90};
  spec.tau_list = {TauLabel::fixed(3)};
  const auto rows = run_mse_experiment(spec);
  ASSERT_EQ(rows.size(), 1U);
  const auto model = std::get<ChainSource>(spec.source).model_for(90);
  const auto x = sample_trajectory(model, 90, derive_seed(spec.base_seed, 90, 0));
  const double d = wingit(x, 3).value() - missing_mass(model.stationary(), x);
  EXPECT_DOUBLE_EQ(rows[0].mse, d * d);
  EXPECT_EQ(rows[0].tau_label, "3");
  EXPECT_EQ(rows[0].estimator, "wingit");
}

TEST(MseExperiment, RowInvariantsAndOrder) {
  ExperimentSpec spec = small_sticky_spec();
  for (std::size_t zeta : {0UL, 2UL}) {
    spec.zeta = zeta;
    const auto rows = run_mse_experiment(spec);
    ASSERT_EQ(rows.size(), 6U);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      EXPECT_EQ(r.n, spec.n_grid[i / 3]);
      EXPECT_EQ(r.tau_label, spec.tau_list[i % 3].str());
      EXPECT_EQ(r.zeta, zeta);
      EXPECT_EQ(r.estimator, zeta == 0 ? "wingit" : "wingit_small_count");
      EXPECT_GE(r.mse, 0.0);
      const double bias = r.mean_estimate - r.mean_true;
      EXPECT_GE(r.mse, bias * bias - 1e-9);
      EXPECT_LE(r.est_p5, r.est_p95);
      EXPECT_LE(r.true_p5, r.true_p95);
      for (double v : {r.mean_estimate, r.mean_true, r.est_p5, r.est_p95, r.true_p5, r.true_p95}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(MseExperiment, DeterministicAcrossThreadCounts) {
  const ExperimentSpec spec = small_sticky_spec();
  const std::string one = csv(run_mse_experiment(spec, RunOptions{1}));
  EXPECT_EQ(one, csv(run_mse_experiment(spec, RunOptions{1})));
  EXPECT_EQ(one, csv(run_mse_experiment(spec, RunOptions{4})));
  EXPECT_EQ(one.substr(0, one.find('\n')), std::string(kMseCsvHeader));
}

TEST(MseExperiment, CorpusWindowsUseEmpiricalLaw) {
  SymbolTable table;
  std::vector<Symbol> tokens;
  for (int i = 0; i < 200; ++i) tokens.push_back(table.intern("w" + std::to_string((i * 7) % 23)));
  const Corpus corpus(std::move(table), std::move(tokens));
  ExperimentSpec spec;
  spec.source = CorpusSource{"unused", std::nullopt};
  spec.n_grid = {30, 60};
  spec.tau_list = {TauLabel::fixed(1), TauLabel::tuned()};
  const auto rows = run_mse_experiment(spec, corpus);
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].trials, window_starts(200, 30).size());
  EXPECT_EQ(rows[2].trials, window_starts(200, 60).size());
  spec.n_grid = {201};
  try {
    (void)run_mse_experiment(spec, corpus);
    ADD_FAILURE() << "n > N accepted";
  } catch (const SpecError& e) {
    EXPECT_EQ(e.path(), "/n_grid");
    EXPECT_NE(std::string(e.what()).find("n = 201"), std::string::npos);
  }
}

TEST(MseExperiment, CsvFormatting) {
  MseRow r;
  r.n = 500;
  r.tau_label = "tuned";
  r.estimator = "wingit";
  r.mse = 1.0 / 3.0;
  r.mean_estimate = 0.5;
  r.trials = 100;
  const std::string out = csv({r});
  EXPECT_NE(out.find("500,tuned,0,wingit,0.3333333333,0.5,0,0,0,0,0,100\n"), std::string::npos);
}

TEST(BiasDemo, GoodTuringUnderestimatesOnStickyChain) {
  const std::size_t n = 4000;
  const auto s = run_bias_demo(0.25, n, 4 * n, 100, Seed{1});
  EXPECT_LE(s.mean_good_turing, 0.25 + 0.02);
  EXPECT_GE(s.mean_true_mass, 0.70);
  EXPECT_GT(s.mean_abs_error, 0.4);
}

TEST(BiasDemo, IidErrorShrinks) {
  const auto small = run_bias_demo(1.0, 500, 600, 100, Seed{2});
  const auto large = run_bias_demo(1.0, 8000, 9600, 100, Seed{2});
  EXPECT_LT(small.mean_abs_error, 0.05);
  EXPECT_LT(large.mean_abs_error, small.mean_abs_error);
  EXPECT_THROW((void)run_bias_demo(0.5, 100, 100, 0, Seed{0}), std::invalid_argument);
}

TEST(VarianceProbe, ConstantChainHasZeroVariance) {
  ExperimentSpec spec;
  spec.source = ChainSource{1.0, UniformAlphabet::fixed(1), true};
  spec.n_grid = {10, 20};
  spec.trials = 5;
  for (const auto& row : variance_probe(spec)) {
    EXPECT_EQ(row.variance, 0.0);
    EXPECT_EQ(row.mean, 0.0);
  }
}

TEST(VarianceProbe, IidWithinBound) {
  ExperimentSpec spec;
  spec.source = ChainSource{1.0, UniformAlphabet::scaled("1.2"), true};
  spec.n_grid = {8000};
  spec.trials = 200;
  const auto rows = variance_probe(spec);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_GT(rows[0].variance, 0.0);
  EXPECT_LE(rows[0].variance, 10.0 * std::log(1.0 + 8000.0) / 8000.0);
}

TEST(Fuzz, NormalizedChangeWithinBound) {
  const auto s = bounded_difference_fuzz(2000, Seed{4});
  EXPECT_LE(s.max_normalized, 1.0);
  EXPECT_GT(s.max_normalized, 0.0);
  EXPECT_EQ(s.witness_ratio, 0.25);
  EXPECT_EQ(s.perturbations, 2000U);
}

TEST(Fuzz, WitnessShape) {
  const auto [x, y] = tightness_witness(3, 24);
  ASSERT_EQ(x.size(), 24U);
  for (std::size_t i = 0; i < 24; ++i) {
    const Symbol expected = i < 3 ? 0 : 1;
    EXPECT_EQ(y[i], expected);
    EXPECT_EQ(x[i], i == 6 ? 0U : expected);
  }
  EXPECT_THROW((void)tightness_witness(3, 6), std::invalid_argument);
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("WINGIT_THREADS", "3", 1);
  EXPECT_EQ(threads_from_environment(), 3U);
  ::setenv("WINGIT_THREADS", "zero", 1);
  EXPECT_THROW((void)threads_from_environment(), std::invalid_argument);
  ::unsetenv("WINGIT_THREADS");
  EXPECT_GE(threads_from_environment(), 1U);
}

}  // namespace wingit
