// wingit: simulate chains, estimate missing mass, tune windows, run experiments.
//
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wingit/estimators.hpp"
#include "wingit/experiments.hpp"
#include "wingit/markov.hpp"
#include "wingit/text_ingest.hpp"
#include "wingit/trajectory_io.hpp"
#include "wingit/tuning.hpp"

namespace fs = std::filesystem;
using namespace wingit;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// results.csv -> results.json; tokens -> tokens.json.
fs::path sidecar_path(fs::path out) {
  if (out.extension() == ".json") {
    out += ".json";
  } else {
    out.replace_extension(".json");
  }
  return out;
}

std::ofstream open_output(const fs::path& path, const char* flag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(std::string(flag) + ": cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

unsigned worker_threads() {
  try {
    return threads_from_environment();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string chain;
  std::optional<double> p;
  std::string alphabet;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_simulate(const SimulateArgs& a) {
  UniformAlphabet alphabet = UniformAlphabet::fixed(1);
  try {
    alphabet = UniformAlphabet::parse(a.alphabet);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--alphabet: ") + e.what());
  }
  if (a.n == 0) throw UsageError("--n: must be >= 1");
  double p = 1.0;
  if (a.chain == "sticky") {
    if (!a.p) throw UsageError("--p: required for --chain sticky");
    if (!(*a.p > 0.0 && *a.p <= 1.0)) throw UsageError("--p: must lie in (0, 1]");
    p = *a.p;
  } else if (a.p && *a.p != 1.0) {
    throw UsageError("--p: an iid chain has p = 1");
  }
  const std::size_t k = alphabet.size_for(a.n);
  if (k > std::size_t{1} << 32) throw UsageError("--alphabet: at most 2^32 symbols");
  const MarkovModel model = build_sticky_chain(p, Distribution::uniform(k));
  const Trajectory x = sample_trajectory(model, a.n, Seed{a.seed});
  if (a.out.empty() || a.out == "-") {
    write_trajectory(std::cout, x);
  } else {
    auto out = open_output(a.out, "--out");
    write_trajectory(out, x);
    finish_output(out, a.out);
  }
  std::cerr << "n=" << a.n << " alphabet_size=" << k << '\n';
}

// ------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string in;
  std::string estimator;
  std::optional<std::int64_t> tau;
  std::int64_t zeta = 0;
  bool numeric = false;
};

void cmd_estimate(const EstimateArgs& a) {
  if (a.zeta < 0) throw UsageError("--zeta: must be >= 0");
  const auto zeta = static_cast<std::size_t>(a.zeta);
  const LoadedTrajectory loaded = read_trajectory_file(a.in, a.numeric);
  const TrajectoryView x(loaded.trajectory);

  Estimate result;
  if (a.estimator == "gt") {
    if (a.tau && *a.tau != 1) throw UsageError("--tau: gt has no window (use --estimator wingit)");
    result = zeta == 0 ? good_turing(x) : good_turing_small_count(x, zeta);
  } else {
    if (!a.tau) throw UsageError("--tau: required for --estimator " + a.estimator);
    if (*a.tau < 1 || static_cast<std::uint64_t>(*a.tau) > x.size()) {
      throw UsageError("--tau: must lie in [1, n] with n = " + std::to_string(x.size()));
    }
    const auto tau = static_cast<std::size_t>(*a.tau);
    if (a.estimator == "wingit") {
      result = zeta == 0 ? wingit::wingit(x, tau) : wingit_small_count(x, tau, zeta);
    } else {
      result = zeta == 0 ? wingit_naive(x, tau) : wingit_small_count_naive(x, tau, zeta);
    }
  }
  std::cout << format_number(result.value()) << '\n';
}

// ----------------------------------------------------------------- tune

struct TuneArgs {
  std::string in;
  double ctune = 1.0;
  bool numeric = false;
};

void cmd_tune(const TuneArgs& a) {
  if (!(a.ctune > 0.0)) throw UsageError("--ctune: must be positive");
  const LoadedTrajectory loaded = read_trajectory_file(a.in, a.numeric);
  if (loaded.trajectory.size() < kMinTuningLength) {
    throw std::runtime_error("tuning needs n >= " + std::to_string(kMinTuningLength) + ", got n = " +
                             std::to_string(loaded.trajectory.size()));
  }
  const TuneResult r = tune_window(loaded.trajectory, TuneConfig{a.ctune, {}});
  std::cout << "tau_hat " << r.tau_hat << '\n';
  std::cout << "holdout " << format_number(r.holdout_estimate.value()) << '\n';
  std::cout << "fallback " << (r.fell_back ? "yes" : "no") << '\n';
  std::cout << "tau lhs rhs\n";
  for (const auto& c : r.criterion_values) {
    std::cout << c.tau << ' ' << format_number(c.lhs) << ' ' << format_number(c.rhs) << '\n';
  }
}

// ----------------------------------------------------------- experiment

void write_experiment_outputs(const fs::path& out_path, const ExperimentSpec& spec, const std::vector<MseRow>& rows,
                              const nlohmann::json& extra) {
  {
    auto out = open_output(out_path, "--out");
    write_mse_csv(out, rows);
    finish_output(out, out_path);
  }
  nlohmann::json provenance;
  provenance["spec"] = nlohmann::json::parse(experiment_spec_to_json(spec));
  for (const auto& [key, value] : extra.items()) provenance[key] = value;
  const fs::path side = sidecar_path(out_path);
  auto out = open_output(side, "--out");
  out << provenance.dump(2) << '\n';
  finish_output(out, side);
}

struct ExperimentArgs {
  std::string config;
  std::string out;
};

void cmd_experiment(const ExperimentArgs& a) {
  const std::string text = read_text_file(a.config);
  ExperimentSpec spec;
  try {
    spec = parse_experiment_spec(text);
  } catch (const SpecError& e) {
    throw UsageError("--config " + a.config + ": " + e.what());
  }
  // Corpus paths in a config are relative to the config file.
  if (auto* corpus = std::get_if<CorpusSource>(&spec.source)) {
    const fs::path base = fs::path(a.config).parent_path();
    if (corpus->text.is_relative()) corpus->text = base / corpus->text;
    if (corpus->collocations && corpus->collocations->is_relative()) {
      corpus->collocations = base / *corpus->collocations;
    }
  }
  const RunOptions opts{worker_threads()};
  std::vector<MseRow> rows;
  try {
    rows = run_mse_experiment(spec, opts);
  } catch (const SpecError& e) {
    throw UsageError("--config " + a.config + ": " + e.what());
  }
  write_experiment_outputs(a.out, spec, rows, nlohmann::json{{"config", a.config}});
}

// --------------------------------------------------------------- corpus

struct CorpusArgs {
  std::string text;
  std::string collocations;
  std::string out;
  std::vector<std::size_t> n_grid = {600, 1200, 2400, 4800, 9600, 19200};
  std::vector<std::string> tau_list = {"1", "8", "32", "tuned"};
  std::int64_t zeta = 0;
  double ctune = 1.0;
};

Corpus load_corpus(const CorpusArgs& a) {
  std::vector<CollocationRule> rules;
  if (!a.collocations.empty()) {
    try {
      rules = parse_collocations(read_text_file(a.collocations));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("--collocations: " + std::string(e.what()));
    }
  }
  try {
    return tokenize(read_text_file(a.text), rules);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("--text: " + std::string(e.what()));
  }
}

void cmd_corpus_prepare(const CorpusArgs& a) {
  const Corpus corpus = load_corpus(a);
  {
    auto out = open_output(a.out, "--out");
    write_trajectory(out, corpus.tokens(), corpus.symbol_table());
    finish_output(out, a.out);
  }
  nlohmann::json freq = nlohmann::json::array();
  for (std::size_t id = 0; id < corpus.vocabulary_size(); ++id) {
    const auto s = static_cast<Symbol>(id);
    freq.push_back({{"token", corpus.symbol_table().token(s)},
                    {"count", corpus.counts()[id]},
                    {"pi", corpus.empirical_pi()[s]}});
  }
  const nlohmann::json sidecar{
      {"N", corpus.length()}, {"vocabulary_size", corpus.vocabulary_size()}, {"frequencies", freq}};
  const fs::path side = sidecar_path(a.out);
  auto out = open_output(side, "--out");
  out << sidecar.dump(2) << '\n';
  finish_output(out, side);
  std::cerr << "N=" << corpus.length() << " vocabulary_size=" << corpus.vocabulary_size() << '\n';
}

void cmd_corpus_experiment(const CorpusArgs& a) {
  if (a.zeta < 0) throw UsageError("--zeta: must be >= 0");
  ExperimentSpec spec;
  CorpusSource source{a.text, std::nullopt};
  if (!a.collocations.empty()) source.collocations = a.collocations;
  spec.source = source;
  spec.n_grid = a.n_grid;
  spec.tau_list.clear();
  for (const auto& t : a.tau_list) {
    if (t == "tuned") {
      spec.tau_list.push_back(TauLabel::tuned());
      continue;
    }
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || v == 0) {
      throw UsageError("--tau-list: '" + t + "' is not a positive integer or 'tuned'");
    }
    spec.tau_list.push_back(TauLabel::fixed(v));
  }
  spec.zeta = static_cast<std::size_t>(a.zeta);
  spec.c_tune = a.ctune;
  try {
    spec.validate();
  } catch (const SpecError& e) {
    const std::string flag = e.path().starts_with("/n_grid") ? "--n-grid" : e.path().starts_with("/tau_list") ? "--tau-list" : "--ctune";
    throw UsageError(flag + ": " + e.what());
  }

  const Corpus corpus = load_corpus(a);
  std::vector<MseRow> rows;
  try {
    rows = run_mse_experiment(spec, corpus, RunOptions{worker_threads()});
  } catch (const SpecError& e) {
    throw UsageError("--n-grid: " + std::string(e.what()));
  }
  write_experiment_outputs(a.out, spec, rows,
                           nlohmann::json{{"N", corpus.length()}, {"vocabulary_size", corpus.vocabulary_size()}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Windowed Good-Turing missing-mass estimation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample a trajectory from a sticky or i.i.d. chain");
  simulate->add_option("--chain", sim.chain, "sticky | iid")->required()->check(CLI::IsMember({"sticky", "iid"}));
  simulate->add_option("--p", sim.p, "Redraw probability of the sticky chain, in (0, 1]");
  simulate->add_option("--alphabet", sim.alphabet, "uniform:K or uniform:<c>n")->required();
  simulate->add_option("--n", sim.n, "Trajectory length")->required();
  simulate->add_option("--seed", sim.seed, "64-bit seed");
  simulate->add_option("--out", sim.out, "Output file (default: stdout)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate missing or small-count mass of a trajectory file");
  estimate->add_option("--in", est.in, "Trajectory file, one token per line")->required();
  estimate->add_option("--estimator", est.estimator, "gt | wingit | wingit-naive")
      ->required()
      ->check(CLI::IsMember({"gt", "wingit", "wingit-naive"}));
  estimate->add_option("--tau", est.tau, "Window size in [1, n]");
  estimate->add_option("--zeta", est.zeta, "Count threshold (0 = missing mass)");
  estimate->add_flag("--numeric", est.numeric, "Tokens are decimal symbol ids");

  TuneArgs tun;
  auto* tune = app.add_subcommand("tune", "Select a window size by split-and-validate");
  tune->add_option("--in", tun.in, "Trajectory file, one token per line")->required();
  tune->add_option("--ctune", tun.ctune, "Threshold constant")->capture_default_str();
  tune->add_flag("--numeric", tun.numeric, "Tokens are decimal symbol ids");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run an MSE experiment from a JSON config");
  experiment->add_option("--config", exp.config, "ExperimentSpec JSON")->required();
  experiment->add_option("--out", exp.out, "CSV output; provenance goes to the .json next to it")->required();

  CorpusArgs cor;
  auto* corpus = app.add_subcommand("corpus", "Prepare a text corpus or run experiments on it");
  corpus->require_subcommand(1);
  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--text", cor.text, "UTF-8 text file")->required();
    sub->add_option("--collocations", cor.collocations, "Collocation rules, `a b => ab` per line");
    sub->add_option("--out", cor.out, "Output file")->required();
  };
  auto* prepare = corpus->add_subcommand("prepare", "Write the token stream and a JSON sidecar");
  add_inputs(prepare);
  auto* corpus_exp = corpus->add_subcommand("experiment", "MSE over sliding windows against the unigram law");
  add_inputs(corpus_exp);
  corpus_exp->add_option("--n-grid", cor.n_grid, "Window lengths")->delimiter(',')->capture_default_str();
  corpus_exp->add_option("--tau-list", cor.tau_list, "Window sizes or 'tuned'")->delimiter(',')->capture_default_str();
  corpus_exp->add_option("--zeta", cor.zeta, "Count threshold");
  corpus_exp->add_option("--ctune", cor.ctune, "Tuning threshold constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*simulate) cmd_simulate(sim);
    else if (*estimate) cmd_estimate(est);
    else if (*tune) cmd_tune(tun);
    else if (*experiment) cmd_experiment(exp);
    else if (*prepare) cmd_corpus_prepare(cor);
    else if (*corpus_exp) cmd_corpus_experiment(cor);
  } catch (const UsageError& e) {
    std::cerr << "wingit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wingit: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
