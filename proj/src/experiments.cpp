#include "wingit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "wingit/estimators.hpp"
#include "wingit/functionals.hpp"
#include "wingit/summation.hpp"
#include "wingit/trajectory_io.hpp"
#include "wingit/tuning.hpp"

namespace wingit {

using json = nlohmann::json;

// ---------------------------------------------------------------- sources

UniformAlphabet UniformAlphabet::fixed(std::size_t k) {
  if (k == 0) throw std::invalid_argument("uniform alphabet size must be >= 1");
  UniformAlphabet a;
  a.fixed_ = k;
  return a;
}

UniformAlphabet UniformAlphabet::scaled(std::string_view scale) {
  UniformAlphabet a;
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : scale) {
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (num > 100'000'000'000ULL || den > 100'000'000'000ULL) {
        throw std::invalid_argument("alphabet scale has too many digits");
      }
      num = num * 10 + static_cast<std::uint64_t>(c - '0');
      if (seen_dot) den *= 10;
    } else {
      throw std::invalid_argument("alphabet scale '" + std::string(scale) + "' is not a decimal number");
    }
  }
  if (!seen_digit || num == 0) throw std::invalid_argument("alphabet scale must be a positive decimal");
  a.numerator_ = num;
  a.denominator_ = den;
  a.scale_text_ = std::string(scale);
  return a;
}

UniformAlphabet UniformAlphabet::parse(std::string_view descriptor) {
  constexpr std::string_view kPrefix = "uniform:";
  if (!descriptor.starts_with(kPrefix)) {
    throw std::invalid_argument("alphabet descriptor must look like uniform:K or uniform:<c>n");
  }
  const std::string_view body = descriptor.substr(kPrefix.size());
  if (body.empty()) throw std::invalid_argument("alphabet descriptor is missing its size");
  if (body.back() == 'n') return scaled(body.substr(0, body.size() - 1));
  std::size_t k = 0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
  if (ec != std::errc{} || ptr != body.data() + body.size() || k == 0) {
    throw std::invalid_argument("alphabet size '" + std::string(body) + "' is not a positive integer");
  }
  return fixed(k);
}

std::size_t UniformAlphabet::size_for(std::size_t n) const {
  if (fixed_ != 0) return fixed_;
  const auto k = static_cast<std::size_t>(static_cast<uint128>(n) * numerator_ / denominator_);
  return std::max<std::size_t>(k, 1);
}

std::string UniformAlphabet::descriptor() const {
  if (fixed_ != 0) return "uniform:" + std::to_string(fixed_);
  return "uniform:" + scale_text_ + "n";
}

MarkovModel ChainSource::model_for(std::size_t n) const {
  return build_sticky_chain(iid ? 1.0 : p, Distribution::uniform(alphabet.size_for(n)));
}

std::string TauLabel::str() const { return tau ? std::to_string(*tau) : std::string("tuned"); }

// ------------------------------------------------------------ validation

void ExperimentSpec::validate() const {
  if (const auto* chain = std::get_if<ChainSource>(&source)) {
    if (!chain->iid && !(chain->p > 0.0 && chain->p <= 1.0)) throw SpecError("/source/p", "must lie in (0, 1]");
  } else {
    if (std::get<CorpusSource>(source).text.empty()) throw SpecError("/source/text", "must name a text file");
  }
  if (n_grid.empty()) throw SpecError("/n_grid", "must be a nonempty array");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    const std::string path = "/n_grid/" + std::to_string(i);
    if (n_grid[i] == 0) throw SpecError(path, "must be a positive integer");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw SpecError(path, "n_grid must be strictly ascending");
  }
  if (tau_list.empty()) throw SpecError("/tau_list", "must be a nonempty array");
  for (std::size_t i = 0; i < tau_list.size(); ++i) {
    const auto& label = tau_list[i];
    if (label.tau && *label.tau == 0) throw SpecError("/tau_list/" + std::to_string(i), "window size must be >= 1");
    if (!label.tau && n_grid.front() < kMinTuningLength) {
      throw SpecError("/tau_list/" + std::to_string(i), "tuned window needs every n >= 18");
    }
  }
  if (trials == 0) throw SpecError("/trials", "must be >= 1");
  if (!(c_tune > 0.0)) throw SpecError("/c_tune", "must be positive");
}

// ------------------------------------------------------------------ JSON

namespace {

const json& require_field(const json& obj, const std::string& base, const char* key) {
  if (!obj.contains(key)) throw SpecError(base + "/" + key, "required field is missing");
  return obj.at(key);
}

std::size_t as_positive_size(const json& v, const std::string& path, bool allow_zero = false) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < (allow_zero ? 0 : 1))) {
    throw SpecError(path, allow_zero ? "must be a nonnegative integer" : "must be a positive integer");
  }
  return v.get<std::size_t>();
}

void reject_unknown(const json& obj, const std::string& base, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw SpecError(base + "/" + key, "unknown field");
    }
  }
}

std::variant<ChainSource, CorpusSource> parse_source(const json& src) {
  if (!src.is_object()) throw SpecError("/source", "must be an object");
  const json& kind = require_field(src, "/source", "kind");
  if (!kind.is_string()) throw SpecError("/source/kind", "must be a string");
  const auto k = kind.get<std::string>();
  if (k == "sticky" || k == "iid") {
    ChainSource chain;
    chain.iid = k == "iid";
    if (chain.iid) {
      reject_unknown(src, "/source", {"kind", "alphabet"});
    } else {
      reject_unknown(src, "/source", {"kind", "p", "alphabet"});
      const json& p = require_field(src, "/source", "p");
      if (!p.is_number()) throw SpecError("/source/p", "must be a number");
      chain.p = p.get<double>();
    }
    if (src.contains("alphabet")) {
      const json& a = src.at("alphabet");
      if (!a.is_string()) throw SpecError("/source/alphabet", "must be a string such as uniform:1.2n");
      try {
        chain.alphabet = UniformAlphabet::parse(a.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw SpecError("/source/alphabet", e.what());
      }
    }
    return chain;
  }
  if (k == "corpus") {
    reject_unknown(src, "/source", {"kind", "text", "collocations"});
    CorpusSource corpus;
    const json& text = require_field(src, "/source", "text");
    if (!text.is_string()) throw SpecError("/source/text", "must be a path string");
    corpus.text = text.get<std::string>();
    if (src.contains("collocations")) {
      if (!src.at("collocations").is_string()) throw SpecError("/source/collocations", "must be a path string");
      corpus.collocations = src.at("collocations").get<std::string>();
    }
    return corpus;
  }
  throw SpecError("/source/kind", "must be one of sticky, iid, corpus");
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SpecError("", "top level must be an object");
  reject_unknown(doc, "", {"source", "n_grid", "tau_list", "zeta", "trials", "base_seed", "c_tune"});

  ExperimentSpec spec;
  spec.source = parse_source(require_field(doc, "", "source"));

  const json& grid = require_field(doc, "", "n_grid");
  if (!grid.is_array()) throw SpecError("/n_grid", "must be an array");
  spec.n_grid.clear();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    spec.n_grid.push_back(as_positive_size(grid[i], "/n_grid/" + std::to_string(i)));
  }

  const json& taus = require_field(doc, "", "tau_list");
  if (!taus.is_array()) throw SpecError("/tau_list", "must be an array");
  spec.tau_list.clear();
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const std::string path = "/tau_list/" + std::to_string(i);
    if (taus[i].is_string()) {
      if (taus[i].get<std::string>() != "tuned") throw SpecError(path, "must be a positive integer or \"tuned\"");
      spec.tau_list.push_back(TauLabel::tuned());
    } else {
      spec.tau_list.push_back(TauLabel::fixed(as_positive_size(taus[i], path)));
    }
  }

  if (doc.contains("zeta")) spec.zeta = as_positive_size(doc.at("zeta"), "/zeta", true);
  const bool corpus = std::holds_alternative<CorpusSource>(spec.source);
  if (doc.contains("trials")) {
    spec.trials = as_positive_size(doc.at("trials"), "/trials");
  } else if (!corpus) {
    throw SpecError("/trials", "required field is missing");
  }
  if (doc.contains("base_seed")) {
    const json& s = doc.at("base_seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw SpecError("/base_seed", "must be a nonnegative 64-bit integer");
    }
    spec.base_seed = Seed{s.get<std::uint64_t>()};
  }
  if (doc.contains("c_tune")) {
    if (!doc.at("c_tune").is_number()) throw SpecError("/c_tune", "must be a number");
    spec.c_tune = doc.at("c_tune").get<double>();
  }
  spec.validate();
  return spec;
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
  json doc;
  if (const auto* chain = std::get_if<ChainSource>(&spec.source)) {
    doc["source"] = chain->iid ? json{{"kind", "iid"}, {"alphabet", chain->alphabet.descriptor()}}
                               : json{{"kind", "sticky"}, {"p", chain->p}, {"alphabet", chain->alphabet.descriptor()}};
  } else {
    const auto& corpus = std::get<CorpusSource>(spec.source);
    doc["source"] = json{{"kind", "corpus"}, {"text", corpus.text.string()}};
    if (corpus.collocations) doc["source"]["collocations"] = corpus.collocations->string();
  }
  doc["n_grid"] = spec.n_grid;
  json taus = json::array();
  for (const auto& t : spec.tau_list) {
    if (t.tau) taus.push_back(*t.tau);
    else taus.push_back("tuned");
  }
  doc["tau_list"] = taus;
  doc["zeta"] = spec.zeta;
  doc["trials"] = spec.trials;
  doc["base_seed"] = spec.base_seed.value;
  doc["c_tune"] = spec.c_tune;
  return doc.dump(2) + "\n";
}

// ------------------------------------------------------------- execution

unsigned threads_from_environment() {
  if (const char* env = std::getenv("WINGIT_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) {
      throw std::invalid_argument("WINGIT_THREADS must be a positive integer");
    }
    return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, count). Results must be written to per-index
// slots; the first exception thrown by any worker is rethrown.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

double true_functional(const Distribution& pi, TrajectoryView x, std::size_t zeta) {
  return zeta == 0 ? missing_mass(pi, x) : small_count_mass(pi, x, zeta);
}

double estimate_for(TrajectoryView x, const TauLabel& label, std::size_t zeta, double c_tune) {
  const std::size_t tau = label.tau ? *label.tau : tune_window(x, TuneConfig{c_tune, {}}).tau_hat;
  return zeta == 0 ? wingit(x, tau).value() : wingit_small_count(x, tau, zeta).value();
}

std::string estimator_name(std::size_t zeta) { return zeta == 0 ? "wingit" : "wingit_small_count"; }

// Evaluates every tau label on `count` trajectories supplied by make(i) and
// appends one row per label for sequence length n.
template <typename Make>
void run_grid_point(const ExperimentSpec& spec, std::size_t n, std::size_t count, const Distribution& pi,
                    Make&& make, unsigned threads, std::vector<MseRow>& rows) {
  const std::size_t labels = spec.tau_list.size();
  std::vector<double> truths(count);
  std::vector<double> estimates(labels * count);
  parallel_for(count, threads, [&](std::size_t t) {
    const auto x = make(t);
    const TrajectoryView view(x);
    truths[t] = true_functional(pi, view, spec.zeta);
    for (std::size_t l = 0; l < labels; ++l) {
      estimates[l * count + t] = estimate_for(view, spec.tau_list[l], spec.zeta, spec.c_tune);
    }
  });
  for (std::size_t l = 0; l < labels; ++l) {
    MseRow row = summarize_trials(std::span<const double>(estimates).subspan(l * count, count), truths);
    row.n = n;
    row.tau_label = spec.tau_list[l].str();
    row.zeta = spec.zeta;
    row.estimator = estimator_name(spec.zeta);
    rows.push_back(std::move(row));
  }
}

unsigned resolve_threads(const RunOptions& opts) {
  return opts.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : opts.threads;
}

}  // namespace

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(pct > 0.0 && pct <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  const auto count = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct * count / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

MseRow summarize_trials(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size() || estimates.empty()) {
    throw std::invalid_argument("summarize_trials needs equal, nonempty samples");
  }
  CompensatedSum sq;
  CompensatedSum est;
  CompensatedSum tru;
  for (std::size_t t = 0; t < estimates.size(); ++t) {
    const double d = estimates[t] - truths[t];
    sq.add(d * d);
    est.add(estimates[t]);
    tru.add(truths[t]);
  }
  const auto count = static_cast<double>(estimates.size());
  MseRow row;
  row.trials = estimates.size();
  row.mse = sq.value() / count;
  row.mean_estimate = est.value() / count;
  row.mean_true = tru.value() / count;
  const std::vector<double> e(estimates.begin(), estimates.end());
  const std::vector<double> m(truths.begin(), truths.end());
  row.est_p5 = nearest_rank_percentile(e, 5.0);
  row.est_p95 = nearest_rank_percentile(e, 95.0);
  row.true_p5 = nearest_rank_percentile(m, 5.0);
  row.true_p95 = nearest_rank_percentile(m, 95.0);
  return row;
}

std::vector<MseRow> run_mse_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  if (const auto* corpus_src = std::get_if<CorpusSource>(&spec.source)) {
    std::vector<CollocationRule> rules;
    if (corpus_src->collocations) rules = parse_collocations(read_text_file(*corpus_src->collocations));
    const Corpus corpus = tokenize(read_text_file(corpus_src->text), rules);
    return run_mse_experiment(spec, corpus, opts);
  }
  const auto& chain = std::get<ChainSource>(spec.source);
  const unsigned threads = resolve_threads(opts);
  std::vector<MseRow> rows;
  for (std::size_t n : spec.n_grid) {
    const MarkovModel model = chain.model_for(n);
    run_grid_point(
        spec, n, spec.trials, model.stationary(),
        [&](std::size_t t) { return sample_trajectory(model, n, derive_seed(spec.base_seed, n, t)); }, threads,
        rows);
  }
  return rows;
}

std::vector<MseRow> run_mse_experiment(const ExperimentSpec& spec, const Corpus& corpus, const RunOptions& opts) {
  spec.validate();
  const unsigned threads = resolve_threads(opts);
  const TrajectoryView tokens(corpus.tokens());
  std::vector<MseRow> rows;
  for (std::size_t n : spec.n_grid) {
    std::vector<std::size_t> starts;
    try {
      starts = window_starts(tokens.size(), n);
    } catch (const std::invalid_argument& e) {
      throw SpecError("/n_grid", e.what());
    }
    run_grid_point(
        spec, n, starts.size(), corpus.empirical_pi(), [&](std::size_t t) { return tokens.subspan(starts[t], n); },
        threads, rows);
  }
  return rows;
}

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows) {
  out << kMseCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << r.tau_label << ',' << r.zeta << ',' << r.estimator << ',' << format_number(r.mse) << ','
        << format_number(r.mean_estimate) << ',' << format_number(r.mean_true) << ',' << format_number(r.est_p5)
        << ',' << format_number(r.est_p95) << ',' << format_number(r.true_p5) << ',' << format_number(r.true_p95)
        << ',' << r.trials << '\n';
  }
}

// ----------------------------------------------------------------- probes

BiasSummary run_bias_demo(double p, std::size_t n, std::size_t k, std::size_t trials, Seed seed,
                          const RunOptions& opts) {
  if (trials == 0) throw std::invalid_argument("bias demo needs trials >= 1");
  if (n == 0) throw std::invalid_argument("bias demo needs n >= 1");
  const MarkovModel model = build_sticky_chain(p, Distribution::uniform(k));
  std::vector<double> truth(trials);
  std::vector<double> gt(trials);
  parallel_for(trials, resolve_threads(opts), [&](std::size_t t) {
    const Trajectory x = sample_trajectory(model, n, derive_seed(seed, n, t));
    truth[t] = missing_mass(model.stationary(), x);
    gt[t] = good_turing(x).value();
  });
  CompensatedSum mt;
  CompensatedSum mg;
  CompensatedSum mae;
  for (std::size_t t = 0; t < trials; ++t) {
    mt.add(truth[t]);
    mg.add(gt[t]);
    mae.add(std::abs(truth[t] - gt[t]));
  }
  const auto count = static_cast<double>(trials);
  return BiasSummary{mt.value() / count, mg.value() / count, mae.value() / count};
}

std::vector<VarianceRow> variance_probe(const ExperimentSpec& spec, const RunOptions& opts) {
  spec.validate();
  const auto* chain = std::get_if<ChainSource>(&spec.source);
  if (chain == nullptr) throw SpecError("/source/kind", "variance probe needs a chain source");
  std::vector<VarianceRow> rows;
  for (std::size_t n : spec.n_grid) {
    const MarkovModel model = chain->model_for(n);
    std::vector<double> mass(spec.trials);
    parallel_for(spec.trials, resolve_threads(opts), [&](std::size_t t) {
      mass[t] = missing_mass(model.stationary(), sample_trajectory(model, n, derive_seed(spec.base_seed, n, t)));
    });
    const double mean = compensated_sum(mass) / static_cast<double>(mass.size());
    CompensatedSum ss;
    for (double m : mass) ss.add((m - mean) * (m - mean));
    const double variance = mass.size() > 1 ? ss.value() / static_cast<double>(mass.size() - 1) : 0.0;
    rows.push_back(VarianceRow{n, variance, mean, mass.size()});
  }
  return rows;
}

std::pair<Trajectory, Trajectory> tightness_witness(std::size_t tau, std::size_t n) {
  if (tau == 0 || n < 2 * tau + 1) throw std::invalid_argument("tightness witness needs tau >= 1 and n >= 2 tau + 1");
  constexpr Symbol kX = 0;
  constexpr Symbol kXPrime = 1;
  std::vector<Symbol> base(n, kXPrime);
  std::fill(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(tau), kX);
  std::vector<Symbol> with_x = base;
  with_x[2 * tau] = kX;
  return {Trajectory(std::move(with_x)), Trajectory(std::move(base))};
}

FuzzSummary bounded_difference_fuzz(std::size_t trials, Seed seed) {
  if (trials == 0) throw std::invalid_argument("fuzz needs trials >= 1");
  constexpr std::uint64_t kMaxLength = 200;
  constexpr std::uint64_t kMaxAlphabet = 12;
  CounterRng rng(seed);
  double worst = 0.0;
  std::vector<Symbol> x;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t n = 1 + rng.next_below(kMaxLength);
    const std::uint64_t alphabet = 1 + rng.next_below(kMaxAlphabet);
    x.resize(n);
    for (auto& s : x) s = static_cast<Symbol>(rng.next_below(alphabet));
    const std::size_t tau = 1 + rng.next_below(n);
    const std::size_t index = rng.next_below(n);
    const Estimate before = wingit(x, tau);
    x[index] = static_cast<Symbol>(rng.next_below(alphabet + 1));
    const Estimate after = wingit(x, tau);
    const std::size_t delta = before.hits > after.hits ? before.hits - after.hits : after.hits - before.hits;
    // |Delta| * n / (4 tau) with |Delta| = delta / n.
    worst = std::max(worst, static_cast<double>(delta) / (4.0 * static_cast<double>(tau)));
  }
  constexpr std::size_t kWitnessTau = 4;
  const auto [with_x, with_x_prime] = tightness_witness(kWitnessTau, 8 * kWitnessTau);
  const std::size_t a = wingit(with_x, kWitnessTau).hits;
  const std::size_t b = wingit(with_x_prime, kWitnessTau).hits;
  const double witness = static_cast<double>(a > b ? a - b : b - a) / (4.0 * kWitnessTau);
  return FuzzSummary{worst, witness, trials};
}

}  // namespace wingit
