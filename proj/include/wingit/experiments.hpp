#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "wingit/markov.hpp"
#include "wingit/rng.hpp"
#include "wingit/text_ingest.hpp"

namespace wingit {

/// Uniform stationary law, either of fixed size K or of size floor(c * n)
/// at sequence length n. Written `uniform:K` or `uniform:<c>n`.
class UniformAlphabet {
 public:
  [[nodiscard]] static UniformAlphabet fixed(std::size_t k);
  /// `scale` is a decimal literal such as "1.2"; kept exact as a fraction.
  [[nodiscard]] static UniformAlphabet scaled(std::string_view scale);
  [[nodiscard]] static UniformAlphabet parse(std::string_view descriptor);

  [[nodiscard]] std::size_t size_for(std::size_t n) const;
  [[nodiscard]] std::string descriptor() const;

 private:
  std::size_t fixed_ = 0;
  std::uint64_t numerator_ = 0;  // scaled: floor(n * numerator / denominator)
  std::uint64_t denominator_ = 1;
  std::string scale_text_;
};

/// Sticky chain with stationary law uniform; p = 1 is i.i.d.
struct ChainSource {
  double p = 1.0;
  UniformAlphabet alphabet = UniformAlphabet::scaled("1.2");
  bool iid = false;  ///< serialized as kind "iid" (p is then 1)

  [[nodiscard]] MarkovModel model_for(std::size_t n) const;
};

struct CorpusSource {
  std::filesystem::path text;
  std::optional<std::filesystem::path> collocations;
};

/// A window size, or the data-tuned choice.
struct TauLabel {
  std::optional<std::size_t> tau;  ///< nullopt = tuned

  [[nodiscard]] static TauLabel tuned() { return TauLabel{}; }
  [[nodiscard]] static TauLabel fixed(std::size_t t) { return TauLabel{t}; }
  [[nodiscard]] std::string str() const;
  friend bool operator==(const TauLabel&, const TauLabel&) = default;
};

struct ExperimentSpec {
  std::variant<ChainSource, CorpusSource> source = ChainSource{};
  std::vector<std::size_t> n_grid = {500, 1000, 2000, 4000, 8000};
  std::vector<TauLabel> tau_list = {TauLabel::fixed(1)};
  std::size_t zeta = 0;
  std::size_t trials = 100;
  Seed base_seed{0};
  double c_tune = 1.0;

  /// Throws SpecError (with the offending field) on violation.
  void validate() const;
};

/// Schema violation; `path()` is a JSON pointer such as "/n_grid/2".
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

[[nodiscard]] ExperimentSpec parse_experiment_spec(std::string_view json_text);
[[nodiscard]] std::string experiment_spec_to_json(const ExperimentSpec& spec);

struct MseRow {
  std::size_t n = 0;
  std::string tau_label;
  std::size_t zeta = 0;
  std::string estimator;
  double mse = 0.0;
  double mean_estimate = 0.0;
  double mean_true = 0.0;
  double est_p5 = 0.0;
  double est_p95 = 0.0;
  double true_p5 = 0.0;
  double true_p95 = 0.0;
  std::size_t trials = 0;
};

struct RunOptions {
  /// Worker threads for independent trials; 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Worker count from WINGIT_THREADS, else hardware concurrency.
[[nodiscard]] unsigned threads_from_environment();

/// One row per (n, tau label), in grid order. Chain sources draw
/// trajectories with seeds derive_seed(base_seed, n, trial); corpus sources
/// use every window from extract_trajectories (the trials field is unused).
[[nodiscard]] std::vector<MseRow> run_mse_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

/// Corpus variant with the corpus already loaded; spec.source is ignored.
[[nodiscard]] std::vector<MseRow> run_mse_experiment(const ExperimentSpec& spec, const Corpus& corpus,
                                                     const RunOptions& opts = {});

/// Aggregates paired per-trial values into a row (estimates vs. truths).
[[nodiscard]] MseRow summarize_trials(std::span<const double> estimates, std::span<const double> truths);

/// Nearest-rank percentile of unsorted values, pct in (0, 100].
[[nodiscard]] double nearest_rank_percentile(std::vector<double> values, double pct);

void write_mse_csv(std::ostream& out, const std::vector<MseRow>& rows);
inline constexpr std::string_view kMseCsvHeader =
    "n,tau,zeta,estimator,mse,mean_estimate,mean_true,est_p5,est_p95,true_p5,true_p95,trials";

struct BiasSummary {
  double mean_true_mass;
  double mean_good_turing;
  double mean_abs_error;
};

/// Good-Turing vs. true missing mass on a sticky chain with uniform law on k symbols.
[[nodiscard]] BiasSummary run_bias_demo(double p, std::size_t n, std::size_t k, std::size_t trials, Seed seed,
                                        const RunOptions& opts = {});

struct VarianceRow {
  std::size_t n;
  double variance;  ///< unbiased sample variance of M_pi(X^n)
  double mean;
  std::size_t trials;
};

/// Spread of the true missing mass per grid point (chain sources only).
[[nodiscard]] std::vector<VarianceRow> variance_probe(const ExperimentSpec& spec, const RunOptions& opts = {});

struct FuzzSummary {
  double max_normalized;  ///< max |Delta| * n / (4 tau) over random substitutions
  double witness_ratio;   ///< same ratio on the tightness construction
  std::size_t perturbations;
};

/// The two sequences of the tightness construction: x at positions 1..tau
/// and x' elsewhere, with position 2 tau + 1 set to x (first) or x' (second).
[[nodiscard]] std::pair<Trajectory, Trajectory> tightness_witness(std::size_t tau, std::size_t n);

/// Random single-coordinate substitutions checked against the 4 tau / n bound.
[[nodiscard]] FuzzSummary bounded_difference_fuzz(std::size_t trials, Seed seed);

}  // namespace wingit
