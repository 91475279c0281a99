#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idt/datagen.hpp"
#include "idt/pruning.hpp"
#include "idt/regressor.hpp"
#include "idt/tree.hpp"

namespace idt::bench {

struct RegressorSpec {
  enum class Kind { idt, ctw, lr, vsr, fnr };
  Kind kind = Kind::idt;
  std::size_t depth = 2;  // ctw only

  std::string name() const;
  static RegressorSpec parse(const std::string& token);  // idt, ctw2, ctw:2, lr, vsr, fnr
};

// Key/value experiment description; see README for the schema.
struct ExperimentConfig {
  std::string source = "synthetic";
  std::string csv_path;
  std::string target;
  std::size_t n = 20000;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::vector<RegressorSpec> regressors = default_regressors();

  double bound = 1.0;
  std::optional<double> a;  // defaults to 4A^2
  double delta = 1.0;
  DepthCap depth_cap = DepthCap::unlimited;
  std::size_t fnr_order = 2;
  std::size_t node_budget = std::size_t{1} << 22;

  std::size_t embed_order = 2;
  std::size_t component = 0;
  std::size_t dim = 2;  // uniform / forced sources
  double noise_variance = 0.01;  // sine source
  std::optional<double> h;       // ODE step override

  std::filesystem::path out = "out";
  bool trace = false;
  std::vector<std::uint64_t> checkpoints;  // audit; empty = powers of ten
  std::size_t enumeration_limit = 64;

  static std::vector<RegressorSpec> default_regressors();

  double weighting_scale() const { return a.value_or(4.0 * bound * bound); }
  TreeConfig tree_config(std::size_t p) const;
  // Throws ConfigError.
  void validate() const;
};

// Throws ConfigError with the offending line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Canonical text form with every default spelled out; parse_config
// round-trips it.
std::string serialize_config(const ExperimentConfig& config);

RegressionStream make_stream(const ExperimentConfig& config, std::uint64_t seed);
// Raw series for generator sources, nullopt for stream-only sources.
std::optional<Series> make_series(const ExperimentConfig& config);
std::vector<std::unique_ptr<Regressor>> make_regressors(const ExperimentConfig& config, std::size_t p);

struct RunReport {
  std::vector<std::string> names;
  std::size_t n = 0;
  // normalized[r][t-1] = (sum_{t' <= t} e^2) / t, averaged over trials.
  std::vector<std::vector<double>> normalized;
  std::vector<double> mean_touched;
  std::vector<double> seconds;
  std::vector<std::uint64_t> fingerprints;  // first trial's stream

  double final_error(std::size_t r) const { return normalized[r].back(); }
  std::size_t index_of(const std::string& name) const;
};

// Runs every regressor over identical streams without writing files.
RunReport run_experiment(const ExperimentConfig& config);
// run_experiment plus errors.csv, summary.txt, config.txt, plot_errors.py and
// optional trace CSVs in config.out.
RunReport run(const ExperimentConfig& config);

struct AuditReport {
  std::size_t steps = 0;
  std::size_t jensen_violations = 0;
  double worst_jensen_slack = 0.0;
  double worst_simplex_error = 0.0;
  std::optional<ExactAuditReport> exact;
  std::vector<GrowthCheckpoint> growth;
  bool growth_bounded = true;

  bool passed() const;
};

AuditReport audit(const ExperimentConfig& config);

struct CostWindow {
  unsigned k = 0;  // window [2^k, 2^(k+1))
  double mean_touched = 0.0;
  std::size_t steps = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct CostReport {
  std::string regressor;
  std::vector<std::size_t> touched;   // per step
  std::vector<std::size_t> replayed;  // per step
  std::vector<double> nanos;          // per step
  std::vector<CostWindow> windows;
  LinearFit fit;  // mean touched against k over complete windows
};

// Profiles the first tree regressor of the config.
CostReport profile_steps(const ExperimentConfig& config);
CostReport cost_profile(const ExperimentConfig& config);

// Writes stream.csv (and series.csv for generator sources) into config.out.
void gen(const ExperimentConfig& config);

}  // namespace idt::bench
