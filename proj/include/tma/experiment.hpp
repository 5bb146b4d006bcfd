#pragma once

// Monte Carlo size and power experiments for the sup-LR test.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tma/lr_test.hpp"
#include "tma/model.hpp"
#include "tma/simulate.hpp"

namespace tma {

enum class Design { NullMa, TmaAlternative, LocalAlternative };

std::string_view to_string(Design design);
Design parse_design(std::string_view text);

struct ExperimentConfig {
  std::string label;
  Design design = Design::NullMa;
  ModelOrders orders{1, 1, 2};
  std::vector<double> phi{0.5};
  /// Threshold coefficients for the fixed alternative.
  std::vector<double> psi;
  /// Drift vector for the local alternative, psi = h / sqrt(n).
  std::vector<double> h;
  double r0 = 0.0;
  std::size_t n = 400;
  std::size_t replications = 1000;
  double beta1 = 0.1;
  double beta2 = 0.9;
  std::vector<double> alphas{0.05, 0.10};
  std::uint64_t base_seed = 0;
  Distribution distribution = Distribution::StandardNormal;
  double df = 0.0;
  double sigma = 1.0;
  std::size_t burn_in = kDefaultBurnIn;
  /// Grid cap for the statistic; 0 keeps every candidate.
  std::size_t max_points = 60;
  /// Fixed critical values, one per alpha. Empty: simulate the limit.
  std::vector<double> critical_values;
  /// Draws for the data-independent bridge limit, simulated once.
  std::size_t bridge_replications = 25000;
  /// Draws for the per-replication kernel limit.
  std::size_t kernel_replications = 2000;
  double statistic_factor = kDefaultStatisticFactor;
  int threads = 1;

  void validate() const;
  /// Parameters of the data-generating process.
  TmaParams true_params() const;
};

struct ExperimentReport {
  std::string label;
  Design design = Design::NullMa;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<double> alphas;
  std::vector<double> rejection_rates;
  std::vector<double> mc_stderr;
  std::size_t failures = 0;
  double wall_seconds = 0.0;
  /// Per-replication sup statistic (NaN for failures), in replication order.
  std::vector<double> statistics;
};

/// Simulates replication k from stream k of base_seed, runs the test and
/// aggregates rejections by replication index. Failed replications are
/// counted; more than 1% of them raises ErrorKind::Experiment.
ExperimentReport run_experiment(const ExperimentConfig& config);

std::vector<ExperimentReport> power_curve(const std::vector<ExperimentConfig>& configs);

/// Parses the key-value experiment file (INI sections, one design each; a
/// [defaults] section seeds every other). A section with several sample
/// sizes expands to one config per size.
std::vector<ExperimentConfig> load_experiment_file(const std::string& path);
std::vector<ExperimentConfig> parse_experiment_text(const std::string& text);

/// CSV: design,n,alpha,rate,stderr,replications,seed; one row per alpha.
void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);

}  // namespace tma
