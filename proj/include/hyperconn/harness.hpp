#pragma once

// Monte Carlo experiment driver: draws ensemble hypergraphs, records the
// algebraic connectivity of each ensemble sum, estimates tail probabilities
// and lines them up against the closed-form and numeric bounds.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperconn/bounds.hpp"
#include "hyperconn/ensemble.hpp"

namespace hyperconn {

enum class ThetaMode { Absolute, NuMultiple, SigmaMultiple };
enum class MasterKernel { Chernoff, Bennett, Bernstein };

inline constexpr std::array<BoundFamily, 5> kAllFamilies{
    BoundFamily::ChernoffUpper, BoundFamily::ChernoffLower, BoundFamily::Bennett, BoundFamily::Bernstein,
    BoundFamily::MasterNumeric};

struct ExperimentConfig {
  std::string label;
  EnsembleSpec ensemble;
  int trials = 1000;
  ThetaMode theta_mode = ThetaMode::NuMultiple;
  std::vector<double> theta_values;
  std::vector<BoundFamily> bound_families{kAllFamilies.begin(), kAllFamilies.end()};
  double ci_level = 0.95;
  std::optional<MasterKernel> master_kernel;  // defaults to Bennett when centering, else Chernoff
  bool audit = false;

  void validate() const;
  MasterKernel effective_master_kernel() const;
};

struct TailEstimate {
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
};

/// Two-sided standard normal quantile z with P(|Z| <= z) = level.
double normal_two_sided_quantile(double level);

/// Wilson score interval for `successes` out of `n`.
TailEstimate wilson_interval(std::size_t successes, std::size_t n, double level);

/// Pr(alpha >= theta) with its Wilson interval.
TailEstimate empirical_tail(std::span<const double> samples, double theta, double level = 0.95);

/// Pr(alpha <= theta) with its Wilson interval.
TailEstimate empirical_lower_tail(std::span<const double> samples, double theta, double level = 0.95);

/// Algebraic connectivity of each trial's ensemble sum, in trial order.
/// Trial t uses sampling streams t*N .. t*N + N - 1.
std::vector<double> run_trials(const ExperimentConfig& config, int workers = 1);

struct TailRow {
  double theta = 0.0;  // absolute threshold on alpha
  TailEstimate upper;  // Pr(alpha >= theta)
  TailEstimate lower;  // Pr(alpha <= theta)
  // Indexed like kAllFamilies; NaN when not requested or undefined at theta.
  std::array<double, 5> bounds{};
  // '1' valid, '0' outside stated range or hypotheses, '-' not requested.
  std::array<char, 5> validity{};
  std::vector<BoundFamily> violations;
  // Trace form of the master bound under the fixed bottom eigenspace
  // projection; the `master` column holds the dimension-relaxed value.
  double master_trace = std::numeric_limits<double>::quiet_NaN();
};

struct ReportMetadata {
  std::string label;
  int m = 0;
  int M = 0;
  int N = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::string distribution;
  bool center = false;
  bool normalize = false;
  double normalization_scale = 1.0;
  double nu = 0.0;
  double sigma2 = 0.0;
  Index k = 0;
  Index dim_upper = 0;
  Index dim_lower = 0;
  double ci_level = 0.95;
  std::string master_kernel;
  bool chernoff_hypotheses = false;
  bool bennett_hypotheses = false;
  std::vector<BoundFamily> families;
  double wall_time_seconds = 0.0;  // informational; not serialized
};

struct TailReport {
  ReportMetadata metadata;
  std::vector<TailRow> rows;

  std::size_t violation_count() const;
};

/// Population statistics (nu, sigma^2) of the configured ensemble.
EnsembleStatistics config_statistics(const ExperimentConfig& config);

/// Full comparison: runs the trials, then builds the report.
TailReport compare(const ExperimentConfig& config, int workers = 1);

/// Report for an already computed sample vector.
TailReport compare_samples(const ExperimentConfig& config, std::span<const double> samples);

enum class ReportFormat { Csv, Json };

void write_csv(const TailReport& report, std::ostream& out);
void write_json(const TailReport& report, std::ostream& out);
void emit(const TailReport& report, const std::string& path, ReportFormat format);

/// "%.17g", or empty for NaN.
std::string format_double(double v);

}  // namespace hyperconn
