#include "hyperconn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "hyperconn/io.hpp"
#include "hyperconn/spectral.hpp"

namespace hyperconn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t family_slot(BoundFamily family) {
  return static_cast<std::size_t>(std::find(kAllFamilies.begin(), kAllFamilies.end(), family) -
                                  kAllFamilies.begin());
}

// Rethrows `cause` as the same error category with the trial index prefixed.
[[noreturn]] void rethrow_for_trial(std::exception_ptr cause, int trial) {
  const std::string where = "trial " + std::to_string(trial) + ": ";
  try {
    std::rethrow_exception(cause);
  } catch (const DimensionError& e) {
    throw DimensionError(where + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  } catch (const ContractError& e) {
    throw ContractError(where + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

bool members_psd(const EnsembleSpec& spec) {
  if (spec.center) return false;
  if (const auto* c = std::get_if<CenteredBounded>(&spec.distribution)) {
    if (c->base) {
      return std::all_of(c->base->edges().begin(), c->base->edges().end(),
                         [&](const Hyperedge& e) { return e.weight - c->scale >= 0.0; });
    }
    return c->base_weight - c->scale >= 0.0;
  }
  return true;  // Bernoulli and uniform weights are nonnegative by validation
}

std::string kernel_name(MasterKernel k) {
  switch (k) {
    case MasterKernel::Chernoff: return "chernoff";
    case MasterKernel::Bennett: return "bennett";
    case MasterKernel::Bernstein: return "bernstein";
  }
  return "chernoff";
}

}  // namespace

void ExperimentConfig::validate() const {
  ensemble.validate();
  if (trials < 1) throw InvalidInput("trials must be >= 1");
  if (theta_values.empty()) throw InvalidInput("theta grid must be nonempty");
  if (!std::is_sorted(theta_values.begin(), theta_values.end()))
    throw InvalidInput("theta grid must be sorted ascending");
  for (double v : theta_values)
    if (!std::isfinite(v)) throw InvalidInput("theta values must be finite");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw InvalidInput("ci_level must lie in (0, 1)");
  if (bound_families.empty()) throw InvalidInput("at least one bound family is required");
}

MasterKernel ExperimentConfig::effective_master_kernel() const {
  if (master_kernel) return *master_kernel;
  return ensemble.center ? MasterKernel::Bennett : MasterKernel::Chernoff;
}

double normal_two_sided_quantile(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidInput("confidence level must lie in (0, 1)");
  // Solve erfc(z / sqrt 2) = 1 - level by Newton's method; the left side is
  // convex and decreasing in z, so iteration from 0 converges monotonically.
  const double target = 1.0 - level;
  const double pdf_scale = std::sqrt(2.0 / std::acos(-1.0));
  double z = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double residual = std::erfc(z / std::sqrt(2.0)) - target;
    const double slope = -pdf_scale * std::exp(-0.5 * z * z);
    const double next = z - residual / slope;
    if (std::abs(next - z) < 1e-15 * std::max(1.0, z)) return next;
    z = next;
  }
  return z;
}

TailEstimate wilson_interval(std::size_t successes, std::size_t n, double level) {
  if (n == 0) throw InvalidInput("wilson_interval: no samples");
  const double z = normal_two_sided_quantile(level);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {p, std::clamp(std::min(center - half, p), 0.0, 1.0), std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

TailEstimate empirical_tail(std::span<const double> samples, double theta, double level) {
  if (samples.empty()) throw InvalidInput("empirical_tail: empty sample list");
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](double s) { return s >= theta; });
  return wilson_interval(static_cast<std::size_t>(hits), samples.size(), level);
}

TailEstimate empirical_lower_tail(std::span<const double> samples, double theta, double level) {
  if (samples.empty()) throw InvalidInput("empirical_lower_tail: empty sample list");
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](double s) { return s <= theta; });
  return wilson_interval(static_cast<std::size_t>(hits), samples.size(), level);
}

std::vector<double> run_trials(const ExperimentConfig& config, int workers) {
  config.validate();
  const EnsembleModel model(config.ensemble);
  const int n = config.ensemble.N;
  const Index k = connectivity_index(config.ensemble.m, config.ensemble.M);
  const int trials = config.trials;
  std::vector<double> alphas(static_cast<std::size_t>(trials), kNaN);

  auto one_trial = [&](int t) {
    RealTensor::Matrix sum = RealTensor::Matrix::Zero(model.shape().total(), model.shape().total());
    for (int i = 0; i < n; ++i)
      sum += model.member_tensor(static_cast<std::int64_t>(t) * n + i).matrix();
    alphas[static_cast<std::size_t>(t)] = kth_largest_eigenvalue(RealTensor(model.shape(), sum), k);
  };

  workers = std::clamp(workers, 1, std::max(1, trials));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  int first_error_trial = std::numeric_limits<int>::max();

  auto worker = [&]() {
    for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
      try {
        one_trial(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (t < first_error_trial) {
          first_error_trial = t;
          first_error = std::current_exception();
        }
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) rethrow_for_trial(first_error, first_error_trial);
  return alphas;
}

std::size_t TailReport::violation_count() const {
  std::size_t count = 0;
  for (const auto& row : rows) count += row.violations.size();
  return count;
}

EnsembleStatistics config_statistics(const ExperimentConfig& config) {
  const EnsembleModel model(config.ensemble);
  return ensemble_statistics(model.member_mean(), model.member_second_moment(), config.ensemble.m,
                             config.ensemble.M, config.ensemble.N);
}

TailReport compare_samples(const ExperimentConfig& config, std::span<const double> samples) {
  config.validate();
  if (samples.empty()) throw InvalidInput("compare: empty sample list");
  const EnsembleSpec& spec = config.ensemble;
  const EnsembleModel model(spec);
  const EnsembleStatistics stats =
      ensemble_statistics(model.member_mean(), model.member_second_moment(), spec.m, spec.M, spec.N);
  const MasterKernel kernel = config.effective_master_kernel();

  TailReport report;
  auto& meta = report.metadata;
  meta.label = config.label;
  meta.m = spec.m;
  meta.M = spec.M;
  meta.N = spec.N;
  meta.trials = static_cast<int>(samples.size());
  meta.seed = spec.seed;
  meta.distribution = distribution_name(spec.distribution);
  meta.center = spec.center;
  meta.normalize = spec.normalize;
  meta.normalization_scale = model.normalization_scale();
  meta.nu = stats.nu;
  meta.sigma2 = stats.sigma2;
  meta.k = stats.k;
  meta.dim_upper = stats.dim_upper;
  meta.dim_lower = stats.dim_lower;
  meta.ci_level = config.ci_level;
  meta.master_kernel = kernel_name(kernel);
  meta.chernoff_hypotheses = members_psd(spec);
  meta.bennett_hypotheses = spec.center && spec.normalize;
  meta.families = config.bound_families;

  std::vector<double> thetas = config.theta_values;
  if (config.theta_mode == ThetaMode::NuMultiple) {
    if (!(stats.nu > 0.0)) throw InvalidInput("theta grid given as multiples of nu, but nu is not positive");
    for (double& t : thetas) t *= stats.nu;
  } else if (config.theta_mode == ThetaMode::SigmaMultiple) {
    if (!(stats.sigma2 > 0.0))
      throw InvalidInput("theta grid given as multiples of sigma, but sigma^2 is not positive");
    for (double& t : thetas) t *= std::sqrt(stats.sigma2);
  }

  // Master bound ingredients: A_sum = N E X (Chernoff kernel) or N E X^2.
  const RealTensor master_sum =
      scale(double(spec.N), kernel == MasterKernel::Chernoff ? model.member_mean() : model.member_second_moment());
  const std::function<double(double)> master_f = kernel == MasterKernel::Chernoff  ? chernoff_exponent
                                                 : kernel == MasterKernel::Bennett ? bennett_exponent
                                                                                   : bernstein_exponent;
  const TRange master_range = kernel == MasterKernel::Bernstein ? kBernsteinTRange : kDefaultTRange;
  const bool master_hypotheses =
      kernel == MasterKernel::Chernoff ? meta.chernoff_hypotheses : meta.bennett_hypotheses;

  auto requested = [&](BoundFamily f) {
    return std::find(config.bound_families.begin(), config.bound_families.end(), f) !=
           config.bound_families.end();
  };

  for (double theta : thetas) {
    TailRow row;
    row.theta = theta;
    row.upper = empirical_tail(samples, theta, config.ci_level);
    row.lower = empirical_lower_tail(samples, theta, config.ci_level);
    row.bounds.fill(kNaN);
    row.validity.fill('-');

    for (BoundFamily family : kAllFamilies) {
      if (!requested(family)) continue;
      const std::size_t slot = family_slot(family);
      double value = kNaN;
      bool valid = false;
      bool hypotheses = false;
      bool lower_tail = false;
      switch (family) {
        case BoundFamily::ChernoffUpper:
          hypotheses = meta.chernoff_hypotheses;
          if (stats.nu > 0.0 && theta > stats.nu) {
            const double rel = theta / stats.nu - 1.0;
            value = chernoff_upper(rel, stats);
            valid = in_stated_range(family, rel);
          }
          break;
        case BoundFamily::ChernoffLower:
          hypotheses = meta.chernoff_hypotheses;
          lower_tail = true;
          if (stats.nu > 0.0 && theta > 0.0 && theta <= stats.nu) {
            const double rel = 1.0 - theta / stats.nu;
            value = chernoff_lower(rel, stats);
            valid = in_stated_range(family, rel);
          }
          break;
        case BoundFamily::Bennett:
          hypotheses = meta.bennett_hypotheses;
          if (theta > 0.0 && stats.sigma2 > 0.0) {
            value = bennett_upper(theta, stats);
            valid = true;
          }
          break;
        case BoundFamily::Bernstein:
          hypotheses = meta.bennett_hypotheses;
          if (theta > 0.0 && stats.sigma2 > 0.0) {
            value = bernstein_upper(theta, stats);
            valid = true;
          }
          break;
        case BoundFamily::MasterNumeric:
          hypotheses = master_hypotheses;
          if (theta > 0.0) {
            const MasterBound mb = master_laplace_bound_detail(master_f, master_sum, theta, stats.k, master_range);
            value = mb.relaxed_bound;
            row.master_trace = mb.trace_bound;
            valid = true;
          }
          break;
      }
      row.bounds[slot] = value;
      row.validity[slot] = (valid && hypotheses) ? '1' : '0';
      const double ci_low = lower_tail ? row.lower.ci_low : row.upper.ci_low;
      if (hypotheses && std::isfinite(value) && ci_low > value) row.violations.push_back(family);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

TailReport compare(const ExperimentConfig& config, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> samples = run_trials(config, workers);
  TailReport report = compare_samples(config, samples);
  report.metadata.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const TailReport& report, std::ostream& out) {
  out << "theta,empirical,ci_low,ci_high,chernoff_upper,chernoff_lower,bennett,bernstein,master,valid_flags\n";
  for (const auto& row : report.rows) {
    out << format_double(row.theta) << ',' << format_double(row.upper.estimate) << ','
        << format_double(row.upper.ci_low) << ',' << format_double(row.upper.ci_high);
    for (double b : row.bounds) out << ',' << format_double(b);
    out << ',' << std::string(row.validity.begin(), row.validity.end()) << '\n';
  }
}

void write_json(const TailReport& report, std::ostream& out) { out << report_to_json(report).dump(2) << '\n'; }

void emit(const TailReport& report, const std::string& path, ReportFormat format) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (format == ReportFormat::Csv) {
    write_csv(report, file);
  } else {
    write_json(report, file);
  }
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace hyperconn
