#include "hyperconn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperconn/hypergraph.hpp"

namespace hyperconn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive_sigma2(const EnsembleStatistics& stats, const char* what) {
  if (!(stats.sigma2 > 0.0)) throw InvalidInput(std::string(what) + ": sigma^2 must be positive");
}

// log(sum_j exp(c * mu_j)) without overflow.
double log_trace_exp(double c, std::span<const double> mu) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : mu) peak = std::max(peak, c * v);
  double acc = 0.0;
  for (double v : mu) acc += std::exp(c * v - peak);
  return peak + std::log(acc);
}

}  // namespace

EnsembleStatistics ensemble_statistics(const RealTensor& expected_l, const RealTensor& expected_l2, int m,
                                       int M, int N) {
  if (N < 1) throw InvalidInput("ensemble_statistics: N must be >= 1");
  EnsembleStatistics stats;
  stats.k = connectivity_index(m, M);
  stats.dim_upper = upper_dimension_factor(m, M);
  stats.dim_lower = stats.k;
  stats.nu = kth_largest_eigenvalue(scale(double(N), expected_l), stats.k);
  stats.sigma2 = kth_largest_eigenvalue(scale(double(N), expected_l2), stats.k);
  return stats;
}

double chernoff_upper(double theta, const EnsembleStatistics& stats) {
  if (!(theta > 0.0)) throw InvalidInput("chernoff_upper: theta must be positive");
  // [e^theta / (1 + theta)^(1 + theta)]^nu
  const double log_bracket = theta - (1.0 + theta) * std::log1p(theta);
  return static_cast<double>(stats.dim_upper) * std::exp(stats.nu * log_bracket);
}

double chernoff_lower(double theta, const EnsembleStatistics& stats) {
  if (!(theta >= 0.0 && theta < 1.0)) throw InvalidInput("chernoff_lower: theta must lie in [0, 1)");
  // [e^-theta / (1 - theta)^(1 - theta)]^nu
  const double log_bracket = -theta - (1.0 - theta) * std::log1p(-theta);
  return static_cast<double>(stats.dim_lower) * std::exp(stats.nu * log_bracket);
}

double bennett_upper(double theta, const EnsembleStatistics& stats) {
  if (!(theta > 0.0)) throw InvalidInput("bennett_upper: theta must be positive");
  require_positive_sigma2(stats, "bennett_upper");
  const double log_value = theta - (theta + stats.sigma2) * std::log1p(theta / stats.sigma2);
  return static_cast<double>(stats.dim_upper) * std::exp(log_value);
}

double bernstein_upper(double theta, const EnsembleStatistics& stats) {
  if (!(theta > 0.0)) throw InvalidInput("bernstein_upper: theta must be positive");
  require_positive_sigma2(stats, "bernstein_upper");
  return static_cast<double>(stats.dim_upper) * std::exp(-theta * theta / (2.0 * (theta + stats.sigma2)));
}

std::string to_string(BoundFamily family) {
  switch (family) {
    case BoundFamily::ChernoffUpper: return "chernoff_upper";
    case BoundFamily::ChernoffLower: return "chernoff_lower";
    case BoundFamily::Bennett: return "bennett";
    case BoundFamily::Bernstein: return "bernstein";
    case BoundFamily::MasterNumeric: return "master";
  }
  return "unknown";
}

BoundFamily bound_family_from_string(const std::string& name) {
  for (auto f : {BoundFamily::ChernoffUpper, BoundFamily::ChernoffLower, BoundFamily::Bennett,
                 BoundFamily::Bernstein, BoundFamily::MasterNumeric})
    if (to_string(f) == name) return f;
  throw InvalidInput("unknown bound family '" + name + "'");
}

bool in_stated_range(BoundFamily family, double theta) {
  switch (family) {
    case BoundFamily::ChernoffUpper: return theta > 1.0;
    case BoundFamily::ChernoffLower: return theta >= 0.0 && theta < 1.0;
    default: return theta > 0.0;
  }
}

BoundCurve bound_curve(BoundFamily family, const std::vector<double>& thetas, const EnsembleStatistics& stats) {
  BoundCurve curve{family, thetas, {}, {}};
  for (double theta : thetas) {
    double value = kNaN;
    switch (family) {
      case BoundFamily::ChernoffUpper:
        if (theta > 0.0) value = chernoff_upper(theta, stats);
        break;
      case BoundFamily::ChernoffLower:
        if (theta >= 0.0 && theta < 1.0) value = chernoff_lower(theta, stats);
        break;
      case BoundFamily::Bennett:
        if (theta > 0.0 && stats.sigma2 > 0.0) value = bennett_upper(theta, stats);
        break;
      case BoundFamily::Bernstein:
        if (theta > 0.0 && stats.sigma2 > 0.0) value = bernstein_upper(theta, stats);
        break;
      case BoundFamily::MasterNumeric:
        throw InvalidInput("bound_curve: the numeric master bound has no closed form");
    }
    curve.values.push_back(value);
    curve.validity.push_back(in_stated_range(family, theta) && std::isfinite(value));
  }
  return curve;
}

double chernoff_exponent(double t) { return std::expm1(t); }
double bennett_exponent(double t) { return std::expm1(t) - t; }
double bernstein_exponent(double t) { return t * t / (2.0 * (1.0 - t)); }

ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi, int grid_points,
                              double width) {
  if (!(lo > 0.0) || !(hi > lo) || grid_points < 3) throw InvalidInput("minimize_scalar: empty t range");
  std::vector<double> ts(static_cast<std::size_t>(grid_points));
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) ts[i] = std::exp(log_lo + step * i);
  ts.back() = hi;

  std::size_t best = 0;
  double best_value = g(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double v = g(ts[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = ts[best == 0 ? 0 : best - 1];
  double b = ts[std::min(best + 1, ts.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > width) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  const double mid = 0.5 * (a + b);
  const double g_mid = g(mid);
  if (g_mid < best_value) return {mid, g_mid};
  return {ts[best], best_value};
}

MasterBound master_laplace_bound_detail(const std::function<double(double)>& f, const RealTensor& a_sum,
                                        double theta, Index k, TRange t_range) {
  if (!(t_range.lo > 0.0) || !(t_range.hi > t_range.lo))
    throw InvalidInput("master_laplace_bound: empty t range");
  const Index n = a_sum.total();
  if (k < 1 || k > n) throw InvalidInput("master_laplace_bound: k out of range");
  const Eigen::VectorXd mu = eigenvalues_descending(a_sum);
  const double psd_tol = 1e-9 * std::max(1.0, frobenius_norm(a_sum));
  if (mu(n - 1) < -psd_tol) throw ContractError("master_laplace_bound: A_sum is not positive semidefinite");

  // V^H A V restricted to the bottom (n - k + 1) eigen-tensors is diagonal
  // with entries mu_k..mu_n, so its trace-exponential is a sum of scalars.
  const std::vector<double> bottom(mu.data() + (k - 1), mu.data() + n);
  const double dim = static_cast<double>(n - k + 1);
  const double lambda_k = mu(k - 1);

  auto trace_objective = [&](double t) { return -t * theta + log_trace_exp(f(t), bottom); };
  auto relaxed_objective = [&](double t) { return -t * theta + std::log(dim) + f(t) * lambda_k; };

  const ScalarMinimum trace_min = minimize_scalar(trace_objective, t_range.lo, t_range.hi);
  const ScalarMinimum relaxed_min = minimize_scalar(relaxed_objective, t_range.lo, t_range.hi);
  return {std::exp(trace_min.value), std::exp(relaxed_min.value), trace_min.argmin};
}

double master_laplace_bound(const std::function<double(double)>& f, const RealTensor& a_sum, double theta,
                            Index k, TRange t_range) {
  return master_laplace_bound_detail(f, a_sum, theta, k, t_range).trace_bound;
}

}  // namespace hyperconn
