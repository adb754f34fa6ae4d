#pragma once

// Tail bounds for the algebraic connectivity of an ensemble hypergraph.
//
// The closed forms take the bound's own parameter theta: for the Chernoff
// pair it is the relative deviation from nu (thresholds (1 +/- theta) nu),
// for Bennett and Bernstein it is the absolute threshold. Values are never
// clipped to 1.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hyperconn/errors.hpp"
#include "hyperconn/spectral.hpp"
#include "hyperconn/tensor.hpp"

namespace hyperconn {

struct EnsembleStatistics {
  double nu = 0.0;      // lambda_k(sum_i E L_i)
  double sigma2 = 0.0;  // lambda_k(sum_i E L_i^2)
  Index k = 1;
  Index dim_upper = 1;  // m^M - m!/(m-M)! + 2
  Index dim_lower = 1;  // m!/(m-M)! - 1
};

/// nu and sigma^2 of N i.i.d. members with per-member moments E L and E L^2.
EnsembleStatistics ensemble_statistics(const RealTensor& expected_l, const RealTensor& expected_l2,
                                       int m, int M, int N);

double chernoff_upper(double theta, const EnsembleStatistics& stats);
double chernoff_lower(double theta, const EnsembleStatistics& stats);
double bennett_upper(double theta, const EnsembleStatistics& stats);
double bernstein_upper(double theta, const EnsembleStatistics& stats);

enum class BoundFamily { ChernoffUpper, ChernoffLower, Bennett, Bernstein, MasterNumeric };

std::string to_string(BoundFamily family);
BoundFamily bound_family_from_string(const std::string& name);

/// Whether theta lies in the parameter range stated with the closed form
/// (Chernoff upper: theta > 1; Chernoff lower: 0 <= theta < 1; Bennett and
/// Bernstein: theta > 0).
bool in_stated_range(BoundFamily family, double theta);

struct BoundCurve {
  BoundFamily family = BoundFamily::ChernoffUpper;
  std::vector<double> thetas;
  std::vector<double> values;
  std::vector<bool> validity;
};

/// Closed-form family evaluated on a grid. Points where the formula is
/// undefined (e.g. Chernoff lower at theta >= 1) hold NaN.
BoundCurve bound_curve(BoundFamily family, const std::vector<double>& thetas,
                       const EnsembleStatistics& stats);

// Laplace-transform exponents f(t) of the three families.
double chernoff_exponent(double t);   // e^t - 1
double bennett_exponent(double t);    // e^t - t - 1
double bernstein_exponent(double t);  // t^2 / (2 (1 - t)), 0 < t < 1

struct TRange {
  double lo = 1e-4;
  double hi = 20.0;
};

inline constexpr TRange kDefaultTRange{1e-4, 20.0};
inline constexpr TRange kBernsteinTRange{1e-4, 1.0 - 1e-4};

struct MasterBound {
  double trace_bound = 0.0;    // inf_t e^{-t theta} Tr exp(f(t) V^H A V)
  double relaxed_bound = 0.0;  // inf_t e^{-t theta} (I_M - k + 1) e^{f(t) lambda_k(A)}
  double t_star = 0.0;         // minimizer of the trace objective
};

/// Laplace-transform bound on Pr(lambda_k(sum X_i) >= theta), with V the
/// bottom (total - k + 1) eigen-tensors of the PSD tensor `a_sum`.
MasterBound master_laplace_bound_detail(const std::function<double(double)>& f, const RealTensor& a_sum,
                                        double theta, Index k, TRange t_range = kDefaultTRange);
double master_laplace_bound(const std::function<double(double)>& f, const RealTensor& a_sum, double theta,
                            Index k, TRange t_range = kDefaultTRange);

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Log-spaced grid scan over [lo, hi] followed by golden-section polish of
/// the best bracket down to `width`.
ScalarMinimum minimize_scalar(const std::function<double(double)>& g, double lo, double hi,
                              int grid_points = 512, double width = 1e-10);

/// Subexponential moment condition E(X^p) <= p! A^2 / 2 for 2 <= p <= p_max,
/// checked on the empirical moments of `samples`.
template <typename Scalar>
bool check_subexponential(std::span<const SquareTensor<Scalar>> samples, const SquareTensor<Scalar>& a,
                          int p_max, double tol = 1e-6) {
  if (samples.empty()) throw InvalidInput("check_subexponential: empty sample list");
  if (p_max < 2) throw InvalidInput("check_subexponential: p_max must be >= 2");
  if (!(lambda_min(a) > 0.0)) throw ContractError("check_subexponential: A must be positive definite");
  const SquareTensor<Scalar> a2 = einstein_product(a, a);
  double factorial = 1.0;
  for (int p = 2; p <= p_max; ++p) {
    factorial *= p;
    const auto moment = empirical_moment(samples, p);
    if (!semidefinite_ge(scale(Scalar(factorial / 2.0), a2), moment.value, tol)) return false;
  }
  return true;
}

}  // namespace hyperconn
