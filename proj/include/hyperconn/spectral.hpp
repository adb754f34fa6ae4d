#pragma once

// Hermitian spectral calculus on square tensors. Every decomposition runs on
// the unfolded matrix and folds the eigen-tensors back.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyperconn/errors.hpp"
#include "hyperconn/tensor.hpp"

namespace hyperconn {

inline constexpr double kDefaultHermitianTol = 1e-10;

template <typename Scalar>
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // descending
  SquareTensor<Scalar> basis;   // columns of unfold(basis) are the matching eigen-tensors
};

template <typename Scalar>
struct MomentEstimate {
  int order = 1;
  SquareTensor<Scalar> value;
  std::size_t sample_count = 0;
};

namespace detail {

// (X + X^H) / 2 when X is Hermitian within tol; anything else is rejected.
template <typename Scalar>
typename SquareTensor<Scalar>::Matrix hermitian_part(const SquareTensor<Scalar>& x, double tol,
                                                     const char* what) {
  if (!is_hermitian(x, tol)) throw ContractError(std::string(what) + ": tensor is not Hermitian");
  return (x.matrix() + x.matrix().adjoint()) / typename SquareTensor<Scalar>::RealScalar(2);
}

template <typename Scalar>
using SolverMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace detail

template <typename Scalar>
SpectralDecomposition<Scalar> eig_hermitian(const SquareTensor<Scalar>& x,
                                            double tol = kDefaultHermitianTol) {
  const detail::SolverMatrix<Scalar> h = detail::hermitian_part(x, tol, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<detail::SolverMatrix<Scalar>> solver(h);
  if (solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver failed");
  // Eigen sorts ascending.
  Eigen::VectorXd values = solver.eigenvalues().reverse();
  detail::SolverMatrix<Scalar> vectors = solver.eigenvectors().rowwise().reverse();
  return {values, SquareTensor<Scalar>(x.row_shape(), vectors)};
}

template <typename Scalar>
Eigen::VectorXd eigenvalues_descending(const SquareTensor<Scalar>& x,
                                       double tol = kDefaultHermitianTol) {
  const detail::SolverMatrix<Scalar> h = detail::hermitian_part(x, tol, "eigenvalues_descending");
  Eigen::SelfAdjointEigenSolver<detail::SolverMatrix<Scalar>> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("eigenvalues_descending: eigensolver failed");
  return solver.eigenvalues().reverse();
}

/// lambda_k with eigenvalues sorted descending, 1 <= k <= total.
template <typename Scalar>
double kth_largest_eigenvalue(const SquareTensor<Scalar>& x, Index k,
                              double tol = kDefaultHermitianTol) {
  if (k < 1 || k > x.total())
    throw InvalidInput("kth_largest_eigenvalue: k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(x.total()) + "]");
  return eigenvalues_descending(x, tol)(k - 1);
}

template <typename Scalar>
double lambda_max(const SquareTensor<Scalar>& x, double tol = kDefaultHermitianTol) {
  return eigenvalues_descending(x, tol)(0);
}

template <typename Scalar>
double lambda_min(const SquareTensor<Scalar>& x, double tol = kDefaultHermitianTol) {
  const auto values = eigenvalues_descending(x, tol);
  return values(values.size() - 1);
}

/// U *_M Lambda *_M U^H from a decomposition.
template <typename Scalar>
SquareTensor<Scalar> reconstruct(const SpectralDecomposition<Scalar>& d) {
  const auto& u = d.basis.matrix();
  typename SquareTensor<Scalar>::Matrix out =
      u * d.eigenvalues.template cast<Scalar>().asDiagonal() * u.adjoint();
  return SquareTensor<Scalar>(d.basis.row_shape(), out);
}

/// g(X) = U *_M g(Lambda) *_M U^H for Hermitian X.
template <typename Scalar, typename F>
SquareTensor<Scalar> tensor_function(const SquareTensor<Scalar>& x, F&& f,
                                     double tol = kDefaultHermitianTol) {
  auto d = eig_hermitian(x, tol);
  for (Index i = 0; i < d.eigenvalues.size(); ++i) {
    const double lambda = d.eigenvalues(i);
    const double mapped = f(lambda);
    if (!std::isfinite(mapped))
      throw DomainError("tensor_function: function undefined at eigenvalue " + std::to_string(lambda));
    d.eigenvalues(i) = mapped;
  }
  return reconstruct(d);
}

template <typename Scalar>
SquareTensor<Scalar> tensor_exp(const SquareTensor<Scalar>& x, double tol = kDefaultHermitianTol) {
  return tensor_function(x, [](double v) { return std::exp(v); }, tol);
}

/// Principal logarithm of a Hermitian positive-definite tensor.
template <typename Scalar>
SquareTensor<Scalar> tensor_log(const SquareTensor<Scalar>& x, double pd_tol = 1e-12,
                                double tol = kDefaultHermitianTol) {
  const double smallest = lambda_min(x, tol);
  if (!(smallest > pd_tol))
    throw DomainError("tensor_log: tensor is not positive definite (lambda_min=" +
                      std::to_string(smallest) + ")");
  return tensor_function(x, [](double v) { return std::log(v); }, tol);
}

/// X^n under *_M; X^0 is the identity.
template <typename Scalar>
SquareTensor<Scalar> tensor_power(const SquareTensor<Scalar>& x, int n) {
  if (n < 0) throw InvalidInput("tensor_power: negative exponent");
  SquareTensor<Scalar> out = identity<Scalar>(x.row_shape());
  for (int i = 0; i < n; ++i) out = einstein_product(out, x);
  return out;
}

/// X >= Y in the semidefinite order: lambda_min(X - Y) >= -tol.
template <typename Scalar>
bool semidefinite_ge(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y, double tol,
                     double herm_tol = kDefaultHermitianTol) {
  detail::require_same_shape(x, y, "semidefinite_ge");
  if (!is_hermitian(x, herm_tol) || !is_hermitian(y, herm_tol))
    throw ContractError("semidefinite_ge: operands must be Hermitian");
  return lambda_min(subtract(x, y), herm_tol) >= -tol;
}

namespace detail {
template <typename Scalar>
void require_samples(std::span<const SquareTensor<Scalar>> samples, const char* what) {
  if (samples.empty()) throw InvalidInput(std::string(what) + ": empty sample list");
  for (const auto& s : samples) require_same_shape(samples.front(), s, what);
}
}  // namespace detail

/// (1/S) * sum_s X_s^n.
template <typename Scalar>
MomentEstimate<Scalar> empirical_moment(std::span<const SquareTensor<Scalar>> samples, int n) {
  detail::require_samples(samples, "empirical_moment");
  if (n < 1) throw InvalidInput("empirical_moment: order must be positive");
  typename SquareTensor<Scalar>::Matrix acc =
      SquareTensor<Scalar>::Matrix::Zero(samples.front().total(), samples.front().total());
  for (const auto& s : samples) acc += tensor_power(s, n).matrix();
  acc /= static_cast<typename SquareTensor<Scalar>::RealScalar>(samples.size());
  return {n, SquareTensor<Scalar>(samples.front().row_shape(), acc), samples.size()};
}

/// psi_2 = E(X^2) - (E X)^2 over the sample.
template <typename Scalar>
SquareTensor<Scalar> empirical_second_cumulant(std::span<const SquareTensor<Scalar>> samples) {
  const auto first = empirical_moment(samples, 1).value;
  const auto second = empirical_moment(samples, 2).value;
  return subtract(second, einstein_product(first, first));
}

/// Sample mean of exp(t X_s).
template <typename Scalar>
SquareTensor<Scalar> empirical_mgf(std::span<const SquareTensor<Scalar>> samples, double t) {
  detail::require_samples(samples, "empirical_mgf");
  typename SquareTensor<Scalar>::Matrix acc =
      SquareTensor<Scalar>::Matrix::Zero(samples.front().total(), samples.front().total());
  for (const auto& s : samples) acc += tensor_exp(scale(Scalar(t), s)).matrix();
  acc /= static_cast<typename SquareTensor<Scalar>::RealScalar>(samples.size());
  return SquareTensor<Scalar>(samples.front().row_shape(), acc);
}

}  // namespace hyperconn
