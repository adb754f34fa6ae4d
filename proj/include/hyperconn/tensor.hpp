#pragma once

// Dense even-order square tensors and the Einstein-product algebra.
//
// A SquareTensor of order 2M has row modes (I_1..I_M) and column modes equal
// to the row modes. Entries are stored row-major over flattened multi-indices:
// entry (i_1..i_M, j_1..j_M) sits at flat position rowIndex(i) * total +
// colIndex(j), which is exactly the row-major storage of the unfolded
// total x total matrix. Values are immutable once constructed.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperconn/errors.hpp"

namespace hyperconn {

using Index = Eigen::Index;

class Shape {
 public:
  Shape() : Shape(std::vector<Index>{1}) {}
  explicit Shape(std::vector<Index> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw DimensionError("Shape: at least one mode is required");
    total_ = 1;
    for (Index n : modes_) {
      if (n < 1) throw DimensionError("Shape: mode sizes must be >= 1");
      total_ *= n;
    }
  }
  Shape(std::initializer_list<Index> modes) : Shape(std::vector<Index>(modes)) {}

  /// M identical modes of size `size`, the shape of an m-vertex Laplacian.
  static Shape uniform(Index size, Index order) {
    return Shape(std::vector<Index>(static_cast<std::size_t>(order), size));
  }

  const std::vector<Index>& modes() const { return modes_; }
  Index order() const { return static_cast<Index>(modes_.size()); }
  Index total() const { return total_; }

  Index flatten(std::span<const Index> multi) const {
    if (static_cast<Index>(multi.size()) != order())
      throw DimensionError("Shape::flatten: multi-index has wrong length");
    Index flat = 0;
    for (std::size_t d = 0; d < modes_.size(); ++d) {
      if (multi[d] < 0 || multi[d] >= modes_[d])
        throw DimensionError("Shape::flatten: index out of range");
      flat = flat * modes_[d] + multi[d];
    }
    return flat;
  }

  std::vector<Index> unflatten(Index flat) const {
    if (flat < 0 || flat >= total_) throw DimensionError("Shape::unflatten: index out of range");
    std::vector<Index> multi(modes_.size());
    for (std::size_t d = modes_.size(); d-- > 0;) {
      multi[d] = flat % modes_[d];
      flat /= modes_[d];
    }
    return multi;
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.modes_ == b.modes_; }

 private:
  std::vector<Index> modes_;
  Index total_ = 1;
};

template <typename Scalar_>
class SquareTensor {
 public:
  using Scalar = Scalar_;
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SquareTensor() : SquareTensor(Shape{}) {}
  explicit SquareTensor(Shape shape)
      : shape_(std::move(shape)), data_(Matrix::Zero(shape_.total(), shape_.total())) {}

  template <typename Derived>
  SquareTensor(Shape shape, const Eigen::MatrixBase<Derived>& unfolded)
      : shape_(std::move(shape)), data_(unfolded) {
    if (data_.rows() != shape_.total() || data_.cols() != shape_.total())
      throw DimensionError("SquareTensor: unfolded matrix side must equal shape total");
  }

  const Shape& row_shape() const { return shape_; }
  const Shape& col_shape() const { return shape_; }
  Index total() const { return shape_.total(); }
  Index order() const { return 2 * shape_.order(); }

  Scalar operator()(std::span<const Index> row, std::span<const Index> col) const {
    return data_(shape_.flatten(row), shape_.flatten(col));
  }
  Scalar coeff(Index flat_row, Index flat_col) const { return data_(flat_row, flat_col); }

  /// The unfolded total x total matrix (row-major, shares storage with the tensor).
  const Matrix& matrix() const { return data_; }
  std::span<const Scalar> entries() const {
    return {data_.data(), static_cast<std::size_t>(data_.size())};
  }

 private:
  Shape shape_;
  Matrix data_;
};

using Tensor = SquareTensor<std::complex<double>>;
using RealTensor = SquareTensor<double>;

namespace detail {
template <typename Scalar>
void require_same_shape(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y,
                        const char* what) {
  if (!(x.row_shape() == y.row_shape())) throw DimensionError(std::string(what) + ": shape mismatch");
}
}  // namespace detail

template <typename Scalar>
SquareTensor<Scalar> zero_tensor(const Shape& shape) {
  return SquareTensor<Scalar>(shape);
}

template <typename Scalar>
SquareTensor<Scalar> identity(const Shape& shape) {
  // Product of per-mode Kronecker deltas is 1 exactly when the flattened
  // row and column indices coincide.
  using Matrix = typename SquareTensor<Scalar>::Matrix;
  return SquareTensor<Scalar>(shape, Matrix::Identity(shape.total(), shape.total()));
}

/// All-one order-M tensor of dimension total x 1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ones_tensor(const Shape& shape) {
  return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(shape.total());
}

template <typename Scalar>
const typename SquareTensor<Scalar>::Matrix& unfold(const SquareTensor<Scalar>& x) {
  return x.matrix();
}

template <typename Derived>
SquareTensor<typename Derived::Scalar> fold(const Eigen::MatrixBase<Derived>& m, const Shape& shape) {
  if (m.rows() != shape.total() || m.cols() != shape.total())
    throw DimensionError("fold: matrix side must equal shape total");
  return SquareTensor<typename Derived::Scalar>(shape, m);
}

template <typename Scalar>
SquareTensor<Scalar> add(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  detail::require_same_shape(x, y, "add");
  return SquareTensor<Scalar>(x.row_shape(), x.matrix() + y.matrix());
}

template <typename Scalar>
SquareTensor<Scalar> subtract(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  detail::require_same_shape(x, y, "subtract");
  return SquareTensor<Scalar>(x.row_shape(), x.matrix() - y.matrix());
}

template <typename Scalar>
SquareTensor<Scalar> scale(Scalar c, const SquareTensor<Scalar>& x) {
  return SquareTensor<Scalar>(x.row_shape(), c * x.matrix());
}

/// X *_M Y: contraction of the column modes of X with the row modes of Y.
template <typename Scalar>
SquareTensor<Scalar> einstein_product(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  if (!(x.col_shape() == y.row_shape()))
    throw DimensionError("einstein_product: column modes of X must match row modes of Y");
  const Index n = x.total();
  const auto a = x.entries();
  const auto b = y.entries();
  typename SquareTensor<Scalar>::Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) {
      Scalar acc{0};
      for (Index j = 0; j < n; ++j) acc += a[i * n + j] * b[j * n + k];
      out(i, k) = acc;
    }
  }
  return SquareTensor<Scalar>(x.row_shape(), out);
}

/// Tensor-vector Einstein product X *_M v for an order-M tensor v (flattened).
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> einstein_product(const SquareTensor<Scalar>& x,
                                                         const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != x.total()) throw DimensionError("einstein_product: vector size mismatch");
  return x.matrix() * v;
}

template <typename Scalar>
SquareTensor<Scalar> conjugate_transpose(const SquareTensor<Scalar>& x) {
  const Index n = x.total();
  typename SquareTensor<Scalar>::Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(j, i) = Eigen::numext::conj(x.coeff(i, j));
  return SquareTensor<Scalar>(x.row_shape(), out);
}

template <typename Scalar>
Scalar trace(const SquareTensor<Scalar>& x) {
  Scalar acc{0};
  for (Index i = 0; i < x.total(); ++i) acc += x.coeff(i, i);
  return acc;
}

/// <X, Y> = Tr(X^H *_M Y).
template <typename Scalar>
Scalar inner_product(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  detail::require_same_shape(x, y, "inner_product");
  return trace(einstein_product(conjugate_transpose(x), y));
}

template <typename Scalar>
typename SquareTensor<Scalar>::RealScalar frobenius_norm(const SquareTensor<Scalar>& x) {
  return x.matrix().norm();
}

/// True iff ||X - X^H||_F <= tol * max(1, ||X||_F).
template <typename Scalar>
bool is_hermitian(const SquareTensor<Scalar>& x, double tol) {
  const double skew = (x.matrix() - x.matrix().adjoint()).norm();
  return skew <= tol * std::max(1.0, static_cast<double>(x.matrix().norm()));
}

template <typename To, typename From>
SquareTensor<To> cast(const SquareTensor<From>& x) {
  return SquareTensor<To>(x.row_shape(), x.matrix().template cast<To>());
}

template <typename Scalar>
SquareTensor<Scalar> operator+(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  return add(x, y);
}
template <typename Scalar>
SquareTensor<Scalar> operator-(const SquareTensor<Scalar>& x, const SquareTensor<Scalar>& y) {
  return subtract(x, y);
}
template <typename Scalar>
SquareTensor<Scalar> operator*(typename SquareTensor<Scalar>::Scalar c, const SquareTensor<Scalar>& x) {
  return scale(c, x);
}

}  // namespace hyperconn
