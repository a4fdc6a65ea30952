// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "specden/types.hpp"

namespace specden {

/// Dense third-order tensor indexed (f, t, n) with f fastest, then t, then n.
/// The memory layout coincides with the column-major F x (T*N) matricization,
/// so matricize/tensorize are reshapes and frontal slices are views.
template <typename Scalar>
class Tensor3 {
 public:
  Tensor3() = default;

  Tensor3(Index dim_f, Index dim_t, Index dim_n)
      : dim_f_(dim_f), dim_t_(dim_t), dim_n_(dim_n) {
    if (dim_f < 1 || dim_t < 1 || dim_n < 1) {
      throw std::invalid_argument("Tensor3: all dimensions must be >= 1");
    }
    values_ = VectorX<Scalar>::Zero(dim_f * dim_t * dim_n);
  }

  Index dim_f() const { return dim_f_; }
  Index dim_t() const { return dim_t_; }
  Index dim_n() const { return dim_n_; }
  Index size() const { return values_.size(); }

  Scalar operator()(Index f, Index t, Index n) const {
    return values_[f + dim_f_ * (t + dim_t_ * n)];
  }
  Scalar& operator()(Index f, Index t, Index n) {
    return values_[f + dim_f_ * (t + dim_t_ * n)];
  }

  const VectorX<Scalar>& values() const { return values_; }
  VectorX<Scalar>& values() { return values_; }

  /// Frontal slice n as an F x T view.
  Eigen::Map<const MatrixX<Scalar>> slice(Index n) const {
    return {values_.data() + dim_f_ * dim_t_ * n, dim_f_, dim_t_};
  }
  Eigen::Map<MatrixX<Scalar>> slice(Index n) {
    return {values_.data() + dim_f_ * dim_t_ * n, dim_f_, dim_t_};
  }

  /// Zero-copy F x (T*N) view; column (n*T + t) is column t of slice n.
  Eigen::Map<const MatrixX<Scalar>> matricized() const {
    return {values_.data(), dim_f_, dim_t_ * dim_n_};
  }

 private:
  Index dim_f_ = 0;
  Index dim_t_ = 0;
  Index dim_n_ = 0;
  VectorX<Scalar> values_;
};

using Tensor3d = Tensor3<double>;

/// Concatenates the frontal slices along columns into an F x (T*N) matrix.
template <typename Scalar>
MatrixX<Scalar> matricize(const Tensor3<Scalar>& x) {
  return x.matricized();
}

/// Exact inverse of matricize. m.cols() must equal dim_t * dim_n.
template <typename Scalar>
Tensor3<Scalar> tensorize(const MatrixX<Scalar>& m, Index dim_t, Index dim_n) {
  if (dim_t < 1 || dim_n < 1 || m.cols() != dim_t * dim_n) {
    throw std::invalid_argument(
        "tensorize: matrix has " + std::to_string(m.cols()) +
        " columns, expected dim_t*dim_n = " + std::to_string(dim_t * dim_n));
  }
  Tensor3<Scalar> out(m.rows(), dim_t, dim_n);
  out.values() = Eigen::Map<const VectorX<Scalar>>(m.data(), m.size());
  return out;
}

/// Column-wise Kronecker product: a (c.rows * b.rows) x K matrix whose
/// column k holds c(n,k)*b(t,k) at row n*b.rows + t. The b-index runs
/// fastest, matching the matricize column order.
template <typename DerivedC, typename DerivedB>
MatrixX<typename DerivedC::Scalar> khatri_rao(
    const Eigen::MatrixBase<DerivedC>& c, const Eigen::MatrixBase<DerivedB>& b) {
  if (c.cols() != b.cols()) {
    throw std::invalid_argument("khatri_rao: column counts must match");
  }
  MatrixX<typename DerivedC::Scalar> out(c.rows() * b.rows(), c.cols());
  for (Index k = 0; k < c.cols(); ++k) {
    for (Index n = 0; n < c.rows(); ++n) {
      out.col(k).segment(n * b.rows(), b.rows()) = c(n, k) * b.col(k);
    }
  }
  return out;
}

/// Sum of squared entries.
template <typename Derived>
typename Derived::Scalar frobenius_sq(const Eigen::MatrixBase<Derived>& a) {
  return a.squaredNorm();
}

template <typename Scalar>
Scalar frobenius_sq(const Tensor3<Scalar>& x) {
  // Same traversal as the matricized view, so the two routes agree exactly.
  return x.values().squaredNorm();
}

/// Mode-2 unfolding: T x (F*N) with column (n*F + f) holding x(f, :, n).
template <typename Scalar>
MatrixX<Scalar> unfold_mode2(const Tensor3<Scalar>& x) {
  MatrixX<Scalar> out(x.dim_t(), x.dim_f() * x.dim_n());
  for (Index n = 0; n < x.dim_n(); ++n) {
    out.middleCols(n * x.dim_f(), x.dim_f()) = x.slice(n).transpose();
  }
  return out;
}

/// Mode-3 unfolding: N x (F*T) with column (t*F + f) holding x(f, t, :).
template <typename Scalar>
MatrixX<Scalar> unfold_mode3(const Tensor3<Scalar>& x) {
  MatrixX<Scalar> out(x.dim_n(), x.dim_f() * x.dim_t());
  for (Index n = 0; n < x.dim_n(); ++n) {
    out.row(n) = Eigen::Map<const VectorX<Scalar>>(
                     x.values().data() + n * x.dim_f() * x.dim_t(),
                     x.dim_f() * x.dim_t())
                     .transpose();
  }
  return out;
}

/// Sum of K rank-1 outer products: entry (f,t,n) = sum_k a(f,k) b(t,k) c(n,k).
template <typename DerivedA, typename DerivedB, typename DerivedC>
Tensor3<typename DerivedA::Scalar> cp_reconstruct(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    const Eigen::MatrixBase<DerivedC>& c) {
  if (a.cols() != b.cols() || a.cols() != c.cols()) {
    throw std::invalid_argument("cp_reconstruct: factor ranks must agree");
  }
  Tensor3<typename DerivedA::Scalar> out(a.rows(), b.rows(), c.rows());
  for (Index n = 0; n < c.rows(); ++n) {
    out.slice(n).noalias() =
        (a.derived().array().rowwise() * c.derived().row(n).array()).matrix() *
        b.derived().transpose();
  }
  return out;
}

}  // namespace specden
