#pragma once

// Small dense helpers on Eigen expressions. Everything here is templated on
// the matrix type so it works with fixed-size 2x2 qubit blocks and with
// dynamically sized reduced density matrices alike.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace feqo::linalg {

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return ((a + a.adjoint()) * typename Derived::RealScalar(0.5)).eval();
}

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// Square root of a Hermitian positive semidefinite matrix. Eigenvalues below
// zero (round-off) are clamped.
template <typename Derived>
auto hermitian_sqrt(const Eigen::MatrixBase<Derived>& a) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  auto roots = es.eigenvalues().cwiseMax(0).cwiseSqrt();
  Matrix out = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

template <typename Derived>
auto hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().eval();
}

// -sum p ln p with eigenvalues below `zero_cutoff` treated as exact zeros.
template <typename Derived>
typename Derived::Scalar shannon_entropy(const Eigen::DenseBase<Derived>& spectrum, double zero_cutoff = 1e-14) {
  typename Derived::Scalar s = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) {
    const auto p = spectrum(i);
    if (p > zero_cutoff) s -= p * std::log(p);
  }
  return s;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace feqo::linalg
