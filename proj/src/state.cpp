#include "spincat/state.hpp"

#include <cmath>
#include <stdexcept>

namespace spincat {

DensityMatrix DensityMatrix::from_matrix(Operator m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  if (!is_hermitian(m, tol))
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian");
  if (std::abs(m.trace() - cplx(1.0)) > tol)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  DensityMatrix out(0.5 * (m + m.adjoint()));
  if (out.min_eigenvalue() < -tol)
    throw std::invalid_argument("DensityMatrix: matrix is not positive semidefinite");
  return out;
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("DensityMatrix: zero state vector");
  const StateVector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw std::invalid_argument("DensityMatrix: dimension must be positive");
  return DensityMatrix(Operator::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Operator> eig(m_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

StateVector canonical_phase(const StateVector& psi, double tol) {
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) > tol) {
      const cplx phase = std::conj(psi(i)) / std::abs(psi(i));
      return psi * phase;
    }
  }
  return psi;
}

double overlap_abs(const StateVector& a, const StateVector& b) {
  return std::abs(a.dot(b));
}

}  // namespace spincat
