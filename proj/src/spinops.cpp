#include "spincat/spinops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spincat {

SpinManifold::SpinManifold(int twoJ, double gJ) : two_j_(twoJ), g_j_(gJ) {
  if (twoJ < 0) throw std::invalid_argument("SpinManifold: 2J must be >= 0");
}

int SpinManifold::index_of_two_m(int twoM) const {
  int twice_index = two_j_ - twoM;
  if (twice_index < 0 || twice_index > 2 * two_j_ || twice_index % 2 != 0)
    throw std::invalid_argument("SpinManifold: 2m = " + std::to_string(twoM) +
                                " is not a label of this manifold");
  return twice_index / 2;
}

std::vector<double> SpinManifold::labels() const {
  std::vector<double> out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = m(i);
  return out;
}

AngularMomentum angular_momentum_ops(const SpinManifold& manifold) {
  const int d = manifold.dim();
  const double j = manifold.j();
  AngularMomentum ops;
  ops.jz = Operator::Zero(d, d);
  ops.jplus = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) ops.jz(i, i) = manifold.m(i);
  // J+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>; |m+1> sits one index above |m>.
  for (int i = 1; i < d; ++i) {
    const double m = manifold.m(i);
    ops.jplus(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  ops.jminus = ops.jplus.adjoint();
  ops.jx = 0.5 * (ops.jplus + ops.jminus);
  ops.jy = (ops.jplus - ops.jminus) / cplx(0.0, 2.0);
  return ops;
}

Operator expm_antihermitian(const Operator& hermitian, double scale) {
  if (hermitian.rows() != hermitian.cols())
    throw std::invalid_argument("expm_antihermitian: matrix is not square");
  if (!is_hermitian(hermitian))
    throw std::invalid_argument("expm_antihermitian: matrix is not Hermitian");
  // Symmetrize so rounding in the input does not leak into the eigenbasis.
  const Operator h = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> eig(h);
  const auto& vals = eig.eigenvalues();
  Eigen::VectorXcd phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k)
    phases(k) = std::exp(cplx(0.0, -scale * vals(k)));
  const Operator& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Operator su2_rotation(const SpinManifold& manifold,
                      const std::array<double, 3>& axis, double angle) {
  const double norm =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("su2_rotation: axis is not a unit vector");
  const auto ops = angular_momentum_ops(manifold);
  const Operator generator = axis[0] * ops.jx + axis[1] * ops.jy + axis[2] * ops.jz;
  return expm_antihermitian(generator, angle);
}

double max_abs(const Operator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

bool is_unitary(const Operator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a.adjoint() * a - Operator::Identity(a.rows(), a.cols())) <= tol;
}

StateVector basis_state(int dim, int index) {
  if (index < 0 || index >= dim)
    throw std::out_of_range("basis_state: index out of range");
  StateVector v = StateVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

}  // namespace spincat
