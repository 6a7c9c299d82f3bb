#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace spincat {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kOperatorTol = 1e-12;

/// A (2J+1)-dimensional angular momentum manifold.
///
/// J is stored as the integer 2J so half-integer spins are exact. Basis
/// index i carries the label m = J - i, so index 0 is m = +J and the last
/// index is m = -J.
class SpinManifold {
 public:
  /// Throws std::invalid_argument for negative twoJ.
  explicit SpinManifold(int twoJ, double gJ = 1.0);

  static SpinManifold d52() { return SpinManifold(5, 6.0 / 5.0); }
  static SpinManifold ground_qubit() { return SpinManifold(1, 2.0); }

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dim() const { return two_j_ + 1; }
  double g_factor() const { return g_j_; }
  bool half_integer() const { return two_j_ % 2 == 1; }

  /// m label of basis index i.
  double m(int index) const { return j() - index; }
  /// 2m label of basis index i (exact).
  int two_m(int index) const { return two_j_ - 2 * index; }
  /// Basis index of the label m given as 2m. Throws if out of range.
  int index_of_two_m(int twoM) const;

  std::vector<double> labels() const;

  bool operator==(const SpinManifold& o) const {
    return two_j_ == o.two_j_ && g_j_ == o.g_j_;
  }

 private:
  int two_j_;
  double g_j_;
};

struct AngularMomentum {
  Operator jx, jy, jz, jplus, jminus;
};

AngularMomentum angular_momentum_ops(const SpinManifold& manifold);

/// exp(-i * scale * H) for Hermitian H via spectral decomposition.
Operator expm_antihermitian(const Operator& hermitian, double scale);

/// R(n, angle) = exp(-i * angle * n.J). The axis must be a unit vector.
Operator su2_rotation(const SpinManifold& manifold,
                      const std::array<double, 3>& axis, double angle);

inline Operator rotation_x(const SpinManifold& m, double angle) {
  return su2_rotation(m, {1.0, 0.0, 0.0}, angle);
}
inline Operator rotation_y(const SpinManifold& m, double angle) {
  return su2_rotation(m, {0.0, 1.0, 0.0}, angle);
}
inline Operator rotation_z(const SpinManifold& m, double angle) {
  return su2_rotation(m, {0.0, 0.0, 1.0}, angle);
}

double max_abs(const Operator& a);
bool is_hermitian(const Operator& a, double tol = kOperatorTol);
bool is_unitary(const Operator& a, double tol = kOperatorTol);

StateVector basis_state(int dim, int index);

}  // namespace spincat
