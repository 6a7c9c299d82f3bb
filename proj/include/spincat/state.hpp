#pragma once

#include "spincat/spinops.hpp"

namespace spincat {

inline constexpr double kStateTol = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity to within tol.
  /// Throws std::invalid_argument on failure.
  static DensityMatrix from_matrix(Operator m, double tol = kStateTol);
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int dim);
  /// Wraps without validation; callers guarantee the invariants.
  static DensityMatrix unchecked(Operator m) { return DensityMatrix(std::move(m)); }

  const Operator& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  cplx operator()(int r, int c) const { return m_(r, c); }

  double min_eigenvalue() const;

 private:
  explicit DensityMatrix(Operator m) : m_(std::move(m)) {}
  Operator m_;
};

/// Multiplies psi by a phase so its first entry with |amp| > tol is real
/// positive. Equality up to global phase becomes plain equality.
StateVector canonical_phase(const StateVector& psi, double tol = 1e-9);

/// |<a|b>|.
double overlap_abs(const StateVector& a, const StateVector& b);

}  // namespace spincat
