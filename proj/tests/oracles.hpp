// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's own exponentials or fidelity code.
#pragma once

#include "spincat/spinops.hpp"

#include <cmath>
#include <random>

namespace oracle {

using spincat::cplx;
using spincat::Operator;
using spincat::StateVector;

/// exp(-i t H) by scaling and squaring a truncated Taylor series.
inline Operator expm_taylor(const Operator& h, double t) {
  const Eigen::Index n = h.rows();
  Operator a = cplx(0.0, -t) * h;
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    a /= 2.0;
    norm /= 2.0;
    ++squarings;
  }
  Operator term = Operator::Identity(n, n);
  Operator sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// Spin matrices from the textbook ladder formulas (index 0 is m = +J).
struct Spin {
  Operator jx, jy, jz;
};

inline Spin spin(int twoJ) {
  const int d = twoJ + 1;
  const double j = 0.5 * twoJ;
  Operator jp = Operator::Zero(d, d);
  Operator jz = Operator::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = j - i;
    jz(i, i) = m;
    if (i > 0) jp(i - 1, i) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Operator jm = jp.adjoint();
  return {0.5 * (jp + jm), (jp - jm) / cplx(0.0, 2.0), jz};
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline StateVector random_state(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  StateVector v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(n(gen), n(gen));
  return v.normalized();
}

/// Random full-rank density matrix G G^dag / Tr.
inline Operator random_density(int d, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Operator g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = cplx(n(gen), n(gen));
  Operator rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace oracle
