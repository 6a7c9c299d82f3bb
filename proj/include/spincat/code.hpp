#pragma once

#include "spincat/channels.hpp"
#include "spincat/spinops.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spincat {

struct LogicalQubit {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
};

/// Logical codewords in the Jz basis of a half-integer spin.
struct CodewordPair {
  SpinManifold manifold;
  StateVector zero;
  StateVector one;
};

/// Spin-cat codewords built as U_enc (|-J> -/+ |+J>)/sqrt(2), with
/// U_enc = R_y(-pi/2) = exp(+i pi/2 Jy). For J = 5/2 the amplitudes on
/// (-5/2, -1/2, +3/2) of |0> are (1/4, sqrt(5/2)/2, sqrt(5)/4). Integer J
/// is rejected since the two supports would overlap.
CodewordPair spin_cat_codewords(const SpinManifold& manifold);

/// Amplitudes taken directly from the tabulated J = 5/2 codewords.
CodewordPair tabulated_d52_codewords();

Operator encode_unitary(const SpinManifold& manifold);
Operator decode_unitary(const SpinManifold& manifold);

/// alpha |0> + beta |1>. Throws std::invalid_argument if |alpha|^2+|beta|^2
/// differs from 1 by more than 1e-12.
StateVector prepare_logical(const LogicalQubit& q, const CodewordPair& code);

/// Exact rational with 64-bit numerator and denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d);
  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct KLEntry {
  int j = 0;
  int k = 0;
  cplx zero_zero;  ///< <0|E_j^dag E_k|0>
  cplx one_one;    ///< <1|E_j^dag E_k|1>
  cplx zero_one;   ///< <0|E_j^dag E_k|1>
  std::optional<Rational> exact_zero_zero;
  std::optional<Rational> exact_one_one;
  std::optional<Rational> exact_zero_one;
  bool satisfied = false;
};

struct KLReport {
  std::vector<KLEntry> entries;  ///< all ordered pairs (j, k)
  bool satisfied = false;
  bool exact = false;  ///< rational path was available for every entry
};

/// Knill-Laflamme inner products for every ordered pair of error operators.
/// The rational path is used when the codewords are the binomial spin-cat
/// pair and the errors are powers of Jz.
KLReport kl_conditions(const CodewordPair& pair, const ErrorOperatorSet& errs);

struct HammingReport {
  int codewords = 2;
  int syndrome_classes = 0;
  int dimension = 0;
  bool saturated = false;
};

/// Counts 2 codewords times (correctableOrders + 1) syndrome classes
/// against 2J+1. correctableOrders defaults to floor(J - 1/2).
HammingReport hamming_saturation(const SpinManifold& manifold,
                                 std::optional<int> correctableOrders = std::nullopt);

}  // namespace spincat
