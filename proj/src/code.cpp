#include "spincat/code.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spincat {

namespace {

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Codeword weights |c_m|^2 = C(2J, J+m) / 2^(2J-1) on the support of the
// codeword with the given parity of (J+m).
std::optional<Rational> binomial_weight(const SpinManifold& mf, int index) {
  const int twoJ = mf.two_j();
  if (twoJ > 60) return std::nullopt;
  const int upper = (twoJ + mf.two_m(index)) / 2;  // J + m
  return Rational::make(binomial(twoJ, upper), std::int64_t{1} << (twoJ - 1));
}

Rational pow_half_integer(int twoM, int p) {
  // (2m / 2)^p
  std::int64_t n = 1;
  std::int64_t d = 1;
  for (int i = 0; i < p; ++i) {
    n *= twoM;
    d *= 2;
  }
  return Rational::make(n, d);
}

}  // namespace

Rational Rational::make(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (n == 0) d = 1;
  return {n, d};
}

Rational Rational::operator+(const Rational& o) const {
  const std::int64_t l = std::lcm(den, o.den);
  return make(num * (l / den) + o.num * (l / o.den), l);
}

Rational Rational::operator*(const Rational& o) const {
  const std::int64_t g1 = std::gcd(num < 0 ? -num : num, o.den);
  const std::int64_t g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
  const std::int64_t a = g1 ? g1 : 1;
  const std::int64_t b = g2 ? g2 : 1;
  return make((num / a) * (o.num / b), (den / b) * (o.den / a));
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

CodewordPair spin_cat_codewords(const SpinManifold& manifold) {
  if (!manifold.half_integer())
    throw std::invalid_argument("spin_cat_codewords: J must be half-integer");
  const int d = manifold.dim();
  const StateVector minus_j = basis_state(d, d - 1);
  const StateVector plus_j = basis_state(d, 0);
  const Operator enc = encode_unitary(manifold);
  CodewordPair pair{manifold, enc * (minus_j - plus_j) / std::sqrt(2.0),
                    enc * (minus_j + plus_j) / std::sqrt(2.0)};
  // Amplitudes are real up to rounding; drop the residue.
  pair.zero = canonical_phase(pair.zero).real().cast<cplx>();
  pair.one = canonical_phase(pair.one).real().cast<cplx>();
  for (int i = 0; i < d; ++i) {
    if (std::abs(pair.zero(i)) < 1e-13) pair.zero(i) = 0.0;
    if (std::abs(pair.one(i)) < 1e-13) pair.one(i) = 0.0;
  }
  return pair;
}

CodewordPair tabulated_d52_codewords() {
  const SpinManifold mf = SpinManifold::d52();
  StateVector zero = StateVector::Zero(6);
  StateVector one = StateVector::Zero(6);
  zero(mf.index_of_two_m(-5)) = 0.25;
  zero(mf.index_of_two_m(-1)) = 0.5 * std::sqrt(2.5);
  zero(mf.index_of_two_m(3)) = std::sqrt(5.0) / 4.0;
  one(mf.index_of_two_m(-3)) = std::sqrt(5.0) / 4.0;
  one(mf.index_of_two_m(1)) = 0.5 * std::sqrt(2.5);
  one(mf.index_of_two_m(5)) = 0.25;
  return {mf, zero, one};
}

Operator encode_unitary(const SpinManifold& manifold) {
  return rotation_y(manifold, -kPi / 2);
}

Operator decode_unitary(const SpinManifold& manifold) {
  return encode_unitary(manifold).adjoint();
}

StateVector prepare_logical(const LogicalQubit& q, const CodewordPair& code) {
  const double n2 = std::norm(q.alpha) + std::norm(q.beta);
  if (std::abs(n2 - 1.0) > 1e-12)
    throw std::invalid_argument("prepare_logical: logical qubit is not normalized");
  StateVector psi = q.alpha * code.zero + q.beta * code.one;
  return psi / psi.norm();
}

KLReport kl_conditions(const CodewordPair& pair, const ErrorOperatorSet& errs) {
  const int d = pair.manifold.dim();
  if (pair.zero.size() != d || pair.one.size() != d || errs.manifold.dim() != d)
    throw std::invalid_argument("kl_conditions: dimension mismatch");
  for (const auto& e : errs.operators)
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("kl_conditions: dimension mismatch");

  // Exact path: codewords must match the binomial weights and the error
  // operators must be Jz powers (as produced by error_operator_set).
  bool exact = pair.manifold.half_integer() && errs.manifold.two_j() == pair.manifold.two_j();
  std::vector<Rational> w0(d), w1(d);
  if (exact) {
    const CodewordPair reference = spin_cat_codewords(pair.manifold);
    for (int i = 0; i < d && exact; ++i) {
      const auto w = binomial_weight(pair.manifold, i);
      if (!w) {
        exact = false;
        break;
      }
      const bool in0 = std::abs(reference.zero(i)) > 0.0;
      const bool in1 = std::abs(reference.one(i)) > 0.0;
      w0[i] = in0 ? *w : Rational{};
      w1[i] = in1 ? *w : Rational{};
      if (std::abs(std::norm(pair.zero(i)) - w0[i].value()) > 1e-12 ||
          std::abs(std::norm(pair.one(i)) - w1[i].value()) > 1e-12)
        exact = false;
    }
    const auto reference_ops = error_operator_set(pair.manifold, errs.max_order);
    if (errs.operators.size() != reference_ops.operators.size()) exact = false;
    for (std::size_t k = 0; exact && k < errs.operators.size(); ++k)
      if (max_abs(errs.operators[k] - reference_ops.operators[k]) != 0.0) exact = false;
  }

  KLReport report;
  report.exact = exact;
  report.satisfied = true;
  const int n = static_cast<int>(errs.operators.size());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const Operator m = errs.operators[j].adjoint() * errs.operators[k];
      KLEntry e;
      e.j = j;
      e.k = k;
      e.zero_zero = pair.zero.dot(m * pair.zero);
      e.one_one = pair.one.dot(m * pair.one);
      e.zero_one = pair.zero.dot(m * pair.one);
      if (exact) {
        Rational a, b;
        for (int i = 0; i < d; ++i) {
          const Rational mp = pow_half_integer(pair.manifold.two_m(i), j + k);
          a = a + w0[i] * mp;
          b = b + w1[i] * mp;
        }
        e.exact_zero_zero = a;
        e.exact_one_one = b;
        // Disjoint supports and diagonal errors: the cross term vanishes.
        e.exact_zero_one = Rational{};
        e.satisfied = (a == b);
      } else {
        e.satisfied = std::abs(e.zero_zero - e.one_one) <= 1e-12 &&
                      std::abs(e.zero_one) <= 1e-12;
      }
      report.satisfied = report.satisfied && e.satisfied;
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

HammingReport hamming_saturation(const SpinManifold& manifold,
                                 std::optional<int> correctableOrders) {
  if (!manifold.half_integer())
    throw std::invalid_argument("hamming_saturation: J must be half-integer");
  HammingReport r;
  // floor(J - 1/2) = (2J - 1) / 2 for half-integer J.
  const int orders = correctableOrders.value_or((manifold.two_j() - 1) / 2);
  r.syndrome_classes = orders + 1;
  r.dimension = manifold.dim();
  r.saturated = r.codewords * r.syndrome_classes == r.dimension;
  return r;
}

}  // namespace spincat
