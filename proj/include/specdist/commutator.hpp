#pragma once

// The generalized commutator C_{a,b} x = a x - x b applied repeatedly to the
// identity, and the asymptotic quantities built from it:
//
//   rho(a,b)   = limsup_n ||C_{a,b}^n 1||^{1/n}
//   d_rho(a,b) = max(rho(a,b), rho(b,a))
//
// Iterates are stored log-scaled (log-norm plus unit-norm direction) because
// ||C^n 1|| routinely leaves the double range for n in the hundreds.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdist/matrix.hpp"

namespace specdist {

struct CommutatorTerm {
  double log_norm = 0.0;  // log ||c_n||, -inf for an exact zero
  // c_n = 2^exponent * direction with ||direction|| in [1/2, 1). Power-of-two
  // rescaling is exact, so integer inputs stay integer-valued up to scale.
  ComplexMatrix direction;
  long exponent = 0;
};

struct CommutatorSequence {
  std::vector<CommutatorTerm> terms;  // terms[0] is the identity
  std::optional<std::size_t> exact_zero_at;

  std::size_t last_index() const { return terms.size() - 1; }
  /// 2^{exponent_n} * direction_n; may overflow for large n.
  ComplexMatrix value(std::size_t n) const;
};

/// Relative underflow that declares the sequence exactly zero: 1e-300.
inline constexpr double kExactZeroLogThreshold = -690.7755278982137;

CommutatorSequence commutator_sequence(const ComplexMatrix& a, const ComplexMatrix& b,
                                       std::size_t n_max);

/// C_{a,b}^n x by plain recurrence (no rescaling).
ComplexMatrix commutator_power(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& x, std::size_t n);

/// C_{a,b}^n x as the alternating binomial sum  sum_k (-1)^k C(n,k) a^{n-k} x b^k.
ComplexMatrix commutator_binomial(const ComplexMatrix& a, const ComplexMatrix& b,
                                  const ComplexMatrix& x, std::size_t n);

enum class RhoMethod { TailMax, SlopeFit, Oracle, ExactZero };
std::string_view to_string(RhoMethod m);

struct RhoEstimate {
  double value = 0.0;
  RhoMethod method = RhoMethod::SlopeFit;
  std::pair<std::size_t, std::size_t> window{0, 0};
  double residual = 0.0;  // fit RMS for sequence methods, coefficient threshold for the oracle
  bool converged = false;
  double slope_fit = 0.0;  // sequence diagnostics (0 when not computed)
  double tail_max = 0.0;
  std::string evidence;
};

/// Needs n_max >= 16. Non-convergence is reported, never thrown.
RhoEstimate rho_sequence(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max);
RhoEstimate rho_from_sequence(const CommutatorSequence& seq);

/// Exact value for diagonalizable a, b. With a = P Da P^{-1}, b = Q Db Q^{-1},
/// 1 = sum_ij K_ij P e_i e_j^T Q^{-1} for K = P^{-1} Q, each rank-one piece is an
/// eigenvector of C_{a,b} with eigenvalue lambda_i - mu_j, hence
/// rho = max{|lambda_i - mu_j| : |K_ij| > 1e-10 max|K|}.
/// Throws ErrorCode::OracleUnavailable for defective input.
RhoEstimate rho_oracle(const ComplexMatrix& a, const ComplexMatrix& b);

/// Best available estimate: exact-zero sequence, else oracle, else the
/// sequence estimate with the oracle failure recorded in `evidence`.
RhoEstimate rho(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max = 128);

RhoEstimate d_rho(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max = 128);

struct EquivalenceVerdict {
  bool equivalent = false;
  RhoEstimate distance;
  RhoEstimate forward;
  RhoEstimate backward;
  std::string evidence;
};

EquivalenceVerdict is_quasinilpotent_equivalent(const ComplexMatrix& a, const ComplexMatrix& b,
                                                std::size_t n_max, double tol);

/// Relative operator-norm residual of [C_{a,b}^n 1]^* = (-1)^n C_{b*,a*}^n 1.
double invol_identity_check(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n);

/// Relative residual of (a^{-n})^* a^{-n} = sum_j C(n,j) (C^j_{(a^{-1})^*,a} 1) a^{-j}.
/// Requires invertible a and n <= 12.
double ind_identity_check(const ComplexMatrix& a, std::size_t n);

}  // namespace specdist
