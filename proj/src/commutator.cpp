#include "specdist/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace specdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string_view to_string(RhoMethod m) {
  switch (m) {
    case RhoMethod::TailMax: return "tail-max";
    case RhoMethod::SlopeFit: return "slope-fit";
    case RhoMethod::Oracle: return "oracle";
    case RhoMethod::ExactZero: return "exact-zero";
  }
  return "unknown";
}

ComplexMatrix CommutatorSequence::value(std::size_t n) const {
  const CommutatorTerm& t = terms.at(n);
  if (t.log_norm == kNegInf) return ComplexMatrix::Zero(t.direction.rows(), t.direction.cols());
  const ComplexMatrix scaled = t.direction * std::ldexp(1.0, static_cast<int>(std::clamp(t.exponent, -2000L, 2000L)));
  return scaled;
}

CommutatorSequence commutator_sequence(const ComplexMatrix& a, const ComplexMatrix& b,
                                       std::size_t n_max) {
  require_valid(a, "a");
  require_valid(b, "b");
  require_same_dim(a, b);
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "commutator_sequence: N must be >= 1");

  const Eigen::Index dim = a.rows();
  const double scale = operator_norm(a) + operator_norm(b);
  const double log_scale = scale > 0.0 ? std::log(scale) : 0.0;

  CommutatorSequence seq;
  seq.terms.reserve(n_max + 1);
  seq.terms.push_back({0.0, 0.5 * identity(dim), 1});

  // Exact zero is declared against the running maximum of log||c_n|| - n log(||a||+||b||),
  // which keeps the test invariant under rescaling of the pair.
  double running_max = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (seq.exact_zero_at) {
      seq.terms.push_back({kNegInf, ComplexMatrix::Zero(dim, dim), 0});
      continue;
    }
    const ComplexMatrix& d = seq.terms.back().direction;
    ComplexMatrix w = a * d - d * b;
    const double s = w.allFinite() ? operator_norm(w) : 0.0;
    const long prev_exponent = seq.terms.back().exponent;
    const double log_norm =
        s > 0.0 ? static_cast<double>(prev_exponent) * std::numbers::ln2 + std::log(s) : kNegInf;
    const double normalized = log_norm - static_cast<double>(n) * log_scale;
    if (s == 0.0 || normalized < running_max + kExactZeroLogThreshold) {
      seq.exact_zero_at = n;
      seq.terms.push_back({kNegInf, ComplexMatrix::Zero(dim, dim), 0});
      continue;
    }
    running_max = std::max(running_max, normalized);
    int e = 0;
    std::frexp(s, &e);
    w *= std::ldexp(1.0, -e);
    seq.terms.push_back({log_norm, std::move(w), prev_exponent + e});
  }
  return seq;
}

ComplexMatrix commutator_power(const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexMatrix& x, std::size_t n) {
  require_same_dim(a, b);
  require_same_dim(a, x);
  ComplexMatrix c = x;
  for (std::size_t k = 0; k < n; ++k) c = a * c - c * b;
  return c;
}

ComplexMatrix commutator_binomial(const ComplexMatrix& a, const ComplexMatrix& b,
                                  const ComplexMatrix& x, std::size_t n) {
  require_same_dim(a, b);
  require_same_dim(a, x);
  const Eigen::Index dim = a.rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix b_pow = identity(dim);
  for (std::size_t k = 0; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(n, k) * mat_power(a, static_cast<long>(n - k)) * x * b_pow;
    b_pow = b_pow * b;
  }
  return sum;
}

RhoEstimate rho_from_sequence(const CommutatorSequence& seq) {
  RhoEstimate est;
  if (seq.exact_zero_at) {
    est.value = 0.0;
    est.method = RhoMethod::ExactZero;
    est.window = {0, *seq.exact_zero_at};
    est.converged = true;
    est.evidence = "C^n 1 vanishes from n=" + std::to_string(*seq.exact_zero_at);
    return est;
  }
  const std::size_t n_max = seq.last_index();
  if (n_max < 16) {
    throw Error(ErrorCode::InvalidArgument, "rho estimation needs N >= 16, got " +
                                                std::to_string(n_max));
  }
  const std::size_t lo = n_max / 2;
  est.window = {lo, n_max};

  // Least-squares slope of log||c_n|| against n.
  const double count = static_cast<double>(n_max - lo + 1);
  double mean_n = 0.0;
  double mean_l = 0.0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    mean_n += static_cast<double>(n);
    mean_l += seq.terms[n].log_norm;
  }
  mean_n /= count;
  mean_l /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const double dx = static_cast<double>(n) - mean_n;
    sxx += dx * dx;
    sxy += dx * (seq.terms[n].log_norm - mean_l);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  double tail = 0.0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const double fit = mean_l + slope * (static_cast<double>(n) - mean_n);
    const double r = seq.terms[n].log_norm - fit;
    sse += r * r;
    tail = std::max(tail, std::exp(seq.terms[n].log_norm / static_cast<double>(n)));
  }
  est.residual = std::sqrt(sse / count);
  est.slope_fit = std::exp(slope);
  est.tail_max = tail;

  const double hi = std::max(est.slope_fit, est.tail_max);
  est.converged = std::abs(est.slope_fit - est.tail_max) <= 0.05 * hi;

  // A wildly non-linear log-norm profile makes the fitted slope meaningless.
  if (est.residual > 1.0) {
    est.value = est.tail_max;
    est.method = RhoMethod::TailMax;
  } else {
    est.value = est.slope_fit;
    est.method = RhoMethod::SlopeFit;
  }
  est.evidence = "slope-fit " + fmt(est.slope_fit) + ", tail-max " + fmt(est.tail_max) +
                 (est.converged ? " (agree)" : " (disagree beyond 5%)");
  return est;
}

RhoEstimate rho_sequence(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max) {
  if (n_max < 16) {
    throw Error(ErrorCode::InvalidArgument, "rho_sequence needs N >= 16");
  }
  return rho_from_sequence(commutator_sequence(a, b, n_max));
}

RhoEstimate rho_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_valid(a, "a");
  require_valid(b, "b");
  require_same_dim(a, b);
  const EigenDecomposition ea = eigendecompose(a);
  const EigenDecomposition eb = eigendecompose(b);
  if (!ea.diagonalizable || !eb.diagonalizable) {
    throw Error(ErrorCode::OracleUnavailable,
                std::string("oracle unavailable: ") + (!ea.diagonalizable ? "a" : "b") +
                    " is not diagonalizable (residual " +
                    fmt(!ea.diagonalizable ? ea.diag_residual : eb.diag_residual) + ")");
  }
  const ComplexMatrix k = ea.basis_inverse * eb.basis;
  const double tau = 1e-10 * k.cwiseAbs().maxCoeff();
  double value = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      if (std::abs(k(i, j)) > tau) {
        value = std::max(value, std::abs(ea.eigenvalues(i) - eb.eigenvalues(j)));
      }
    }
  }
  RhoEstimate est;
  est.value = value;
  est.method = RhoMethod::Oracle;
  est.residual = tau;
  est.converged = true;
  est.evidence = "oracle: cond(P)=" + fmt(ea.condition_estimate) +
                 ", cond(Q)=" + fmt(eb.condition_estimate);
  return est;
}

RhoEstimate rho(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max) {
  const CommutatorSequence seq = commutator_sequence(a, b, n_max);
  if (seq.exact_zero_at) return rho_from_sequence(seq);

  std::string oracle_failure;
  try {
    RhoEstimate est = rho_oracle(a, b);
    if (n_max >= 16) {
      const RhoEstimate s = rho_from_sequence(seq);
      est.slope_fit = s.slope_fit;
      est.tail_max = s.tail_max;
      est.window = s.window;
      est.evidence += "; sequence " + s.evidence;
    }
    return est;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::OracleUnavailable) throw;
    oracle_failure = e.what();
  }
  RhoEstimate est = rho_from_sequence(seq);
  est.evidence = oracle_failure + "; sequence " + est.evidence;
  return est;
}

RhoEstimate d_rho(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n_max) {
  const RhoEstimate fwd = rho(a, b, n_max);
  const RhoEstimate bwd = rho(b, a, n_max);
  RhoEstimate out = fwd.value >= bwd.value ? fwd : bwd;
  out.converged = fwd.converged && bwd.converged;
  if (fwd.method == RhoMethod::ExactZero && bwd.method == RhoMethod::ExactZero) {
    out.method = RhoMethod::ExactZero;
  } else if (out.method == RhoMethod::ExactZero) {
    // value 0 tie with a non-exact direction: report the weaker method.
    out.method = fwd.method == RhoMethod::ExactZero ? bwd.method : fwd.method;
  }
  out.evidence = "rho(a,b): " + fwd.evidence + " | rho(b,a): " + bwd.evidence;
  return out;
}

EquivalenceVerdict is_quasinilpotent_equivalent(const ComplexMatrix& a, const ComplexMatrix& b,
                                                std::size_t n_max, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  EquivalenceVerdict v;
  v.forward = rho(a, b, n_max);
  v.backward = rho(b, a, n_max);
  v.distance = d_rho(a, b, n_max);
  const bool trusted = v.distance.converged || v.distance.method == RhoMethod::ExactZero;
  v.equivalent = trusted && v.distance.value <= tol;
  v.evidence = v.distance.evidence;
  if (!trusted) v.evidence += " | verdict withheld: estimate not converged";
  return v;
}

double invol_identity_check(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "invol check needs n >= 1");
  require_valid(a, "a");
  require_valid(b, "b");
  const ComplexMatrix id = identity(a.rows());
  const ComplexMatrix lhs = commutator_power(a, b, id, n).adjoint();
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const ComplexMatrix rhs = sign * commutator_power(b.adjoint(), a.adjoint(), id, n);
  const double scale = std::max(operator_norm(lhs), operator_norm(rhs));
  const double diff = operator_norm(lhs - rhs);
  if (diff == 0.0) return 0.0;
  return diff / scale;
}

double ind_identity_check(const ComplexMatrix& a, std::size_t n) {
  if (n > 12) throw Error(ErrorCode::InvalidArgument, "ind check is limited to n <= 12");
  const ComplexMatrix a_inv = mat_inverse(a);
  const ComplexMatrix u = a_inv.adjoint();
  const Eigen::Index dim = a.rows();

  const ComplexMatrix a_inv_n = mat_power(a_inv, static_cast<long>(n));
  const ComplexMatrix lhs = a_inv_n.adjoint() * a_inv_n;

  ComplexMatrix rhs = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix c = identity(dim);
  ComplexMatrix a_inv_j = identity(dim);
  double term_scale = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    const ComplexMatrix term = binomial(n, j) * c * a_inv_j;
    term_scale += operator_norm(term);
    rhs += term;
    c = u * c - c * a;
    a_inv_j = a_inv_j * a_inv;
  }
  const double diff = operator_norm(lhs - rhs);
  if (diff == 0.0) return 0.0;
  return diff / std::max(operator_norm(lhs), term_scale);
}

}  // namespace specdist
