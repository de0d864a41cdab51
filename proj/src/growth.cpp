#include "specdist/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "specdist/commutator.hpp"

namespace specdist {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Rounding floor of exp(la) exp(-lb) relative to ||exp(la)|| ||exp(-lb)|| per dimension.
constexpr double kNoiseFactor = 64.0 * std::numeric_limits<double>::epsilon();
// log M^ is itself rounded; the envelope comparison allows for that.
constexpr double kEnvelopeSlack = 1e-12;

}  // namespace

std::string_view to_string(GrowthMethod m) {
  return m == GrowthMethod::Coefficients ? "coefficients" : "disk-sampling";
}

std::vector<double> coefficient_lognorms(const ComplexMatrix& a, const ComplexMatrix& b,
                                         std::size_t n_max) {
  if (n_max < 32) throw Error(ErrorCode::InvalidArgument, "coefficient_lognorms needs N >= 32");
  const CommutatorSequence seq = commutator_sequence(a, b, n_max);
  std::vector<double> out(seq.terms.size());
  for (std::size_t n = 0; n < seq.terms.size(); ++n) {
    const double ln = seq.terms[n].log_norm;
    out[n] = ln == kNegInf ? kNegInf : ln - std::lgamma(static_cast<double>(n) + 1.0);
  }
  return out;
}

GrowthEstimate order_type_from_coefficients(std::span<const double> lognorms) {
  GrowthEstimate est;
  est.method = GrowthMethod::Coefficients;
  est.coefficient_count = lognorms.size();

  std::size_t last_finite = 0;
  std::size_t finite = 0;
  for (std::size_t n = 0; n < lognorms.size(); ++n) {
    if (std::isfinite(lognorms[n])) {
      last_finite = n;
      ++finite;
    }
  }
  const bool zero_tail = lognorms.empty() || last_finite + 1 < lognorms.size();
  if (zero_tail) {
    est.polynomial = true;
    est.note = finite <= 1 ? "constant function (all higher coefficients vanish)"
                           : "polynomial (coefficients vanish from n=" +
                                 std::to_string(last_finite + 1) + ")";
    return est;
  }
  if (finite < 32) {
    throw Error(ErrorCode::InvalidArgument,
                "order_type_from_coefficients needs at least 32 finite log-norms");
  }

  // Tail window: last half of the indices, n >= 2 so that n log n > 0.
  const std::size_t n_max = lognorms.size() - 1;
  const std::size_t lo = std::max<std::size_t>(2, n_max / 2);
  est.window_begin = lo;
  est.window_end = n_max;

  // For order w and type t the coefficients satisfy
  //   -log||a_n|| = (1/w) n log n - (n/w) log(e w t) + o(n),
  // so fit y_n = A n log n + B n + C on the window. The raw limsup of
  // n log n / log(1/||a_n||) converges only like 1/log n and is kept as a
  // diagnostic.
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n_max - lo + 1), 3);
  Eigen::VectorXd rhs(design.rows());
  for (std::size_t n = lo; n <= n_max; ++n) {
    const auto row = static_cast<Eigen::Index>(n - lo);
    const double x = static_cast<double>(n);
    design(row, 0) = x * std::log(x);
    design(row, 1) = x;
    design(row, 2) = 1.0;
    rhs(row) = -lognorms[n];
  }
  // Column scaling keeps the normal equations well conditioned.
  const Eigen::VectorXd col_scale = design.colwise().norm();
  const Eigen::MatrixXd scaled = design * col_scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd coef =
      scaled.colPivHouseholderQr().solve(rhs).cwiseQuotient(col_scale);
  est.fit_residual =
      std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(design.rows()));

  const double slope = coef(0);
  if (!(slope > 0.0)) {
    est.order = std::numeric_limits<double>::infinity();
    est.type_infinite = true;
    est.note = "coefficients do not decay like (n!)^{-1/order} for any finite order";
    return est;
  }
  est.order = 1.0 / slope;
  est.type = std::exp(-coef(1) * est.order) / (std::numbers::e * est.order);
  if (!std::isfinite(est.type)) est.type_infinite = true;

  double raw_order = 0.0;
  double raw_type = 0.0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const double x = static_cast<double>(n);
    if (-lognorms[n] > 0.0) raw_order = std::max(raw_order, x * std::log(x) / -lognorms[n]);
    raw_type = std::max(raw_type, x * std::exp(est.order * lognorms[n] / x));
  }
  est.raw_order = raw_order;
  est.raw_type = raw_type / (std::numbers::e * est.order);
  return est;
}

std::vector<double> default_radii(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double s = operator_norm(a) + operator_norm(b);
  const double r_max = s > 0.0 ? 650.0 / s : 128.0;
  std::vector<double> radii(8);
  for (int k = 0; k < 8; ++k) radii[static_cast<std::size_t>(k)] = r_max * std::ldexp(1.0, k - 7);
  return radii;
}

GrowthEstimate order_type_from_disk_sampling(const ComplexMatrix& a, const ComplexMatrix& b,
                                             std::span<const double> radii,
                                             int samples_per_circle) {
  require_valid(a, "a");
  require_valid(b, "b");
  require_same_dim(a, b);
  if (radii.size() < 6) throw Error(ErrorCode::InvalidArgument, "need at least 6 radii");
  if (samples_per_circle < 32) {
    throw Error(ErrorCode::InvalidArgument, "need at least 32 samples per circle");
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and increasing");
    }
  }

  GrowthEstimate est;
  est.method = GrowthMethod::DiskSampling;
  for (const double r : radii) {
    double m_hat = 0.0;
    double noise = 0.0;
    bool overflow = false;
    for (int k = 0; k < samples_per_circle; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / samples_per_circle;
      const Complex lambda = std::polar(r, theta);
      const ComplexMatrix ea = mat_exp(lambda * a);
      const ComplexMatrix eb = mat_exp(-lambda * b);
      const ComplexMatrix value = ea * eb;
      if (!value.allFinite()) {
        overflow = true;
        break;
      }
      m_hat = std::max(m_hat, operator_norm(value));
      noise = std::max(noise, operator_norm(ea) * operator_norm(eb));
    }
    if (overflow || !std::isfinite(m_hat)) {
      est.truncated = true;
      est.note = "radius grid truncated at overflow";
      break;
    }
    // Cancellation in the product: once the rounding floor reaches M^ the
    // samples carry no information.
    noise *= kNoiseFactor * static_cast<double>(a.rows());
    if (noise > 1e-2 * m_hat) {
      est.truncated = true;
      est.note = "radius grid truncated where rounding dominates";
      break;
    }
    est.radii.push_back(r);
    est.log_max_modulus.push_back(std::log(m_hat));
  }

  // Order: slope of log log M^ against log r over the last three radii with
  // log M^ > 1. Bounded M^ means a constant function.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < est.radii.size(); ++k) {
    if (est.log_max_modulus[k] > 1.0) {
      xs.push_back(std::log(est.radii[k]));
      ys.push_back(std::log(est.log_max_modulus[k]));
    }
  }
  if (xs.size() > 3) {
    xs.erase(xs.begin(), xs.end() - 3);
    ys.erase(ys.begin(), ys.end() - 3);
  }
  if (xs.size() < 2) {
    est.polynomial = true;
    est.note += est.note.empty() ? "M(r) stays bounded on the grid" : "; M(r) bounded";
    return est;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  est.order = sxy / sxx;
  double sse = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (my + est.order * (xs[k] - mx));
    sse += r * r;
  }
  est.fit_residual = std::sqrt(sse / n);
  const double r_last = est.radii.back();
  est.type = est.log_max_modulus.back() / std::pow(r_last, est.order);
  return est;
}

bool envelope_holds(const GrowthEstimate& disk, const ComplexMatrix& a, const ComplexMatrix& b) {
  const double s = operator_norm(a) + operator_norm(b);
  for (std::size_t k = 0; k < disk.radii.size(); ++k) {
    const double bound = s * disk.radii[k];
    if (disk.log_max_modulus[k] > bound + kEnvelopeSlack * (1.0 + bound)) return false;
  }
  return true;
}

double stirling_check(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "stirling_check needs n >= 1");
  const double x = static_cast<double>(n);
  return x * std::exp(-std::lgamma(x + 1.0) / x);
}

}  // namespace specdist
