#include "specdist/holo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "specdist/commutator.hpp"

namespace specdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> to_vector(const ComplexVector& v) {
  return std::vector<Complex>(v.data(), v.data() + v.size());
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

FunctionSpec FunctionSpec::polynomial(std::vector<Complex> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  FunctionSpec f;
  f.kind_ = FunctionKind::Polynomial;
  f.coefficients_ = std::move(coefficients);
  return f;
}

FunctionSpec FunctionSpec::exp() {
  FunctionSpec f;
  f.kind_ = FunctionKind::Exp;
  return f;
}

FunctionSpec FunctionSpec::principal_log() {
  FunctionSpec f;
  f.kind_ = FunctionKind::PrincipalLog;
  f.cut_angle_ = std::numbers::pi;
  return f;
}

FunctionSpec FunctionSpec::rotated_log(double cut_angle) {
  FunctionSpec f;
  f.kind_ = FunctionKind::RotatedLog;
  f.cut_angle_ = cut_angle;
  return f;
}

FunctionSpec FunctionSpec::rational(double c) {
  FunctionSpec f;
  f.kind_ = FunctionKind::Rational;
  f.rational_c_ = c;
  return f;
}

FunctionSpec FunctionSpec::power(int k) {
  FunctionSpec f;
  f.kind_ = FunctionKind::Power;
  f.power_ = k;
  return f;
}

namespace {

Complex int_power(Complex z, int k) {
  Complex result = 1.0;
  Complex base = k < 0 ? 1.0 / z : z;
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

}  // namespace

Complex FunctionSpec::operator()(Complex z) const {
  switch (kind_) {
    case FunctionKind::Polynomial: {
      Complex acc = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * z + *it;
      return acc;
    }
    case FunctionKind::Exp:
      return std::exp(z);
    case FunctionKind::PrincipalLog:
    case FunctionKind::RotatedLog: {
      // arg in (cut - 2 pi, cut]
      const double shift = cut_angle_ - std::numbers::pi;
      const double arg = std::arg(z * std::polar(1.0, -shift)) + shift;
      return {std::log(std::abs(z)), arg};
    }
    case FunctionKind::Rational:
      return z + rational_c_ / z;
    case FunctionKind::Power:
      return int_power(z, power_);
  }
  return 0.0;
}

Complex FunctionSpec::derivative(Complex z) const {
  switch (kind_) {
    case FunctionKind::Polynomial: {
      Complex acc = 0.0;
      for (std::size_t k = coefficients_.size(); k-- > 1;) {
        acc = acc * z + static_cast<double>(k) * coefficients_[k];
      }
      return acc;
    }
    case FunctionKind::Exp:
      return std::exp(z);
    case FunctionKind::PrincipalLog:
    case FunctionKind::RotatedLog:
      return 1.0 / z;
    case FunctionKind::Rational:
      return 1.0 - rational_c_ / (z * z);
    case FunctionKind::Power:
      return power_ == 0 ? Complex(0.0) : static_cast<double>(power_) * int_power(z, power_ - 1);
  }
  return 0.0;
}

double FunctionSpec::distance_to_singularity(Complex z) const {
  switch (kind_) {
    case FunctionKind::Polynomial:
    case FunctionKind::Exp:
      return kInf;
    case FunctionKind::Power:
      return power_ >= 0 ? kInf : std::abs(z);
    case FunctionKind::Rational:
      return std::abs(z);
    case FunctionKind::PrincipalLog:
    case FunctionKind::RotatedLog: {
      const Complex u = z * std::polar(1.0, -cut_angle_);
      return u.real() <= 0.0 ? std::abs(z) : std::abs(u.imag());
    }
  }
  return kInf;
}

std::string FunctionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case FunctionKind::Polynomial: {
      os << "poly:";
      for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        if (k) os << ',';
        os << coefficients_[k].real();
        if (coefficients_[k].imag() != 0.0) {
          os << (coefficients_[k].imag() < 0 ? "" : "+") << coefficients_[k].imag() << 'i';
        }
      }
      break;
    }
    case FunctionKind::Exp: os << "exp"; break;
    case FunctionKind::PrincipalLog: os << "log"; break;
    case FunctionKind::RotatedLog: os << "log:" << cut_angle_; break;
    case FunctionKind::Rational:
      if (rational_c_ == 1.0) os << "rational:plus";
      else if (rational_c_ == -1.0) os << "rational:minus";
      else os << "rational:" << rational_c_;
      break;
    case FunctionKind::Power: os << "pow:" << power_; break;
  }
  return os.str();
}

std::vector<Cluster> cluster_eigenvalues(std::span<const Complex> values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<Cluster> clusters;
  std::vector<std::size_t> root_to_cluster(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (root_to_cluster[r] == n) {
      root_to_cluster[r] = clusters.size();
      clusters.emplace_back();
    }
    clusters[root_to_cluster[r]].members.push_back(values[i]);
  }
  for (Cluster& c : clusters) {
    Complex sum = 0.0;
    for (const Complex z : c.members) sum += z;
    c.center = sum / static_cast<double>(c.members.size());
    for (const Complex z : c.members) c.spread = std::max(c.spread, std::abs(z - c.center));
  }
  // Deterministic order: by real part, then imaginary part.
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& x, const Cluster& y) {
    if (x.center.real() != y.center.real()) return x.center.real() < y.center.real();
    return x.center.imag() < y.center.imag();
  });
  return clusters;
}

double default_cluster_tol(const ComplexMatrix& a) { return 1e-3 * (1.0 + operator_norm(a)); }

ContourSpec auto_contour(const FunctionSpec& f, std::span<const Complex> spectrum,
                         double cluster_tol, int nodes) {
  const std::vector<Cluster> clusters = cluster_eigenvalues(spectrum, cluster_tol);
  double radius = 0.0;
  if (clusters.size() == 1) {
    radius = std::max(1.0, 4.0 * clusters.front().spread);
  } else {
    double gap = kInf;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        gap = std::min(gap, std::abs(clusters[i].center - clusters[j].center));
      }
    }
    radius = gap / 3.0;
  }
  ContourSpec contour;
  for (const Cluster& c : clusters) {
    const double r = std::min(radius, 0.5 * f.distance_to_singularity(c.center));
    if (c.spread > 0.9 * r) {
      const bool singular = r < radius;
      throw Error(singular ? ErrorCode::SingularityInside : ErrorCode::ContourMargin,
                  std::string("cannot fit a circle around the eigenvalue cluster at ") +
                      (singular ? "a point too close to a singularity of " + f.describe()
                                : "a point whose cluster is too wide for the gap"));
    }
    contour.circles.push_back({c.center, r, nodes});
  }
  return contour;
}

void validate_contour(const FunctionSpec& f, std::span<const Complex> spectrum,
                      const ContourSpec& contour) {
  if (contour.circles.empty()) throw Error(ErrorCode::ContourMargin, "empty contour");
  for (const Circle& c : contour.circles) {
    if (!(c.radius > 0.0) || c.nodes < 16) {
      throw Error(ErrorCode::InvalidArgument, "circles need radius > 0 and at least 16 nodes");
    }
    if (f.distance_to_singularity(c.center) <= c.radius) {
      throw Error(ErrorCode::SingularityInside,
                  "a pole or branch cut of " + f.describe() + " meets a contour circle");
    }
  }
  for (std::size_t i = 0; i < contour.circles.size(); ++i) {
    for (std::size_t j = i + 1; j < contour.circles.size(); ++j) {
      const Circle& x = contour.circles[i];
      const Circle& y = contour.circles[j];
      if (std::abs(x.center - y.center) <= x.radius + y.radius) {
        throw Error(ErrorCode::ContourMargin, "contour circles overlap");
      }
    }
  }
  for (const Complex lambda : spectrum) {
    bool inside = false;
    for (const Circle& c : contour.circles) {
      const double d = std::abs(lambda - c.center);
      if (std::abs(d - c.radius) < 0.1 * c.radius) {
        throw Error(ErrorCode::ContourMargin, "eigenvalue within 10% of a contour circle");
      }
      inside = inside || d < c.radius;
    }
    if (!inside) throw Error(ErrorCode::ContourMargin, "contour does not surround the spectrum");
  }
}

namespace {

// Trapezoidal rule on each circle; no validation.
ComplexMatrix contour_integral(const FunctionSpec& f, const ComplexMatrix& a,
                               std::span<const Circle> circles) {
  const Eigen::Index dim = a.rows();
  const ComplexMatrix id = identity(dim);
  ComplexMatrix result = ComplexMatrix::Zero(dim, dim);
  for (const Circle& c : circles) {
    ComplexMatrix partial = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < c.nodes; ++k) {
      const Complex offset = std::polar(c.radius, 2.0 * std::numbers::pi * k / c.nodes);
      const Complex z = c.center + offset;
      const Complex fz = f(z);
      if (!finite(fz)) throw Error(ErrorCode::NonFinite, "f is not finite on the contour");
      const ComplexMatrix resolvent = (z * id - a).partialPivLu().solve(id);
      partial += (fz * offset) * resolvent;
    }
    result += partial / static_cast<double>(c.nodes);
  }
  return result;
}

}  // namespace

ComplexMatrix holo_apply(const FunctionSpec& f, const ComplexMatrix& a,
                         const ContourSpec& contour) {
  require_valid(a, "holo_apply");
  const std::vector<Complex> spectrum = to_vector(eigenvalues(a));
  validate_contour(f, spectrum, contour);
  return contour_integral(f, a, contour.circles);
}

ComplexMatrix holo_apply(const FunctionSpec& f, const ComplexMatrix& a, int nodes) {
  require_valid(a, "holo_apply");
  const std::vector<Complex> spectrum = to_vector(eigenvalues(a));
  return holo_apply(f, a, auto_contour(f, spectrum, default_cluster_tol(a), nodes));
}

SpectralDecomposition riesz_idempotents(const ComplexMatrix& a, double cluster_tol, int nodes) {
  require_valid(a, "riesz_idempotents");
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster tolerance must be > 0");
  const std::vector<Complex> spectrum = to_vector(eigenvalues(a));
  const std::vector<Cluster> clusters = cluster_eigenvalues(spectrum, cluster_tol);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      for (const Complex x : clusters[i].members) {
        for (const Complex y : clusters[j].members) {
          if (std::abs(x - y) <= 4.0 * cluster_tol) {
            throw Error(ErrorCode::ClusterSeparation,
                        "eigenvalue clusters are not separated by 4x the cluster tolerance");
          }
        }
      }
    }
  }

  const FunctionSpec one = FunctionSpec::polynomial({1.0});
  const ContourSpec contour = auto_contour(one, spectrum, cluster_tol, nodes);
  validate_contour(one, spectrum, contour);
  SpectralDecomposition out;
  out.remainder = a;
  for (std::size_t j = 0; j < contour.circles.size(); ++j) {
    // f = 1 on this disk and 0 on the others: integrate over one circle only.
    const ComplexMatrix p = contour_integral(one, a, std::span(&contour.circles[j], 1));
    out.clusters.push_back({clusters[j].center, p});
    out.remainder -= clusters[j].center * p;
  }
  return out;
}

double best_cut_angle(std::span<const Complex> points) {
  if (points.empty()) return std::numbers::pi;
  constexpr int kCandidates = 720;
  double best_angle = std::numbers::pi;
  double best_distance = -1.0;
  for (int k = 0; k < kCandidates; ++k) {
    const double angle = -std::numbers::pi + 2.0 * std::numbers::pi * (k + 0.5) / kCandidates;
    const FunctionSpec branch = FunctionSpec::rotated_log(angle);
    double d = kInf;
    for (const Complex z : points) d = std::min(d, branch.distance_to_singularity(z));
    if (d > best_distance) {
      best_distance = d;
      best_angle = angle;
    }
  }
  return best_angle;
}

ComplexMatrix matrix_log(const ComplexMatrix& a, const FunctionSpec& branch) {
  if (!branch.is_log()) throw Error(ErrorCode::InvalidArgument, "matrix_log needs a log branch");
  require_valid(a, "matrix_log");
  const double norm = operator_norm(a);
  const std::vector<Complex> spectrum = to_vector(eigenvalues(a));
  for (const Complex lambda : spectrum) {
    if (std::abs(lambda) <= 1e-8 * norm) {
      throw Error(ErrorCode::Singular, "matrix_log: 0 lies in the spectrum");
    }
    if (branch.distance_to_singularity(lambda) <= 1e-8 * norm) {
      throw Error(ErrorCode::SpectrumOnCut, "matrix_log: eigenvalue on the branch cut of " +
                                                branch.describe());
    }
  }
  return holo_apply(branch, a, auto_contour(branch, spectrum, default_cluster_tol(a)));
}

double fct_bound(const FunctionSpec& f, std::span<const Complex> sigma_a,
                 std::span<const Complex> sigma_b) {
  auto check = [&](Complex z) {
    if (!(f.distance_to_singularity(z) > 0.0) || !finite(f(z)) || !finite(f.derivative(z))) {
      throw Error(ErrorCode::InvalidArgument, f.describe() + " is undefined at a spectral point");
    }
  };
  for (const Complex z : sigma_a) check(z);
  for (const Complex z : sigma_b) check(z);

  double bound = 0.0;
  for (const Complex w : sigma_b) {
    const Complex fw = f(w);
    double m = std::abs(f.derivative(w));
    for (const Complex l : sigma_a) {
      // G(w, l) is continuous; near the diagonal use its limit f'(w).
      if (std::abs(l - w) > 1e-7 * (1.0 + std::abs(w))) {
        m = std::max(m, std::abs((f(l) - fw) / (l - w)));
      }
    }
    bound = std::max(bound, m);
  }
  return bound;
}

FctCheck fct_inequality_check(const FunctionSpec& f, const ComplexMatrix& a,
                              const ComplexMatrix& b, std::size_t n_max) {
  require_valid(a, "a");
  require_valid(b, "b");
  require_same_dim(a, b);
  const std::vector<Complex> sa = to_vector(eigenvalues(a));
  const std::vector<Complex> sb = to_vector(eigenvalues(b));

  const ComplexMatrix fa = holo_apply(f, a);
  const ComplexMatrix fb = holo_apply(f, b);
  const RhoEstimate lhs = rho(fa, fb, n_max);
  const RhoEstimate base = rho(a, b, n_max);

  FctCheck out;
  out.lhs = lhs.value;
  out.bound = fct_bound(f, sa, sb);
  out.rho_ab = base.value;
  out.rhs = out.bound * base.value;
  out.margin = out.rhs - out.lhs;
  out.converged = (lhs.converged || lhs.method == RhoMethod::ExactZero) &&
                  (base.converged || base.method == RhoMethod::ExactZero);
  out.evidence = "lhs " + std::string(to_string(lhs.method)) + ", rho(a,b) " +
                 std::string(to_string(base.method));
  return out;
}

}  // namespace specdist
