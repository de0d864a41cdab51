#include "specdist/matrix.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace specdist {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::NotSquare: return "not-square";
    case ErrorCode::Singular: return "singular";
    case ErrorCode::SolverFailure: return "solver-failure";
    case ErrorCode::OracleUnavailable: return "oracle-unavailable";
    case ErrorCode::ContourMargin: return "contour-margin";
    case ErrorCode::SingularityInside: return "singularity-inside-contour";
    case ErrorCode::SpectrumOnCut: return "spectrum-on-cut";
    case ErrorCode::ClusterSeparation: return "cluster-separation";
    case ErrorCode::MalformedDocument: return "malformed-document";
    case ErrorCode::LengthMismatch: return "length-mismatch";
    case ErrorCode::UnknownKind: return "unknown-kind";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

void require_valid(const ComplexMatrix& a, std::string_view what) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorCode::NotSquare,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry at (" +
                                              std::to_string(i) + "," + std::to_string(j) +
                                              ")");
      }
    }
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a.rows()) + " vs " +
                    std::to_string(b.rows()));
  }
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

namespace {

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

}  // namespace

double operator_norm(const ComplexMatrix& a) {
  require_valid(a, "operator_norm");
  return singular_values(a)(0);
}

double smallest_singular_value(const ComplexMatrix& a) {
  require_valid(a, "smallest_singular_value");
  const Eigen::VectorXd s = singular_values(a);
  return s(s.size() - 1);
}

ComplexVector eigenvalues(const ComplexMatrix& a) {
  require_valid(a, "eigenvalues");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

double spectral_radius(const ComplexMatrix& a) {
  return eigenvalues(a).cwiseAbs().maxCoeff();
}

double diagonalizable_tolerance(const ComplexMatrix& a) {
  return 1e-8 * (1.0 + operator_norm(a));
}

EigenDecomposition eigendecompose(const ComplexMatrix& a) {
  require_valid(a, "eigendecompose");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SolverFailure, "eigenvalue iteration did not converge");
  }
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.basis = solver.eigenvectors();
  for (Eigen::Index j = 0; j < out.basis.cols(); ++j) {
    const double nrm = out.basis.col(j).norm();
    if (nrm > 0.0) out.basis.col(j) /= nrm;
  }

  const Eigen::VectorXd s = singular_values(out.basis);
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  const auto inf = std::numeric_limits<double>::infinity();
  out.condition_estimate = smin > 0.0 ? smax / smin : inf;

  if (!std::isfinite(out.condition_estimate) || smin <= 1e-14 * smax) {
    out.basis_inverse = ComplexMatrix::Zero(a.rows(), a.cols());
    out.diag_residual = inf;
    out.diagonalizable = false;
    return out;
  }
  out.basis_inverse = out.basis.fullPivLu().inverse();
  const ComplexMatrix rebuilt =
      out.basis * out.eigenvalues.asDiagonal() * out.basis_inverse;
  const ComplexMatrix diff = a - rebuilt;
  out.diag_residual = diff.allFinite() ? singular_values(diff)(0) : inf;
  out.diagonalizable = out.diag_residual <= diagonalizable_tolerance(a);
  return out;
}

namespace {

// Pade (m,m) numerator split into odd part U and even part V, so that
// r_m(A) = (V - U)^{-1} (V + U). Coefficients and thresholds from the
// standard scaling-and-squaring tables for double precision.
struct PadeParts {
  ComplexMatrix u;
  ComplexMatrix v;
};

PadeParts pade_low(const ComplexMatrix& a, int degree) {
  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {
      17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
      2162160.0,     110880.0,     3960.0,       90.0,        1.0};

  const double* b = nullptr;
  switch (degree) {
    case 3: b = b3.data(); break;
    case 5: b = b5.data(); break;
    case 7: b = b7.data(); break;
    default: b = b9.data(); break;
  }
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = identity(n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix odd = b[1] * id;
  ComplexMatrix even = b[0] * id;
  ComplexMatrix power = id;
  for (int k = 1; 2 * k <= degree; ++k) {
    power = power * a2;
    odd += b[2 * k + 1] * power;
    even += b[2 * k] * power;
  }
  return {a * odd, even};
}

PadeParts pade13(const ComplexMatrix& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix inner_u = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const ComplexMatrix u =
      a * (a6 * inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const ComplexMatrix inner_v = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const ComplexMatrix v = a6 * inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return {u, v};
}

double one_norm(const ComplexMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

ComplexMatrix mat_exp(const ComplexMatrix& a) {
  require_valid(a, "mat_exp");
  static constexpr std::array<std::pair<int, double>, 4> low = {{
      {3, 1.495585217958292e-2},
      {5, 2.539398330063230e-1},
      {7, 9.504178996162932e-1},
      {9, 2.097847961257068e0},
  }};
  constexpr double theta13 = 5.371920351148152e0;

  const double norm1 = one_norm(a);
  for (const auto& [degree, theta] : low) {
    if (norm1 <= theta) {
      const PadeParts p = pade_low(a, degree);
      return (p.v - p.u).partialPivLu().solve(p.v + p.u);
    }
  }
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  }
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
  const PadeParts p = pade13(scaled);
  ComplexMatrix result = (p.v - p.u).partialPivLu().solve(p.v + p.u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

bool is_invertible(const ComplexMatrix& a) {
  require_valid(a, "is_invertible");
  const Eigen::VectorXd s = singular_values(a);
  return s(s.size() - 1) > 1e-12 * s(0);
}

ComplexMatrix mat_inverse(const ComplexMatrix& a) {
  if (!is_invertible(a)) {
    throw Error(ErrorCode::Singular, "mat_inverse: matrix is numerically singular");
  }
  return a.partialPivLu().inverse();
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

bool is_normal(const ComplexMatrix& a, double tol) {
  require_valid(a, "is_normal");
  const ComplexMatrix as = a.adjoint();
  return operator_norm(a * as - as * a) <= tol;
}

ComplexMatrix mat_power(const ComplexMatrix& a, long n) {
  require_valid(a, "mat_power");
  ComplexMatrix base = n < 0 ? mat_inverse(a) : a;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  ComplexMatrix result = identity(a.rows());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

}  // namespace specdist
