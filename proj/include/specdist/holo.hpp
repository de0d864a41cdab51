#pragma once

// Holomorphic functional calculus by Cauchy integrals over circles,
//
//   f(a) = (1/2 pi i) \oint f(z) (z - a)^{-1} dz,
//
// evaluated with the trapezoidal rule (spectrally accurate for integrands
// analytic in an annulus around each circle).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specdist/matrix.hpp"

namespace specdist {

struct Circle {
  Complex center;
  double radius = 1.0;
  int nodes = 128;
};

struct ContourSpec {
  std::vector<Circle> circles;
};

enum class FunctionKind { Polynomial, Exp, PrincipalLog, RotatedLog, Rational, Power };

class FunctionSpec {
 public:
  static FunctionSpec polynomial(std::vector<Complex> coefficients);  // c0 + c1 z + ...
  static FunctionSpec exp();
  static FunctionSpec principal_log();
  /// Branch of log with its cut along the ray {t e^{i angle} : t >= 0}.
  static FunctionSpec rotated_log(double cut_angle);
  /// z + c / z; c = 1 and c = -1 are the "plus" and "minus" variants.
  static FunctionSpec rational(double c);
  static FunctionSpec power(int k);

  FunctionKind kind() const { return kind_; }
  bool is_log() const {
    return kind_ == FunctionKind::PrincipalLog || kind_ == FunctionKind::RotatedLog;
  }
  double cut_angle() const { return cut_angle_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// Distance from z to the nearest pole or branch cut; +inf for entire functions.
  double distance_to_singularity(Complex z) const;
  std::string describe() const;

 private:
  FunctionKind kind_ = FunctionKind::Exp;
  std::vector<Complex> coefficients_;
  double cut_angle_ = 0.0;
  double rational_c_ = 1.0;
  int power_ = 1;
};

struct Cluster {
  Complex center;  // mean of the member eigenvalues
  std::vector<Complex> members;
  double spread = 0.0;  // max distance of a member from the center
};

/// Single-linkage clustering: eigenvalues closer than `tol` share a cluster.
std::vector<Cluster> cluster_eigenvalues(std::span<const Complex> values, double tol);

/// Default cluster tolerance for a matrix: 1e-3 (1 + ||a||). Nearby eigenvalues
/// share one circle; near-defective groups must not be split.
double default_cluster_tol(const ComplexMatrix& a);

/// One circle per cluster, radius g/3 for minimal centre gap g (or
/// max(1, 4 spread) for a single cluster), capped at half the distance to the
/// nearest singularity of f.
ContourSpec auto_contour(const FunctionSpec& f, std::span<const Complex> spectrum,
                         double cluster_tol, int nodes = 128);

/// Throws ContourMargin / SingularityInside when the contour is unusable for (f, a).
void validate_contour(const FunctionSpec& f, std::span<const Complex> spectrum,
                      const ContourSpec& contour);

ComplexMatrix holo_apply(const FunctionSpec& f, const ComplexMatrix& a,
                         const ContourSpec& contour);
ComplexMatrix holo_apply(const FunctionSpec& f, const ComplexMatrix& a, int nodes = 128);

struct SpectralCluster {
  Complex eigenvalue;  // cluster mean
  ComplexMatrix idempotent;
};

struct SpectralDecomposition {
  std::vector<SpectralCluster> clusters;
  ComplexMatrix remainder;  // a - sum_j lambda_j p_j, quasinilpotent up to cluster spread
};

/// Throws ClusterSeparation unless clusters are more than 4 cluster_tol apart.
SpectralDecomposition riesz_idempotents(const ComplexMatrix& a, double cluster_tol,
                                        int nodes = 128);

/// Cut ray angle maximising the distance to the given points.
double best_cut_angle(std::span<const Complex> points);

/// Requires 0 outside the spectrum (margin 1e-8 ||a||) and the spectrum off the cut.
ComplexMatrix matrix_log(const ComplexMatrix& a, const FunctionSpec& branch);

/// sup over w in sigma_b of max( sup_{l in sigma_a, l != w} |(f(l)-f(w))/(l-w)|, |f'(w)| ).
double fct_bound(const FunctionSpec& f, std::span<const Complex> sigma_a,
                 std::span<const Complex> sigma_b);

struct FctCheck {
  double lhs = 0.0;    // rho(f(a), f(b))
  double rhs = 0.0;    // bound * rho(a, b)
  double bound = 0.0;
  double rho_ab = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool converged = true;
  std::string evidence;
};

FctCheck fct_inequality_check(const FunctionSpec& f, const ComplexMatrix& a,
                              const ComplexMatrix& b, std::size_t n_max = 128);

}  // namespace specdist
