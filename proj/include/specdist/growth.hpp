#pragma once

// Order and type of entire matrix-valued functions, specialised to
// f(lambda) = e^{lambda a} e^{-lambda b} = sum_n lambda^n C_{a,b}^n 1 / n!.
//
// Two independent routes: the Taylor coefficients (from the commutator
// sequence) and direct sampling of M_f(r) = max_{|lambda|=r} ||f(lambda)||.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specdist/matrix.hpp"

namespace specdist {

enum class GrowthMethod { Coefficients, DiskSampling };
std::string_view to_string(GrowthMethod m);

struct GrowthEstimate {
  double order = 0.0;
  double type = 0.0;
  bool type_infinite = false;
  GrowthMethod method = GrowthMethod::Coefficients;
  double fit_residual = 0.0;
  bool polynomial = false;  // constant / polynomial convention applied: order 0, type 0

  // coefficient route
  std::size_t coefficient_count = 0;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  double raw_order = 0.0;  // tail-max of n log n / log(1/||a_n||)
  double raw_type = 0.0;   // tail-max of n ||a_n||^{order/n} / (e order)

  // disk-sampling route
  std::vector<double> radii;
  std::vector<double> log_max_modulus;  // log M^(r) per radius actually sampled
  bool truncated = false;

  std::string note;
};

/// log ||C^n 1 / n!|| for n = 0..n_max (-inf for exact zeros). Needs n_max >= 32.
std::vector<double> coefficient_lognorms(const ComplexMatrix& a, const ComplexMatrix& b,
                                         std::size_t n_max);

/// Needs >= 32 finite log-norms, or a zero tail (polynomial input).
GrowthEstimate order_type_from_coefficients(std::span<const double> lognorms);

/// Radii must be increasing geometric (>= 6 values); samples_per_circle >= 32.
GrowthEstimate order_type_from_disk_sampling(const ComplexMatrix& a, const ComplexMatrix& b,
                                             std::span<const double> radii,
                                             int samples_per_circle);

/// 2^k r0 for k = 0..7 with the largest radius at log M <= 650 by the
/// envelope ||f(lambda)|| <= e^{(||a||+||b||)|lambda|}.
std::vector<double> default_radii(const ComplexMatrix& a, const ComplexMatrix& b);

/// log M^(r) <= (||a|| + ||b||) r on every sampled radius, up to 1e-12 relative rounding.
bool envelope_holds(const GrowthEstimate& disk, const ComplexMatrix& a, const ComplexMatrix& b);

/// n (1/n!)^{1/n}, computed in log space; tends to e.
double stirling_check(std::size_t n);

}  // namespace specdist
