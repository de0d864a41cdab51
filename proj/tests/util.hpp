#pragma once

#include <cmath>
#include <initializer_list>

#include "specdist/matrix.hpp"

namespace testutil {

using specdist::Complex;
using specdist::ComplexMatrix;

inline ComplexMatrix m(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix out(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex& v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (const Complex& v : d) { out(i, i) = v; ++i; }
  return out;
}

// Largest entry modulus; used as an independent yardstick next to the operator norm.
inline double max_abs(const ComplexMatrix& a) { return a.cwiseAbs().maxCoeff(); }

// Plain Taylor series for exp, fine for small norms.
inline ComplexMatrix exp_series(const ComplexMatrix& a, int terms = 80) {
  ComplexMatrix sum = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

}  // namespace testutil
