#include "specdist/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/QR>

namespace specdist::gen {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1) + 0xD1B54A32D192ED03ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

int small_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double condition(const ComplexMatrix& s) {
  const double smin = smallest_singular_value(s);
  return smin > 0.0 ? operator_norm(s) / smin : std::numeric_limits<double>::infinity();
}

// Exact inverse of a unit triangular integer matrix by substitution.
ComplexMatrix unit_triangular_inverse(const ComplexMatrix& t, bool lower) {
  const Eigen::Index n = t.rows();
  ComplexMatrix inv = identity(n);
  for (Eigen::Index col = 0; col < n; ++col) {
    if (lower) {
      for (Eigen::Index i = col + 1; i < n; ++i) {
        Complex acc = 0.0;
        for (Eigen::Index k = col; k < i; ++k) acc += t(i, k) * inv(k, col);
        inv(i, col) = -acc;
      }
    } else {
      for (Eigen::Index i = col - 1; i >= 0; --i) {
        Complex acc = 0.0;
        for (Eigen::Index k = i + 1; k <= col; ++k) acc += t(i, k) * inv(k, col);
        inv(i, col) = -acc;
      }
    }
  }
  return inv;
}

ComplexVector unit_disk_values(Rng& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
  }
  return v;
}

}  // namespace

ComplexMatrix gaussian(Rng& rng, Eigen::Index dim, double scale) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = scale * Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix hermitian(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix g = gaussian(rng, dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix unitary(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix g = gaussian(rng, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * identity(dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix normal(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix u = unitary(rng, dim);
  return u * unit_disk_values(rng, dim).asDiagonal() * u.adjoint();
}

ComplexMatrix nilpotent(Rng& rng, Eigen::Index dim) {
  ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      if (j == i + 1) {
        int v = 0;
        while (v == 0) v = small_int(rng, -2, 2);
        n(i, j) = static_cast<double>(v);
      } else {
        n(i, j) = static_cast<double>(small_int(rng, -2, 2));
      }
    }
  }
  return n;
}

ComplexMatrix graded_nilpotent(Rng& rng, Eigen::Index dim) {
  // Three index levels; entries only map a level to a strictly higher one.
  std::vector<int> level(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) level[static_cast<std::size_t>(i)] = static_cast<int>((3 * i) / dim);
  for (;;) {
    ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        if (level[static_cast<std::size_t>(i)] < level[static_cast<std::size_t>(j)]) {
          n(i, j) = 2.0 * small_int(rng, -1, 1);
        }
      }
    }
    if (n.cwiseAbs().maxCoeff() > 0.0) return n;
  }
}

ComplexMatrix unipotent_exp(const ComplexMatrix& n, double t) {
  return identity(n.rows()) + t * n + (0.5 * t * t) * (n * n);
}

ComplexMatrix jordan(Eigen::Index dim, Complex lambda) {
  ComplexMatrix j = lambda * identity(dim);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) j(i, i + 1) = 1.0;
  return j;
}

std::pair<ComplexMatrix, ComplexMatrix> unimodular_similarity(Rng& rng, Eigen::Index dim) {
  ComplexMatrix lower = identity(dim);
  ComplexMatrix upper = identity(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      lower(i, j) = static_cast<double>(small_int(rng, -1, 1));
      upper(j, i) = static_cast<double>(small_int(rng, -1, 1));
    }
  }
  const ComplexMatrix s = lower * upper;
  const ComplexMatrix s_inv =
      unit_triangular_inverse(upper, false) * unit_triangular_inverse(lower, true);
  return {s, s_inv};
}

ComplexMatrix well_conditioned(Rng& rng, Eigen::Index dim) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Eigen::VectorXd s(dim);
  for (Eigen::Index i = 0; i < dim; ++i) s(i) = u(rng);
  return unitary(rng, dim) * s.cast<Complex>().asDiagonal() * unitary(rng, dim).adjoint();
}

ComplexMatrix diagonalizable(Rng& rng, Eigen::Index dim, double max_condition) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (;;) {
    const ComplexMatrix s = gaussian(rng, dim, scale);
    if (condition(s) >= max_condition) continue;
    const ComplexVector d = gaussian(rng, dim, 1.0).diagonal();
    return s * d.asDiagonal() * mat_inverse(s);
  }
}

MatrixPair commuting_pair(Rng& rng, Eigen::Index dim) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (;;) {
    const ComplexMatrix s = gaussian(rng, dim, scale);
    if (condition(s) >= 100.0) continue;
    const ComplexMatrix s_inv = mat_inverse(s);
    const ComplexVector da = gaussian(rng, dim, 1.0).diagonal();
    const ComplexVector db = gaussian(rng, dim, 1.0).diagonal();
    return {s * da.asDiagonal() * s_inv, s * db.asDiagonal() * s_inv};
  }
}

MatrixPair qe_block_pair(Rng& rng, Eigen::Index dim) {
  // Block sizes: random composition of dim with at least one block of size >= 2.
  std::vector<Eigen::Index> sizes;
  for (;;) {
    sizes.clear();
    Eigen::Index left = dim;
    while (left > 0) {
      const Eigen::Index s = small_int(rng, 1, static_cast<int>(std::min<Eigen::Index>(3, left)));
      sizes.push_back(s);
      left -= s;
    }
    if (dim < 2 || std::any_of(sizes.begin(), sizes.end(), [](Eigen::Index s) { return s >= 2; })) {
      break;
    }
  }
  // Distinct Gaussian-integer eigenvalues.
  std::vector<Complex> lambdas;
  while (lambdas.size() < sizes.size()) {
    const Complex z(small_int(rng, -3, 3), small_int(rng, -3, 3));
    if (std::find(lambdas.begin(), lambdas.end(), z) == lambdas.end()) lambdas.push_back(z);
  }
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix b = ComplexMatrix::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    const Eigen::Index s = sizes[j];
    for (Eigen::Index i = 0; i < s; ++i) {
      a(offset + i, offset + i) = lambdas[j];
      b(offset + i, offset + i) = lambdas[j];
      for (Eigen::Index k = i + 1; k < s; ++k) {
        a(offset + i, offset + k) = static_cast<double>(small_int(rng, -2, 2));
        b(offset + i, offset + k) = static_cast<double>(small_int(rng, -2, 2));
      }
    }
    offset += s;
  }
  const auto [sim, sim_inv] = unimodular_similarity(rng, dim);
  return {sim * a * sim_inv, sim * b * sim_inv};
}

MatrixPair idempotent_pair(Rng& rng, Eigen::Index dim) {
  const Eigen::Index rank = small_int(rng, 1, static_cast<int>(std::max<Eigen::Index>(1, dim - 1)));
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < rank; ++i) e(i, i) = 1.0;
  auto draw = [&]() {
    for (;;) {
      const ComplexMatrix s = gaussian(rng, dim, 1.0) + 2.0 * identity(dim);
      if (condition(s) < 10.0) return ComplexMatrix(s * e * mat_inverse(s));
    }
  };
  MatrixPair out{draw(), draw()};
  return out;
}

Request parse_kind(std::string_view text) {
  const std::string t(text);
  Request r;
  if (t == "hermitian") r.kind = Kind::Hermitian;
  else if (t == "unitary") r.kind = Kind::Unitary;
  else if (t == "normal") r.kind = Kind::Normal;
  else if (t == "nilpotent") r.kind = Kind::Nilpotent;
  else if (t == "commuting-pair") r.kind = Kind::CommutingPair;
  else if (t == "qe-block-pair") r.kind = Kind::QeBlockPair;
  else if (t == "generic") r.kind = Kind::Generic;
  else if (t == "jordan") r.kind = Kind::Jordan;
  else if (t.rfind("jordan(", 0) == 0 && t.back() == ')') {
    r.kind = Kind::Jordan;
    const std::string inner = t.substr(7, t.size() - 8);
    try {
      const auto comma = inner.find(',');
      const double re = std::stod(inner.substr(0, comma));
      const double im = comma == std::string::npos ? 0.0 : std::stod(inner.substr(comma + 1));
      r.jordan_eigenvalue = Complex(re, im);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UnknownKind, "bad jordan eigenvalue in '" + t + "'");
    }
  } else {
    throw Error(ErrorCode::UnknownKind, "unknown generator kind '" + t + "'");
  }
  return r;
}

Generated generate(const Request& request, Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "generator dimension must be >= 1");
  Rng rng(seed);
  switch (request.kind) {
    case Kind::Hermitian: return {hermitian(rng, dim), std::nullopt};
    case Kind::Unitary: return {unitary(rng, dim), std::nullopt};
    case Kind::Normal: return {normal(rng, dim), std::nullopt};
    case Kind::Nilpotent: return {nilpotent(rng, dim), std::nullopt};
    case Kind::Jordan: return {jordan(dim, request.jordan_eigenvalue), std::nullopt};
    case Kind::CommutingPair: {
      MatrixPair p = commuting_pair(rng, dim);
      return {std::move(p.a), std::move(p.b)};
    }
    case Kind::QeBlockPair: {
      MatrixPair p = qe_block_pair(rng, dim);
      return {std::move(p.a), std::move(p.b)};
    }
    case Kind::Generic:
      return {gaussian(rng, dim, 1.0 / std::sqrt(static_cast<double>(dim))), std::nullopt};
  }
  throw Error(ErrorCode::UnknownKind, "unknown generator kind");
}

}  // namespace specdist::gen
