#pragma once

// Seeded random families used by the theorem suites and the CLI.
//
// Families whose commutator sequences must vanish exactly (nilpotent,
// jordan, qe-block-pair) are built from small Gaussian integers so that
// every product in the recurrence is exact in double precision.

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>

#include "specdist/matrix.hpp"

namespace specdist::gen {

using Rng = std::mt19937_64;

/// splitmix64 finaliser; used to derive per-trial seeds.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

ComplexMatrix gaussian(Rng& rng, Eigen::Index dim, double scale = 1.0);
ComplexMatrix hermitian(Rng& rng, Eigen::Index dim);
/// Orthonormalised complex Gaussian (QR with phase correction).
ComplexMatrix unitary(Rng& rng, Eigen::Index dim);
/// U diag(lambda) U* with lambda in the unit disk.
ComplexMatrix normal(Rng& rng, Eigen::Index dim);
/// Strictly upper triangular, small integer entries, non-zero superdiagonal.
ComplexMatrix nilpotent(Rng& rng, Eigen::Index dim);
/// Strictly upper triangular with N^3 = 0 and even entries in N^2, so
/// I + tN + t^2 N^2 / 2 is exact in double precision for t in {1/2, 1, 2}.
ComplexMatrix graded_nilpotent(Rng& rng, Eigen::Index dim);
/// exp(tN) for N^3 = 0, by the truncated series.
ComplexMatrix unipotent_exp(const ComplexMatrix& n, double t);
/// Single Jordan block J_dim(lambda).
ComplexMatrix jordan(Eigen::Index dim, Complex lambda);
/// Random S with integer entries and det 1 (unit lower times unit upper).
std::pair<ComplexMatrix, ComplexMatrix> unimodular_similarity(Rng& rng, Eigen::Index dim);
/// Random well-conditioned invertible matrix (singular values in [0.5, 2]).
ComplexMatrix well_conditioned(Rng& rng, Eigen::Index dim);
/// S D S^{-1} with cond(S) < max_condition.
ComplexMatrix diagonalizable(Rng& rng, Eigen::Index dim, double max_condition);

struct MatrixPair {
  ComplexMatrix a;
  ComplexMatrix b;
};

/// Shared diagonaliser S, independent eigenvalues: a b = b a.
MatrixPair commuting_pair(Rng& rng, Eigen::Index dim);
/// a = (+)_j (lambda_j I + N_j), b = (+)_j (lambda_j I + M_j) with strictly upper
/// triangular integer N_j, M_j, conjugated by one unimodular integer S.
MatrixPair qe_block_pair(Rng& rng, Eigen::Index dim);
/// Two distinct idempotents of equal rank.
MatrixPair idempotent_pair(Rng& rng, Eigen::Index dim);

enum class Kind { Hermitian, Unitary, Normal, Nilpotent, Jordan, CommutingPair, QeBlockPair, Generic };

struct Request {
  Kind kind = Kind::Generic;
  Complex jordan_eigenvalue = 1.0;
};

/// Parses hermitian | unitary | normal | nilpotent | jordan(<re>[,<im>]) |
/// commuting-pair | qe-block-pair | generic. Throws ErrorCode::UnknownKind.
Request parse_kind(std::string_view text);

struct Generated {
  ComplexMatrix a;
  std::optional<ComplexMatrix> b;
};

Generated generate(const Request& request, Eigen::Index dim, std::uint64_t seed);

}  // namespace specdist::gen
