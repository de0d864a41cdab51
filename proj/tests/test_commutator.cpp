#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "specdist/commutator.hpp"
#include "specdist/generators.hpp"
#include "util.hpp"

using namespace specdist;
using testutil::diag;
using testutil::m;

namespace {

const ComplexMatrix kN = m({{0, 1}, {0, 0}});
const ComplexMatrix kJ = m({{1, 1}, {0, 1}});
const ComplexMatrix kP = diag({1, 0});
const ComplexMatrix kQ = m({{1, 1}, {0, 0}});

// Independent route: C_{a,b} as the n^2 x n^2 matrix I (x) a - b^T (x) I acting on
// vec(x). rho is the largest |eigenvalue| whose eigenvector carries vec(1).
double kronecker_rho(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index n = a.rows();
  const Eigen::Index nn = n * n;
  ComplexMatrix op = ComplexMatrix::Zero(nn, nn);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      // column-major vec: index i + j n
      for (Eigen::Index k = 0; k < n; ++k) {
        op(i + j * n, k + j * n) += a(i, k);
        op(i + j * n, i + k * n) -= b(k, j);
      }
    }
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> es(op);
  const ComplexMatrix v = es.eigenvectors();
  ComplexVector vec_one = ComplexVector::Zero(nn);
  for (Eigen::Index i = 0; i < n; ++i) vec_one(i + i * n) = 1.0;
  const ComplexVector c = v.fullPivLu().solve(vec_one);
  const double cmax = c.cwiseAbs().maxCoeff();
  double r = 0.0;
  for (Eigen::Index k = 0; k < nn; ++k) {
    if (std::abs(c(k)) > 1e-8 * cmax) r = std::max(r, std::abs(es.eigenvalues()(k)));
  }
  return r;
}

double rel(const ComplexMatrix& x, const ComplexMatrix& ref) {
  const double s = operator_norm(ref);
  return s == 0.0 ? operator_norm(x) : operator_norm(x - ref) / s;
}

}  // namespace

TEST(CommutatorSequence, NilpotentAgainstZero) {
  const CommutatorSequence s = commutator_sequence(kN, ComplexMatrix::Zero(2, 2), 4);
  ASSERT_EQ(s.terms.size(), 5u);
  EXPECT_EQ(testutil::max_abs(s.value(0) - identity(2)), 0.0);
  EXPECT_EQ(s.terms[0].log_norm, 0.0);
  EXPECT_EQ(testutil::max_abs(s.value(1) - kN), 0.0);
  ASSERT_TRUE(s.exact_zero_at.has_value());
  EXPECT_EQ(*s.exact_zero_at, 2u);
  for (std::size_t n = 2; n <= 4; ++n) EXPECT_EQ(testutil::max_abs(s.value(n)), 0.0);
}

TEST(CommutatorSequence, IdempotentFirstTerm) {
  const CommutatorSequence s = commutator_sequence(kP, kQ, 1);
  EXPECT_EQ(testutil::max_abs(s.value(1) - m({{0, -1}, {0, 0}})), 0.0);
  EXPECT_NEAR(s.terms[1].log_norm, 0.0, 1e-15);
}

TEST(CommutatorSequence, JordanAgainstIdentity) {
  const CommutatorSequence s = commutator_sequence(kJ, identity(2), 10);
  ASSERT_TRUE(s.exact_zero_at.has_value());
  EXPECT_EQ(*s.exact_zero_at, 2u);
  EXPECT_EQ(testutil::max_abs(s.value(1) - kN), 0.0);
}

TEST(CommutatorSequence, ReconstructionMatchesRecurrence) {
  gen::Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = gen::gaussian(rng, 4, 0.5);
    const ComplexMatrix b = gen::gaussian(rng, 4, 0.5);
    const CommutatorSequence s = commutator_sequence(a, b, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
      const ComplexMatrix ref = commutator_power(a, b, identity(4), n);
      EXPECT_LE(rel(s.value(n), ref), 1e-12) << "n=" << n;
      EXPECT_NEAR(s.terms[n].log_norm, std::log(operator_norm(ref)), 1e-12);
      const double dn = operator_norm(s.terms[n].direction);
      EXPECT_GE(dn, 0.5 - 1e-15);
      EXPECT_LT(dn, 1.0 + 1e-15);
    }
  }
}

TEST(CommutatorSequence, ZeroPersistsAfterExactZero) {
  gen::Rng rng(22);
  for (int t = 0; t < 10; ++t) {
    const gen::MatrixPair p = gen::qe_block_pair(rng, 5);
    const CommutatorSequence s = commutator_sequence(p.a, p.b, 64);
    ASSERT_TRUE(s.exact_zero_at.has_value());
    for (std::size_t n = *s.exact_zero_at; n <= 64; ++n) {
      EXPECT_EQ(s.terms[n].log_norm, -std::numeric_limits<double>::infinity());
      EXPECT_EQ(testutil::max_abs(s.value(n)), 0.0);
    }
  }
}

TEST(CommutatorSequence, LargeNormsStayFinite) {
  const ComplexMatrix a = diag({40, -40});
  const CommutatorSequence s = commutator_sequence(a, ComplexMatrix::Zero(2, 2), 400);
  EXPECT_FALSE(s.exact_zero_at.has_value());
  EXPECT_NEAR(s.terms[400].log_norm, 400 * std::log(40.0), 1e-9 * 400 * std::log(40.0));
}

TEST(CommutatorBinomial, AgreesWithRecurrence) {
  gen::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = gen::gaussian(rng, 4, 0.5);
    const ComplexMatrix b = gen::gaussian(rng, 4, 0.5);
    const ComplexMatrix x = gen::gaussian(rng, 4);
    for (std::size_t n = 0; n <= 8; ++n) {
      EXPECT_LE(rel(commutator_binomial(a, b, x, n), commutator_power(a, b, x, n)), 1e-10);
    }
  }
}

TEST(Rho, Examples) {
  const RhoEstimate z = rho(kN, ComplexMatrix::Zero(2, 2));
  EXPECT_EQ(z.method, RhoMethod::ExactZero);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_TRUE(z.converged);
  EXPECT_NEAR(rho(diag({3, 1}), diag({1, 1})).value, 2.0, 1e-12);
  const ComplexMatrix b = m({{1, 1}, {0, -1}});
  EXPECT_NEAR(rho(diag({0, 2}), b).value, 3.0, 1e-12);
  const RhoEstimate seq = rho_sequence(diag({0, 2}), b, 128);
  EXPECT_NEAR(seq.value, 3.0, 0.05 * 3.0);
  EXPECT_TRUE(seq.converged);
}

TEST(RhoSequence, CommutingPair) {
  const RhoEstimate r = rho_sequence(diag({3, 1}), diag({1, 1}), 128);
  EXPECT_NEAR(r.value, 2.0, 0.1);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.window.second, r.window.first);
}

TEST(RhoSequence, RejectsShortWindow) {
  EXPECT_THROW(rho_sequence(kJ, kJ, 8), Error);
}

TEST(RhoOracle, Examples) {
  const RhoEstimate r = rho_oracle(diag({0, 2}), m({{1, 1}, {0, -1}}));
  EXPECT_EQ(r.method, RhoMethod::Oracle);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_NEAR(rho_oracle(diag({1, -1}), m({{0, 1}, {1, 0}})).value, 2.0, 1e-12);
  gen::Rng rng(24);
  const ComplexMatrix a = gen::diagonalizable(rng, 4, 100.0);
  EXPECT_LE(rho_oracle(a, a).value, 1e-9 * operator_norm(a));
}

TEST(RhoOracle, DefectiveInputIsUnavailable) {
  try {
    rho_oracle(kJ, identity(2));
    FAIL() << "expected OracleUnavailable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OracleUnavailable);
  }
}

TEST(RhoOracle, AgreesWithKroneckerOperator) {
  gen::Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const ComplexMatrix a = gen::diagonalizable(rng, 3, 50.0);
    const ComplexMatrix b = gen::diagonalizable(rng, 3, 50.0);
    const double ref = kronecker_rho(a, b);
    EXPECT_NEAR(rho_oracle(a, b).value, ref, 1e-8 * (1 + ref));
  }
}

TEST(DRho, Examples) {
  EXPECT_NEAR(d_rho(diag({3, 1}), diag({1, 1})).value, 2.0, 1e-12);
  const ComplexMatrix b = m({{1, 1}, {0, -1}});
  EXPECT_NEAR(rho(b, diag({0, 2})).value, 3.0, 1e-12);
  EXPECT_NEAR(d_rho(diag({0, 2}), b).value, 3.0, 1e-12);
  const RhoEstimate z = d_rho(kN, kN.transpose());
  EXPECT_EQ(z.method, RhoMethod::ExactZero);
  EXPECT_EQ(z.value, 0.0);
}

TEST(Equivalence, Examples) {
  EXPECT_TRUE(is_quasinilpotent_equivalent(kN, ComplexMatrix::Zero(2, 2), 128, 1e-8).equivalent);
  EXPECT_FALSE(is_quasinilpotent_equivalent(kP, kQ, 128, 1e-8).equivalent);
  // lambda = 1, mu = 4 blocks with different strictly triangular parts
  ComplexMatrix a = diag({1, 1, 4, 4});
  ComplexMatrix b = a;
  a(0, 1) = 1;
  a(2, 3) = 2;
  b(2, 3) = -1;
  EXPECT_TRUE(is_quasinilpotent_equivalent(a, b, 128, 1e-8).equivalent);
  EXPECT_THROW(is_quasinilpotent_equivalent(a, b, 128, 0.0), Error);
}

TEST(Scaling, OracleIsHomogeneous) {
  gen::Rng rng(26);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = gen::diagonalizable(rng, 4, 50.0);
    const ComplexMatrix b = gen::diagonalizable(rng, 4, 50.0);
    const Complex alpha(-1.7, 0.4);
    const double base = rho_oracle(a, b).value;
    EXPECT_NEAR(rho_oracle(alpha * a, alpha * b).value, std::abs(alpha) * base, 1e-10 * (1 + base));
    const RhoEstimate seq = rho_sequence(alpha * a, alpha * b, 128);
    if (seq.converged) {
      EXPECT_NEAR(seq.value, std::abs(alpha) * base, 0.05 * std::abs(alpha) * base);
    }
  }
}

TEST(Shift, ScalarShiftLeavesRhoUnchanged) {
  gen::Rng rng(27);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = gen::diagonalizable(rng, 4, 50.0);
    const ComplexMatrix b = gen::diagonalizable(rng, 4, 50.0);
    const ComplexMatrix c = Complex(0.8, -2.5) * identity(4);
    EXPECT_NEAR(rho_oracle(a + c, b + c).value, rho_oracle(a, b).value, 1e-10 * (1 + rho_oracle(a, b).value));
  }
}

TEST(CommutingPairs, DRhoIsSpectralRadiusOfDifference) {
  gen::Rng rng(28);
  for (int t = 0; t < 30; ++t) {
    const gen::MatrixPair p = gen::commuting_pair(rng, 4);
    const double ref = spectral_radius(p.a - p.b);
    EXPECT_NEAR(d_rho(p.a, p.b).value, ref, 1e-10 * (1 + ref));
  }
}

TEST(Idempotents, OddTermsHaveNormOfDifference) {
  gen::Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    const gen::MatrixPair p = gen::idempotent_pair(rng, 4);
    const double gap = operator_norm(p.a - p.b);
    for (std::size_t n = 1; n <= 11; n += 2) {
      const double cn = operator_norm(commutator_power(p.a, p.b, identity(4), n));
      EXPECT_NEAR(cn, gap, 1e-12 * gap);
    }
  }
}

TEST(OracleVsSequence, AgreeWithinFivePercent) {
  gen::Rng rng(30);
  int inconclusive = 0;
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix a = gen::diagonalizable(rng, 4, 100.0);
    const ComplexMatrix b = gen::diagonalizable(rng, 4, 100.0);
    const double ref = rho_oracle(a, b).value;
    const RhoEstimate seq = rho_sequence(a, b, 128);
    if (!seq.converged) {
      ++inconclusive;
      continue;
    }
    EXPECT_NEAR(seq.value, ref, 0.05 * ref);
  }
  EXPECT_LT(inconclusive, 3);
}

TEST(Invol, Examples) {
  gen::Rng rng(31);
  const ComplexMatrix a = gen::gaussian(rng, 3);
  const ComplexMatrix b = gen::gaussian(rng, 3);
  EXPECT_EQ(invol_identity_check(a, b, 1), 0.0);
  EXPECT_LE(invol_identity_check(a, b, 2), 1e-12);
  const ComplexMatrix h = gen::hermitian(rng, 3);
  const ComplexMatrix k = gen::hermitian(rng, 3);
  for (std::size_t n = 1; n <= 7; n += 2) {
    const ComplexMatrix lhs = commutator_power(h, k, identity(3), n).adjoint();
    const ComplexMatrix rhs = -commutator_power(k, h, identity(3), n);
    EXPECT_LE(rel(lhs, rhs), 1e-12);
  }
  EXPECT_THROW(invol_identity_check(a, b, 0), Error);
}

TEST(Ind, Examples) {
  EXPECT_LE(ind_identity_check(diag({2}), 3), 1e-15);
  EXPECT_EQ(ind_identity_check(identity(3), 5), 0.0);
  gen::Rng rng(32);
  EXPECT_LE(ind_identity_check(gen::unitary(rng, 4), 4), 1e-10);
  EXPECT_THROW(ind_identity_check(identity(2), 13), Error);
  EXPECT_THROW(ind_identity_check(kN, 2), Error);
}

TEST(Ind, ScalarHandComputation) {
  // a = 2: a^{-1}* = 1/2, C_{1/2, 2}^j 1 = (-3/2)^j, and the sum is (1 - 3/4)^3.
  double sum = 0.0;
  const double binom[] = {1, 3, 3, 1};
  for (int j = 0; j <= 3; ++j) sum += binom[j] * std::pow(-1.5, j) * std::pow(0.5, j);
  EXPECT_DOUBLE_EQ(sum, std::pow(0.25, 3));
}
