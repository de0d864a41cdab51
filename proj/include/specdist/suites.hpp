#pragma once

// Randomised and constructive verification suites. Each suite checks one
// family of statements about rho / d_rho on matrices and emits one report per
// trial. Equivalences of the form "a = b iff rho(a,b) = 0" are certified in
// both directions by construction: equal pairs must give an exact-zero
// sequence, constructed-unequal pairs a strictly positive oracle value.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specdist/matrix.hpp"

namespace specdist {

enum class Verdict { Pass, Fail, Inconclusive };
std::string_view to_string(Verdict v);

struct TrialConfig {
  std::string suite;
  Eigen::Index dim = 3;  // 2..8
  std::size_t trials = 100;
  std::uint64_t master_seed = 42;
  std::size_t n = 128;  // commutator sequence length
  std::map<std::string, double, std::less<>> tolerances;  // overrides of the defaults below
  unsigned threads = 0;  // 0: SPECDIST_THREADS, then hardware concurrency

  /// Named tolerance with built-in defaults:
  ///   fct_margin 1e-8, positive 1e-6, riesz 1e-8, identity 1e-10, imag 1e-8,
  ///   unit_modulus 1e-10, normal 1e-8, idempotent_odd 1e-12, inconclusive_rate 0.05
  double tol(std::string_view name) const;
};

void validate(const TrialConfig& config);

struct TrialReport {
  std::string suite;
  std::size_t trial = 0;
  std::string digest;  // FNV-1a over the generated inputs
  std::vector<std::pair<std::string, double>> quantities;
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

std::vector<TrialReport> suite_fct(const TrialConfig& config);
std::vector<TrialReport> suite_razpet_and_finite_spectrum(const TrialConfig& config);
std::vector<TrialReport> suite_gelfand(const TrialConfig& config);
std::vector<TrialReport> suite_star_classes(const TrialConfig& config);
std::vector<TrialReport> suite_spec(const TrialConfig& config);
std::vector<TrialReport> suite_identities(const TrialConfig& config);

/// fct, razpet, gelfand, star, spec, identities
const std::vector<std::string>& suite_names();
/// Statement(s) a suite certifies, for reports.
std::string_view suite_certifies(std::string_view suite);
/// Dispatch on config.suite. Throws ErrorCode::UnknownKind for an unknown name.
std::vector<TrialReport> run_suite(const TrialConfig& config);

struct SuiteSummary {
  std::string suite;
  std::size_t trials = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  double seconds = 0.0;
  double max_inconclusive_rate = 0.05;

  /// No fails and an inconclusive rate below the limit.
  bool ok() const;
};

SuiteSummary summarize(std::string_view suite, const std::vector<TrialReport>& reports,
                       double seconds, double max_inconclusive_rate);

// Verdict helpers shared with the CLI and tests.

/// sup_{|n| <= n_max} ||(alpha + a)^n (alpha + b)^{-n}||
double power_ratio_sup(const ComplexMatrix& a, const ComplexMatrix& b, Complex alpha,
                       long n_max);

struct GelfandVerdict {
  bool spectrum_is_one = false;
  bool rho_exact_zero = false;
  double sup_norm_16 = 0.0;  // sup_{|n|<=16} ||a^n||
  double sup_norm_64 = 0.0;  // sup_{|n|<=64} ||a^n||
  bool bounded = false;       // no growth between |n| <= 16 and |n| <= 64
  bool is_identity = false;   // all three hypotheses hold
};

GelfandVerdict gelfand_verdict(const ComplexMatrix& a, std::size_t n_max = 128);

struct PowerBoundedVerdict {
  Complex alpha;
  bool spectrum_clear_of_zero = false;
  bool rho_exact_zero = false;
  double sup_16 = 0.0;
  double sup_64 = 0.0;
  bool bounded = false;
  bool equal = false;
};

/// Generalised power-boundedness criterion for a = b. alpha is picked so that
/// 0 stays outside sigma(alpha + a) and sigma(alpha + b).
PowerBoundedVerdict power_bounded_verdict(const ComplexMatrix& a, const ComplexMatrix& b,
                                          std::size_t n_max = 128);

}  // namespace specdist
