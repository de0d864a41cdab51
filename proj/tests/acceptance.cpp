// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "specdist/cli.hpp"
#include "specdist/commutator.hpp"
#include "specdist/generators.hpp"
#include "specdist/growth.hpp"
#include "specdist/holo.hpp"
#include "specdist/matrix.hpp"

using namespace specdist;
using gen::Rng;

namespace {

ComplexMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
  ComplexMatrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Collects failures for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string info;
  void require(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

int failed = 0;

void criterion(int id, const char* name, double time_limit, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0 && secs >= time_limit) c.failures.push_back("runtime " + num(secs) + " s over " + num(time_limit) + " s");
  const bool ok = c.failures.empty();
  failed += !ok;
  std::string line = std::string(ok ? "PASS" : "FAIL") + " " + std::to_string(id) + " " + name + " (" + num(secs) + " s)";
  if (!c.info.empty()) line += " " + c.info;
  for (const std::string& f : c.failures) line += "; " + f;
  std::puts(line.c_str());
  std::fflush(stdout);
}

Rng rng_for(std::uint64_t criterion_id, std::uint64_t trial) {
  return Rng(gen::mix_seed(20261016, criterion_id, trial));
}

ComplexMatrix eig_apply(const FunctionSpec& f, const EigenDecomposition& e) {
  ComplexVector fv(e.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(e.eigenvalues(i));
  return e.basis * fv.asDiagonal() * e.basis_inverse;
}

// Reference log n! as a long double sum, independent of lgamma.
double stirling_reference(std::size_t n) {
  long double log_fact = 0.0L;
  for (std::size_t k = 2; k <= n; ++k) log_fact += std::log(static_cast<long double>(k));
  return static_cast<double>(static_cast<long double>(n) * std::exp(-log_fact / static_cast<long double>(n)));
}

}  // namespace

int main() {
  criterion(1, "nilpotent-exactness", 1.0, [](Check& c) {
    const ComplexMatrix n = rows({{0, 1}, {0, 0}});
    const ComplexMatrix a = mat_exp(n);
    const ComplexMatrix x = adjoint(a);
    const ComplexMatrix y = mat_inverse(a);
    const CommutatorSequence s = commutator_sequence(x, y, 16);
    c.require(s.last_index() >= 3, "sequence too short");
    const double r1 = max_abs(s.value(1) - (n.adjoint() + n));
    const double r2 = max_abs(s.value(2) - diag({0, 2}));
    const double r3 = max_abs(s.value(3));
    c.require(r1 <= 1e-12, "term 1 residual " + num(r1));
    c.require(r2 <= 1e-12, "term 2 residual " + num(r2));
    c.require(r3 <= 1e-12, "term 3 residual " + num(r3));
    const RhoEstimate r = rho(x, y, 128);
    c.require(r.method == RhoMethod::ExactZero && r.value == 0.0,
              "rho reported " + num(r.value) + " via " + std::string(to_string(r.method)));
    for (const Complex& l : eigenvalues(a)) c.require(std::abs(std::abs(l) - 1.0) <= 1e-10, "eigenvalue modulus " + num(std::abs(l)));
    c.require(!is_normal(a, 1e-12), "exp(N) reported normal");
    c.info = "residuals " + num(std::max({r1, r2, r3}));
  });

  criterion(2, "oracle-vs-sequence", 30.0, [](Check& c) {
    int inconclusive = 0;
    double worst = 0.0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
      Rng rng = rng_for(2, static_cast<std::uint64_t>(t));
      const Eigen::Index dim = 2 + t % 5;
      ComplexMatrix a, b;
      do {
        a = gen::diagonalizable(rng, dim, 100.0);
        b = gen::diagonalizable(rng, dim, 100.0);
      } while (eigendecompose(a).condition_estimate >= 1e3 || eigendecompose(b).condition_estimate >= 1e3);
      const double oracle = rho_oracle(a, b).value;
      const RhoEstimate seq = rho_sequence(a, b, 128);
      if (!seq.converged) {
        ++inconclusive;
        continue;
      }
      const double rel = std::abs(seq.slope_fit - oracle) / oracle;
      worst = std::max(worst, rel);
      c.require(rel <= 0.05, "trial " + std::to_string(t) + " slope-fit " + num(seq.slope_fit) + " vs oracle " + num(oracle));
    }
    c.require(inconclusive < trials / 20.0, std::to_string(inconclusive) + " inconclusive");
    c.info = "worst relative " + num(worst) + ", inconclusive " + std::to_string(inconclusive) + "/50";
  });

  criterion(3, "commuting-law", 10.0, [](Check& c) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Rng rng = rng_for(3, static_cast<std::uint64_t>(t));
      const gen::MatrixPair p = gen::commuting_pair(rng, 2 + t % 5);
      const double d = d_rho(p.a, p.b).value;
      const double ref = spectral_radius(p.a - p.b);
      worst = std::max(worst, std::abs(d - ref));
      c.require(std::abs(d - ref) <= 1e-10, "trial " + std::to_string(t) + " d_rho " + num(d) + " vs " + num(ref));
    }
    c.info = "worst " + num(worst);
  });

  criterion(4, "fct-inequality", 30.0, [](Check& c) {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Rng rng = rng_for(4, static_cast<std::uint64_t>(t));
      const ComplexMatrix a = gen::gaussian(rng, 3);
      const ComplexMatrix b = gen::gaussian(rng, 3);
      FunctionSpec f = FunctionSpec::exp();
      if (t % 2 == 1) {
        std::uniform_int_distribution<int> deg(1, 4);
        std::normal_distribution<double> g;
        std::vector<Complex> coeff(static_cast<std::size_t>(deg(rng)) + 1);
        for (Complex& k : coeff) k = Complex(g(rng), g(rng));
        f = FunctionSpec::polynomial(coeff);
      }
      const FctCheck r = fct_inequality_check(f, a, b);
      const double m = r.margin / (1.0 + r.rhs);
      worst = std::min(worst, m);
      c.require(r.margin >= -1e-8 * (1.0 + r.rhs), "trial " + std::to_string(t) + " lhs " + num(r.lhs) + " > rhs " + num(r.rhs));
    }
    const FctCheck w = fct_inequality_check(FunctionSpec::power(2), diag({0, 1}), diag({1, 0}));
    c.require(std::abs(w.lhs - 1.0) <= 1e-10, "worked example lhs " + num(w.lhs));
    c.require(std::abs(w.rhs - 2.0) <= 1e-10, "worked example rhs " + num(w.rhs));
    c.info = "worst relative margin " + num(worst);
  });

  criterion(5, "functional-calculus", 20.0, [](Check& c) {
    double worst = 0.0, drift_worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      Rng rng = rng_for(5, static_cast<std::uint64_t>(t));
      const Eigen::Index dim = 2 + t % 5;
      ComplexMatrix a = gen::diagonalizable(rng, dim, 100.0);
      FunctionSpec f = FunctionSpec::exp();
      switch (t % 3) {
        case 1: {
          std::normal_distribution<double> g;
          f = FunctionSpec::polynomial({Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)),
                                        Complex(g(rng), g(rng))});
          break;
        }
        case 2:
          // Shift the spectrum into the right half-plane, away from the cut.
          a += (spectral_radius(a) + 1.0) * identity(dim);
          f = FunctionSpec::principal_log();
          break;
        default: break;
      }
      const EigenDecomposition e = eigendecompose(a);
      const ComplexMatrix ref = eig_apply(f, e);
      const ComplexMatrix h = holo_apply(f, a, 128);
      const ComplexMatrix h2 = holo_apply(f, a, 256);
      const double scale = operator_norm(ref);
      const double rel = operator_norm(h - ref) / scale;
      const double drift = operator_norm(h2 - h) / scale;
      worst = std::max(worst, rel);
      drift_worst = std::max(drift_worst, drift);
      c.require(rel <= 1e-8, "trial " + std::to_string(t) + " " + f.describe() + " error " + num(rel));
      c.require(drift <= 1e-10, "trial " + std::to_string(t) + " node drift " + num(drift));
    }
    c.info = "worst error " + num(worst) + ", drift " + num(drift_worst);
  });

  criterion(6, "riesz-structure", 20.0, [](Check& c) {
    double worst = 0.0, worst_rem = 0.0;
    for (int t = 0; t < 50; ++t) {
      Rng rng = rng_for(6, static_cast<std::uint64_t>(t));
      const Eigen::Index dim = 3 + t % 4;
      const int clusters = std::min<int>(2 + t % 3, static_cast<int>(dim));
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi / clusters - 0.5);
      const double start = phase(rng);
      std::vector<Complex> centers;
      for (int k = 0; k < clusters; ++k) centers.push_back(std::polar(2.0, start + 2.0 * std::numbers::pi * k / clusters));
      // Every cluster gets one eigenvalue, the rest are spread at random; a
      // repeated eigenvalue becomes a Jordan block on odd trials.
      ComplexMatrix d = ComplexMatrix::Zero(dim, dim);
      std::uniform_int_distribution<int> pick(0, clusters - 1);
      std::vector<int> owner(static_cast<std::size_t>(dim));
      for (Eigen::Index i = 0; i < dim; ++i) owner[static_cast<std::size_t>(i)] = i < clusters ? static_cast<int>(i) : pick(rng);
      std::sort(owner.begin(), owner.end());
      for (Eigen::Index i = 0; i < dim; ++i) d(i, i) = centers[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])];
      bool jordan = false;
      for (Eigen::Index i = 0; i + 1 < dim && t % 2 == 1 && !jordan; ++i) {
        if (owner[static_cast<std::size_t>(i)] == owner[static_cast<std::size_t>(i + 1)]) d(i, i + 1) = 1.0, jordan = true;
      }
      const ComplexMatrix s = gen::well_conditioned(rng, dim);
      const ComplexMatrix a = s * d * mat_inverse(s);
      const SpectralDecomposition sd = riesz_idempotents(a, default_cluster_tol(a));
      if (sd.clusters.size() != static_cast<std::size_t>(clusters)) {
        c.require(false, "trial " + std::to_string(t) + " found " + std::to_string(sd.clusters.size()) + " clusters");
        continue;
      }
      ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
      double gap = 0.0;
      for (std::size_t i = 0; i < sd.clusters.size(); ++i) {
        const ComplexMatrix& p = sd.clusters[i].idempotent;
        sum += p;
        gap = std::max(gap, operator_norm(p * p - p));
        for (std::size_t j = 0; j < sd.clusters.size(); ++j) {
          if (i != j) gap = std::max(gap, operator_norm(p * sd.clusters[j].idempotent));
        }
      }
      gap = std::max(gap, operator_norm(sum - identity(dim)));
      const double rem = spectral_radius(sd.remainder) / (1.0 + operator_norm(a));
      worst = std::max(worst, gap);
      worst_rem = std::max(worst_rem, rem);
      c.require(gap <= 1e-8, "trial " + std::to_string(t) + " idempotent gap " + num(gap));
      c.require(rem <= 1e-6, "trial " + std::to_string(t) + " remainder radius " + num(rem));
    }
    c.info = "worst gap " + num(worst) + ", remainder " + num(worst_rem);
  });

  criterion(7, "growth-bridge", 60.0, [](Check& c) {
    double worst_order = 0.0, worst_type = 0.0;
    for (int t = 0; t < 25; ++t) {
      Rng rng = rng_for(7, static_cast<std::uint64_t>(t));
      const Eigen::Index dim = 2 + t % 4;
      ComplexMatrix a, b;
      double oracle = 0.0;
      do {
        a = gen::diagonalizable(rng, dim, 100.0);
        b = gen::diagonalizable(rng, dim, 100.0);
        oracle = rho_oracle(a, b).value;
      } while (oracle < 0.5);
      const std::vector<double> ln = coefficient_lognorms(a, b, 200);
      const GrowthEstimate g = order_type_from_coefficients(ln);
      const double type_err = std::abs(g.type - oracle) / std::max(1.0, oracle);
      worst_order = std::max(worst_order, std::abs(g.order - 1.0));
      worst_type = std::max(worst_type, type_err);
      c.require(g.order >= 0.9 && g.order <= 1.05, "trial " + std::to_string(t) + " order " + num(g.order));
      c.require(!g.type_infinite && type_err <= 0.1, "trial " + std::to_string(t) + " type " + num(g.type) + " vs " + num(oracle));
      const GrowthEstimate disk = order_type_from_disk_sampling(a, b, default_radii(a, b), 64);
      c.require(envelope_holds(disk, a, b), "trial " + std::to_string(t) + " envelope violated");
    }
    c.info = "worst |order-1| " + num(worst_order) + ", worst type error " + num(worst_type);
  });

  criterion(8, "stirling-limit", 0.0, [](Check& c) {
    const double r10 = stirling_reference(10), r100 = stirling_reference(100);
    c.require(std::abs(stirling_check(10) - r10) <= 1e-3, "n=10 " + num(stirling_check(10)) + " vs " + num(r10));
    c.require(std::abs(stirling_check(100) - r100) <= 1e-3, "n=100 " + num(stirling_check(100)) + " vs " + num(r100));
    c.require(std::abs(r10 - 2.208) <= 1e-3, "reference n=10 " + num(r10));
    c.require(std::abs(r100 - 2.632) <= 1e-3, "reference n=100 " + num(r100));
    const double e200 = stirling_check(200);
    c.require(std::abs(e200 - std::numbers::e) <= 0.02 * std::numbers::e, "n=200 " + num(e200));
    for (std::size_t n = 11; n <= 200; ++n) {
      c.require(stirling_check(n) > stirling_check(n - 1), "not increasing at n=" + std::to_string(n));
    }
    c.info = "n=10 " + num(stirling_check(10)) + ", n=100 " + num(stirling_check(100)) + ", n=200 " + num(e200);
  });

  criterion(9, "gelfand-necessity", 0.0, [](Check& c) {
    const ComplexMatrix j = rows({{1, 1}, {0, 1}});
    const CommutatorSequence s = commutator_sequence(j, identity(2), 64);
    c.require(s.exact_zero_at == std::optional<std::size_t>(2), "exact zero not at term 2");
    const RhoEstimate r = rho(j, identity(2), 128);
    c.require(r.method == RhoMethod::ExactZero && r.value == 0.0, "rho(J, 1) not exact-zero");
    for (long n = 1; n <= 64; ++n) {
      const double norm = operator_norm(mat_power(j, n));
      c.require(norm >= static_cast<double>(n), "||J^" + std::to_string(n) + "|| = " + num(norm));
    }
  });

  criterion(10, "star-contrapositives", 0.0, [](Check& c) {
    static constexpr const char* kNames[] = {"hermitian", "unitary", "normal"};
    double smallest = 1e300;
    for (int cls = 0; cls < 3; ++cls) {
      for (int t = 0; t < 100; ++t) {
        Rng rng = rng_for(10 + static_cast<std::uint64_t>(cls), static_cast<std::uint64_t>(t));
        const Eigen::Index dim = 2 + t % 5;
        auto draw = [&] {
          switch (cls) {
            case 0: return gen::hermitian(rng, dim);
            case 1: return gen::unitary(rng, dim);
            default: return gen::normal(rng, dim);
          }
        };
        const ComplexMatrix a = draw();
        // Unequal by construction: a perturbation of a within the class.
        ComplexMatrix b;
        switch (cls) {
          case 0: b = a + 0.01 * gen::hermitian(rng, dim); break;
          case 1: b = a * mat_exp(Complex(0, 0.01) * gen::hermitian(rng, dim)); break;
          default: {
            const ComplexMatrix u = gen::unitary(rng, dim);
            b = u * a * u.adjoint();
            if (operator_norm(a - b) <= 1e-3) b = draw();
          }
        }
        const double r = rho_oracle(a, b).value;
        smallest = std::min(smallest, r);
        c.require(r > 1e-6, std::string(kNames[cls]) + " trial " + std::to_string(t) + " rho " + num(r));
        const RhoEstimate z = rho(a, a, 128);
        c.require(z.method == RhoMethod::ExactZero && z.value == 0.0,
                  std::string(kNames[cls]) + " trial " + std::to_string(t) + " equal pair not exact-zero");
      }
    }
    const double anchor = rho_oracle(diag({1, -1}), rows({{0, 1}, {1, 0}})).value;
    c.require(std::abs(anchor - 2.0) <= 1e-10, "anchor rho " + num(anchor));
    c.info = "smallest unequal rho " + num(smallest) + ", anchor " + num(anchor);
  });

  criterion(11, "identity-validators", 0.0, [](Check& c) {
    double worst_invol = 0.0, worst_ind = 0.0;
    for (int t = 0; t < 100; ++t) {
      Rng rng = rng_for(11, static_cast<std::uint64_t>(t));
      const Eigen::Index dim = 2 + t % 5;
      const ComplexMatrix a = gen::gaussian(rng, dim);
      const ComplexMatrix b = gen::gaussian(rng, dim);
      const ComplexMatrix w = gen::well_conditioned(rng, dim);
      for (std::size_t n = 1; n <= 8; ++n) {
        const double ri = invol_identity_check(a, b, n);
        const double rd = ind_identity_check(w, n);
        worst_invol = std::max(worst_invol, ri);
        worst_ind = std::max(worst_ind, rd);
        c.require(ri <= 1e-10, "invol trial " + std::to_string(t) + " n=" + std::to_string(n) + " " + num(ri));
        c.require(rd <= 1e-10, "ind trial " + std::to_string(t) + " n=" + std::to_string(n) + " " + num(rd));
      }
    }
    const double scalar = ind_identity_check(diag({2}), 3);
    c.require(scalar <= 1e-15, "scalar anchor residual " + num(scalar));
    c.info = "worst invol " + num(worst_invol) + ", ind " + num(worst_ind) + ", scalar " + num(scalar);
  });

  criterion(12, "verify-all", 300.0, [](Check& c) {
    const std::filesystem::path out = std::filesystem::temp_directory_path() / "specdist_acceptance_verify";
    std::vector<std::string> args = {"specdist", "verify", "--suite", "all", "--trials", "100",
                                     "--seed", "42", "--dim", "3", "--out", out.string()};
    std::vector<char*> argv;
    for (std::string& s : args) argv.push_back(s.data());
    std::ostringstream o, e;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    c.require(code == 0, "exit code " + std::to_string(code) + ": " + e.str());
    std::ifstream csv(out / "summary.csv");
    std::string line;
    std::getline(csv, line);
    int suites = 0;
    while (std::getline(csv, line)) {
      // suite,trials,pass,fail,inconclusive,seconds
      std::vector<std::string> f;
      std::istringstream cells(line);
      for (std::string cell; std::getline(cells, cell, ',');) f.push_back(cell);
      if (f.size() != 6) continue;
      ++suites;
      c.require(f[1] == "100", line);
      c.require(std::stol(f[3]) == 0, line);
      c.require(std::stol(f[4]) < 5, line);
    }
    c.require(suites == 6, "saw " + std::to_string(suites) + " suite summaries");
    c.require(std::filesystem::exists(out / "report.json"), "report.json missing");
  });

  return failed == 0 ? 0 : 1;
}
