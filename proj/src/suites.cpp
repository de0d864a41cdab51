#include "specdist/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "specdist/commutator.hpp"
#include "specdist/generators.hpp"
#include "specdist/holo.hpp"

namespace specdist {

namespace {

using gen::Rng;

class Digest {
 public:
  void add(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        add_double(m(i, j).real());
        add_double(m(i, j).imag());
      }
    }
  }
  void add_double(double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001B3ULL;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

struct Trial {
  TrialReport report;
  Digest digest;
  std::vector<std::string> failures;
  bool inconclusive = false;

  void q(std::string name, double v) { report.quantities.emplace_back(std::move(name), v); }
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& what) { report.detail = what; }
  void unsure(const std::string& what) {
    inconclusive = true;
    failures.push_back("inconclusive: " + what);
  }
};

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool exact_zero(const RhoEstimate& r) { return r.method == RhoMethod::ExactZero; }

unsigned worker_count(const TrialConfig& config) {
  unsigned n = config.threads;
  if (n == 0) {
    if (const char* env = std::getenv("SPECDIST_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, config.trials)));
}

// Runs body(trial, rng) for every trial index; output order is by index.
std::vector<TrialReport> run_trials(const TrialConfig& config, std::string_view suite,
                                    std::uint64_t stream,
                                    const std::function<void(Trial&, Rng&)>& body) {
  validate(config);
  std::vector<TrialReport> reports(config.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= config.trials) return;
      Trial trial;
      trial.report.suite = std::string(suite);
      trial.report.trial = t;
      Rng rng(gen::mix_seed(config.master_seed, stream, t));
      try {
        body(trial, rng);
      } catch (const std::exception& e) {
        trial.failures.push_back(std::string("error: ") + e.what());
        trial.inconclusive = false;
      }
      const bool hard_fail = std::any_of(trial.failures.begin(), trial.failures.end(),
                                         [](const std::string& f) { return f.rfind("inconclusive", 0) != 0; });
      trial.report.verdict = hard_fail ? Verdict::Fail
                             : trial.inconclusive ? Verdict::Inconclusive
                                                  : Verdict::Pass;
      std::string detail = std::move(trial.report.detail);
      for (const std::string& f : trial.failures) {
        if (!detail.empty()) detail += "; ";
        detail += f;
      }
      trial.report.detail = std::move(detail);
      trial.report.digest = trial.digest.hex();
      reports[t] = std::move(trial.report);
    }
  };
  const unsigned n = worker_count(config);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return reports;
}

ComplexMatrix embed(const ComplexMatrix& small, Eigen::Index dim, Complex fill = 0.0) {
  ComplexMatrix m = fill * identity(dim);
  m.topLeftCorner(small.rows(), small.cols()) = small;
  return m;
}

ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (const Complex& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

double condition(const ComplexMatrix& s) {
  const double smin = smallest_singular_value(s);
  return smin > 0.0 ? operator_norm(s) / smin : std::numeric_limits<double>::infinity();
}

FunctionSpec random_function(Rng& rng, std::size_t trial) {
  if (trial % 2 == 0) return FunctionSpec::exp();
  const int degree = std::uniform_int_distribution<int>(1, 4)(rng);
  std::normal_distribution<double> normal;
  std::vector<Complex> c;
  for (int k = 0; k <= degree; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    c.emplace_back(re / (k + 1), im / (k + 1));
  }
  return FunctionSpec::polynomial(std::move(c));
}

// ---------------------------------------------------------------- fct

void fct_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const std::size_t t = tr.report.trial;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  ComplexMatrix a, b;
  ComplexVector da, db;
  const int mode = t % 10 == 0 ? 0 : t % 10 == 1 ? 1 : 2;
  if (mode == 0) {
    a = gen::gaussian(rng, dim, scale);
    b = a;
  } else if (mode == 1) {
    da = gen::gaussian(rng, dim, 1.0).diagonal();
    db = gen::gaussian(rng, dim, 1.0).diagonal();
    a = da.asDiagonal();
    b = db.asDiagonal();
  } else {
    a = gen::gaussian(rng, dim, scale);
    b = gen::gaussian(rng, dim, scale);
  }
  const FunctionSpec f = random_function(rng, t);
  tr.digest.add(a);
  tr.digest.add(b);
  tr.note("f = " + f.describe());

  const FctCheck c = fct_inequality_check(f, a, b, cfg.n);
  tr.q("lhs", c.lhs);
  tr.q("rhs", c.rhs);
  tr.q("bound", c.bound);
  tr.q("rho_ab", c.rho_ab);
  tr.q("margin", c.margin);
  if (!c.converged) {
    tr.unsure("rho estimate did not converge (" + c.evidence + ")");
    return;
  }
  const double slack = cfg.tol("fct_margin") * (1.0 + c.rhs);
  tr.check(c.margin >= -slack, "margin " + short_num(c.margin) + " below -" + short_num(slack));
  if (mode == 0) tr.check(c.lhs == 0.0 && c.rhs == 0.0, "a=b must give lhs = rhs = 0");
  if (mode == 1) {
    // Diagonal pairs: rho(a,b) = max |a_i - b_i| and rho(f(a),f(b)) = max |f(a_i) - f(b_i)|.
    double rho_cf = 0.0, lhs_cf = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      rho_cf = std::max(rho_cf, std::abs(da(i) - db(i)));
      lhs_cf = std::max(lhs_cf, std::abs(f(da(i)) - f(db(i))));
    }
    tr.q("rho_closed_form", rho_cf);
    tr.q("lhs_closed_form", lhs_cf);
    tr.check(std::abs(c.rho_ab - rho_cf) <= 1e-10 * (1.0 + rho_cf), "rho differs from closed form");
    tr.check(std::abs(c.lhs - lhs_cf) <= 1e-8 * (1.0 + lhs_cf), "lhs differs from closed form");
  }
}

// ------------------------------------------------------------- razpet

struct MatchedClusters {
  double max_idempotent_gap = 0.0;
  bool matched = true;
};

MatchedClusters match(const SpectralDecomposition& x, const SpectralDecomposition& y,
                      double center_tol) {
  MatchedClusters m;
  if (x.clusters.size() != y.clusters.size()) {
    m.matched = false;
    return m;
  }
  for (const SpectralCluster& cx : x.clusters) {
    const SpectralCluster* best = nullptr;
    double dist = std::numeric_limits<double>::infinity();
    for (const SpectralCluster& cy : y.clusters) {
      const double d = std::abs(cx.eigenvalue - cy.eigenvalue);
      if (d < dist) {
        dist = d;
        best = &cy;
      }
    }
    if (best == nullptr || dist > center_tol) {
      m.matched = false;
      return m;
    }
    const double scale = std::max(1.0, operator_norm(cx.idempotent));
    m.max_idempotent_gap =
        std::max(m.max_idempotent_gap, operator_norm(cx.idempotent - best->idempotent) / scale);
  }
  return m;
}

void razpet_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const std::size_t t = tr.report.trial;

  // (i) distinct idempotents have rho(p,q) > 0, and ||C^n 1|| = ||p - q|| for odd n.
  ComplexMatrix p, q;
  if (t == 0) {
    p = embed(from_rows({{1, 0}, {0, 0}}), dim);
    q = embed(from_rows({{1, 1}, {0, 0}}), dim);
  } else {
    gen::MatrixPair pq = gen::idempotent_pair(rng, dim);
    p = std::move(pq.a);
    q = std::move(pq.b);
  }
  tr.digest.add(p);
  tr.digest.add(q);
  const double gap = operator_norm(p - q);
  tr.q("norm_p_minus_q", gap);
  if (gap > 1e-6) {
    const RhoEstimate r = rho(p, q, cfg.n);
    tr.q("rho_pq", r.value);
    tr.check(r.value > cfg.tol("positive"), "rho(p,q) = " + short_num(r.value) + " not positive");
    double worst = 0.0;
    for (std::size_t n = 1; n <= 9; n += 2) {
      const double cn = operator_norm(commutator_power(p, q, identity(dim), n));
      worst = std::max(worst, std::abs(cn - gap) / gap);
    }
    tr.q("odd_term_deviation", worst);
    tr.check(worst <= cfg.tol("idempotent_odd"), "odd terms deviate from ||p-q|| by " + short_num(worst));
  }

  // (ii) block pairs sharing eigenvalues and Riesz idempotents.
  ComplexMatrix a, b;
  if (t == 0 && dim >= 3) {
    ComplexMatrix a0 = 3.0 * identity(dim);
    ComplexMatrix b0 = 3.0 * identity(dim);
    a0.topLeftCorner(2, 2) = from_rows({{1, 1}, {0, 1}});
    b0.topLeftCorner(2, 2) = identity(2);
    a = a0;
    b = b0;
  } else {
    gen::MatrixPair ab = gen::qe_block_pair(rng, dim);
    a = std::move(ab.a);
    b = std::move(ab.b);
  }
  tr.digest.add(a);
  tr.digest.add(b);
  const RhoEstimate d = d_rho(a, b, cfg.n);
  tr.q("d_rho", d.value);
  tr.check(exact_zero(d), "d_rho(a,b) not exact-zero (" + std::string(to_string(d.method)) + " " +
                              short_num(d.value) + ")");

  const double scale = 1.0 + operator_norm(a) + operator_norm(b);
  const double cluster_tol = std::min(0.1, std::max(default_cluster_tol(a), default_cluster_tol(b)));
  const SpectralDecomposition sa = riesz_idempotents(a, cluster_tol);
  const SpectralDecomposition sb = riesz_idempotents(b, cluster_tol);
  const MatchedClusters m = match(sa, sb, 1e-6 * scale);
  tr.q("clusters", static_cast<double>(sa.clusters.size()));
  tr.check(m.matched, "cluster centres of a and b differ");
  tr.q("idempotent_gap", m.max_idempotent_gap);
  tr.check(m.max_idempotent_gap <= cfg.tol("riesz"),
           "Riesz idempotents differ by " + short_num(m.max_idempotent_gap));
  const double rem_gap = operator_norm((a - b) - (sa.remainder - sb.remainder)) / scale;
  tr.q("remainder_gap", rem_gap);
  tr.check(rem_gap <= cfg.tol("riesz"), "a - b differs from r_a - r_b by " + short_num(rem_gap));
}

// ------------------------------------------------------------ gelfand

void gelfand_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const std::size_t t = tr.report.trial;
  const ComplexMatrix one = identity(dim);
  ComplexMatrix s = one, s_inv = one;
  if (t >= 3) std::tie(s, s_inv) = gen::unimodular_similarity(rng, dim);
  const double cond_s = condition(s);
  tr.q("cond_similarity", cond_s);

  switch (t % 3) {
    case 0: {
      // J_dim(1): spectrum {1}, rho(J, 1) = 0, yet powers grow.
      const ComplexMatrix a = s * gen::jordan(dim, 1.0) * s_inv;
      tr.digest.add(a);
      const GelfandVerdict g = gelfand_verdict(a, cfg.n);
      tr.q("sup_norm_16", g.sup_norm_16);
      tr.q("sup_norm_64", g.sup_norm_64);
      tr.check(g.rho_exact_zero, "rho(J, 1) not exact-zero");
      tr.check(g.spectrum_is_one, "spectrum of J not {1}");
      tr.check(!g.bounded, "powers of J reported bounded");
      tr.check(!g.is_identity, "J classified as the identity");
      tr.check(g.sup_norm_64 * cond_s >= 64.0, "||J^n|| growth below linear");
      const PowerBoundedVerdict pb = power_bounded_verdict(a, one, cfg.n);
      tr.q("power_ratio_sup_64", pb.sup_64);
      tr.check(pb.rho_exact_zero && !pb.bounded && !pb.equal,
               "power-ratio criterion misclassifies J against 1");
      break;
    }
    case 1: {
      const ComplexMatrix a = s * one * s_inv;
      tr.digest.add(a);
      const GelfandVerdict g = gelfand_verdict(a, cfg.n);
      tr.q("sup_norm_64", g.sup_norm_64);
      tr.check(g.is_identity, "identity not recognised");
      tr.check(std::abs(g.sup_norm_64 - 1.0) <= 1e-12, "sup ||1^n|| != 1");
      break;
    }
    default: {
      // Equal pair with spectrum in [2, 2.2]; a narrow band keeps a^n a^{-n}
      // well conditioned after conjugation.
      std::uniform_real_distribution<double> u(2.0, 2.2);
      ComplexVector d(dim);
      for (Eigen::Index i = 0; i < dim; ++i) d(i) = u(rng);
      if (t == 2) d.head(2) << 2.0, 3.0;
      const ComplexMatrix a = s * d.asDiagonal() * s_inv;
      tr.digest.add(a);
      const PowerBoundedVerdict pb = power_bounded_verdict(a, a, cfg.n);
      tr.q("alpha_re", pb.alpha.real());
      tr.q("power_ratio_sup_64", pb.sup_64);
      tr.check(pb.spectrum_clear_of_zero, "0 in the shifted spectrum");
      tr.check(pb.rho_exact_zero && pb.bounded && pb.equal, "equal pair not certified equal");
      break;
    }
  }
}

// --------------------------------------------------------------- star

void star_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const double tol = cfg.tol("positive");
  static constexpr const char* kNames[] = {"hermitian", "unitary", "normal"};
  auto draw = [&](int cls) -> ComplexMatrix {
    switch (cls) {
      case 0: return gen::hermitian(rng, dim);
      case 1: return gen::unitary(rng, dim);
      default: return gen::normal(rng, dim);
    }
  };
  for (int cls = 0; cls < 3; ++cls) {
    const std::string name = kNames[cls];
    ComplexMatrix a = draw(cls);
    ComplexMatrix b = draw(cls);
    while (operator_norm(a - b) <= 1e-3) b = draw(cls);
    tr.digest.add(a);
    tr.digest.add(b);
    try {
      const RhoEstimate r = rho_oracle(a, b);
      tr.q(name + "_rho_unequal", r.value);
      tr.check(r.value > tol, name + ": rho of unequal pair " + short_num(r.value));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OracleUnavailable) throw;
      tr.unsure(name + ": " + e.what());
    }
    const RhoEstimate z = rho(a, a, cfg.n);
    tr.q(name + "_rho_equal", z.value);
    tr.check(exact_zero(z), name + ": equal pair not exact-zero");
  }
  if (tr.report.trial == 0) {
    const ComplexMatrix a = embed(from_rows({{1, 0}, {0, -1}}), dim);
    const ComplexMatrix b = embed(from_rows({{0, 1}, {1, 0}}), dim);
    const double r = rho_oracle(a, b).value;
    tr.q("anchor_rho", r);
    tr.check(std::abs(r - 2.0) <= 1e-10, "anchor pair rho " + short_num(r) + " != 2");
    const ComplexMatrix h1 = embed(from_rows({{3, 0}, {0, 1}}), dim, 1.0);
    const ComplexMatrix h2 = identity(dim);
    const double rh = rho(h1, h2, cfg.n).value;
    tr.q("anchor_hermitian_rho", rh);
    tr.check(std::abs(rh - 2.0) <= 1e-10, "diag(3,1) vs 1 rho " + short_num(rh) + " != 2");
  }
}

// --------------------------------------------------------------- spec

void spec_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const std::size_t t = tr.report.trial;

  // (i) rho(a*, a) = 0 forces a real spectrum; non-real spectra give rho > 0.
  ComplexMatrix a;
  const int mode = static_cast<int>(t % 3);
  if (mode == 0) {
    a = gen::nilpotent(rng, dim);
  } else if (mode == 1) {
    a = gen::hermitian(rng, dim);
  } else {
    std::normal_distribution<double> normal;
    ComplexVector d(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      d(i) = Complex(re, (im >= 0 ? 0.5 : -0.5) + im);
    }
    if (t == 2) d.head(2) << Complex(0, 1), Complex(0, -1);
    ComplexMatrix s;
    do {
      s = gen::gaussian(rng, dim, 1.0 / std::sqrt(static_cast<double>(dim)));
    } while (condition(s) >= 100.0);
    a = s * d.asDiagonal() * mat_inverse(s);
  }
  tr.digest.add(a);
  const RhoEstimate r = rho(adjoint(a), a, cfg.n);
  tr.q("rho_adj", r.value);
  double max_imag = 0.0;
  for (const Complex& l : eigenvalues(a)) max_imag = std::max(max_imag, std::abs(l.imag()));
  tr.q("max_abs_imag", max_imag);
  if (mode < 2) {
    tr.check(exact_zero(r), "rho(a*, a) not exact-zero for a real-spectrum class");
  } else {
    tr.check(r.method == RhoMethod::Oracle && r.value > cfg.tol("positive"),
             "non-real spectrum but rho(a*, a) = " + short_num(r.value));
  }
  if (exact_zero(r)) tr.check(max_imag <= cfg.tol("imag"), "exact-zero yet |Im lambda| = " + short_num(max_imag));

  // (ii) a = exp(tN): rho(a*, a^{-1}) = 0, spectrum on the unit circle, a not normal.
  static constexpr double kTimes[] = {0.5, 1.0, 2.0};
  const double time = kTimes[t % 3];
  const ComplexMatrix n = t == 0 ? embed(from_rows({{0, 1}, {0, 0}}), dim) : gen::graded_nilpotent(rng, dim);
  tr.digest.add(n);
  const ComplexMatrix u = gen::unipotent_exp(n, time);
  const ComplexMatrix u_inv = gen::unipotent_exp(n, -time);
  tr.check((u * u_inv - identity(dim)).cwiseAbs().maxCoeff() == 0.0, "exp(tN) exp(-tN) != 1 exactly");
  const RhoEstimate ru = rho(adjoint(u), u_inv, cfg.n);
  tr.q("t", time);
  tr.q("rho_adj_inv", ru.value);
  tr.check(exact_zero(ru), "rho(a*, a^-1) not exact-zero");
  double worst = 0.0;
  for (const Complex& l : eigenvalues(u)) worst = std::max(worst, std::abs(std::abs(l) - 1.0));
  tr.q("max_modulus_deviation", worst);
  tr.check(worst <= cfg.tol("unit_modulus"), "|lambda| deviates from 1 by " + short_num(worst));
  const bool normal = is_normal(u, cfg.tol("normal"));
  tr.q("normal", normal ? 1.0 : 0.0);
  tr.check(!normal, "exp(tN) reported normal");
}

// --------------------------------------------------------- identities

void identities_trial(const TrialConfig& cfg, Trial& tr, Rng& rng) {
  const Eigen::Index dim = cfg.dim;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const ComplexMatrix a = gen::gaussian(rng, dim, scale);
  const ComplexMatrix b = gen::gaussian(rng, dim, scale);
  const ComplexMatrix w = gen::well_conditioned(rng, dim);
  tr.digest.add(a);
  tr.digest.add(b);
  tr.digest.add(w);
  const double tol = cfg.tol("identity");
  double invol = 0.0, ind = 0.0;
  for (std::size_t n = 1; n <= 8; ++n) {
    invol = std::max(invol, invol_identity_check(a, b, n));
    ind = std::max(ind, ind_identity_check(w, n));
  }
  tr.q("invol_residual", invol);
  tr.q("ind_residual", ind);
  tr.check(invol <= tol, "invol residual " + short_num(invol));
  tr.check(ind <= tol, "ind residual " + short_num(ind));
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

const std::map<std::string, double, std::less<>>& default_tolerances() {
  static const std::map<std::string, double, std::less<>> kDefaults = {
      {"fct_margin", 1e-8}, {"positive", 1e-6},     {"riesz", 1e-8},
      {"identity", 1e-10},  {"imag", 1e-8},         {"unit_modulus", 1e-10},
      {"normal", 1e-8},     {"idempotent_odd", 1e-12}, {"inconclusive_rate", 0.05}};
  return kDefaults;
}

}  // namespace

double TrialConfig::tol(std::string_view name) const {
  const auto& defaults = default_tolerances();
  const auto known = defaults.find(name);
  if (known == defaults.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + std::string(name) + "'");
  }
  if (auto it = tolerances.find(name); it != tolerances.end()) return it->second;
  return known->second;
}

void validate(const TrialConfig& config) {
  if (config.dim < 2 || config.dim > 8) {
    throw Error(ErrorCode::InvalidArgument, "dim must lie in [2, 8]");
  }
  if (config.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
  if (config.n < 16) throw Error(ErrorCode::InvalidArgument, "N must be >= 16");
  for (const auto& [name, value] : config.tolerances) {
    if (!std::isfinite(value) || value < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "tolerance '" + name + "' must be finite and >= 0");
    }
    (void)config.tol(name);
  }
}

std::vector<TrialReport> suite_fct(const TrialConfig& config) {
  return run_trials(config, "fct", 1, [&](Trial& t, Rng& r) { fct_trial(config, t, r); });
}
std::vector<TrialReport> suite_razpet_and_finite_spectrum(const TrialConfig& config) {
  return run_trials(config, "razpet", 2, [&](Trial& t, Rng& r) { razpet_trial(config, t, r); });
}
std::vector<TrialReport> suite_gelfand(const TrialConfig& config) {
  return run_trials(config, "gelfand", 3, [&](Trial& t, Rng& r) { gelfand_trial(config, t, r); });
}
std::vector<TrialReport> suite_star_classes(const TrialConfig& config) {
  return run_trials(config, "star", 4, [&](Trial& t, Rng& r) { star_trial(config, t, r); });
}
std::vector<TrialReport> suite_spec(const TrialConfig& config) {
  return run_trials(config, "spec", 5, [&](Trial& t, Rng& r) { spec_trial(config, t, r); });
}
std::vector<TrialReport> suite_identities(const TrialConfig& config) {
  return run_trials(config, "identities", 6, [&](Trial& t, Rng& r) { identities_trial(config, t, r); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"fct", "razpet", "gelfand", "star", "spec", "identities"};
  return names;
}

std::string_view suite_certifies(std::string_view suite) {
  if (suite == "fct") return "rho(f(a), f(b)) <= sup |divided differences of f| * rho(a, b)";
  if (suite == "razpet") {
    return "distinct idempotents have rho > 0; block pairs with shared eigenvalues are "
           "quasinilpotent equivalent, share Riesz idempotents and satisfy a - b = r_a - r_b";
  }
  if (suite == "gelfand") {
    return "sigma(a) = {1} with doubly bounded powers forces a = 1; power-ratio boundedness "
           "plus rho = 0 forces a = b";
  }
  if (suite == "star") return "self-adjoint, unitary and normal pairs: a = b iff rho(a, b) = 0";
  if (suite == "spec") {
    return "rho(a*, a) = 0 gives a real spectrum; rho(a*, a^-1) = 0 gives a spectrum on the "
           "unit circle without normality";
  }
  if (suite == "identities") return "adjoint symmetry of C^n 1 and the binomial expansion of (a^-n)* a^-n";
  throw Error(ErrorCode::UnknownKind, "unknown suite '" + std::string(suite) + "'");
}

std::vector<TrialReport> run_suite(const TrialConfig& config) {
  const std::string& s = config.suite;
  if (s == "fct") return suite_fct(config);
  if (s == "razpet") return suite_razpet_and_finite_spectrum(config);
  if (s == "gelfand") return suite_gelfand(config);
  if (s == "star") return suite_star_classes(config);
  if (s == "spec") return suite_spec(config);
  if (s == "identities") return suite_identities(config);
  throw Error(ErrorCode::UnknownKind, "unknown suite '" + s + "'");
}

bool SuiteSummary::ok() const {
  if (fail > 0) return false;
  if (trials == 0) return true;
  return static_cast<double>(inconclusive) < max_inconclusive_rate * static_cast<double>(trials);
}

SuiteSummary summarize(std::string_view suite, const std::vector<TrialReport>& reports,
                       double seconds, double max_inconclusive_rate) {
  SuiteSummary s;
  s.suite = std::string(suite);
  s.trials = reports.size();
  s.seconds = seconds;
  s.max_inconclusive_rate = max_inconclusive_rate;
  for (const TrialReport& r : reports) {
    switch (r.verdict) {
      case Verdict::Pass: ++s.pass; break;
      case Verdict::Fail: ++s.fail; break;
      case Verdict::Inconclusive: ++s.inconclusive; break;
    }
  }
  return s;
}

double power_ratio_sup(const ComplexMatrix& a, const ComplexMatrix& b, Complex alpha, long n_max) {
  require_same_dim(a, b);
  const Eigen::Index dim = a.rows();
  const ComplexMatrix x = alpha * identity(dim) + a;
  const ComplexMatrix y = alpha * identity(dim) + b;
  double sup = 1.0;
  for (long n = -n_max; n <= n_max; ++n) {
    if (n == 0) continue;
    sup = std::max(sup, operator_norm(mat_power(x, n) * mat_power(y, -n)));
  }
  return sup;
}

GelfandVerdict gelfand_verdict(const ComplexMatrix& a, std::size_t n_max) {
  require_valid(a, "a");
  GelfandVerdict g;
  const ComplexMatrix one = identity(a.rows());
  g.rho_exact_zero = rho(a, one, n_max).method == RhoMethod::ExactZero;
  double dev = 0.0;
  for (const Complex& l : eigenvalues(a)) dev = std::max(dev, std::abs(l - 1.0));
  // An exact-zero sequence (a - 1)^n certifies nilpotency of a - 1 directly.
  g.spectrum_is_one = g.rho_exact_zero || dev <= 1e-6 * (1.0 + operator_norm(a));
  if (!is_invertible(a)) return g;
  auto sup_norm = [&](long m) {
    double s = 1.0;
    for (long n = -m; n <= m; ++n) {
      if (n != 0) s = std::max(s, operator_norm(mat_power(a, n)));
    }
    return s;
  };
  g.sup_norm_16 = sup_norm(16);
  g.sup_norm_64 = sup_norm(64);
  g.bounded = g.sup_norm_64 <= 2.0 * g.sup_norm_16;
  g.is_identity = g.spectrum_is_one && g.rho_exact_zero && g.bounded;
  return g;
}

PowerBoundedVerdict power_bounded_verdict(const ComplexMatrix& a, const ComplexMatrix& b,
                                          std::size_t n_max) {
  require_valid(a, "a");
  require_valid(b, "b");
  require_same_dim(a, b);
  PowerBoundedVerdict v;
  const double na = operator_norm(a);
  auto clear = [&](Complex alpha) {
    const double margin = 1e-8 * std::max(na, operator_norm(b));
    for (const ComplexMatrix* m : {&a, &b}) {
      for (const Complex& l : eigenvalues(*m)) {
        if (std::abs(alpha + l) <= margin) return false;
      }
    }
    return true;
  };
  v.alpha = 0.0;
  if (!clear(v.alpha)) v.alpha = 1.0 + na + operator_norm(b);
  v.spectrum_clear_of_zero = clear(v.alpha);
  v.rho_exact_zero = d_rho(a, b, n_max).method == RhoMethod::ExactZero;
  if (!v.spectrum_clear_of_zero) return v;
  v.sup_16 = power_ratio_sup(a, b, v.alpha, 16);
  v.sup_64 = power_ratio_sup(a, b, v.alpha, 64);
  v.bounded = v.sup_64 <= 2.0 * v.sup_16;
  v.equal = v.rho_exact_zero && v.bounded;
  return v;
}

}  // namespace specdist
