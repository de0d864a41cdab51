#include "specdist/cli.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "specdist/commutator.hpp"
#include "specdist/generators.hpp"
#include "specdist/growth.hpp"
#include "specdist/holo.hpp"
#include "specdist/io.hpp"
#include "specdist/suites.hpp"

namespace specdist {

namespace {

namespace fs = std::filesystem;
using io::json_number;
using io::json_string;

std::string json_bool(bool v) { return v ? "true" : "false"; }

std::string json_array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += json_number(v[i]);
  }
  return out + ']';
}

std::string rho_json(const RhoEstimate& r) {
  return "{\"value\":" + json_number(r.value) + ",\"method\":" + json_string(to_string(r.method)) +
         ",\"converged\":" + json_bool(r.converged) + "}";
}

std::string growth_json(const GrowthEstimate& g) {
  std::string out = "{\"method\":" + json_string(to_string(g.method)) + ",\"order\":" + json_number(g.order) +
                    ",\"type\":" + (g.type_infinite ? std::string("\"Infinity\"") : json_number(g.type)) +
                    ",\"polynomial\":" + json_bool(g.polynomial) + ",\"fit_residual\":" + json_number(g.fit_residual);
  if (g.method == GrowthMethod::Coefficients) {
    out += ",\"coefficients\":" + std::to_string(g.coefficient_count) + ",\"window\":[" +
           std::to_string(g.window_begin) + ',' + std::to_string(g.window_end) + "],\"raw_order\":" +
           json_number(g.raw_order) + ",\"raw_type\":" + json_number(g.raw_type);
  } else {
    out += ",\"radii\":" + json_array(g.radii) + ",\"log_max_modulus\":" + json_array(g.log_max_modulus) +
           ",\"truncated\":" + json_bool(g.truncated);
  }
  if (!g.note.empty()) out += ",\"note\":" + json_string(g.note);
  return out + '}';
}

struct PairArgs {
  std::string a;
  std::string b;
  std::size_t n = 128;
};

void add_pair(CLI::App* cmd, PairArgs& p, std::size_t default_n) {
  p.n = default_n;
  cmd->add_option("--a", p.a, "matrix file for a")->required()->check(CLI::ExistingFile);
  cmd->add_option("--b", p.b, "matrix file for b")->required()->check(CLI::ExistingFile);
  cmd->add_option("--n", p.n, "commutator sequence length")->check(CLI::Range(16, 100000))->capture_default_str();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, dir.string() + ": cannot create directory: " + ec.message());
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral semidistance toolkit for complex matrices"};
  app.require_subcommand(1);

  PairArgs rho_args, drho_args, equiv_args, growth_args;
  auto* rho_cmd = app.add_subcommand("rho", "rho(a, b) as JSON");
  add_pair(rho_cmd, rho_args, 128);
  auto* drho_cmd = app.add_subcommand("drho", "d_rho(a, b) as JSON");
  add_pair(drho_cmd, drho_args, 128);

  auto* equiv_cmd = app.add_subcommand("equiv", "quasinilpotent equivalence verdict");
  add_pair(equiv_cmd, equiv_args, 128);
  double equiv_tol = 1e-8;
  equiv_cmd->add_option("--tol", equiv_tol, "distance tolerance")->check(CLI::NonNegativeNumber)->capture_default_str();

  auto* growth_cmd = app.add_subcommand("growth", "order and type of exp(z a) exp(-z b)");
  add_pair(growth_cmd, growth_args, 200);
  int samples = 64;
  growth_cmd->add_option("--samples", samples, "nodes per sampled circle")->check(CLI::Range(32, 100000))->capture_default_str();

  auto* fun_cmd = app.add_subcommand("funcalc", "f(a) by contour integration");
  std::string fun_a, fun_f, fun_out;
  int fun_nodes = 128;
  fun_cmd->add_option("--a", fun_a, "matrix file")->required()->check(CLI::ExistingFile);
  fun_cmd->add_option("--f", fun_f, "exp | log[:angle] | poly:c0,c1,... | rational:plus | rational:minus | pow:k")->required();
  fun_cmd->add_option("--nodes", fun_nodes, "quadrature nodes per circle")->check(CLI::Range(16, 1 << 20))->capture_default_str();
  fun_cmd->add_option("--out", fun_out, "output matrix file (stdout if omitted)");

  auto* riesz_cmd = app.add_subcommand("riesz", "Riesz idempotents and quasinilpotent remainder");
  std::string riesz_a, riesz_out;
  std::optional<double> riesz_tol;
  int riesz_nodes = 128;
  riesz_cmd->add_option("--a", riesz_a, "matrix file")->required()->check(CLI::ExistingFile);
  riesz_cmd->add_option("--tol", riesz_tol, "cluster tolerance (default 1e-3 (1 + ||a||))")->check(CLI::PositiveNumber);
  riesz_cmd->add_option("--nodes", riesz_nodes, "quadrature nodes per circle")->check(CLI::Range(16, 1 << 20))->capture_default_str();
  riesz_cmd->add_option("--out", riesz_out, "directory for p_<k>.json and remainder.json")->required();

  auto* gen_cmd = app.add_subcommand("generate", "seeded random matrix or pair");
  std::string gen_kind, gen_out;
  long gen_dim = 3;
  std::uint64_t gen_seed = 42;
  gen_cmd->add_option("--kind", gen_kind, "hermitian | unitary | normal | nilpotent | jordan(re[,im]) | commuting-pair | qe-block-pair | generic")->required();
  gen_cmd->add_option("--dim", gen_dim, "dimension")->check(CLI::Range(1, 512))->capture_default_str();
  gen_cmd->add_option("--seed", gen_seed, "seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "output file; a pair writes <out>.a.json and <out>.b.json")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites");
  std::string suite = "all", verify_out = "report";
  TrialConfig cfg;
  verify_cmd->add_option("--suite", suite, "all | fct | razpet | gelfand | star | spec | identities")->capture_default_str();
  verify_cmd->add_option("--trials", cfg.trials, "trials per suite")->check(CLI::Range(1, 1000000))->capture_default_str();
  verify_cmd->add_option("--dim", cfg.dim, "matrix dimension")->check(CLI::Range(2, 8))->capture_default_str();
  verify_cmd->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
  verify_cmd->add_option("--n", cfg.n, "commutator sequence length")->check(CLI::Range(16, 100000))->capture_default_str();
  verify_cmd->add_option("--threads", cfg.threads, "worker threads (0: SPECDIST_THREADS or all cores)")->capture_default_str();
  verify_cmd->add_option("--out", verify_out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*rho_cmd) {
      const RhoEstimate r = rho(io::parse_matrix(rho_args.a), io::parse_matrix(rho_args.b), rho_args.n);
      out << rho_json(r) << '\n';
    } else if (*drho_cmd) {
      const RhoEstimate r = d_rho(io::parse_matrix(drho_args.a), io::parse_matrix(drho_args.b), drho_args.n);
      out << rho_json(r) << '\n';
    } else if (*equiv_cmd) {
      const EquivalenceVerdict v = is_quasinilpotent_equivalent(
          io::parse_matrix(equiv_args.a), io::parse_matrix(equiv_args.b), equiv_args.n, equiv_tol);
      out << "{\"equivalent\":" << json_bool(v.equivalent) << ",\"distance\":" << rho_json(v.distance)
          << ",\"forward\":" << rho_json(v.forward) << ",\"backward\":" << rho_json(v.backward)
          << ",\"evidence\":" << json_string(v.evidence) << "}\n";
    } else if (*growth_cmd) {
      const ComplexMatrix a = io::parse_matrix(growth_args.a);
      const ComplexMatrix b = io::parse_matrix(growth_args.b);
      if (growth_args.n < 32) throw Error(ErrorCode::InvalidArgument, "growth needs --n >= 32");
      const std::vector<double> coeffs = coefficient_lognorms(a, b, growth_args.n);
      const GrowthEstimate gc = order_type_from_coefficients(coeffs);
      const std::vector<double> radii = default_radii(a, b);
      const GrowthEstimate gd = order_type_from_disk_sampling(a, b, radii, samples);
      out << "{\"coefficients\":" << growth_json(gc) << ",\"disk\":" << growth_json(gd)
          << ",\"envelope_holds\":" << json_bool(envelope_holds(gd, a, b)) << "}\n";
    } else if (*fun_cmd) {
      const ComplexMatrix a = io::parse_matrix(fun_a);
      const ComplexMatrix fa = holo_apply(io::parse_function(fun_f), a, fun_nodes);
      if (fun_out.empty()) out << io::matrix_to_json(fa);
      else io::write_matrix(fa, fun_out);
    } else if (*riesz_cmd) {
      const ComplexMatrix a = io::parse_matrix(riesz_a);
      const SpectralDecomposition d =
          riesz_idempotents(a, riesz_tol.value_or(default_cluster_tol(a)), riesz_nodes);
      ensure_dir(riesz_out);
      std::string summary = "{\"clusters\":[";
      for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        const std::string name = "p_" + std::to_string(k) + ".json";
        io::write_matrix(d.clusters[k].idempotent, fs::path(riesz_out) / name);
        if (k) summary += ',';
        summary += "{\"eigenvalue\":[" + json_number(d.clusters[k].eigenvalue.real()) + ',' +
                   json_number(d.clusters[k].eigenvalue.imag()) + "],\"file\":" + json_string(name) + '}';
      }
      io::write_matrix(d.remainder, fs::path(riesz_out) / "remainder.json");
      out << summary << "],\"remainder\":\"remainder.json\",\"remainder_spectral_radius\":"
          << json_number(spectral_radius(d.remainder)) << "}\n";
    } else if (*gen_cmd) {
      const gen::Generated g = gen::generate(gen::parse_kind(gen_kind), gen_dim, gen_seed);
      if (g.b) {
        io::write_matrix(g.a, gen_out + ".a.json");
        io::write_matrix(*g.b, gen_out + ".b.json");
      } else {
        io::write_matrix(g.a, gen_out);
      }
    } else if (*verify_cmd) {
      std::vector<std::string> suites;
      if (suite == "all") {
        suites = suite_names();
      } else {
        (void)suite_certifies(suite);
        suites = {suite};
      }
      ensure_dir(verify_out);
      std::vector<TrialReport> all;
      std::vector<SuiteSummary> summaries;
      bool ok = true;
      for (const std::string& s : suites) {
        cfg.suite = s;
        const auto start = std::chrono::steady_clock::now();
        std::vector<TrialReport> reports = run_suite(cfg);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        SuiteSummary sum = summarize(s, reports, secs, cfg.tol("inconclusive_rate"));
        ok = ok && sum.ok();
        out << s << ": " << sum.pass << " pass, " << sum.fail << " fail, " << sum.inconclusive
            << " inconclusive (" << suite_certifies(s) << ")\n";
        for (const TrialReport& r : reports) {
          if (r.verdict == Verdict::Fail) err << s << " trial " << r.trial << ": " << r.detail << '\n';
        }
        summaries.push_back(std::move(sum));
        all.insert(all.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
      }
      io::write_text(fs::path(verify_out) / "report.json", io::reports_to_json(all));
      io::write_text(fs::path(verify_out) / "summary.csv", io::summary_csv(summaries));
      return ok ? 0 : 3;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return e.code() == ErrorCode::UnknownKind ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace specdist
