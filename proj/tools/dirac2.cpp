// dirac2: pollution-free eigenvalue enclosures for the radial Dirac
// operator via the quadratic projection method in an odd-Hermite basis.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "spec2/experiments.hpp"
#include "spec2/quadrature.hpp"

namespace {

using spec2::ExperimentConfig;

// Every flag funnels into the same key=value store the config file uses, so
// "--config file plus command-line overrides" is one code path.
struct Cli {
  std::string config_file;
  std::map<std::string, std::string> kv;
};

void add_common(CLI::App* sub, Cli& c) {
  sub->add_option("--config", c.config_file, "key=value config file");
  const auto opt = [&](const char* flag, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        flag, [&c, key = std::string(key)](const std::string& s) { c.kv[key] = s; },
        help);
  };
  opt("--potential", "potential", "free | coulomb | subcoulomb | invharm");
  opt("--gamma", "gamma", "coupling strength");
  opt("--beta", "beta", "sub-Coulomb exponent in (0,1]");
  opt("--kappa", "kappa", "angular quantum number (nonzero integer)");
  opt("--nupper", "nupper", "basis functions for the upper component");
  opt("--nlower", "nlower", "basis functions for the lower component");
  opt("--dim", "dim", "total basis dimension (balanced split unless nupper/nlower)");
  opt("--window", "window", "filter window 'lo,hi' on Re(lambda)");
  opt("--max-imag", "max_imag", "filter cap on Im(lambda)");
  opt("--residual-ns", "residual_n_list", "comma list of n for the residual table");
  opt("--betas", "beta_list", "comma list of sub-Coulomb exponents");
  opt("--gammas", "gamma_list", "comma list of couplings to sweep");
  opt("--nlist", "n_list", "comma list of total sizes for convergence");
  opt("--ratios", "ratio_list", "comma list of N/n ratios like 1/2,3/8");
  opt("--step", "balance_step", "N grid spacing for the balance sweep");
  opt("--grid-rmax", "grid_rmax", "spinor grid extent");
  opt("--grid-points", "grid_points", "spinor grid size");
  opt("--threshold", "threshold", "pollution-suspect distance threshold");
  opt("--out", "out", "output directory for CSV artifacts");
  opt("--jobs", "jobs", "worker threads for sweep points");
}

ExperimentConfig build_config(const Cli& c, const ExperimentConfig& defaults) {
  ExperimentConfig cfg = defaults;
  if (!c.config_file.empty())
    spec2::apply_config(cfg, spec2::read_config_file(c.config_file));
  spec2::apply_config(cfg, c.kv);
  cfg.validate();
  return cfg;
}

int report_soundness(const std::vector<spec2::EnclosureReport>& reports) {
  int violations = 0;
  for (const auto& r : reports)
    if (r.classification != "SOUND") {
      ++violations;
      std::printf("  VIOLATION at %.6f (distance %.3e from spectrum)\n",
                  r.value, r.distance);
    }
  return violations;
}

void print_points(const std::vector<spec2::SecondOrderPoint>& pts) {
  for (const auto& pt : pts) {
    const spec2::Enclosure e = spec2::enclosure(pt);
    std::printf("  lambda = %+.6f %+.6fi   enclosure [%+.6f, %+.6f]\n",
                pt.lambda.real(), pt.lambda.imag(), e.lo(), e.hi());
  }
}

int cmd_assemble(const Cli& c, const std::string& pencil_path) {
  ExperimentConfig cfg = build_config(c, {});
  int N = cfg.n_upper, M = cfg.n_lower;
  if (N == 0) {
    const int dim = cfg.dim > 0 ? cfg.dim : 30;
    N = dim / 2;
    M = dim - N;
  }
  const spec2::PencilTriple p = spec2::assemble(
      spec2::RadialProblem{cfg.kappa, cfg.potential}, spec2::BasisSpec{N, M});
  spec2::write_pencil(p, pencil_path);
  std::printf("wrote %s: dim %d (N=%d, M=%d), potential %s\n",
              pencil_path.c_str(), p.dim, N, M, cfg.potential.name().c_str());
  return 0;
}

int cmd_solve(const Cli& c, const std::string& pencil_path) {
  ExperimentConfig cfg = build_config(c, {});
  const spec2::PencilTriple p = spec2::read_pencil(pencil_path);
  const auto pts = spec2::filter_points(spec2::second_order_spectrum(p),
                                        cfg.window_lo, cfg.window_hi,
                                        cfg.max_imag);
  std::printf("%zu filtered second-order points in (%g, %g), Im <= %g:\n",
              pts.size(), cfg.window_lo, cfg.window_hi, cfg.max_imag);
  print_points(pts);
  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    std::ofstream f(fs::path(cfg.out_dir) / "points.csv");
    f << "re_lambda,im_lambda,enclosure_lo,enclosure_hi\n";
    char buf[200];
    for (const auto& pt : pts) {
      const spec2::Enclosure e = spec2::enclosure(pt);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n",
                    pt.lambda.real(), pt.lambda.imag(), e.lo(), e.hi());
      f << buf;
    }
  }
  if (p.problem.potential.kind == spec2::PotentialKind::Coulomb) {
    std::vector<spec2::Enclosure> encl;
    for (const auto& pt : pts) encl.push_back(spec2::enclosure(pt));
    const auto reports = spec2::check_enclosures(
        encl, spec2::coulomb_spectrum(p.problem.potential.gamma,
                                      p.problem.kappa));
    if (report_soundness(reports) > 0) return 2;
  }
  return 0;
}

int cmd_coulomb(const Cli& c) {
  ExperimentConfig cfg = build_config(c, {});
  const spec2::CoulombResult res = spec2::run_coulomb(cfg);
  std::printf("filtered points:\n");
  print_points(res.filtered);
  if (!res.residual_table.empty()) {
    std::printf("ground-state subspace residuals:\n");
    for (const auto& row : res.residual_table)
      std::printf("  n=%-4d residual %.6f   bound |Im|/d_E %.6f\n", row.n,
                  row.residual, row.bound);
  }
  const int violations = report_soundness(res.soundness);
  std::printf("enclosures: %zu, violations: %d\n", res.enclosures.size(),
              violations);
  return violations > 0 ? 2 : 0;
}

int cmd_subcoulomb(const Cli& c) {
  ExperimentConfig defaults;
  defaults.potential = spec2::PotentialSpec::sub_coulomb(-0.5, 0.5);
  defaults.max_imag = 0.2;  // benchmark-size points reach |Im| ~ 0.07
  const ExperimentConfig cfg = build_config(c, defaults);
  const auto rows = spec2::run_subcoulomb_sweep(cfg);
  std::printf("beta     E0        |Im lambda|\n");
  for (const auto& r : rows)
    std::printf("%-8.3g %-9.6f %.6f\n", r.beta, r.e0, r.im_lambda);
  return 0;
}

int cmd_invharm(const Cli& c) {
  ExperimentConfig defaults;
  defaults.potential = spec2::PotentialSpec::inverse_harmonic(-4.0);
  defaults.max_imag = 0.2;  // dim-120 gap states reach |Im| ~ 0.06
  const ExperimentConfig cfg = build_config(c, defaults);
  const auto sweeps = spec2::run_inverse_harmonic_sweep(cfg);
  for (const auto& s : sweeps) {
    std::printf("gamma = %g: %zu gap enclosures, %zu Galerkin gap values\n",
                s.gamma, s.enclosures.size(), s.galerkin_gap.size());
    for (const auto& e : s.enclosures)
      std::printf("  center %+.6f  radius %.6f  [%+.6f, %+.6f]\n", e.center,
                  e.radius, e.lo(), e.hi());
  }
  return 0;
}

int cmd_balance(const Cli& c) {
  ExperimentConfig defaults;
  defaults.max_imag = 0.2;  // badly unbalanced splits sit far from the axis
  const ExperimentConfig cfg = build_config(c, defaults);
  const auto rows = spec2::run_balance(cfg);
  std::printf("N     M     |Im lambda|   |Re-E0|       suspects\n");
  for (const auto& r : rows)
    std::printf("%-5d %-5d %-13.6f %-13.6f %d\n", r.n_upper, r.n_lower,
                r.im_lambda, r.re_error, r.suspects);
  return 0;
}

int cmd_convergence(const Cli& c) {
  ExperimentConfig defaults;
  defaults.max_imag = 0.2;  // the smallest tracked bases sit near |Im| ~ 0.1
  const ExperimentConfig cfg = build_config(c, defaults);
  const auto series = spec2::run_convergence(cfg);
  for (const auto& s : series) {
    std::printf("N = %d/%d n:  fitted |Im lambda| ~ b n^a with a = %.4f, b = %.4f\n",
                s.ratio.first, s.ratio.second, s.fit.exponent, s.fit.prefactor);
    for (const auto& [n, im] : s.samples)
      std::printf("  n=%-5g |Im| = %.6f\n", n, im);
  }
  return 0;
}

int cmd_galerkin(const Cli& c) {
  ExperimentConfig cfg = build_config(c, {});
  int N = cfg.n_upper, M = cfg.n_lower;
  if (N == 0) {
    const int dim = cfg.dim > 0 ? cfg.dim : 200;
    N = dim / 2;
    M = dim - N;
  }
  const spec2::PencilTriple p = spec2::assemble(
      spec2::RadialProblem{cfg.kappa, cfg.potential}, spec2::BasisSpec{N, M});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec2::galerkin_matrix(p));
  std::vector<double> gap;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > -1 && es.eigenvalues()[i] < 1)
      gap.push_back(es.eigenvalues()[i]);

  const auto pts = spec2::filter_points(spec2::second_order_spectrum(p), -1.0,
                                        1.0, cfg.max_imag);
  std::vector<spec2::Enclosure> encl;
  for (const auto& pt : pts) encl.push_back(spec2::enclosure(pt));
  spec2::CoulombSpectrum sp;
  const bool coulomb = cfg.potential.kind == spec2::PotentialKind::Coulomb;
  if (coulomb) sp = spec2::coulomb_spectrum(cfg.potential.gamma, cfg.kappa);
  const auto report = spec2::pollution_report(gap, encl, coulomb ? &sp : nullptr,
                                              cfg.pollution_threshold);
  int suspects = 0;
  std::printf("Galerkin gap eigenvalues (N=%d, M=%d):\n", N, M);
  for (const auto& e : report) {
    if (e.suspect) ++suspects;
    std::printf("  %+.6f  %s (distance %.4f)\n", e.value,
                e.suspect ? "SPURIOUS-SUSPECT" : "matched", e.distance);
  }
  std::printf("%d of %zu flagged as pollution suspects\n", suspects,
              report.size());
  return 0;
}

int cmd_oracle_check(const Cli& c, int max_index) {
  (void)c;
  const double tol_closed = 1e-10, tol_rec = 1e-8;
  struct Check {
    std::string name;
    double worst = 0;
    double tol = 0;
  };
  std::vector<Check> checks;
  const auto run = [&](const std::string& name, double tol, auto&& closed,
                       spec2::KernelId id, double alpha,
                       spec2::PotentialSpec pot) {
    Check ch{name, 0, tol};
    for (int k = 0; k <= max_index; ++k)
      for (int j = 0; j <= max_index; ++j) {
        spec2::OracleSpec q;
        q.id = id;
        q.k = k;
        q.j = j;
        q.alpha = alpha;
        q.potential = pot;
        const double ref = spec2::quadrature_oracle(q, 1e-11);
        const double got = closed(k, j);
        ch.worst = std::max(ch.worst,
                            std::abs(got - ref) / std::max(1.0, std::abs(ref)));
      }
    checks.push_back(ch);
  };

  const spec2::PotentialSpec none;
  for (int which = 1; which <= 6; ++which)
    run("T" + std::to_string(which), tol_closed,
        [which](int k, int j) { return spec2::t_term(which, {k, j}); },
        static_cast<spec2::KernelId>((int)spec2::KernelId::T1 + which - 1), 0,
        none);
  run("E2(0.5)", tol_closed,
      [](int k, int j) { return spec2::e2_subcoulomb(0.5, {k, j}); },
      spec2::KernelId::E2, 0.5, none);
  run("E1(0.5)", tol_closed,
      [](int k, int j) { return spec2::e1_subcoulomb(0.5, {k, j}); },
      spec2::KernelId::E1, 0.5, none);
  const spec2::ETable etab = spec2::e34_tables(max_index, max_index);
  run("E3", tol_rec, [&](int m, int n) { return etab.e3(m, n); },
      spec2::KernelId::E3, 0, none);
  run("E4", tol_rec, [&](int m, int n) { return etab.e4(m, n); },
      spec2::KernelId::E4, 0, none);

  bool ok = true;
  for (const auto& ch : checks) {
    const bool pass = ch.worst <= ch.tol;
    ok = ok && pass;
    std::printf("%-8s worst rel. deviation %.3e  (tol %.0e)  %s\n",
                ch.name.c_str(), ch.worst, ch.tol, pass ? "ok" : "FAIL");
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "two-sided eigenvalue enclosures for the radial Dirac operator\n"
      "(quadratic projection in an odd-Hermite basis)"};
  app.require_subcommand(1);

  Cli c;
  std::string pencil_path = "pencil.txt";
  int max_index = 6;

  CLI::App* s_assemble = app.add_subcommand("assemble", "build and export a pencil");
  s_assemble->add_option("--pencil", pencil_path, "pencil output path");
  CLI::App* s_solve = app.add_subcommand("solve", "solve an exported pencil");
  s_solve->add_option("--pencil", pencil_path, "pencil input path")->required();
  CLI::App* s_coulomb = app.add_subcommand("coulomb", "Coulomb gap study with exact references");
  CLI::App* s_subcoulomb = app.add_subcommand("subcoulomb", "sub-Coulomb exponent sweep");
  CLI::App* s_invharm = app.add_subcommand("invharm", "inverse-harmonic coupling sweep");
  CLI::App* s_balance = app.add_subcommand("balance", "component-balance sweep at fixed dimension");
  CLI::App* s_convergence = app.add_subcommand("convergence", "|Im lambda| decay rates over basis size");
  CLI::App* s_galerkin = app.add_subcommand("galerkin", "first-order spectrum with pollution flags");
  CLI::App* s_oracle = app.add_subcommand("oracle-check", "closed-form kernels vs quadrature");
  s_oracle->add_option("--max-index", max_index, "check indices 0..max");

  for (CLI::App* sub : {s_assemble, s_solve, s_coulomb, s_subcoulomb, s_invharm,
                        s_balance, s_convergence, s_galerkin, s_oracle})
    add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (s_assemble->parsed()) return cmd_assemble(c, pencil_path);
    if (s_solve->parsed()) return cmd_solve(c, pencil_path);
    if (s_coulomb->parsed()) return cmd_coulomb(c);
    if (s_subcoulomb->parsed()) return cmd_subcoulomb(c);
    if (s_invharm->parsed()) return cmd_invharm(c);
    if (s_balance->parsed()) return cmd_balance(c);
    if (s_convergence->parsed()) return cmd_convergence(c);
    if (s_galerkin->parsed()) return cmd_galerkin(c);
    if (s_oracle->parsed()) return cmd_oracle_check(c, max_index);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
