// Config parsing and the experiment drivers: smoke runs on small bases,
// CSV artifacts, determinism, and worker-count independence.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "spec2/experiments.hpp"

using namespace spec2;
namespace fs = std::filesystem;

namespace {

fs::path unique_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("spec2_test_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config file parsing") {
  const fs::path p = fs::temp_directory_path() / "spec2_cfg.txt";
  {
    std::ofstream f(p);
    f << "# comment line\n"
      << "potential = subcoulomb\n"
      << "gamma = -0.25\n"
      << "  beta =  0.75  \n"
      << "kappa = 1\n"
      << "nupper = 9\n"
      << "nlower = 7\n"
      << "window = -0.5,0.9\n"
      << "max_imag = 0.3\n"
      << "residual_n_list = 5,10\n"
      << "ratio_list = 1/2,3/8\n"
      << "jobs = 2\n"
      << "\n";
  }
  ExperimentConfig cfg;
  apply_config(cfg, read_config_file(p.string()));
  CHECK(cfg.potential.kind == PotentialKind::SubCoulomb);
  CHECK(cfg.potential.gamma == doctest::Approx(-0.25));
  CHECK(cfg.potential.beta == doctest::Approx(0.75));
  CHECK(cfg.kappa == 1);
  CHECK(cfg.n_upper == 9);
  CHECK(cfg.n_lower == 7);
  CHECK(cfg.window_lo == doctest::Approx(-0.5));
  CHECK(cfg.window_hi == doctest::Approx(0.9));
  CHECK(cfg.max_imag == doctest::Approx(0.3));
  REQUIRE(cfg.residual_n_list.size() == 2);
  CHECK(cfg.residual_n_list[1] == 10);
  REQUIRE(cfg.ratio_list.size() == 2);
  CHECK(cfg.ratio_list[1].first == 3);
  CHECK(cfg.ratio_list[1].second == 8);
  CHECK(cfg.jobs == 2);
  fs::remove(p);
}

TEST_CASE("config error paths") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(apply_config(cfg, {{"no_such_key", "1"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_config(cfg, {{"window", "0.5"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_config(cfg, {{"ratio_list", "2/1"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_config(cfg, {{"potential", "woods-saxon"}}),
                  std::invalid_argument);

  const fs::path p = fs::temp_directory_path() / "spec2_cfg_bad.txt";
  std::ofstream(p) << "gamma -0.5\n";  // missing '='
  CHECK_THROWS_AS((void)read_config_file(p.string()), std::invalid_argument);
  fs::remove(p);

  ExperimentConfig bad;
  bad.window_lo = 0.5;
  bad.window_hi = -0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.jobs = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.n_upper = 5;  // nlower left unset
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gap study driver: artifacts, soundness, residual bound") {
  ExperimentConfig cfg;
  cfg.dim = 30;
  cfg.max_imag = 0.5;
  cfg.residual_n_list = {10, 15};
  cfg.grid_rmax = 40.0;
  cfg.grid_points = 1500;
  cfg.out_dir = unique_dir("coulomb").string();

  const CoulombResult res = run_coulomb(cfg);
  CHECK(res.all_sound);
  REQUIRE(!res.filtered.empty());
  REQUIRE(!res.enclosures.empty());
  for (const auto& rep : res.soundness) CHECK(rep.classification == "SOUND");

  REQUIRE(res.residual_table.size() == 2);
  for (const auto& row : res.residual_table) {
    CHECK(row.residual >= 0.0);
    CHECK(row.residual <= 1.0);
    // guaranteed bound, up to grid-level noise in the computed residual
    CHECK(row.residual <= row.bound + 1e-3);
    CHECK(row.bound == doctest::Approx(row.im_lambda / 0.09990042250462972)
                           .epsilon(1e-12));
  }
  // residuals shrink as the basis grows
  CHECK(res.residual_table[1].residual < res.residual_table[0].residual);

  for (const char* name :
       {"points.csv", "enclosures.csv", "soundness.csv", "residuals.csv",
        "spinor_exact.csv", "spinor_computed.csv"})
    CHECK(fs::exists(fs::path(cfg.out_dir) / name));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("experiment drivers are deterministic and jobs-independent") {
  ExperimentConfig a;
  a.dim = 24;
  a.max_imag = 0.5;
  a.residual_n_list = {8};
  a.grid_points = 400;
  a.jobs = 1;
  a.out_dir = unique_dir("det_a").string();
  ExperimentConfig b = a;
  b.jobs = 3;
  b.out_dir = unique_dir("det_b").string();
  ExperimentConfig c = a;
  c.out_dir = unique_dir("det_c").string();

  (void)run_coulomb(a);
  (void)run_coulomb(b);
  (void)run_coulomb(c);
  for (const char* name :
       {"points.csv", "enclosures.csv", "soundness.csv", "residuals.csv"}) {
    const std::string sa = slurp(fs::path(a.out_dir) / name);
    CHECK(sa == slurp(fs::path(b.out_dir) / name));
    CHECK(sa == slurp(fs::path(c.out_dir) / name));
    CHECK(!sa.empty());
  }
  fs::remove_all(a.out_dir);
  fs::remove_all(b.out_dir);
  fs::remove_all(c.out_dir);
}

TEST_CASE("exponent-sweep driver tracks the ground value across beta") {
  ExperimentConfig cfg;
  cfg.potential = PotentialSpec::sub_coulomb(-0.5, 0.5);
  cfg.dim = 20;
  cfg.max_imag = 0.5;
  cfg.beta_list = {1.0, 0.7, 0.4};
  cfg.jobs = 2;
  cfg.out_dir = unique_dir("subcoulomb").string();

  const auto rows = run_subcoulomb_sweep(cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].beta == doctest::Approx(1.0));
  CHECK(rows[2].beta == doctest::Approx(0.4));
  for (const auto& row : rows) {
    CHECK(row.e0 > 0.0);
    CHECK(row.e0 < 1.0);
    CHECK(row.im_lambda > 0.0);
  }
  // weaker singularity lifts the ground value toward the Coulomb one
  CHECK(rows[0].e0 > rows[2].e0);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "subcoulomb.csv"));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("smooth-well sweep emits enclosures and spinor samples") {
  ExperimentConfig cfg;
  cfg.potential = PotentialSpec::inverse_harmonic(-2.0);
  cfg.dim = 40;
  cfg.max_imag = 0.25;
  cfg.gamma_list = {-2.0, -1.0};
  cfg.jobs = 2;
  cfg.grid_points = 300;
  cfg.out_dir = unique_dir("invharm").string();

  const auto sweeps = run_inverse_harmonic_sweep(cfg);
  REQUIRE(sweeps.size() == 2);
  CHECK(sweeps[0].gamma == doctest::Approx(-2.0));
  for (const auto& s : sweeps) {
    REQUIRE(!s.enclosures.empty());
    for (const auto& e : s.enclosures) {
      CHECK(e.center > -1.0);
      CHECK(e.center < 1.0);
      CHECK(e.radius >= 0.0);
    }
    for (const double g : s.galerkin_gap) {
      CHECK(g > -1.0);
      CHECK(g < 1.0);
    }
  }
  CHECK(fs::exists(fs::path(cfg.out_dir) / "enclosures.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "galerkin.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "spinor_state0.csv"));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("component-balance driver sweeps the split at fixed dimension") {
  ExperimentConfig cfg;
  cfg.dim = 60;
  cfg.max_imag = 0.5;
  cfg.balance_step = 10;
  cfg.jobs = 2;
  cfg.out_dir = unique_dir("balance").string();

  const auto rows = run_balance(cfg);
  REQUIRE(rows.size() == 3);  // N = 20, 30, 40
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n_upper == 20 + 10 * (int)i);
    CHECK(rows[i].n_lower == cfg.dim - rows[i].n_upper);
    CHECK(rows[i].im_lambda > 0.0);
    CHECK(rows[i].re_error >= 0.0);
    CHECK(rows[i].suspects >= 0);
  }
  CHECK(fs::exists(fs::path(cfg.out_dir) / "balance.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "galerkin_gap.csv"));
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("size-sweep driver collects samples and fits the decay") {
  ExperimentConfig cfg;
  cfg.max_imag = 0.5;
  cfg.n_list = {20, 28, 36, 44};
  cfg.ratio_list = {{1, 2}};
  cfg.jobs = 2;
  cfg.out_dir = unique_dir("conv").string();

  const auto series = run_convergence(cfg);
  REQUIRE(series.size() == 1);
  REQUIRE(series[0].samples.size() == 4);
  for (size_t i = 0; i < series[0].samples.size(); ++i) {
    CHECK(series[0].samples[i].first == doctest::Approx(20.0 + 8.0 * i));
    CHECK(series[0].samples[i].second > 0.0);
  }
  // larger bases give smaller imaginary parts on this range
  CHECK(series[0].samples.back().second < series[0].samples.front().second);
  CHECK(series[0].fit.exponent < 0.0);
  CHECK(series[0].fit.prefactor > 0.0);
  CHECK(fs::exists(fs::path(cfg.out_dir) / "convergence.csv"));
  CHECK(fs::exists(fs::path(cfg.out_dir) / "fits.csv"));
  fs::remove_all(cfg.out_dir);
}
