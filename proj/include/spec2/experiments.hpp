#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spec2/reference.hpp"

namespace spec2 {

// One experiment invocation.  CSV artifacts go to out_dir when set; every
// run_* function also returns its numbers so callers (tests, the CLI
// summary) need not re-parse the files.
struct ExperimentConfig {
  PotentialSpec potential = PotentialSpec::coulomb(-0.5);
  int kappa = -1;

  int n_upper = 0, n_lower = 0;  // basis split; if both 0, derived from dim
  int dim = 0;                   // total size used when splitting is swept

  double window_lo = -1, window_hi = 1;
  double max_imag = 0.05;

  std::vector<int> residual_n_list = {15, 25, 35};  // run_coulomb table rows
  std::vector<double> beta_list;                    // sub-Coulomb sweep
  std::vector<double> gamma_list;                   // inverse-harmonic sweep
  std::vector<int> n_list;                          // convergence sweep sizes
  std::vector<std::pair<int, int>> ratio_list;      // N = (p/q) n, as {p, q}
  int balance_step = 5;                             // N grid spacing

  double grid_rmax = 30;  // spinor sampling grid
  int grid_points = 2000;

  double pollution_threshold = 0.02;
  std::string out_dir;  // empty: no files written
  int jobs = 1;         // worker threads for independent sweep points

  void validate() const;  // throws std::invalid_argument
};

// key=value config file (one pair per line, '#' comments); unknown keys are
// an error so typos cannot silently fall back to defaults.
std::map<std::string, std::string> read_config_file(const std::string& path);
void apply_config(ExperimentConfig& cfg,
                  const std::map<std::string, std::string>& kv);

// Coulomb gap study: solves at (n_upper, n_lower), writes points.csv,
// enclosures.csv, soundness.csv, spinor_{computed,exact}.csv for the ground
// cluster, and residuals.csv with one row per n in residual_n_list
// (columns n, residual, bound = |Im lambda|/d_E).
struct ResidualRow {
  int n = 0;
  double residual = 0, bound = 0, im_lambda = 0;
};
struct CoulombResult {
  std::vector<SecondOrderPoint> filtered;
  std::vector<Enclosure> enclosures;
  std::vector<EnclosureReport> soundness;
  std::vector<ResidualRow> residual_table;
  bool all_sound = true;
};
CoulombResult run_coulomb(const ExperimentConfig& cfg);

// Sub-Coulomb exponent sweep at fixed basis: the tracked ground point per
// beta, continued from the Coulomb (beta = 1) ground value downward.
struct SubCoulombRow {
  double beta = 0, e0 = 0, im_lambda = 0;
};
std::vector<SubCoulombRow> run_subcoulomb_sweep(const ExperimentConfig& cfg);

// Inverse-harmonic coupling sweep at fixed total dimension: gap enclosures
// and Galerkin gap eigenvalues per gamma, plus spinor CSVs of the first
// three gap states for the strongest coupling in the list.
struct InverseHarmonicResult {
  double gamma = 0;
  std::vector<Enclosure> enclosures;
  std::vector<double> galerkin_gap;
};
std::vector<InverseHarmonicResult> run_inverse_harmonic_sweep(
    const ExperimentConfig& cfg);

// Balance study at fixed total dimension: sweep N (upper count) over
// {step, 2 step, ...}, M = dim - N, tracking the ground eigenvalue by
// nearest-center continuation.  re_error is |Re lambda - E_0| (Coulomb
// only, NaN otherwise); suspects counts SPURIOUS-SUSPECT Galerkin values.
struct BalanceRow {
  int n_upper = 0, n_lower = 0;
  double im_lambda = 0, re_error = 0;
  int suspects = 0;
};
std::vector<BalanceRow> run_balance(const ExperimentConfig& cfg);

// Convergence-rate study: for each ratio {p, q}, solve the n_list sizes
// with N = round_half_up(p n / q), M = n - N, track the ground eigenvalue,
// and fit |Im lambda| ~ b n^a.
struct ConvergenceSeries {
  std::pair<int, int> ratio{1, 2};
  std::vector<std::pair<double, double>> samples;  // (n, |Im lambda|)
  ConvergenceFit fit;
};
std::vector<ConvergenceSeries> run_convergence(const ExperimentConfig& cfg);

}  // namespace spec2
