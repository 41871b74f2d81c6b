#pragma once

#include <string>
#include <vector>

#include "spec2/qep.hpp"

namespace spec2 {

// Exact point spectrum of the Coulomb problem inside the gap (-1, 1):
//     E_j = ( 1 + gamma^2 / (j + sqrt(kappa^2 - gamma^2))^2 )^{-1/2},
// j >= 0, accumulating at 1.  The j = 0 state exists only for kappa < 0;
// (kappa > 0, j = 0) is rejected rather than returning a phantom level.
// gamma = 0 gives 1 (no bound state below the continuum).
double coulomb_eigenvalue(double gamma, double kappa, int j);

struct CoulombSpectrum {
  double gamma = 0, kappa = -1;
  std::vector<double> eigenvalues;      // increasing, inside the gap
  double ess_lo = -1.0, ess_hi = 1.0;   // gap edges of (-inf,-1] u [1,inf)
};

// All eigenvalues below `cutoff` (< 1), in increasing order.
CoulombSpectrum coulomb_spectrum(double gamma, double kappa,
                                 double cutoff = 1.0 - 1e-9);

// Isolation distance of the ground level used in the residual bound
// |Im lambda| / d_E; by convention E_1 - E_0.
double coulomb_gap_distance(double gamma, double kappa);

// The exact normalised ground-state spinor for kappa = -1:
//     (u, v) = nu0 (1 + s, gamma) r^s e^{-|gamma| r},  s = sqrt(1 - gamma^2),
// with nu0 fixed analytically so the L^2 norm is 1.  Both components share
// one radial profile, so lower/upper = gamma / (1 + s) at every r.
RadialSpinor coulomb_ground_state(double gamma, const Eigen::VectorXd& grid);

// Per-enclosure soundness against a known spectrum: SOUND when the interval
// (with 1e-6 slack for the eigensolver) meets {E_j} or the essential
// spectrum, VIOLATION otherwise.  distance = gap from the interval to the
// nearest spectral point (0 when sound).
struct EnclosureReport {
  double value = 0;            // enclosure center
  std::string classification;  // "SOUND" or "VIOLATION"
  double distance = 0;
};
std::vector<EnclosureReport> check_enclosures(
    const std::vector<Enclosure>& enclosures, const CoulombSpectrum& spectrum);

// Flags Galerkin eigenvalues inside the gap as SPURIOUS-SUSPECT when they
// lie farther than `threshold` from every enclosure center and (if a
// spectrum is given) from every true eigenvalue.
struct PollutionEntry {
  double value = 0;
  bool suspect = false;
  double distance = 0;  // to the nearest enclosure center / true eigenvalue
};
std::vector<PollutionEntry> pollution_report(
    const std::vector<double>& galerkin_eigs,
    const std::vector<Enclosure>& enclosures,
    const CoulombSpectrum* spectrum = nullptr, double threshold = 0.02);

// Ordinary least squares of log|Im lambda| against log n, modelling
// |Im lambda_n| ~ b n^a.  Throws std::invalid_argument for < 3 samples or
// non-positive values.
struct ConvergenceFit {
  double exponent = 0;   // a
  double prefactor = 0;  // b
};
ConvergenceFit fit_convergence(
    const std::vector<std::pair<double, double>>& samples);

}  // namespace spec2
