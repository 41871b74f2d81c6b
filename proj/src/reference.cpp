#include "spec2/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spec2 {

double coulomb_eigenvalue(double gamma, double kappa, int j) {
  if (j < 0) throw std::invalid_argument("coulomb_eigenvalue: j < 0");
  if (gamma * gamma >= kappa * kappa)
    throw std::invalid_argument("coulomb_eigenvalue: gamma^2 >= kappa^2");
  if (kappa > 0 && j == 0)
    throw std::invalid_argument(
        "coulomb_eigenvalue: the j = 0 level does not exist for kappa > 0");
  if (gamma == 0) return 1.0;
  const double s = std::sqrt(kappa * kappa - gamma * gamma);
  const double q = gamma / (j + s);
  return 1.0 / std::sqrt(1.0 + q * q);
}

CoulombSpectrum coulomb_spectrum(double gamma, double kappa, double cutoff) {
  CoulombSpectrum sp;
  sp.gamma = gamma;
  sp.kappa = kappa;
  if (gamma == 0) return sp;  // no discrete levels below the continuum
  for (int j = kappa < 0 ? 0 : 1;; ++j) {
    const double e = coulomb_eigenvalue(gamma, kappa, j);
    if (e >= cutoff) break;
    sp.eigenvalues.push_back(e);
  }
  return sp;
}

double coulomb_gap_distance(double gamma, double kappa) {
  const CoulombSpectrum sp = coulomb_spectrum(gamma, kappa);
  if (sp.eigenvalues.size() < 2)
    throw std::invalid_argument("coulomb_gap_distance: fewer than two levels");
  return sp.eigenvalues[1] - sp.eigenvalues[0];
}

RadialSpinor coulomb_ground_state(double gamma, const Eigen::VectorXd& grid) {
  if (!(gamma > -std::sqrt(3.0) / 2 && gamma < 0))
    throw std::invalid_argument(
        "coulomb_ground_state: gamma out of (-sqrt(3)/2, 0)");
  if (grid.size() == 0 || grid.minCoeff() <= 0)
    throw std::invalid_argument("coulomb_ground_state: grid must be positive");
  const double s = std::sqrt(1.0 - gamma * gamma);
  const double cu = 1.0 + s, cl = gamma;
  // Unit L2 norm: (cu^2 + cl^2) nu0^2 int r^{2s} e^{-2|gamma| r} dr = 1,
  // and the integral is Gamma(2s+1) / (2|gamma|)^{2s+1}.
  const double integral =
      std::exp(std::lgamma(2 * s + 1) - (2 * s + 1) * std::log(2 * std::abs(gamma)));
  const double nu0 = 1.0 / std::sqrt((cu * cu + cl * cl) * integral);

  RadialSpinor out;
  out.r = grid;
  const Eigen::ArrayXd prof =
      nu0 * grid.array().pow(s) * (-std::abs(gamma) * grid.array()).exp();
  out.upper = (cu * prof).matrix().cast<std::complex<double>>();
  out.lower = (cl * prof).matrix().cast<std::complex<double>>();
  return out;
}

namespace {

// Distance from [lo, hi] to the spectrum (point set plus essential branches).
double interval_spectrum_distance(double lo, double hi,
                                  const CoulombSpectrum& sp) {
  double d = std::numeric_limits<double>::infinity();
  if (lo <= sp.ess_lo)
    d = 0;
  else
    d = std::min(d, lo - sp.ess_lo);
  if (hi >= sp.ess_hi)
    d = 0;
  else
    d = std::min(d, sp.ess_hi - hi);
  for (const double e : sp.eigenvalues) {
    if (e >= lo && e <= hi) return 0;
    d = std::min(d, e < lo ? lo - e : e - hi);
  }
  return d;
}

}  // namespace

std::vector<EnclosureReport> check_enclosures(
    const std::vector<Enclosure>& enclosures,
    const CoulombSpectrum& spectrum) {
  std::vector<EnclosureReport> out;
  out.reserve(enclosures.size());
  for (const auto& e : enclosures) {
    EnclosureReport r;
    r.value = e.center;
    const double slack = 1e-6;
    r.distance =
        interval_spectrum_distance(e.lo() - slack, e.hi() + slack, spectrum);
    r.classification = r.distance == 0 ? "SOUND" : "VIOLATION";
    out.push_back(r);
  }
  return out;
}

std::vector<PollutionEntry> pollution_report(
    const std::vector<double>& galerkin_eigs,
    const std::vector<Enclosure>& enclosures, const CoulombSpectrum* spectrum,
    double threshold) {
  std::vector<PollutionEntry> out;
  for (const double g : galerkin_eigs) {
    PollutionEntry e;
    e.value = g;
    double d = std::numeric_limits<double>::infinity();
    for (const auto& en : enclosures) d = std::min(d, std::abs(g - en.center));
    if (spectrum != nullptr)
      for (const double ev : spectrum->eigenvalues)
        d = std::min(d, std::abs(g - ev));
    e.distance = d;
    // only values inside the essential-spectrum gap can pollute
    e.suspect = (g > -1.0 && g < 1.0) && d > threshold;
    out.push_back(e);
  }
  return out;
}

ConvergenceFit fit_convergence(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("fit_convergence: need at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, im] : samples) {
    if (!(n > 0) || !(im > 0))
      throw std::invalid_argument("fit_convergence: non-positive sample");
    const double x = std::log(n), y = std::log(im);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = (double)samples.size();
  const double denom = m * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_convergence: degenerate xs");
  ConvergenceFit fit;
  fit.exponent = (m * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / m);
  return fit;
}

}  // namespace spec2
