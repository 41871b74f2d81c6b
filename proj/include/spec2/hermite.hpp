#pragma once

#include <Eigen/Dense>

#include "spec2/quadfloat.hpp"

namespace spec2 {

// Normalised half-line Hermite functions
//     g_m(r) = h_m(r) e^{-r^2/2} / c_m,    c_m = sqrt(2^{m-1} m! sqrt(pi)),
// so that int_0^inf g_m^2 dr = 1.  The odd members are the spinor basis:
// Phi_k = g_{2k+1}.  Values are generated with the three-term recurrence
//     g_{m+1} = r sqrt(2/(m+1)) g_m - sqrt(m/(m+1)) g_{m-1},
// which is stable in the direction of increasing m.

template <typename Real>
inline Real hermite_g0(Real r) {
  // g_0 = 2^{1/2} pi^{-1/4} e^{-r^2/2}
  const Real pi = f_pi<Real>();
  return f_sqrt(Real(2)) * f_exp(-r * r / 2 - f_log(pi) / 4);
}

// Fills out[0..max_m] with g_0(r)..g_max(r).
template <typename Real>
inline void hermite_g_column(int max_m, Real r, Real* out) {
  out[0] = hermite_g0(r);
  if (max_m == 0) return;
  out[1] = r * f_sqrt(Real(2)) * out[0];
  for (int m = 1; m < max_m; ++m) {
    out[m + 1] = r * f_sqrt(Real(2) / Real(m + 1)) * out[m] -
                 f_sqrt(Real(m) / Real(m + 1)) * out[m - 1];
  }
}

// Row m holds g_m at every grid point.
Eigen::MatrixXd hermite_g_values(int max_m, const Eigen::VectorXd& r);

// Row k holds Phi_k = g_{2k+1} at every grid point.
Eigen::MatrixXd phi_values(int max_k, const Eigen::VectorXd& r);

double phi_value(int k, double r);

// Phi_k' = sqrt((2k+1)/2) g_{2k} - sqrt(k+1) g_{2k+2}
double phi_derivative(int k, double r);

}  // namespace spec2
