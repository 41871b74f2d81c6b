#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "spec2/quadfloat.hpp"
#include "spec2/types.hpp"

namespace spec2 {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence so the rule is available at any scalar precision.
template <typename Real>
struct GaussLegendreRule {
  std::vector<Real> x, w;
  explicit GaussLegendreRule(int n);
};

// Adaptive bisection with a fixed-order Gauss-Legendre panel rule.  A panel is
// accepted when the parent estimate agrees with the sum of the two child
// estimates to rel_tol relative to the running global scale.  Throws
// std::runtime_error when the refinement depth is exhausted.
template <typename Real>
class AdaptiveGauss {
 public:
  explicit AdaptiveGauss(int panel_order = 15) : rule_(panel_order) {}

  template <typename F>
  Real integrate(F&& f, Real a, Real b, Real rel_tol, int max_depth = 42) const {
    const Real whole = panel(f, a, b);
    Real scale = f_abs(whole);
    if (scale == Real(0)) scale = Real(1);
    return refine(f, a, b, whole, rel_tol, scale, max_depth);
  }

 private:
  GaussLegendreRule<Real> rule_;

  template <typename F>
  Real panel(F&& f, Real a, Real b) const {
    const Real half = (b - a) / 2, mid = (a + b) / 2;
    Real s = 0;
    for (std::size_t i = 0; i < rule_.x.size(); ++i)
      s += rule_.w[i] * f(mid + half * rule_.x[i]);
    return half * s;
  }

  template <typename F>
  Real refine(F&& f, Real a, Real b, Real parent, Real rel_tol, Real scale,
              int depth) const {
    const Real mid = (a + b) / 2;
    const Real left = panel(f, a, mid), right = panel(f, mid, b);
    const Real sum = left + right;
    const Real err = f_abs(sum - parent);
    if (err <= rel_tol * (f_abs(sum) + scale) || err <= f_eps<Real>() * scale)
      return sum;
    if (depth <= 0)
      throw std::runtime_error("adaptive quadrature: refinement depth exhausted");
    return refine(f, a, mid, left, rel_tol, scale / 2, depth - 1) +
           refine(f, mid, b, right, rel_tol, scale / 2, depth - 1);
  }
};

// Integrates f over (0, infinity) truncated at
//     R = max(12, 2 sqrt(4 max_raw_index + 3)),
// twice the classical turning point of the highest Hermite function involved,
// where the Gaussian tail is negligible.  When `singular` is set the leading
// piece (0, 1e-3) is integrated under the substitution r = eps u^5, which
// flattens the r^{1-beta}-type cusps of the potential-weighted integrands.
double integrate_kernel(const std::function<double(double)>& f,
                        int max_raw_index, bool singular, double rel_tol);

// ---------------------------------------------------------------------------
// Catalogued oracle for the closed-form matrix-element kernels.  Each id names
// one of the defining integrals; the oracle evaluates it by adaptive
// quadrature of pointwise basis values, fully independent of the recursive /
// closed-form evaluations it is used to validate.
// ---------------------------------------------------------------------------
enum class KernelId {
  T1,  // int Phi_k Phi_j
  T2,  // int Phi_k' Phi_j
  T3,  // int r^{-1} Phi_k Phi_j
  T4,  // int Phi_k' Phi_j'
  T5,  // int r^{-1} Phi_k' Phi_j
  T6,  // int r^{-2} Phi_k Phi_j
  I,   // int g_m g_n   (raw Hermite indices)
  E1,  // int r^{-beta} Phi_k' Phi_j
  E2,  // int r^{-alpha} Phi_k Phi_j
  E3,  // int (1+r^2)^{-1} g_m g_n   (raw indices)
  E4,  // int r (1+r^2)^{-1} g_m g_n (raw indices)
  F1,  // int phi_el Phi_k Phi_j
  F2,  // int phi_el^2 Phi_k Phi_j
  F3,  // int r^{-1} phi_el Phi_k Phi_j
  F4,  // int phi_el Phi_k' Phi_j
};

struct OracleSpec {
  KernelId id = KernelId::T1;
  int k = 0, j = 0;            // basis indices (raw Hermite for I/E3/E4)
  double alpha = 0.0;          // exponent for E1 (beta) and E2 (alpha)
  PotentialSpec potential{};   // used by F1..F4
};

// rel_tol must lie in (1e-14, 1e-4).
double quadrature_oracle(const OracleSpec& q, double rel_tol);

}  // namespace spec2
