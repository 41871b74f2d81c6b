#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "spec2/assembly.hpp"

namespace spec2 {

// One eigenvalue of the quadratic pencil together with its coefficient
// vector in the product basis.  conjugate_partner indexes the paired point
// (lambda-bar) within the returned set, or the point itself for real lambda.
struct SecondOrderPoint {
  std::complex<double> lambda;
  Eigen::VectorXcd coeffs;    // unit-norm coefficients of the spinor
  int conjugate_partner = -1;
};

// Solves (z^2 - 2 L z + K) u = 0 via the companion linearisation
//     C = [ 0  I ; -K  2L ],   C (u, z u) = z (u, z u),
// whose eigenvalues are exactly the pencil's.  The coefficient vector is read
// from the top block of the linearised eigenvector, falling back to the
// bottom block divided by lambda when the top block carries less than 1e-8 of
// the norm.  Points are conjugate-paired within 1e-8; |Im| < 1e-10 counts as
// real.  Requires B = I.
std::vector<SecondOrderPoint> second_order_spectrum(const PencilTriple& p);

// Keeps points with Re(lambda) inside [lo, hi] and 0 <= Im(lambda) <=
// max_imag (of each conjugate pair only the upper-half-plane member
// survives), sorted by Re(lambda).
std::vector<SecondOrderPoint> filter_points(
    const std::vector<SecondOrderPoint>& pts, double lo, double hi,
    double max_imag);

// Interval [Re - |Im|, Re + |Im|], which always meets the spectrum of the
// underlying self-adjoint operator; this is the pollution-free guarantee.
struct Enclosure {
  double center = 0, radius = 0;
  std::complex<double> source{0, 0};  // the pencil eigenvalue it came from
  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
};
Enclosure enclosure(const SecondOrderPoint& pt);

// With d = distance from lambda's real part to the complement of the
// spectral-free interval around the targeted eigenvalue, the radius improves
// to min(|Im|, 2 |Im|^2 / d).
double sharpened_radius(const SecondOrderPoint& pt, double d);

// A two-component radial function sampled on a grid, with the coefficient
// vector it came from (empty for closed-form reference spinors).  Components
// are complex: the spinor of a genuinely complex pencil eigenvalue has an
// irreducible imaginary part, and the subspace residual needs it.
struct RadialSpinor {
  Eigen::VectorXd r;
  Eigen::VectorXcd upper, lower;
  Eigen::VectorXcd coeffs;
};

// Evaluates the spinor of a second-order point on the given grid by the
// stable upward Hermite recurrence.  The global phase is fixed by rotating
// the largest-magnitude coefficient to the positive real axis, after which
// the imaginary parts (tiny for near-real clusters) are dropped.
RadialSpinor eigenfunction(const SecondOrderPoint& pt, const BasisSpec& basis,
                           const Eigen::VectorXd& grid);

// Relative L^2 distance of `spinor` from the span of `exact_basis`:
//     || v - Proj v || / || v ||
// computed with trapezoid weights on the common grid.  Paired with an
// eigenvalue enclosure this is bounded by |Im lambda| / d_E.  Throws
// std::runtime_error if the Gram matrix of `exact_basis` has condition
// number beyond 1e8 (the span is then numerically degenerate).
double subspace_residual(const RadialSpinor& spinor,
                         const std::vector<RadialSpinor>& exact_basis);

}  // namespace spec2
