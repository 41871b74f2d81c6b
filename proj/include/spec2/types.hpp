#pragma once

#include <string>

namespace spec2 {

enum class PotentialKind { Free, Coulomb, SubCoulomb, InverseHarmonic };

// Electric potential phi_el(r) of the radial Dirac operator, natural units
// m = c = hbar = 1.  The scalar and anomalous-magnetic parts phi_sc, phi_am
// are identically zero; the fields exist only so the operator family reads
// like the full model.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Free;
  double gamma = 0.0;  // coupling strength
  double beta = 1.0;   // SubCoulomb exponent: phi_el = gamma / r^beta
  double phi_sc = 0.0;
  double phi_am = 0.0;

  static PotentialSpec free_particle() { return {}; }
  static PotentialSpec coulomb(double gamma);
  static PotentialSpec sub_coulomb(double gamma, double beta);
  static PotentialSpec inverse_harmonic(double gamma);

  // Throws std::invalid_argument when the coupling leaves the range on which
  // the operator is well defined (|gamma| < sqrt(3)/2 for Coulomb,
  // |gamma| < 1 and beta in (0,1] for SubCoulomb).
  void validate() const;

  double phi_el(double r) const;  // pointwise value
  bool is_singular_at_origin() const;
  std::string name() const;  // "free", "coulomb", "subcoulomb", "invharm"
};

// One radial operator H_kappa: angular quantum number plus potential.
struct RadialProblem {
  int kappa = -1;  // nonzero
  PotentialSpec potential;

  void validate() const;
};

// Counts of odd Hermite basis functions allotted to the upper and the lower
// spinor component.  Ordering in all assembled matrices: the n_upper upper
// functions first (k = 0..N-1), then the n_lower lower ones (j = 0..M-1).
struct BasisSpec {
  int n_upper = 1;  // N
  int n_lower = 1;  // M

  int dim() const { return n_upper + n_lower; }
  void validate() const;
};

// A pair of basis indices (0-based; Phi_k is built from the Hermite
// polynomial of degree 2k+1).
struct IndexPair {
  int k = 0;
  int j = 0;
};

}  // namespace spec2
