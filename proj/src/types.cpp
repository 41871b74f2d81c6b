#include "spec2/types.hpp"

#include <cmath>
#include <stdexcept>

namespace spec2 {

PotentialSpec PotentialSpec::coulomb(double gamma) {
  PotentialSpec p;
  p.kind = PotentialKind::Coulomb;
  p.gamma = gamma;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::sub_coulomb(double gamma, double beta) {
  PotentialSpec p;
  p.kind = PotentialKind::SubCoulomb;
  p.gamma = gamma;
  p.beta = beta;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::inverse_harmonic(double gamma) {
  PotentialSpec p;
  p.kind = PotentialKind::InverseHarmonic;
  p.gamma = gamma;
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::Free:
      return;
    case PotentialKind::Coulomb:
      if (!(std::abs(gamma) < std::sqrt(3.0) / 2))
        throw std::invalid_argument(
            "PotentialSpec: Coulomb needs |gamma| < sqrt(3)/2");
      return;
    case PotentialKind::SubCoulomb:
      if (!(std::abs(gamma) < 1.0))
        throw std::invalid_argument("PotentialSpec: SubCoulomb needs |gamma| < 1");
      if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("PotentialSpec: SubCoulomb needs beta in (0, 1]");
      return;
    case PotentialKind::InverseHarmonic:
      if (!std::isfinite(gamma))
        throw std::invalid_argument("PotentialSpec: gamma must be finite");
      return;
  }
  throw std::invalid_argument("PotentialSpec: unknown kind");
}

double PotentialSpec::phi_el(double r) const {
  switch (kind) {
    case PotentialKind::Free:
      return 0.0;
    case PotentialKind::Coulomb:
      return gamma / r;
    case PotentialKind::SubCoulomb:
      return gamma / std::pow(r, beta);
    case PotentialKind::InverseHarmonic:
      return gamma / (1.0 + r * r);
  }
  return 0.0;
}

bool PotentialSpec::is_singular_at_origin() const {
  return kind == PotentialKind::Coulomb || kind == PotentialKind::SubCoulomb;
}

std::string PotentialSpec::name() const {
  switch (kind) {
    case PotentialKind::Free:
      return "free";
    case PotentialKind::Coulomb:
      return "coulomb";
    case PotentialKind::SubCoulomb:
      return "subcoulomb";
    case PotentialKind::InverseHarmonic:
      return "invharm";
  }
  return "unknown";
}

void RadialProblem::validate() const {
  if (kappa == 0) throw std::invalid_argument("RadialProblem: kappa must be nonzero");
  potential.validate();
}

void BasisSpec::validate() const {
  if (n_upper < 1 || n_lower < 1)
    throw std::invalid_argument("BasisSpec: need n_upper >= 1 and n_lower >= 1");
}

}  // namespace spec2
