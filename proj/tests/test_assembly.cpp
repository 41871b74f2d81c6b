// Galerkin pencil assembly against an independent quadrature oracle that
// applies the operator pointwise, plus structure and serialization checks.
#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spec2/assembly.hpp"
#include "spec2/hermite.hpp"
#include "spec2/kernels.hpp"
#include "spec2/quadfloat.hpp"
#include "spec2/quadrature.hpp"

using namespace spec2;

namespace {

// Pointwise operator action evaluated in quad precision: the combination
// phi' + (kappa/r) phi cancels to O(r) near the origin, and double
// evaluation leaves relative noise the adaptive integrator cannot resolve.
struct ActionPoint {
  qfloat value[2];   // (upper, lower) components of basis spinor i
  qfloat action[2];  // operator applied to it
};

qfloat phi_el_q(const PotentialSpec& pot, qfloat r) {
  switch (pot.kind) {
    case PotentialKind::Free:
      return 0;
    case PotentialKind::Coulomb:
      return (qfloat)pot.gamma / r;
    case PotentialKind::SubCoulomb:
      return (qfloat)pot.gamma * f_exp(-(qfloat)pot.beta * f_log(r));
    case PotentialKind::InverseHarmonic:
      return (qfloat)pot.gamma / (1 + r * r);
  }
  return 0;
}

ActionPoint basis_action(const RadialProblem& prob, const BasisSpec& basis,
                         int i, qfloat r) {
  const qfloat kappa = prob.kappa;
  const int k = i < basis.n_upper ? i : i - basis.n_upper;
  std::vector<qfloat> g(2 * k + 4);
  hermite_g_column(2 * k + 3, r, g.data());
  const qfloat phi = g[2 * k + 1];
  const qfloat dphi = f_sqrt((qfloat)(2 * k + 1) / 2) * g[2 * k] -
                      f_sqrt((qfloat)(k + 1)) * g[2 * k + 2];
  const qfloat v = phi_el_q(prob.potential, r);
  ActionPoint a;
  if (i < basis.n_upper) {
    a.value[0] = phi;
    a.value[1] = 0;
    a.action[0] = (v + 1) * phi;
    a.action[1] = dphi + kappa / r * phi;
  } else {
    a.value[0] = 0;
    a.value[1] = phi;
    a.action[0] = -dphi + kappa / r * phi;
    a.action[1] = (v - 1) * phi;
  }
  return a;
}

// L_ij = <e_i, H e_j>, K_ij = <H e_i, H e_j> by adaptive quadrature.
void oracle_pencil(const RadialProblem& prob, const BasisSpec& basis,
                   Eigen::MatrixXd& l_ref, Eigen::MatrixXd& k_ref) {
  const int dim = basis.dim();
  const int max_k = std::max(basis.n_upper, basis.n_lower) - 1;
  const bool singular = prob.potential.is_singular_at_origin();
  l_ref.resize(dim, dim);
  k_ref.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      l_ref(i, j) = integrate_kernel(
          [&](double r) {
            const ActionPoint ai = basis_action(prob, basis, i, r);
            const ActionPoint aj = basis_action(prob, basis, j, r);
            return (double)(ai.value[0] * aj.action[0] +
                            ai.value[1] * aj.action[1]);
          },
          2 * max_k + 3, singular, 1e-11);
      k_ref(i, j) = integrate_kernel(
          [&](double r) {
            const ActionPoint ai = basis_action(prob, basis, i, r);
            const ActionPoint aj = basis_action(prob, basis, j, r);
            return (double)(ai.action[0] * aj.action[0] +
                            ai.action[1] * aj.action[1]);
          },
          2 * max_k + 3, singular, 1e-11);
    }
}

double worst_rel(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref) {
  double worst = 0;
  for (Eigen::Index i = 0; i < got.rows(); ++i)
    for (Eigen::Index j = 0; j < got.cols(); ++j)
      worst = std::max(worst, std::abs(got(i, j) - ref(i, j)) /
                                  std::max(1.0, std::abs(ref(i, j))));
  return worst;
}

}  // namespace

TEST_CASE("assembled pencils match the operator-action quadrature oracle") {
  const PotentialSpec pots[] = {
      PotentialSpec::coulomb(-0.5),
      PotentialSpec::sub_coulomb(-0.5, 0.5),
      PotentialSpec::inverse_harmonic(-2.0),
      PotentialSpec::free_particle(),
  };
  for (const auto& pot : pots) {
    CAPTURE(pot.name());
    const RadialProblem prob{-1, pot};
    const BasisSpec basis{6, 6};
    const PencilTriple p = assemble(prob, basis);
    Eigen::MatrixXd l_ref, k_ref;
    oracle_pencil(prob, basis, l_ref, k_ref);
    CHECK(worst_rel(p.l, l_ref) <= 1e-8);
    CHECK(worst_rel(p.k, k_ref) <= 1e-8);
    CHECK((p.b - Eigen::MatrixXd::Identity(p.dim, p.dim)).norm() == 0.0);
  }
}

TEST_CASE("rectangular component splits match the oracle") {
  const RadialProblem prob{-1, PotentialSpec::coulomb(-0.5)};
  const BasisSpec basis{8, 4};
  const PencilTriple p = assemble(prob, basis);
  REQUIRE(p.dim == 12);
  Eigen::MatrixXd l_ref, k_ref;
  oracle_pencil(prob, basis, l_ref, k_ref);
  CHECK(worst_rel(p.l, l_ref) <= 1e-8);
  CHECK(worst_rel(p.k, k_ref) <= 1e-8);
}

TEST_CASE("positive kappa channels match the oracle") {
  const RadialProblem prob{1, PotentialSpec::coulomb(-0.5)};
  const BasisSpec basis{5, 7};
  const PencilTriple p = assemble(prob, basis);
  Eigen::MatrixXd l_ref, k_ref;
  oracle_pencil(prob, basis, l_ref, k_ref);
  CHECK(worst_rel(p.l, l_ref) <= 1e-8);
  CHECK(worst_rel(p.k, k_ref) <= 1e-8);
}

TEST_CASE("pencil structure: symmetry, positivity, coupling identity") {
  const RadialProblem prob{-1, PotentialSpec::coulomb(-0.5)};
  const PencilTriple p = assemble(prob, BasisSpec{20, 20});
  CHECK((p.l - p.l.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((p.k - p.k.transpose()).cwiseAbs().maxCoeff() <= 1e-10);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.k);
  CHECK(es.eigenvalues().minCoeff() >=
        -1e-10 * std::max(1.0, es.eigenvalues().maxCoeff()));

  // off-diagonal blocks of L sum to twice the kappa coupling
  const int n = 20;
  Eigen::MatrixXd t3(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) t3(k, j) = t_term(3, {k, j});
  const Eigen::MatrixXd sum =
      p.l.block(0, n, n, n) + p.l.block(n, 0, n, n) + 2.0 * 1.0 * t3;
  CHECK(sum.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pencil serialization round trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "spec2_pencil_rt.txt";
  const RadialProblem prob{-1, PotentialSpec::sub_coulomb(-0.5, 0.7)};
  const PencilTriple p = assemble(prob, BasisSpec{7, 5});
  write_pencil(p, path.string());
  const PencilTriple q = read_pencil(path.string());
  CHECK(q.dim == p.dim);
  CHECK(q.basis.n_upper == 7);
  CHECK(q.basis.n_lower == 5);
  CHECK(q.problem.kappa == -1);
  CHECK(q.problem.potential.kind == PotentialKind::SubCoulomb);
  CHECK(q.problem.potential.gamma == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(q.problem.potential.beta == doctest::Approx(0.7).epsilon(1e-15));
  CHECK((q.l - p.l).cwiseAbs().maxCoeff() <= 1e-14 * p.l.cwiseAbs().maxCoeff());
  CHECK((q.k - p.k).cwiseAbs().maxCoeff() <= 1e-14 * p.k.cwiseAbs().maxCoeff());
  fs::remove(path);

  const fs::path bad = fs::temp_directory_path() / "spec2_pencil_bad.txt";
  std::ofstream(bad.string()) << "not-a-pencil 7\n";
  CHECK_THROWS((void)read_pencil(bad.string()));
  fs::remove(bad);
}

TEST_CASE("basis and problem validation") {
  CHECK_THROWS((void)assemble(RadialProblem{0, PotentialSpec::coulomb(-0.5)},
                              BasisSpec{4, 4}));
  CHECK_THROWS((void)BasisSpec{0, 4}.validate());
  CHECK_THROWS((void)PotentialSpec::coulomb(-0.9));       // beyond |gamma| bound
  CHECK_THROWS((void)PotentialSpec::sub_coulomb(-0.5, 1.5));
  CHECK_THROWS((void)PotentialSpec::sub_coulomb(-1.5, 0.5));
}
