#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "spec2/kernels.hpp"
#include "spec2/types.hpp"

namespace spec2 {

// Truncated pencil (B, L, K) of the quadratic eigenvalue problem
//   (B z^2 - 2 L z + K) u = 0
// over the product basis {(Phi_k, 0)}_{k<N} x {(0, Phi_k)}_{k<M}.  B is the
// identity (the basis is orthonormal), L is the Galerkin matrix of the
// operator, and K is the Galerkin matrix of its square.
struct PencilTriple {
  int dim = 0;  // N + M
  Eigen::MatrixXd b, l, k;
  BasisSpec basis;
  RadialProblem problem;
};

// Assembles the pencil.  Verifies on the way out that L and K are symmetric
// to 1e-10, that K has no materially negative eigenvalue, and that the
// off-diagonal blocks of L satisfy the first-order consistency identity
// L12 + L21 = 2 kappa T3; throws std::runtime_error naming the offending
// entry otherwise.
PencilTriple assemble(const RadialProblem& prob, const BasisSpec& basis);

// Same blocks, reusing a prebuilt kernel table covering max(N, M) indices.
PencilTriple assemble(const RadialProblem& prob, const BasisSpec& basis,
                      const KernelTable& table);

// The plain Galerkin (first-order) matrix: L alone, for comparison runs.
Eigen::MatrixXd galerkin_matrix(const PencilTriple& p);

// dirac-pencil v1 interchange format: five header lines
//   dirac-pencil v1 / dim <d> / basis <N> <M> / kappa <kappa> / potential ...
// followed by the three matrices, each introduced by "matrix <name> <rows>
// <cols>" and written row-major, 17 significant digits.
void write_pencil(const PencilTriple& p, std::ostream& os);
void write_pencil(const PencilTriple& p, const std::string& path);
PencilTriple read_pencil(std::istream& is);
PencilTriple read_pencil(const std::string& path);

}  // namespace spec2
