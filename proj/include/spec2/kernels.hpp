#pragma once

#include <Eigen/Core>
#include <string>

#include "spec2/types.hpp"

namespace spec2 {

// P(n) = Gamma(n + 3/2) / (Gamma(3/2) n!), the normalisation ratio that
// appears throughout the closed-form kernels.  log_p_product returns
// log(P(k) P(j)) / 2 for overflow-free square roots at large indices.
double p_product(int n);
double log_p_product(int k, int j);

// int_0^infty g_m g_n dr for raw Hermite-function indices (orthonormal within
// one parity class; closed form across parity classes).
double hermite_overlap(int m, int n);

// The six potential-independent kernels over the odd-index basis Phi_k:
//   1: int Phi_k Phi_j           2: int Phi_k' Phi_j
//   3: int r^{-1} Phi_k Phi_j    4: int Phi_k' Phi_j'
//   5: int r^{-1} Phi_k' Phi_j   6: int r^{-2} Phi_k Phi_j
// Throws std::invalid_argument for `which` outside 1..6 or negative indices.
double t_term(int which, IndexPair p);

// int_0^infty r^{-alpha} Phi_k Phi_j dr, alpha in [-1, 2].  Evaluated by a
// cancellation-prone double series in quad precision; accurate to ~1e-12 for
// indices up to ~35 (the terms grow like 10^{0.95 min(k,j)} before
// cancelling, which caps the usable index range at any fixed precision).
double e2_subcoulomb(double alpha, IndexPair p);

// int_0^infty r^{-beta} Phi_k' Phi_j dr, beta in [0, 1], via three E2 calls.
double e1_subcoulomb(double beta, IndexPair p);

// Tables of the inverse-harmonic moment integrals over raw Hermite indices,
//   e3(m, n) = int g_m g_n / (1 + r^2) dr,
//   e4(m, n) = int r g_m g_n / (1 + r^2) dr,
// filled by a two-term recurrence marched in m from quadrature seeds.  The
// march amplifies seed error by ~10^{m/40}, so both seeds and arithmetic are
// quad precision; results hold ~1e-12 at m = 400 and ~1e-7 at m = 600.
// Throws std::runtime_error naming the first offending index if any entry
// comes out non-finite or escapes the a-priori bounds |e3| <= 1, |e4| <= 1/2.
struct ETable {
  Eigen::MatrixXd e3, e4;
};
ETable e34_tables(int max_m, int max_n);

// Potential-dependent kernels entering the pencil blocks:
//   f1 = int phi_el Phi_k Phi_j         f2 = int phi_el^2 Phi_k Phi_j
//   f3 = int r^{-1} phi_el Phi_k Phi_j  f4 = int phi_el Phi_k' Phi_j
// For the inverse-harmonic potential `etab` must cover raw indices up to
// 2 max(k) + 2 and is consulted instead of series evaluation.
struct FTerms {
  double f1 = 0, f2 = 0, f3 = 0, f4 = 0;
};
FTerms f_terms(const PotentialSpec& pot, IndexPair p, const ETable* etab);

// Dense kernel tables for basis indices 0..K-1, one matrix per kernel, with
// f4 stored unsymmetrised (entry (k, j) has the derivative on Phi_k).
struct KernelTable {
  PotentialSpec potential;
  double kappa = -1;
  Eigen::MatrixXd t1, t2, t3, t4, t5, t6;
  Eigen::MatrixXd f1, f2, f3, f4;
};
KernelTable build_kernel_table(const PotentialSpec& pot, double kappa, int K);

// CSV dump "k,j,value" with 17 significant digits.
void write_table_csv(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace spec2
