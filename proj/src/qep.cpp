#include "spec2/qep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spec2/hermite.hpp"

namespace spec2 {

namespace {

// Companion eigensolve C = [0 I; -K 2L].  Real eigenvalues of multiplicity
// two are defective in companion form, so a backward-stable solve locates
// them only to ~sqrt(eps * ||C||); for small pencils we solve in extended
// precision to push that noise floor below 1e-8.
template <typename Real>
void companion_eigensolve(const PencilTriple& p, Eigen::VectorXcd& w,
                          Eigen::MatrixXcd& v) {
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  const int n = p.dim;
  Mat c = Mat::Zero(2 * n, 2 * n);
  c.template topRightCorner(n, n) = Mat::Identity(n, n);
  c.template bottomLeftCorner(n, n) = -p.k.cast<Real>();
  c.template bottomRightCorner(n, n) = Real(2) * p.l.cast<Real>();
  Eigen::EigenSolver<Mat> es(c);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("second_order_spectrum: eigensolver failed");
  w = es.eigenvalues().template cast<std::complex<double>>();
  v = es.eigenvectors().template cast<std::complex<double>>();
}

}  // namespace

std::vector<SecondOrderPoint> second_order_spectrum(const PencilTriple& p) {
  const int n = p.dim;
  if (n <= 0) throw std::invalid_argument("second_order_spectrum: empty pencil");
  if ((p.b - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("second_order_spectrum: B must be the identity");

  Eigen::VectorXcd w;
  Eigen::MatrixXcd v;
  if (n <= 128)
    companion_eigensolve<long double>(p, w, v);
  else
    companion_eigensolve<double>(p, w, v);

  std::vector<SecondOrderPoint> pts(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    pts[i].lambda = w[i];
    Eigen::VectorXcd upper = v.col(i).head(n);
    const double un = upper.norm(), xn = v.col(i).norm();
    if (un < 1e-8 * xn && std::abs(w[i]) > 0) {
      upper = v.col(i).tail(n) / w[i];  // x = (v, lambda v): recover v below
    }
    pts[i].coeffs = upper / upper.norm();
  }

  // Conjugate pairing: sort by (Re, |Im|) so partners are adjacent, then
  // greedily match within 1e-8; |Im| < 1e-10 points count as real (self).
  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &la = pts[a].lambda, &lb = pts[b].lambda;
    if (la.real() != lb.real()) return la.real() < lb.real();
    return std::abs(la.imag()) < std::abs(lb.imag());
  });
  for (int i = 0; i < 2 * n; ++i) {
    const int a = order[i];
    if (pts[a].conjugate_partner >= 0) continue;
    if (std::abs(pts[a].lambda.imag()) < 1e-10) {
      pts[a].conjugate_partner = a;
      continue;
    }
    for (int jj = i + 1; jj < 2 * n; ++jj) {
      const int b = order[jj];
      if (pts[b].conjugate_partner >= 0) continue;
      if (pts[b].lambda.real() - pts[a].lambda.real() > 1e-8) break;
      if (std::abs(pts[b].lambda.real() - pts[a].lambda.real()) <= 1e-8 &&
          std::abs(pts[b].lambda.imag() + pts[a].lambda.imag()) <= 1e-8) {
        pts[a].conjugate_partner = b;
        pts[b].conjugate_partner = a;
        break;
      }
    }
    if (pts[a].conjugate_partner < 0)  // isolated; treat as its own partner
      pts[a].conjugate_partner = a;
  }
  return pts;
}

std::vector<SecondOrderPoint> filter_points(
    const std::vector<SecondOrderPoint>& pts, double lo, double hi,
    double max_imag) {
  std::vector<SecondOrderPoint> out;
  for (const auto& pt : pts) {
    const double re = pt.lambda.real(), im = pt.lambda.imag();
    if (im >= 0 && re > lo && re < hi && im <= max_imag) out.push_back(pt);
  }
  std::sort(out.begin(), out.end(),
            [](const SecondOrderPoint& a, const SecondOrderPoint& b) {
              if (a.lambda.real() != b.lambda.real())
                return a.lambda.real() < b.lambda.real();
              return std::abs(a.lambda.imag()) < std::abs(b.lambda.imag());
            });
  // Partner links index the unfiltered set; drop them in the filtered view.
  for (auto& pt : out) pt.conjugate_partner = -1;
  return out;
}

Enclosure enclosure(const SecondOrderPoint& pt) {
  Enclosure e;
  e.center = pt.lambda.real();
  e.radius = std::abs(pt.lambda.imag());
  e.source = pt.lambda;
  return e;
}

double sharpened_radius(const SecondOrderPoint& pt, double d) {
  if (!(d > 0)) throw std::invalid_argument("sharpened_radius: d <= 0");
  const double im = std::abs(pt.lambda.imag());
  return std::min(im, 2.0 * im * im / d);
}

RadialSpinor eigenfunction(const SecondOrderPoint& pt, const BasisSpec& basis,
                           const Eigen::VectorXd& grid) {
  basis.validate();
  const int N = basis.n_upper, M = basis.n_lower;
  if (pt.coeffs.size() != N + M)
    throw std::invalid_argument("eigenfunction: coefficient/basis mismatch");
  if (grid.size() == 0 || grid.minCoeff() <= 0)
    throw std::invalid_argument("eigenfunction: grid must be positive radii");

  // Global phase: largest-|coefficient| entry rotated to the positive real
  // axis, so CSV output is reproducible run to run.
  Eigen::Index imax = 0;
  pt.coeffs.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> ph = pt.coeffs[imax] / std::abs(pt.coeffs[imax]);
  Eigen::VectorXcd c = pt.coeffs / ph;

  const Eigen::MatrixXd phi = phi_values(std::max(N, M) - 1, grid);
  RadialSpinor s;
  s.r = grid;
  s.coeffs = c;
  s.upper = Eigen::VectorXcd::Zero(grid.size());
  s.lower = Eigen::VectorXcd::Zero(grid.size());
  for (int k = 0; k < N; ++k)
    s.upper += c[k] * phi.row(k).transpose().cast<std::complex<double>>();
  for (int j = 0; j < M; ++j)
    s.lower += c[N + j] * phi.row(j).transpose().cast<std::complex<double>>();
  return s;
}

namespace {

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& r) {
  const Eigen::Index n = r.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double h = r[i + 1] - r[i];
    w[i] += h / 2;
    w[i + 1] += h / 2;
  }
  return w;
}

}  // namespace

double subspace_residual(const RadialSpinor& spinor,
                         const std::vector<RadialSpinor>& exact_basis) {
  if (exact_basis.empty())
    throw std::invalid_argument("subspace_residual: empty basis");
  const Eigen::Index npts = spinor.r.size();
  for (const auto& b : exact_basis)
    if (b.r.size() != npts)
      throw std::invalid_argument("subspace_residual: grid mismatch");

  const Eigen::VectorXd w = trapezoid_weights(spinor.r);
  const auto dot = [&](const RadialSpinor& a, const RadialSpinor& b) {
    return (w.array().cast<std::complex<double>>() *
            (a.upper.array().conjugate() * b.upper.array() +
             a.lower.array().conjugate() * b.lower.array()))
        .sum();
  };

  const int m = (int)exact_basis.size();
  Eigen::MatrixXcd gram(m, m);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      gram(i, j) = dot(exact_basis[i], exact_basis[j]);
      gram(j, i) = std::conj(gram(i, j));
    }
    rhs[i] = dot(exact_basis[i], spinor);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  const double emin = es.eigenvalues().minCoeff(),
               emax = es.eigenvalues().maxCoeff();
  if (!(emin > 0) || emax / emin > 1e8)
    throw std::runtime_error("subspace_residual: degenerate basis (Gram condition > 1e8)");

  // At the optimum, || v - Proj v ||^2 = ||v||^2 - rhs^H G^{-1} rhs.
  const Eigen::VectorXcd coeff =
      es.eigenvectors() *
      es.eigenvalues().cwiseInverse().cast<std::complex<double>>().asDiagonal() *
      es.eigenvectors().adjoint() * rhs;
  const double norm2 = dot(spinor, spinor).real();
  double resid2 = norm2 - rhs.dot(coeff).real();
  resid2 = std::max(resid2, 0.0);
  return std::sqrt(resid2 / norm2);
}

}  // namespace spec2
