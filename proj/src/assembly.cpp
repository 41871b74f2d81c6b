#include "spec2/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spec2 {

namespace {

void check_symmetric(const Eigen::MatrixXd& m, const char* name, double tol) {
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0) scale = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) {
        std::ostringstream os;
        os << "assemble: " << name << " not symmetric at (" << i << ", " << j
           << "): " << m(i, j) << " vs " << m(j, i);
        throw std::runtime_error(os.str());
      }
}

}  // namespace

PencilTriple assemble(const RadialProblem& prob, const BasisSpec& basis,
                      const KernelTable& t) {
  prob.validate();
  basis.validate();
  const int N = basis.n_upper, M = basis.n_lower, K = std::max(N, M);
  if (t.t1.rows() < K)
    throw std::invalid_argument("assemble: kernel table extent insufficient");

  const double kp = prob.kappa;
  const auto top = [&](const Eigen::MatrixXd& m) { return m.topLeftCorner(K, K); };
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(K, K);
  const Eigen::MatrixXd t5s = top(t.t5) + top(t.t5).transpose();

  const Eigen::MatrixXd l11 = I + top(t.f1);
  const Eigen::MatrixXd l12 = top(t.t2) + kp * top(t.t3);
  const Eigen::MatrixXd l21 = -top(t.t2) + kp * top(t.t3);
  const Eigen::MatrixXd l22 = -I + top(t.f1);
  const Eigen::MatrixXd k11 = I + top(t.t4) + kp * t5s +
                              kp * kp * top(t.t6) + 2 * top(t.f1) + top(t.f2);
  const Eigen::MatrixXd k12 =
      2 * kp * top(t.f3) + top(t.f4) - top(t.f4).transpose();
  const Eigen::MatrixXd k21 =
      2 * kp * top(t.f3) - top(t.f4) + top(t.f4).transpose();
  const Eigen::MatrixXd k22 = I + top(t.t4) - kp * t5s +
                              kp * kp * top(t.t6) - 2 * top(t.f1) + top(t.f2);

  PencilTriple p;
  p.dim = N + M;
  p.basis = basis;
  p.problem = prob;
  p.b = Eigen::MatrixXd::Identity(p.dim, p.dim);
  p.l.resize(p.dim, p.dim);
  p.k.resize(p.dim, p.dim);
  p.l.topLeftCorner(N, N) = l11.topLeftCorner(N, N);
  p.l.topRightCorner(N, M) = l12.topLeftCorner(N, M);
  p.l.bottomLeftCorner(M, N) = l21.topLeftCorner(M, N);
  p.l.bottomRightCorner(M, M) = l22.topLeftCorner(M, M);
  p.k.topLeftCorner(N, N) = k11.topLeftCorner(N, N);
  p.k.topRightCorner(N, M) = k12.topLeftCorner(N, M);
  p.k.bottomLeftCorner(M, N) = k21.topLeftCorner(M, N);
  p.k.bottomRightCorner(M, M) = k22.topLeftCorner(M, M);

  check_symmetric(p.l, "L", 1e-10);
  check_symmetric(p.k, "K", 1e-10);

  // First-order consistency of the off-diagonal blocks:
  // L12(k,j) + L21(k,j) = 2 kappa T3(k,j) entrywise.
  {
    const Eigen::MatrixXd resid =
        l12.topLeftCorner(N, M) + l21.topLeftCorner(N, M) -
        2 * kp * top(t.t3).topLeftCorner(N, M);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < M; ++b)
        if (std::abs(resid(a, b)) > 1e-10) {
          std::ostringstream os;
          os << "assemble: off-diagonal block identity violated at (" << a
             << ", " << b << "): " << resid(a, b);
          throw std::runtime_error(os.str());
        }
  }

  // K is the Gram matrix of {H b_j}: a materially negative eigenvalue means
  // a kernel-table defect.  A Cholesky attempt on the shifted matrix tests
  // "smallest eigenvalue >= -shift" at a fraction of an eigensolve's cost.
  {
    const double scale =
        p.k.cwiseAbs().rowwise().sum().maxCoeff();  // >= ||K||_2
    const double shift = 1e-10 * std::max(scale, 1.0);
    Eigen::LLT<Eigen::MatrixXd> llt(
        p.k + shift * Eigen::MatrixXd::Identity(p.dim, p.dim));
    if (llt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "assemble: K has an eigenvalue below " << -shift
         << " (not positive semidefinite)";
      throw std::runtime_error(os.str());
    }
  }
  return p;
}

PencilTriple assemble(const RadialProblem& prob, const BasisSpec& basis) {
  basis.validate();
  const KernelTable t = build_kernel_table(
      prob.potential, prob.kappa, std::max(basis.n_upper, basis.n_lower));
  return assemble(prob, basis, t);
}

Eigen::MatrixXd galerkin_matrix(const PencilTriple& p) { return p.l; }

namespace {

void write_matrix(std::ostream& os, const char* name,
                  const Eigen::MatrixXd& m) {
  os << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  char buf[48];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      os << buf << (j + 1 < m.cols() ? " " : "");
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_matrix(std::istream& is, const std::string& want) {
  std::string kw, name;
  Eigen::Index rows, cols;
  if (!(is >> kw >> name >> rows >> cols) || kw != "matrix" || name != want)
    throw std::runtime_error("read_pencil: expected matrix " + want);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!(is >> m(i, j)))
        throw std::runtime_error("read_pencil: short matrix " + want);
  return m;
}

}  // namespace

void write_pencil(const PencilTriple& p, std::ostream& os) {
  os << "dirac-pencil v1\n";
  os << "dim " << p.dim << '\n';
  os << "basis " << p.basis.n_upper << ' ' << p.basis.n_lower << '\n';
  char buf[48];
  os << "kappa " << p.problem.kappa << '\n';
  const PotentialSpec& pot = p.problem.potential;
  os << "potential " << pot.name();
  if (pot.kind != PotentialKind::Free) {
    std::snprintf(buf, sizeof buf, "%.17g", pot.gamma);
    os << ' ' << buf;
  }
  if (pot.kind == PotentialKind::SubCoulomb) {
    std::snprintf(buf, sizeof buf, "%.17g", pot.beta);
    os << ' ' << buf;
  }
  os << '\n';
  write_matrix(os, "B", p.b);
  write_matrix(os, "L", p.l);
  write_matrix(os, "K", p.k);
}

void write_pencil(const PencilTriple& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_pencil: cannot open " + path);
  write_pencil(p, os);
}

PencilTriple read_pencil(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "dirac-pencil v1")
    throw std::runtime_error("read_pencil: bad header (want 'dirac-pencil v1')");
  PencilTriple p;
  std::string kw, name;
  if (!(is >> kw >> p.dim) || kw != "dim")
    throw std::runtime_error("read_pencil: bad dim line");
  if (!(is >> kw >> p.basis.n_upper >> p.basis.n_lower) || kw != "basis")
    throw std::runtime_error("read_pencil: bad basis line");
  if (!(is >> kw >> p.problem.kappa) || kw != "kappa")
    throw std::runtime_error("read_pencil: bad kappa line");
  if (!(is >> kw >> name) || kw != "potential")
    throw std::runtime_error("read_pencil: bad potential line");
  PotentialSpec& pot = p.problem.potential;
  if (name == "free") {
    pot = PotentialSpec::free_particle();
  } else if (name == "coulomb") {
    double g;
    if (!(is >> g)) throw std::runtime_error("read_pencil: coulomb needs gamma");
    pot = PotentialSpec::coulomb(g);
  } else if (name == "subcoulomb") {
    double g, b;
    if (!(is >> g >> b))
      throw std::runtime_error("read_pencil: subcoulomb needs gamma beta");
    pot = PotentialSpec::sub_coulomb(g, b);
  } else if (name == "invharm") {
    double g;
    if (!(is >> g)) throw std::runtime_error("read_pencil: invharm needs gamma");
    pot = PotentialSpec::inverse_harmonic(g);
  } else {
    throw std::runtime_error("read_pencil: unknown potential '" + name + "'");
  }
  p.b = read_matrix(is, "B");
  p.l = read_matrix(is, "L");
  p.k = read_matrix(is, "K");
  if (p.b.rows() != p.dim || p.l.rows() != p.dim || p.k.rows() != p.dim ||
      p.dim != p.basis.n_upper + p.basis.n_lower)
    throw std::runtime_error("read_pencil: inconsistent dimensions");
  return p;
}

PencilTriple read_pencil(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_pencil: cannot open " + path);
  return read_pencil(is);
}

}  // namespace spec2
