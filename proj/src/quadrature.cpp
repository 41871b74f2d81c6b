#include "spec2/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spec2/hermite.hpp"

namespace spec2 {

template <typename Real>
GaussLegendreRule<Real>::GaussLegendreRule(int n) : x(n), w(n) {
  if (n < 2) throw std::invalid_argument("GaussLegendreRule: order < 2");
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n in working precision.
    Real xi = Real(std::cos(M_PI * (i + 0.75) / (n + 0.5)));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1, p1 = xi;
      for (int m = 2; m <= n; ++m) {
        const Real p2 =
            ((2 * m - 1) * xi * p1 - (m - 1) * p0) / Real(m);
        p0 = p1;
        p1 = p2;
      }
      dp = Real(n) * (xi * p1 - p0) / (xi * xi - 1);
      const Real dx = p1 / dp;
      xi -= dx;
      if (f_abs(dx) <= 4 * f_eps<Real>() * f_abs(xi) + f_eps<Real>()) break;
    }
    x[i] = -xi;
    x[n - 1 - i] = xi;
    const Real wi = 2 / ((1 - xi * xi) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
}

template struct GaussLegendreRule<double>;
template struct GaussLegendreRule<qfloat>;

double integrate_kernel(const std::function<double(double)>& f,
                        int max_raw_index, bool singular, double rel_tol) {
  const double R = std::max(12.0, 2.0 * std::sqrt(4.0 * max_raw_index + 3.0));
  static const AdaptiveGauss<double> integ(15);
  if (!singular) return integ.integrate(f, 0.0, R, rel_tol);
  // Inner piece under r = eps u^5: flattens the fractional-power behaviour
  // of the singular-potential integrands near the origin.
  const double eps = 1e-3;
  const auto inner_f = [&](double u) {
    return f(eps * u * u * u * u * u) * 5 * eps * u * u * u * u;
  };
  const double inner = integ.integrate(inner_f, 0.0, 1.0, rel_tol);
  const double outer = integ.integrate(f, eps, R, rel_tol);
  return inner + outer;
}

namespace {

int max_raw_index_of(const OracleSpec& q) {
  switch (q.id) {
    case KernelId::I:
    case KernelId::E3:
    case KernelId::E4:
      return std::max(q.k, q.j);
    case KernelId::T2:
    case KernelId::T4:
    case KernelId::T5:
    case KernelId::E1:
    case KernelId::F4:
      return 2 * std::max(q.k, q.j) + 3;  // derivatives reach g_{2k+2}
    default:
      return 2 * std::max(q.k, q.j) + 1;
  }
}

bool is_singular(const OracleSpec& q) {
  switch (q.id) {
    case KernelId::T3:
    case KernelId::T5:
    case KernelId::T6:
    case KernelId::E1:
      return true;
    case KernelId::E2:
      return q.alpha > 0;
    case KernelId::F1:
    case KernelId::F2:
    case KernelId::F3:
    case KernelId::F4:
      return q.potential.is_singular_at_origin() || q.id == KernelId::F3;
    default:
      return false;
  }
}

}  // namespace

double quadrature_oracle(const OracleSpec& q, double rel_tol) {
  if (!(rel_tol > 1e-14 && rel_tol < 1e-4))
    throw std::invalid_argument("quadrature_oracle: rel_tol out of (1e-14, 1e-4)");
  if (q.k < 0 || q.j < 0)
    throw std::invalid_argument("quadrature_oracle: negative index");

  const int k = q.k, j = q.j;
  const PotentialSpec pot = q.potential;
  std::function<double(double)> f;
  switch (q.id) {
    case KernelId::T1:
      f = [=](double r) { return phi_value(k, r) * phi_value(j, r); };
      break;
    case KernelId::T2:
      f = [=](double r) { return phi_derivative(k, r) * phi_value(j, r); };
      break;
    case KernelId::T3:
      f = [=](double r) { return phi_value(k, r) * phi_value(j, r) / r; };
      break;
    case KernelId::T4:
      f = [=](double r) { return phi_derivative(k, r) * phi_derivative(j, r); };
      break;
    case KernelId::T5:
      f = [=](double r) { return phi_derivative(k, r) * phi_value(j, r) / r; };
      break;
    case KernelId::T6:
      f = [=](double r) { return phi_value(k, r) * phi_value(j, r) / (r * r); };
      break;
    case KernelId::I: {
      f = [=](double r) {
        std::vector<double> g(std::max(k, j) + 1);
        hermite_g_column(std::max(k, j), r, g.data());
        return g[k] * g[j];
      };
      break;
    }
    case KernelId::E1: {
      const double beta = q.alpha;
      f = [=](double r) {
        return std::pow(r, -beta) * phi_derivative(k, r) * phi_value(j, r);
      };
      break;
    }
    case KernelId::E2: {
      const double alpha = q.alpha;
      f = [=](double r) {
        return std::pow(r, -alpha) * phi_value(k, r) * phi_value(j, r);
      };
      break;
    }
    case KernelId::E3: {
      f = [=](double r) {
        std::vector<double> g(std::max(k, j) + 1);
        hermite_g_column(std::max(k, j), r, g.data());
        return g[k] * g[j] / (1 + r * r);
      };
      break;
    }
    case KernelId::E4: {
      f = [=](double r) {
        std::vector<double> g(std::max(k, j) + 1);
        hermite_g_column(std::max(k, j), r, g.data());
        return r * g[k] * g[j] / (1 + r * r);
      };
      break;
    }
    case KernelId::F1:
      f = [=](double r) {
        return pot.phi_el(r) * phi_value(k, r) * phi_value(j, r);
      };
      break;
    case KernelId::F2:
      f = [=](double r) {
        const double v = pot.phi_el(r);
        return v * v * phi_value(k, r) * phi_value(j, r);
      };
      break;
    case KernelId::F3:
      f = [=](double r) {
        return pot.phi_el(r) / r * phi_value(k, r) * phi_value(j, r);
      };
      break;
    case KernelId::F4:
      f = [=](double r) {
        return pot.phi_el(r) * phi_derivative(k, r) * phi_value(j, r);
      };
      break;
    default:
      throw std::invalid_argument("quadrature_oracle: unknown kernel id");
  }
  return integrate_kernel(f, max_raw_index_of(q), is_singular(q), rel_tol / 4);
}

}  // namespace spec2
