#include "spec2/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "spec2/hermite.hpp"
#include "spec2/quadrature.hpp"

namespace spec2 {

namespace {

void require_nonneg(int k, int j, const char* where) {
  if (k < 0 || j < 0) {
    std::ostringstream os;
    os << where << ": negative index (" << k << ", " << j << ")";
    throw std::invalid_argument(os.str());
  }
}

// log P(n) via log-Gamma; exact enough for every index this library uses.
double log_p(int n) {
  return std::lgamma(n + 1.5) - std::lgamma(1.5) - std::lgamma(n + 1.0);
}

double sign_pm(int parity) { return parity % 2 == 0 ? 1.0 : -1.0; }

const double kSqrtPi = std::sqrt(M_PI);

}  // namespace

double p_product(int n) {
  if (n < 0) throw std::invalid_argument("p_product: n < 0");
  double p = 1.0;
  for (int l = 1; l <= n; ++l) p *= 1.0 + 0.5 / l;
  return p;
}

double log_p_product(int k, int j) {
  require_nonneg(k, j, "log_p_product");
  return 0.5 * (log_p(k) + log_p(j));
}

double hermite_overlap(int m, int n) {
  require_nonneg(m, n, "hermite_overlap");
  if ((m - n) % 2 == 0) return m == n ? 1.0 : 0.0;
  if (m % 2 == 1) std::swap(m, n);  // integral is symmetric; use (even, odd)
  const int k = m / 2, j = (n - 1) / 2;
  return sign_pm(k - j + 1) *
         std::exp(0.5 * (std::log(2.0) + log_p(k) + log_p(j))) /
         ((2 * k - 2 * j - 1) * std::sqrt(M_PI * (2 * k + 1)));
}

namespace {

double t2_impl(int k, int j) {
  if (k == j) return 0.0;
  return 4.0 * sign_pm(k - j + 1) * (k - j) /
         (kSqrtPi * (2 * k - 2 * j - 1) * (2 * k - 2 * j + 1)) *
         std::exp(0.5 * (log_p(j) + log_p(k)));
}

double t3_impl(int k, int j) {
  double s = 0.0;
  for (int m = 0; m <= k; ++m)
    s += std::exp(log_p(m)) / ((2 * m + 1) * (2 * m - 2 * j - 1.0));
  return 2.0 * sign_pm(k - j + 1) * std::exp(0.5 * (log_p(j) - log_p(k))) /
         kSqrtPi * s;
}

double t4_impl(int k, int j) {
  if (j == k - 1) return -0.5 * std::sqrt(2.0 * k * (2 * k + 1));
  if (j == k) return 0.5 * (4 * k + 3);
  if (j == k + 1) return -0.5 * std::sqrt((2.0 * k + 2) * (2 * k + 3));
  return 0.0;
}

double t5_impl(int k, int j) {
  if (k == j) return 1.0;
  if (k > j) return 0.0;
  return 2.0 * sign_pm(j - k) * std::exp(0.5 * (log_p(k) - log_p(j)));
}

}  // namespace

double t_term(int which, IndexPair p) {
  require_nonneg(p.k, p.j, "t_term");
  switch (which) {
    case 1:
      return p.k == p.j ? 1.0 : 0.0;
    case 2:
      return t2_impl(p.k, p.j);
    case 3:
      return t3_impl(p.k, p.j);
    case 4:
      return t4_impl(p.k, p.j);
    case 5:
      return t5_impl(p.k, p.j);
    case 6:
      return t5_impl(p.k, p.j) + t5_impl(p.j, p.k);
    default:
      throw std::invalid_argument("t_term: which must be 1..6");
  }
}

double e2_subcoulomb(double alpha, IndexPair pr) {
  require_nonneg(pr.k, pr.j, "e2_subcoulomb");
  if (!(alpha >= -1.0 && alpha <= 2.0))
    throw std::invalid_argument("e2_subcoulomb: alpha out of [-1, 2]");
  // The kernel is symmetric in (k, j) but the sum below is not; fix a
  // canonical order so the computed table is exactly symmetric.
  const int k = std::min(pr.k, pr.j), j = std::max(pr.k, pr.j);
  // Alternating double sum with catastrophic cancellation growing like
  // 10^{0.85 min(k,j)}; evaluated in quad precision via exact term ratios.
  const qfloat c = ((qfloat)3.0 - (qfloat)alpha) / 2;
  qfloat t_m0 = tgammaq(c);  // term(0,0) = Gamma(c), c in [1/2, 2]
  qfloat total = 0;
  for (int m = 0; m <= k; ++m) {
    qfloat t = t_m0;
    total += t;
    for (int p = 0; p < j; ++p) {
      t *= -(c + m + p) * (qfloat)(j - p) / ((qfloat)(p + 1) * (p + 1)) *
           (qfloat)(2 * p + 2) / (qfloat)(2 * p + 3);
      total += t;
    }
    t_m0 *= -(c + m) * (qfloat)(k - m) / ((qfloat)(m + 1) * (m + 1)) *
            (qfloat)(2 * m + 2) / (qfloat)(2 * m + 3);
  }
  const qfloat pref = 2 * f_exp((qfloat)log_p_product(k, j)) *
                      (qfloat)sign_pm(k + j) / f_sqrt(f_pi<qfloat>());
  return (double)(pref * total);
}

double e1_subcoulomb(double beta, IndexPair pr) {
  require_nonneg(pr.k, pr.j, "e1_subcoulomb");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("e1_subcoulomb: beta out of [0, 1]");
  const int k = pr.k, j = pr.j;
  double v = (2 * k + 1) * e2_subcoulomb(beta + 1, {k, j}) -
             e2_subcoulomb(beta - 1, {k, j});
  if (k >= 1)
    v += std::sqrt(2.0 * k * (2 * k + 1)) * e2_subcoulomb(beta + 1, {k - 1, j});
  return v;
}

namespace {

// Quad-precision seeds E3(0,0), E4(0,0) by direct quadrature of the defining
// integrals; the downstream recurrence amplifies any seed error by
// ~10^{m/40}, so double-precision seeds are not good enough.
struct E34Seeds {
  qfloat e3, e4;
};

E34Seeds e34_seeds() {
  static const E34Seeds s = [] {
    const AdaptiveGauss<qfloat> integ(31);
    const qfloat tol = (qfloat)1e-30;
    const auto g0sq = [](qfloat r) {
      const qfloat g = hermite_g0(r);
      return g * g;
    };
    E34Seeds out;
    out.e3 = integ.integrate(
        [&](qfloat r) { return g0sq(r) / (1 + r * r); }, (qfloat)0.0,
        (qfloat)14.0, tol);
    out.e4 = integ.integrate(
        [&](qfloat r) { return r * g0sq(r) / (1 + r * r); }, (qfloat)0.0,
        (qfloat)14.0, tol);
    return out;
  }();
  return s;
}

// hermite_overlap in quad precision, with P values supplied as running
// products (they only grow like sqrt(n); no overflow concern).
qfloat overlap_q(int m, int n, const std::vector<qfloat>& pq) {
  if ((m - n) % 2 == 0) return m == n ? (qfloat)1.0 : (qfloat)0.0;
  if (m % 2 == 1) std::swap(m, n);
  const int k = m / 2, j = (n - 1) / 2;
  return (qfloat)sign_pm(k - j + 1) * f_sqrt(2 * pq[k] * pq[j]) /
         ((qfloat)(2 * k - 2 * j - 1) * f_sqrt(f_pi<qfloat>() * (2 * k + 1)));
}

}  // namespace

ETable e34_tables(int max_m, int max_n) {
  if (max_m < 0 || max_n < 0)
    throw std::invalid_argument("e34_tables: negative extent");
  const int big = std::max(max_m, max_n);
  std::vector<qfloat> pq(big / 2 + 2);
  pq[0] = 1;
  for (std::size_t n = 1; n < pq.size(); ++n)
    pq[n] = pq[n - 1] * (1 + (qfloat)0.5 / (qfloat)n);

  const E34Seeds seeds = e34_seeds();
  Eigen::Matrix<qfloat, Eigen::Dynamic, Eigen::Dynamic> E3(big + 1, big + 1),
      E4(big + 1, big + 1);
  E3(0, 0) = seeds.e3;
  E4(0, 0) = seeds.e4;

  // March column n = 0 upward in m, mirror to row 0 (both integrands are
  // symmetric in (m, n)), then march every remaining column.
  const auto march = [&](int n) {
    for (int m = 0; m < big; ++m) {
      const qfloat p3 = m >= 1 ? E3(m - 1, n) : (qfloat)0.0;
      const qfloat p4 = m >= 1 ? E4(m - 1, n) : (qfloat)0.0;
      const qfloat sm = f_sqrt((qfloat)m), sm1 = f_sqrt((qfloat)(m + 1));
      const qfloat s2 = f_sqrt((qfloat)2.0);
      E3(m + 1, n) = (s2 * E4(m, n) - sm * p3) / sm1;
      E4(m + 1, n) =
          (s2 * overlap_q(m, n, pq) - s2 * E3(m, n) - sm * p4) / sm1;
    }
  };
  march(0);
  for (int m = 0; m <= big; ++m) {
    E3(0, m) = E3(m, 0);
    E4(0, m) = E4(m, 0);
  }
  for (int n = 1; n <= big; ++n) march(n);

  ETable out;
  out.e3.resize(max_m + 1, max_n + 1);
  out.e4.resize(max_m + 1, max_n + 1);
  for (int m = 0; m <= max_m; ++m)
    for (int n = 0; n <= max_n; ++n) {
      const double v3 = (double)E3(m, n), v4 = (double)E4(m, n);
      // |e3| <= 1 and |e4| <= 1/2 a priori; an escape means the recurrence
      // has blown up, which must abort rather than poison downstream tables.
      if (!std::isfinite(v3) || !std::isfinite(v4) ||
          std::abs(v3) > 1.0 + 1e-6 || std::abs(v4) > 0.5 + 1e-6) {
        std::ostringstream os;
        os << "e34_tables: recursion blow-up at (m, n) = (" << m << ", " << n
           << "): e3 = " << v3 << ", e4 = " << v4;
        throw std::runtime_error(os.str());
      }
      out.e3(m, n) = v3;
      out.e4(m, n) = v4;
    }
  return out;
}

FTerms f_terms(const PotentialSpec& pot, IndexPair pr, const ETable* etab) {
  require_nonneg(pr.k, pr.j, "f_terms");
  const int k = pr.k, j = pr.j;
  FTerms f;
  switch (pot.kind) {
    case PotentialKind::Free:
      return f;
    case PotentialKind::Coulomb: {
      const double g = pot.gamma;
      f.f1 = g * t_term(3, pr);
      f.f2 = g * g * t_term(6, pr);
      f.f3 = g * t_term(6, pr);
      f.f4 = g * t_term(5, pr);
      return f;
    }
    case PotentialKind::SubCoulomb: {
      const double g = pot.gamma, b = pot.beta;
      f.f1 = g * e2_subcoulomb(b, pr);
      f.f2 = g * g * e2_subcoulomb(2 * b, pr);
      f.f3 = g * e2_subcoulomb(b + 1, pr);
      f.f4 = g * e1_subcoulomb(b, pr);
      return f;
    }
    case PotentialKind::InverseHarmonic: {
      if (etab == nullptr)
        throw std::invalid_argument("f_terms: inverse harmonic needs an ETable");
      const int need = 2 * std::max(k, j) + 2;
      if (etab->e3.rows() <= need || etab->e3.cols() <= need)
        throw std::invalid_argument("f_terms: ETable extent insufficient");
      const double g = pot.gamma;
      const auto& e3 = etab->e3;
      const auto& e4 = etab->e4;
      const auto a_comb = [&](int a, int b2) {
        // A(a,b) = sqrt((2a+1)/2) E4(2a, 2b+1) - sqrt(a+1) E4(2a+2, 2b+1)
        return std::sqrt((2 * a + 1) / 2.0) * e4(2 * a, 2 * b2 + 1) -
               std::sqrt(a + 1.0) * e4(2 * a + 2, 2 * b2 + 1);
      };
      f.f1 = g * e3(2 * k + 1, 2 * j + 1);
      f.f2 = g * g * 0.5 *
             (e3(2 * k + 1, 2 * j + 1) - a_comb(k, j) - a_comb(j, k));
      f.f3 = g * (t_term(3, pr) - e4(2 * k + 1, 2 * j + 1));
      f.f4 = g * (std::sqrt((2 * k + 1) / 2.0) * e3(2 * k, 2 * j + 1) -
                  std::sqrt(k + 1.0) * e3(2 * k + 2, 2 * j + 1));
      return f;
    }
  }
  throw std::invalid_argument("f_terms: unknown potential kind");
}

KernelTable build_kernel_table(const PotentialSpec& pot, double kappa, int K) {
  if (K <= 0) throw std::invalid_argument("build_kernel_table: K <= 0");
  pot.validate();
  KernelTable t;
  t.potential = pot;
  t.kappa = kappa;

  Eigen::VectorXd lgP(K + 1), Pm(K + 1);
  for (int n = 0; n <= K; ++n) {
    lgP[n] = log_p(n);
    Pm[n] = std::exp(lgP[n]);
  }

  t.t1 = Eigen::MatrixXd::Identity(K, K);
  t.t2.resize(K, K);
  t.t3.resize(K, K);
  t.t4 = Eigen::MatrixXd::Zero(K, K);
  t.t5 = Eigen::MatrixXd::Zero(K, K);
  for (int kk = 0; kk < K; ++kk) {
    for (int j = 0; j < K; ++j)
      t.t2(kk, j) = kk == j ? 0.0
                            : 4.0 * sign_pm(kk - j + 1) * (kk - j) /
                                  (kSqrtPi * (2 * kk - 2 * j - 1) *
                                   (2 * kk - 2 * j + 1)) *
                                  std::exp(0.5 * (lgP[j] + lgP[kk]));
    t.t4(kk, kk) = 0.5 * (4 * kk + 3);
    if (kk >= 1) t.t4(kk, kk - 1) = -0.5 * std::sqrt(2.0 * kk * (2 * kk + 1));
    if (kk + 1 < K)
      t.t4(kk, kk + 1) = -0.5 * std::sqrt((2.0 * kk + 2) * (2 * kk + 3));
    t.t5(kk, kk) = 1.0;
    for (int j = kk + 1; j < K; ++j)
      t.t5(kk, j) = 2.0 * sign_pm(j - kk) * std::exp(0.5 * (lgP[kk] - lgP[j]));
  }
  // T3 column-wise with running prefix sums over m: O(K^2) total.
  for (int j = 0; j < K; ++j) {
    double acc = 0.0;
    for (int kk = 0; kk < K; ++kk) {
      acc += Pm[kk] / ((2 * kk + 1) * (2 * kk - 2 * j - 1.0));
      t.t3(kk, j) = 2.0 * sign_pm(kk - j + 1) *
                    std::exp(0.5 * (lgP[j] - lgP[kk])) / kSqrtPi * acc;
    }
  }
  t.t6 = t.t5 + t.t5.transpose();

  switch (pot.kind) {
    case PotentialKind::Free:
      t.f1 = t.f2 = t.f3 = t.f4 = Eigen::MatrixXd::Zero(K, K);
      break;
    case PotentialKind::Coulomb: {
      const double g = pot.gamma;
      t.f1 = g * t.t3;
      t.f2 = g * g * t.t6;
      t.f3 = g * t.t6;
      t.f4 = g * t.t5;
      break;
    }
    case PotentialKind::SubCoulomb: {
      // The alternating series behind these entries loses ~10^{0.85 min(k,j)}
      // digits to cancellation even in quad precision: measured absolute
      // error is ~8e-7 at index 32 but ~4e-3 by index 35.  Refuse extents
      // whose entries would be garbage.
      if (K > 33)
        throw std::invalid_argument(
            "build_kernel_table: sub-Coulomb tables are limited to 33 basis "
            "functions per component (series cancellation exhausts quad "
            "precision beyond index 32)");
      t.f1.resize(K, K);
      t.f2.resize(K, K);
      t.f3.resize(K, K);
      t.f4.resize(K, K);
      for (int kk = 0; kk < K; ++kk)
        for (int j = 0; j < K; ++j) {
          const FTerms f = f_terms(pot, {kk, j}, nullptr);
          t.f1(kk, j) = f.f1;
          t.f2(kk, j) = f.f2;
          t.f3(kk, j) = f.f3;
          t.f4(kk, j) = f.f4;
        }
      break;
    }
    case PotentialKind::InverseHarmonic: {
      const ETable etab = e34_tables(2 * K + 1, 2 * K + 1);
      t.f1.resize(K, K);
      t.f2.resize(K, K);
      t.f3.resize(K, K);
      t.f4.resize(K, K);
      for (int kk = 0; kk < K; ++kk)
        for (int j = 0; j < K; ++j) {
          const FTerms f = f_terms(pot, {kk, j}, &etab);
          t.f1(kk, j) = f.f1;
          t.f2(kk, j) = f.f2;
          t.f3(kk, j) = f.f3;
          t.f4(kk, j) = f.f4;
        }
      break;
    }
  }
  return t;
}

void write_table_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_table_csv: cannot open " + path);
  os << "k,j,value\n";
  char buf[48];
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(k, j));
      os << k << ',' << j << ',' << buf << '\n';
    }
}

}  // namespace spec2
