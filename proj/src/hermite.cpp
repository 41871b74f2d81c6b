#include "spec2/hermite.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spec2 {

Eigen::MatrixXd hermite_g_values(int max_m, const Eigen::VectorXd& r) {
  if (max_m < 0) throw std::invalid_argument("hermite_g_values: max_m < 0");
  Eigen::MatrixXd g(max_m + 1, r.size());
  std::vector<double> col(max_m + 1);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    hermite_g_column(max_m, r[i], col.data());
    for (int m = 0; m <= max_m; ++m) g(m, i) = col[m];
  }
  return g;
}

Eigen::MatrixXd phi_values(int max_k, const Eigen::VectorXd& r) {
  const Eigen::MatrixXd g = hermite_g_values(2 * max_k + 1, r);
  Eigen::MatrixXd phi(max_k + 1, r.size());
  for (int k = 0; k <= max_k; ++k) phi.row(k) = g.row(2 * k + 1);
  return phi;
}

double phi_value(int k, double r) {
  std::vector<double> col(2 * k + 2);
  hermite_g_column(2 * k + 1, r, col.data());
  return col[2 * k + 1];
}

double phi_derivative(int k, double r) {
  std::vector<double> col(2 * k + 3);
  hermite_g_column(2 * k + 2, r, col.data());
  return std::sqrt((2 * k + 1) / 2.0) * col[2 * k] -
         std::sqrt(k + 1.0) * col[2 * k + 2];
}

}  // namespace spec2
