#pragma once

// Test-only reference computations. Deliberately independent of the
// library's implementation paths.

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

/// Stabilizing CARE solution from the stable invariant subspace of the
/// Hamiltonian [[A, -B R^-1 B'], [-Q, -A']].
inline Matrix care_hamiltonian(const Matrix& a, const Matrix& b, const Matrix& q,
                               const Matrix& r) {
  const Eigen::Index n = a.rows();
  Matrix h(2 * n, 2 * n);
  h << a, -b * r.inverse() * b.transpose(), -q, -a.transpose();
  Eigen::ComplexEigenSolver<Matrix> solver(h);
  Eigen::MatrixXcd stable(2 * n, n);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < 2 * n && col < n; ++i) {
    if (solver.eigenvalues()(i).real() < 0.0) stable.col(col++) = solver.eigenvectors().col(i);
  }
  const Eigen::MatrixXcd u1 = stable.topRows(n);
  const Eigen::MatrixXcd u2 = stable.bottomRows(n);
  return (u2 * u1.inverse()).real();
}

/// Roots of s^2 + b s + c.
inline std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double b,
                                                                            double c) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4.0 * c, 0.0));
  return {(-b - disc) / 2.0, (-b + disc) / 2.0};
}

/// Companion matrix of a monic polynomial given highest degree first.
inline Matrix companion(const std::vector<double>& coeffs) {
  const auto n = static_cast<Eigen::Index>(coeffs.size()) - 1;
  Matrix c = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) c(0, k) = -coeffs[static_cast<std::size_t>(k + 1)];
  for (Eigen::Index k = 1; k < n; ++k) c(k, k - 1) = 1.0;
  return c;
}

inline std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c,
                            double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double floor = 0.1) {
  const Matrix g = random_matrix(rng, n, n);
  return g * g.transpose() + floor * Matrix::Identity(n, n);
}

inline Matrix random_psd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const Matrix g = random_matrix(rng, n, rank);
  return g * g.transpose();
}

}  // namespace oracle
