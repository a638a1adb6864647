#include "trackctl/matstack.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <fmt/format.h>

namespace trackctl {

namespace {

std::string shape(const Matrix& m) { return fmt::format("{}x{}", m.rows(), m.cols()); }

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DimensionError(fmt::format("{} must be square, got {}", name, shape(m)));
  }
}

// Relative rank with a threshold on singular values.
template <typename Mat>
int numeric_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError(
        fmt::format("mat_mul: cannot multiply {} by {}", shape(a), shape(b)));
  }
  return a * b;
}

Matrix solve_linear(const Matrix& a, const Matrix& b, double rel_pivot) {
  require_square(a, "solve_linear: a");
  if (b.rows() != a.rows()) {
    throw DimensionError(fmt::format(
        "solve_linear: rhs has {} rows, system is {}", b.rows(), shape(a)));
  }
  const Eigen::Index n = a.rows();
  Matrix lu = a;
  Matrix x = b;
  const double scale = a.cwiseAbs().maxCoeff();
  const double threshold = rel_pivot * scale;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot_row = k;
    lu.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot_row);
    pivot_row += k;
    const double pivot = std::abs(lu(pivot_row, k));
    if (!(pivot > threshold) || pivot == 0.0) {
      throw SingularMatrixError(
          fmt::format("solve_linear: matrix is singular to working precision "
                      "(pivot {:.3e} at column {}, threshold {:.3e})",
                      pivot, k, threshold),
          pivot);
    }
    if (pivot_row != k) {
      lu.row(k).swap(lu.row(pivot_row));
      x.row(k).swap(x.row(pivot_row));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      if (factor == 0.0) continue;
      lu.row(i).tail(n - k) -= factor * lu.row(k).tail(n - k);
      x.row(i) -= factor * x.row(k);
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (k + 1 < n) {
      x.row(k) -= lu.row(k).tail(n - k - 1) * x.bottomRows(n - k - 1);
    }
    x.row(k) /= lu(k, k);
  }
  return x;
}

std::vector<ComplexPair> eigenvalues(const Matrix& a, int max_iterations_per_row) {
  require_square(a, "eigenvalues: a");
  if (a.rows() > 64) {
    throw DimensionError(
        fmt::format("eigenvalues: size {} exceeds the supported 64", a.rows()));
  }
  if (!all_finite(a)) {
    throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  }
  std::vector<ComplexPair> out;
  if (a.rows() == 0) return out;

  const Eigen::Index cap = max_iterations_per_row * a.rows();
  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(cap);
  solver.compute(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError(fmt::format(
        "eigenvalues: shifted QR did not converge within {} iterations", cap));
  }
  const auto& ev = solver.eigenvalues();
  out.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    out.push_back({ev(i).real(), ev(i).imag()});
  }
  std::sort(out.begin(), out.end(), [](const ComplexPair& l, const ComplexPair& r) {
    return l.re != r.re ? l.re < r.re : l.im < r.im;
  });
  return out;
}

double spectral_abscissa(const Matrix& a) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues(a)) best = std::max(best, ev.re);
  return best;
}

bool is_stabilizable(const Matrix& a, const Matrix& b) {
  require_square(a, "is_stabilizable: a");
  if (b.rows() != a.rows()) {
    throw DimensionError("is_stabilizable: b rows must match a");
  }
  using CMatrix = Eigen::MatrixXcd;
  const Eigen::Index n = a.rows();
  const double scale = 1.0 + a.norm();
  for (const auto& ev : eigenvalues(a)) {
    if (ev.re < -1e-10 * scale) continue;
    CMatrix pbh(n, n + b.cols());
    pbh.leftCols(n) = a.cast<std::complex<double>>();
    pbh.leftCols(n).diagonal().array() -= std::complex<double>(ev.re, ev.im);
    pbh.rightCols(b.cols()) = b.cast<std::complex<double>>();
    if (numeric_rank(pbh, 1e-10) < n) return false;
  }
  return true;
}

int controllability_rank(const Matrix& a, const Matrix& b) {
  require_square(a, "controllability_rank: a");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.cols();
  Matrix ctrb(n, n * m);
  Matrix block = b;
  for (Eigen::Index k = 0; k < n; ++k) {
    // Column-normalize each Krylov block so the rank test is scale-free.
    Matrix scaled = block;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
      const double nrm = scaled.col(j).norm();
      if (nrm > 0.0) scaled.col(j) /= nrm;
    }
    ctrb.middleCols(k * m, m) = scaled;
    block = a * block;
  }
  return numeric_rank(ctrb, 1e-10);
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& c) {
  require_square(a, "solve_lyapunov: a");
  if (c.rows() != a.rows() || c.cols() != a.cols()) {
    throw DimensionError("solve_lyapunov: c must match a");
  }
  const Eigen::Index n = a.rows();
  using Complex = std::complex<double>;
  // Bartels-Stewart on the complex Schur form A = U T U^H. With Y = U^H X U
  // the equation becomes T^H Y + Y T = -U^H C U, solved one column at a
  // time by forward substitution.
  Eigen::ComplexSchur<Matrix> schur(a);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("solve_lyapunov: Schur decomposition did not converge");
  }
  const Eigen::MatrixXcd& u = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd rhs = -(u.adjoint() * c.cast<Complex>() * u);
  const double floor = 1e-14 * (1.0 + t.norm());

  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd col = rhs.col(j);
    for (Eigen::Index k = 0; k < j; ++k) col -= t(k, j) * y.col(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = col(i);
      for (Eigen::Index l = 0; l < i; ++l) acc -= std::conj(t(l, i)) * y(l, j);
      const Complex pivot = std::conj(t(i, i)) + t(j, j);
      if (std::abs(pivot) <= floor) {
        throw SingularMatrixError(
            fmt::format("solve_lyapunov: eigenvalues {} and {} sum to zero; no unique solution",
                        i, j),
            std::abs(pivot));
      }
      y(i, j) = acc / pivot;
    }
  }
  const Matrix x = (u * y * u.adjoint()).real();
  return symmetrize(x);
}

double care_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p) {
  const Matrix rinv_bt_p = solve_linear(r, b.transpose() * p);
  return (a.transpose() * p + p * a - p * b * rinv_bt_p + q).norm();
}

namespace {

// Kleinman-Newton from a stabilizing gain k0. Returns the iterate with the
// smallest residual once it is at or below `target`.
Matrix kleinman_newton(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                       const Matrix& rinv_bt, Matrix k, const LinalgTolerances& tol,
                       double margin, double target) {
  const Eigen::Index n = a.rows();
  Matrix p = Matrix::Zero(n, n);
  Matrix best_p;
  double best_residual = std::numeric_limits<double>::infinity();
  double best_scale = 1.0;
  int stalls = 0;
  for (int iter = 0; iter < tol.care_max_iterations; ++iter) {
    const Matrix closed = a - b * k;
    if (spectral_abscissa(closed) >= -margin) {
      throw StabilizabilityError(fmt::format(
          "solve_care: Newton iterate {} lost closed-loop stability", iter));
    }
    const Matrix next = solve_lyapunov(closed, q + k.transpose() * r * k);
    const double change = (next - p).norm();
    p = next;
    k = rinv_bt * p;
    const double residual = care_residual(a, b, q, r, p);
    if (residual < best_residual) {
      best_residual = residual;
      best_p = p;
      // Size of the individual terms; rounding makes residuals below about
      // eps times this unreachable.
      best_scale = q.norm() + 2.0 * (a.transpose() * p).norm() + (p * b * k).norm();
      stalls = 0;
    } else {
      ++stalls;
    }
    // Quadratic convergence ends at the rounding floor; stop once the target
    // is met and further sweeps no longer help.
    if (best_residual <= target && (stalls > 0 || change <= 1e-13 * (1.0 + p.norm()))) break;
    if (stalls >= 3) break;
  }
  if (!(best_residual <= target) && !(best_residual <= tol.care_residual * best_scale)) {
    throw ConvergenceError(fmt::format(
        "solve_care: Kleinman-Newton did not reach residual {:.3e} within {} "
        "iterations (best {:.3e})",
        target, tol.care_max_iterations, best_residual));
  }
  return best_p;
}

// Stabilizing gain by continuation in a spectral shift: K = 0 stabilizes
// A - sigma I for sigma past the abscissa; each Riccati solution at sigma
// then seeds the next, smaller shift until A - B K itself is Hurwitz.
Matrix continuation_seed(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                         const Matrix& rinv_bt, const LinalgTolerances& tol, double margin) {
  const Eigen::Index n = a.rows();
  const Matrix eye = Matrix::Identity(n, n);
  const double target = tol.care_residual * (1.0 + q.norm());
  double sigma = std::max(0.0, spectral_abscissa(a)) + 1.0;
  Matrix k = Matrix::Zero(b.cols(), n);
  for (int step = 0; step < 200; ++step) {
    const Matrix p = kleinman_newton(a - sigma * eye, b, q, r, rinv_bt, k, tol, margin, target);
    k = rinv_bt * p;
    const double closed = spectral_abscissa(a - b * k);
    if (closed < -margin) return k;
    sigma = closed + 0.1 * (sigma - closed);
  }
  throw StabilizabilityError("solve_care: shift continuation did not reach a stabilizing gain");
}

}  // namespace

Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                  const Matrix& r, const LinalgTolerances& tol) {
  require_square(a, "solve_care: a");
  const Eigen::Index n = a.rows();
  if (n > 16) {
    throw DimensionError(fmt::format("solve_care: n = {} exceeds 16", n));
  }
  if (b.rows() != n) {
    throw DimensionError(fmt::format("solve_care: b is {}, expected {} rows", shape(b), n));
  }
  if (q.rows() != n || q.cols() != n) {
    throw DimensionError(fmt::format("solve_care: q is {}, expected {}x{}", shape(q), n, n));
  }
  const Eigen::Index m = b.cols();
  if (r.rows() != m || r.cols() != m) {
    throw DimensionError(fmt::format("solve_care: r is {}, expected {}x{}", shape(r), m, m));
  }
  if (!is_symmetric(q, 1e-10 * (1.0 + q.norm()))) {
    throw std::invalid_argument("solve_care: q must be symmetric");
  }
  if (min_symmetric_eigenvalue(q) < -1e-10 * (1.0 + q.norm())) {
    throw std::invalid_argument("solve_care: q must be positive semidefinite");
  }
  if (!is_symmetric(r, 1e-10 * (1.0 + r.norm())) ||
      Eigen::LLT<Matrix>(r).info() != Eigen::Success) {
    throw std::invalid_argument("solve_care: r must be symmetric positive definite");
  }
  if (!is_stabilizable(a, b)) {
    throw StabilizabilityError(
        "solve_care: (A, B) fails the PBH stabilizability test");
  }

  const Matrix rinv_bt = solve_linear(r, b.transpose());
  const double margin = 1e-9 * (1.0 + a.norm());
  const double target = tol.care_residual * (1.0 + q.norm());
  const Matrix eye = Matrix::Identity(n, n);

  Matrix k = Matrix::Zero(m, n);
  if (spectral_abscissa(a) >= -margin) {
    // Bass: with beta beyond every |Re lambda|, -(A + beta I) is Hurwitz, the
    // Lyapunov solution Z is PSD and K = R^-1 B' Z^+ moves the controllable
    // spectrum left of -beta. Cheap, but Z inherits the conditioning of the
    // reachability Gramian.
    double beta = 0.0;
    for (const auto& ev : eigenvalues(a)) beta = std::max(beta, std::abs(ev.re));
    beta += 1.0;
    const Matrix z = solve_lyapunov(-(a + beta * eye).transpose(), 2.0 * b * rinv_bt);
    k = rinv_bt * z.completeOrthogonalDecomposition().pseudoInverse();
    if (!k.allFinite() || spectral_abscissa(a - b * k) >= -margin) {
      k = continuation_seed(a, b, q, r, rinv_bt, tol, margin);
    }
  }
  return kleinman_newton(a, b, q, r, rinv_bt, k, tol, margin, target);
}

double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_symmetric_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace trackctl
