#pragma once

// Dense linear-algebra kernels shared by every other module.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace trackctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by solve_linear when elimination meets a pivot below working
/// precision. Carries the offending pivot magnitude.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  double pivot() const { return pivot_; }

 private:
  double pivot_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (A, B) failed a stabilizability test, or the Newton iteration lost its
/// stabilizing property.
class StabilizabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ComplexPair {
  double re = 0.0;
  double im = 0.0;
};

struct LinalgTolerances {
  double solve_rel_pivot = 1e-13;
  int eigen_max_iterations_per_row = 40;
  double care_residual = 1e-8;
  int care_max_iterations = 100;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);

/// Gaussian elimination with partial pivoting. Throws SingularMatrixError if
/// a pivot falls below `rel_pivot` times the largest entry of `a`.
Matrix solve_linear(const Matrix& a, const Matrix& b,
                    double rel_pivot = LinalgTolerances{}.solve_rel_pivot);

/// All eigenvalues of a square matrix (n <= 64), sorted by (re, im)
/// ascending.
std::vector<ComplexPair> eigenvalues(
    const Matrix& a,
    int max_iterations_per_row = LinalgTolerances{}.eigen_max_iterations_per_row);

/// Largest real part of the spectrum.
double spectral_abscissa(const Matrix& a);

/// Checks the PBH rank test on every eigenvalue with Re >= 0.
bool is_stabilizable(const Matrix& a, const Matrix& b);

/// Rank of [B, AB, ..., A^{n-1}B].
int controllability_rank(const Matrix& a, const Matrix& b);

/// Solves A^T X + X A = -C for symmetric C (Bartels-Stewart on the complex
/// Schur form). Throws SingularMatrixError if two eigenvalues of A sum to
/// zero.
Matrix solve_lyapunov(const Matrix& a, const Matrix& c);

/// Continuous algebraic Riccati equation
///   A^T P + P A - P B R^{-1} B^T P + Q = 0
/// by Kleinman-Newton iteration. The stabilizing seed comes from a shifted
/// Lyapunov construction (Bass), falling back to continuation in a spectral
/// shift, so A need not be Hurwitz. Converged means a residual within
/// tol.care_residual * (1 + ||Q||_F), or, when rounding puts that out of
/// reach, within tol.care_residual times the size of the equation's terms.
/// Returns the symmetric stabilizing solution.
Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q,
                  const Matrix& r, const LinalgTolerances& tol = {});

/// ||A^T P + P A - P B R^{-1} B^T P + Q||_F
double care_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& r, const Matrix& p);

double inf_norm(const Matrix& m);

Matrix symmetrize(const Matrix& m);

/// Smallest eigenvalue of the symmetric part.
double min_symmetric_eigenvalue(const Matrix& m);

bool is_symmetric(const Matrix& m, double tol);

bool all_finite(const Matrix& m);

}  // namespace trackctl
