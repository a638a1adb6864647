#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "trackctl/matstack.hpp"

using namespace trackctl;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Smallest singular value of (a - lambda I): residual of the best associated
// unit vector.
double eigen_residual(const Matrix& a, ComplexPair ev) {
  Eigen::MatrixXcd shifted = a.cast<std::complex<double>>();
  shifted.diagonal().array() -= std::complex<double>(ev.re, ev.im);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
  return svd.singularValues().tail(1)(0);
}

// Absolute residual bound for well-scaled solutions; large P puts the
// rounding floor above it, so fall back to the bound relative to the terms.
bool care_residual_ok(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                      const Matrix& p) {
  const double residual = care_residual(a, b, q, r, p);
  if (p.norm() <= 1e3) return residual <= 1e-8 * (1.0 + q.norm());
  const Matrix k = r.llt().solve(b.transpose() * p);
  const double scale = q.norm() + 2.0 * (a.transpose() * p).norm() + (p * b * k).norm();
  return residual <= 1e-8 * scale;
}

}  // namespace

TEST(MatMul, IdentityLeavesMatrixUnchanged) {
  const Matrix m = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 10}});
  EXPECT_EQ(mat_mul(Matrix::Identity(3, 3), m), m);
}

TEST(MatMul, HandArithmetic) {
  EXPECT_EQ(mat_mul(mat({{1, 2}, {3, 4}}), mat({{0}, {1}})), mat({{2}, {4}}));
}

TEST(MatMul, MatchesTripleLoop) {
  std::mt19937_64 rng(11);
  const Matrix a = oracle::random_matrix(rng, 5, 5);
  const Matrix b = oracle::random_matrix(rng, 5, 5);
  const Matrix expected = oracle::naive_matmul(a, b);
  EXPECT_LE((mat_mul(a, b) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(MatMul, RejectsNonConformingShapes) {
  EXPECT_THROW(mat_mul(Matrix::Zero(2, 3), Matrix::Zero(2, 3)), DimensionError);
}

TEST(MatMul, AssociativityProperty) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = dim(rng), q = dim(rng), r = dim(rng), s = dim(rng);
    const Matrix a = oracle::random_matrix(rng, p, q);
    const Matrix b = oracle::random_matrix(rng, q, r);
    const Matrix c = oracle::random_matrix(rng, r, s);
    const Matrix left = mat_mul(mat_mul(a, b), c);
    const Matrix right = mat_mul(a, mat_mul(b, c));
    const double scale = 1.0 + inf_norm(a) * inf_norm(b) * inf_norm(c);
    EXPECT_LE(inf_norm(left - right), 1e-9 * scale);
  }
}

TEST(SolveLinear, IdentitySystem) {
  const Matrix b = mat({{1, -2}, {3, 4}, {5, 6}});
  EXPECT_EQ(solve_linear(Matrix::Identity(3, 3), b), b);
}

TEST(SolveLinear, DiagonalSystem) {
  const Matrix x = solve_linear(mat({{2, 0}, {0, 4}}), mat({{2}, {8}}));
  EXPECT_DOUBLE_EQ(x(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(x(1, 0), 2.0);
}

TEST(SolveLinear, RandomSpdResidual) {
  std::mt19937_64 rng(3);
  const Matrix a = oracle::random_spd(rng, 6);
  const Matrix b = oracle::random_matrix(rng, 6, 2);
  const Matrix x = solve_linear(a, b);
  EXPECT_LE(inf_norm(a * x - b), 1e-10 * (1.0 + inf_norm(b)));
}

TEST(SolveLinear, NeedsPivoting) {
  // Zero leading entry: fails without row exchange.
  const Matrix x = solve_linear(mat({{0, 1}, {1, 0}}), mat({{3}, {7}}));
  EXPECT_DOUBLE_EQ(x(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(x(1, 0), 3.0);
}

TEST(SolveLinear, SingularReportsPivot) {
  try {
    solve_linear(mat({{1, 2}, {2, 4}}), mat({{1}, {1}}));
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_LT(e.pivot(), 1e-12);
    EXPECT_NE(std::string(e.what()).find("pivot"), std::string::npos);
  }
}

TEST(SolveLinear, RejectsShapes) {
  EXPECT_THROW(solve_linear(Matrix::Zero(2, 3), Matrix::Zero(2, 1)), DimensionError);
  EXPECT_THROW(solve_linear(Matrix::Identity(2, 2), Matrix::Zero(3, 1)), DimensionError);
}

TEST(SolveLinear, RecoversRhsForModerateConditioning) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    // Orthogonal factors around singular values in [1, 1e6].
    const Matrix u = oracle::random_matrix(rng, n, n).householderQr().householderQ();
    const Matrix v = oracle::random_matrix(rng, n, n).householderQr().householderQ();
    Vector sv = Vector::LinSpaced(n, 0.0, 6.0).unaryExpr([](double e) { return std::pow(10.0, e); });
    const Matrix a = u * sv.asDiagonal() * v.transpose();
    const Matrix b = oracle::random_matrix(rng, n, 1);
    const Matrix x = solve_linear(a, b);
    EXPECT_LE(inf_norm(a * x - b), 1e-10 * (1.0 + inf_norm(b)) * inf_norm(a));
  }
}

TEST(Eigenvalues, DiagonalMatrix) {
  const Matrix d = Vector{{3.0, 1.0, 2.0}}.asDiagonal();
  const auto ev = eigenvalues(d);
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_DOUBLE_EQ(ev[0].re, 1.0);
  EXPECT_DOUBLE_EQ(ev[1].re, 2.0);
  EXPECT_DOUBLE_EQ(ev[2].re, 3.0);
  for (const auto& e : ev) EXPECT_EQ(e.im, 0.0);
}

TEST(Eigenvalues, RotationGenerator) {
  const auto ev = eigenvalues(mat({{0, 1}, {-1, 0}}));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0].re, 0.0, 1e-14);
  EXPECT_NEAR(ev[0].im, -1.0, 1e-14);
  EXPECT_NEAR(ev[1].im, 1.0, 1e-14);
}

TEST(Eigenvalues, ShortPeriodFactorCompanion) {
  const auto [r1, r2] = oracle::quadratic_roots(15.043, 78.0719);
  const auto ev = eigenvalues(oracle::companion({1.0, 15.043, 78.0719}));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0].re, r1.real(), 1e-10);
  EXPECT_NEAR(ev[0].im, -std::abs(r1.imag()), 1e-10);
  EXPECT_NEAR(ev[1].im, std::abs(r2.imag()), 1e-10);
  EXPECT_NEAR(ev[0].re, -7.5215, 1e-4);
  EXPECT_NEAR(ev[1].im, 4.6367, 1e-4);
}

TEST(Eigenvalues, SortedByRealThenImaginary) {
  const auto ev = eigenvalues(mat({{0, 1, 0}, {-1, 0, 0}, {0, 0, -2}}));
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_DOUBLE_EQ(ev[0].re, -2.0);
  EXPECT_LT(ev[1].im, ev[2].im);
}

TEST(Eigenvalues, ResidualOfAssociatedVector) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 10;
    const Matrix a = oracle::random_matrix(rng, n, n);
    for (const auto& ev : eigenvalues(a)) {
      EXPECT_LE(eigen_residual(a, ev), 1e-8 * a.norm());
    }
  }
}

TEST(Eigenvalues, CompanionMatchesFactorRoots) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double b1 = coef(rng), c1 = coef(rng), b2 = coef(rng), c2 = coef(rng);
    const auto poly = oracle::poly_mul({1.0, b1, c1}, {1.0, b2, c2});
    const auto [r1, r2] = oracle::quadratic_roots(b1, c1);
    const auto [r3, r4] = oracle::quadratic_roots(b2, c2);
    std::vector<std::complex<double>> expected{r1, r2, r3, r4};
    auto ev = eigenvalues(oracle::companion(poly));
    ASSERT_EQ(ev.size(), 4u);
    // Every expected root has a match within tolerance.
    for (const auto& root : expected) {
      double best = 1e300;
      for (const auto& e : ev) best = std::min(best, std::abs(root - std::complex<double>(e.re, e.im)));
      // Repeated roots lose half the digits; skip near-degenerate draws.
      double separation = 1e300;
      for (const auto& other : expected) {
        if (&other != &root) separation = std::min(separation, std::abs(root - other));
      }
      if (separation > 1e-2) EXPECT_LE(best, 1e-6) << "trial " << trial;
    }
  }
}

TEST(Eigenvalues, RejectsOversize) {
  EXPECT_THROW(eigenvalues(Matrix::Identity(65, 65)), DimensionError);
  EXPECT_THROW(eigenvalues(Matrix::Zero(2, 3)), DimensionError);
}

TEST(Eigenvalues, ReportsIterationCap) {
  std::mt19937_64 rng(2);
  const Matrix a = oracle::random_matrix(rng, 12, 12);
  try {
    eigenvalues(a, 0);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("0 iterations"), std::string::npos);
  }
}

TEST(SolveCare, ScalarIntegrator) {
  const Matrix p = solve_care(Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1),
                              Matrix::Ones(1, 1));
  EXPECT_NEAR(p(0, 0), 1.0, 1e-12);
}

TEST(SolveCare, DoubleIntegratorMatchesHamiltonianOracle) {
  const Matrix a = mat({{0, 1}, {0, 0}});
  const Matrix b = mat({{0}, {1}});
  const Matrix q = Matrix::Identity(2, 2);
  const Matrix r = Matrix::Identity(1, 1);
  const Matrix p = solve_care(a, b, q, r);
  const Matrix expected = oracle::care_hamiltonian(a, b, q, r);
  EXPECT_LE((p - expected).cwiseAbs().maxCoeff(), 1e-9);
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(p(0, 0), s3, 1e-9);
  EXPECT_NEAR(p(0, 1), 1.0, 1e-9);
  EXPECT_NEAR(p(1, 1), s3, 1e-9);
}

TEST(SolveCare, ZeroCostOnHurwitzSystemIsZero) {
  const Matrix a = mat({{-1, 2}, {0, -3}});
  const Matrix p = solve_care(a, mat({{1}, {1}}), Matrix::Zero(2, 2), Matrix::Identity(1, 1));
  EXPECT_LE(p.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SolveCare, StabilizableButUncontrollable) {
  // The first mode is stable and unreachable from the input.
  const Matrix a = mat({{-1, 0}, {0, 1}});
  const Matrix b = mat({{0}, {1}});
  const Matrix q = Matrix::Identity(2, 2);
  const Matrix r = Matrix::Identity(1, 1);
  const Matrix p = solve_care(a, b, q, r);
  EXPECT_LE(care_residual(a, b, q, r, p), 1e-8 * (1.0 + q.norm()));
  EXPECT_LE((p - oracle::care_hamiltonian(a, b, q, r)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SolveCare, RejectsUnstabilizablePair) {
  const Matrix a = mat({{1, 0}, {0, -1}});
  const Matrix b = mat({{0}, {1}});
  try {
    solve_care(a, b, Matrix::Identity(2, 2), Matrix::Identity(1, 1));
    FAIL() << "expected StabilizabilityError";
  } catch (const StabilizabilityError& e) {
    EXPECT_NE(std::string(e.what()).find("PBH"), std::string::npos);
  }
}

TEST(SolveCare, RejectsIndefiniteWeights) {
  const Matrix a = mat({{0, 1}, {0, 0}});
  const Matrix b = mat({{0}, {1}});
  EXPECT_THROW(solve_care(a, b, Matrix::Identity(2, 2), -Matrix::Identity(1, 1)),
               std::invalid_argument);
  EXPECT_THROW(solve_care(a, b, -Matrix::Identity(2, 2), Matrix::Identity(1, 1)),
               std::invalid_argument);
}

TEST(SolveCare, RandomSystemsProperties) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    const int m = 1 + trial % 3;
    const Matrix a = oracle::random_matrix(rng, n, n);
    const Matrix b = oracle::random_matrix(rng, n, m);
    const Matrix q = oracle::random_psd(rng, n, n) + 0.01 * Matrix::Identity(n, n);
    const Matrix r = oracle::random_spd(rng, m);
    const Matrix p = solve_care(a, b, q, r);
    EXPECT_TRUE(care_residual_ok(a, b, q, r, p)) << "trial " << trial;
    EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + p.norm()));
    EXPECT_GE(min_symmetric_eigenvalue(p), -1e-10 * (1.0 + p.norm()));
    const Matrix expected = oracle::care_hamiltonian(a, b, q, r);
    EXPECT_LE((p - expected).norm(), 1e-6 * (1.0 + expected.norm())) << "trial " << trial;
  }
}

TEST(Lyapunov, SolvesContinuousEquation) {
  std::mt19937_64 rng(8);
  const Matrix a = oracle::random_matrix(rng, 4, 4) - 4.0 * Matrix::Identity(4, 4);
  const Matrix c = oracle::random_spd(rng, 4);
  const Matrix x = solve_lyapunov(a, c);
  EXPECT_LE((a.transpose() * x + x * a + c).norm(), 1e-10 * (1.0 + c.norm()));
}

TEST(Controllability, RankOfDoubleIntegrator) {
  EXPECT_EQ(controllability_rank(mat({{0, 1}, {0, 0}}), mat({{0}, {1}})), 2);
  EXPECT_EQ(controllability_rank(mat({{-1, 0}, {0, 1}}), mat({{0}, {1}})), 1);
}

TEST(SolveCare, IllConditionedSingleInputSystems) {
  // Single-input reachability Gramians of this size are too ill-conditioned
  // for a Gramian-based seed alone.
  std::mt19937_64 rng(1);
  for (int n : {8, 10, 12, 14, 16}) {
    const Matrix a = oracle::random_matrix(rng, n, n);
    const Matrix b = oracle::random_matrix(rng, n, 1);
    const Matrix q = Matrix::Identity(n, n);
    const Matrix r = Matrix::Identity(1, 1);
    const Matrix p = solve_care(a, b, q, r);
    EXPECT_TRUE(care_residual_ok(a, b, q, r, p)) << "n = " << n;
    EXPECT_LT(spectral_abscissa(a - b * (b.transpose() * p)), 0.0) << "n = " << n;
  }
}
