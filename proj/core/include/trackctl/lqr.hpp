#pragma once

// Continuous-time LQR synthesis and quadratic cost evaluation.

#include <span>
#include <utility>

#include "trackctl/airframe.hpp"
#include "trackctl/matstack.hpp"

namespace trackctl {

struct LqrDesign {
  Matrix q_weight;
  Matrix r_weight;
  Matrix p_solution;
  Matrix k_gain;
};

/// P from the continuous Riccati equation and K = R^{-1} B^T P. The model
/// must be continuous; the resulting gain is applied unchanged across a
/// discretized loop.
LqrDesign lqr_gain(const LinearModel& m, const Matrix& q, const Matrix& r,
                   const LinalgTolerances& tol = {});

/// One sample of a state/control trajectory.
struct CostSample {
  Vector x;
  Vector u;
};

/// J = 1/2 sum (x'Qx + u'Ru) dt, rectangle rule.
double lqr_cost(std::span<const CostSample> trace, const Matrix& q, const Matrix& r,
                double dt);

/// A - B K
Matrix closed_loop_matrix(const LinearModel& m, const Matrix& k);

}  // namespace trackctl
