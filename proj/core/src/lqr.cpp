#include "trackctl/lqr.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace trackctl {

LqrDesign lqr_gain(const LinearModel& m, const Matrix& q, const Matrix& r,
                   const LinalgTolerances& tol) {
  if (m.is_discrete) {
    throw std::invalid_argument("lqr_gain: synthesis needs the continuous model");
  }
  m.validate();
  LqrDesign design;
  design.q_weight = q;
  design.r_weight = r;
  design.p_solution = solve_care(m.a, m.b, q, r, tol);
  design.k_gain = solve_linear(r, m.b.transpose() * design.p_solution);
  return design;
}

double lqr_cost(std::span<const CostSample> trace, const Matrix& q, const Matrix& r,
                double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("lqr_cost: dt must be positive");
  if (q.rows() != q.cols() || r.rows() != r.cols()) {
    throw DimensionError("lqr_cost: weights must be square");
  }
  double sum = 0.0;
  for (const auto& sample : trace) {
    if (sample.x.size() != q.rows() || sample.u.size() != r.rows()) {
      throw DimensionError(fmt::format(
          "lqr_cost: sample of sizes ({}, {}) does not match weights ({}, {})",
          sample.x.size(), sample.u.size(), q.rows(), r.rows()));
    }
    sum += sample.x.dot(q * sample.x) + sample.u.dot(r * sample.u);
  }
  return 0.5 * sum * dt;
}

Matrix closed_loop_matrix(const LinearModel& m, const Matrix& k) {
  if (k.rows() != m.b.cols() || k.cols() != m.a.rows()) {
    throw DimensionError(fmt::format("closed_loop_matrix: gain is {}x{}, expected {}x{}",
                                     k.rows(), k.cols(), m.b.cols(), m.a.rows()));
  }
  return m.a - mat_mul(m.b, k);
}

}  // namespace trackctl
