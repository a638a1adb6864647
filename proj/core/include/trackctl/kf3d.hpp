#pragma once

// Discrete Kalman filter whose extrapolation step is coupled to the LQR
// control law:
//
//   x-  = A x + B K_lqr (x_d - x)
//   P-  = A P A' + B D_u B' + G Q G'
//   d   = z - H x-
//   K   = P- H' (H P- H' + R)^{-1}
//   x+  = x- + K d
//   P+  = (I - K H) P-      (symmetrized; Joseph form optional)

#include <optional>

#include "trackctl/airframe.hpp"
#include "trackctl/matstack.hpp"

namespace trackctl {

struct NoiseSpec {
  Matrix q_process;  // covariance of w(k), p x p
  Matrix r_meas;     // covariance of v(k), q x q
  Matrix d_control;  // covariance of the control input, m x m

  /// Zero-filled spec sized for a model.
  static NoiseSpec zeros(const LinearModel& m);
  /// Checks symmetry and definiteness; r_meas PD only when `require_pd_r`.
  void validate(const LinearModel& m, bool require_pd_r = true) const;
};

enum class FilterPhase { posterior, prior };

struct FilterState {
  Vector x_est;
  Matrix p_cov;
  long k_step = 0;
  FilterPhase phase = FilterPhase::posterior;
  std::optional<Vector> last_innovation;
  std::optional<Matrix> last_gain;
};

struct FilterConfig {
  LinearModel model;  // discrete
  NoiseSpec noise;
  Matrix k_lqr;       // m x n
  Vector x_desired;   // n
  bool joseph_form = false;

  void validate() const;
};

class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FilterState kf_init(const FilterConfig& cfg, const Vector& x0, const Matrix& p0);

FilterState kf_predict(const FilterState& s, const FilterConfig& cfg);

Vector kf_innovation(const FilterState& prior, const Vector& z, const FilterConfig& cfg);

/// Solved through the transposed system S K' = H P-; never forms S^{-1}.
Matrix kf_gain(const FilterState& prior, const FilterConfig& cfg);

FilterState kf_update(const FilterState& prior, const Vector& z, const FilterConfig& cfg);

FilterState kf_step(const FilterState& s, const Vector& z, const FilterConfig& cfg);

}  // namespace trackctl
