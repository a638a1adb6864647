#pragma once

// Longitudinal airframe model: construction, Euler discretization and
// stability analysis.

#include <optional>
#include <string>
#include <vector>

#include "trackctl/matstack.hpp"

namespace trackctl {

/// Longitudinal state indices, x = [u w q theta h].
namespace longitudinal {
inline constexpr int kU = 0;
inline constexpr int kW = 1;
inline constexpr int kQ = 2;
inline constexpr int kTheta = 3;
inline constexpr int kHeight = 4;
inline constexpr int kStates = 5;
inline constexpr int kCoreStates = 4;
inline constexpr int kElevator = 0;
inline constexpr int kThrottle = 1;
inline constexpr int kInputs = 2;
}  // namespace longitudinal

struct StateVector {
  double u = 0.0;      // forward speed, m/s
  double w = 0.0;      // vertical speed, m/s
  double q = 0.0;      // pitch rate, rad/s
  double theta = 0.0;  // pitch angle, rad
  double h = 0.0;      // height above ground, m

  Vector to_vector() const;
  /// theta is wrapped to (-pi, pi].
  static StateVector from_vector(const Vector& x);
};

struct ControlInput {
  double delta_e = 0.0;  // elevator, rad
  double delta_t = 0.0;  // throttle

  Vector to_vector() const;
};

double wrap_angle(double rad);

enum class HeightRow {
  printed,   // [-sin th0, -cos th0, 0, 1, 0]
  standard,  // [ sin th0, -cos th0, 0, 0, 0]
};

struct StabilityDerivatives {
  double Xu = 0.0, Xw = 0.0, Xq = 0.0;
  double Zu = 0.0, Zw = 0.0, Zq = 0.0;
  double Mu = 0.0, Mw = 0.0, Mq = 0.0;
  double Xde = 0.0, Xdt = 0.0, Zde = 0.0, Mde = 0.0;
  double g = 9.81;
  double theta0 = 0.0;
  HeightRow height_row = HeightRow::printed;

  /// Throws std::invalid_argument on non-finite values or g <= 0.
  void validate() const;

  /// Derivatives whose flight core reproduces the short-period factor
  /// s^2 + 15.043 s + 78.0719 and the phugoid factor s^2 + 0.587 s + 1.1174.
  static StabilityDerivatives demonstration();
};

struct LinearModel {
  Matrix a;
  Matrix b;
  Matrix g_noise;
  Matrix h_meas;
  bool is_discrete = false;
  std::optional<double> dt;

  int states() const { return static_cast<int>(a.rows()); }
  int inputs() const { return static_cast<int>(b.cols()); }
  int noise_inputs() const { return static_cast<int>(g_noise.cols()); }
  int outputs() const { return static_cast<int>(h_meas.rows()); }

  /// Checks shape consistency among A, B, G, H and the dt invariant.
  void validate() const;
};

LinearModel build_longitudinal_model(const StabilityDerivatives& d);

/// Planar double integrator per axis: x = [px vx py vy], u = [ax ay].
/// Process noise enters as acceleration (G maps onto the velocity rows).
LinearModel build_planar_model();

/// A_d = I + dt A, B_d = dt B, G_d = dt G, H unchanged.
LinearModel euler_discretize(const LinearModel& m, double dt);

/// Leading `n` states of a model, keeping the matching rows of B and G and
/// an identity measurement.
LinearModel leading_block(const LinearModel& m, int n);

/// Monic coefficients of det(sI - A), highest degree first, via the
/// Faddeev-LeVerrier recurrence. n <= 8.
std::vector<double> characteristic_polynomial(const LinearModel& m);

struct StabilityReport {
  std::vector<ComplexPair> roots;
  bool stable = false;
  /// max Re (continuous) or spectral radius (discrete)
  double margin_measure = 0.0;
};

StabilityReport stability_roots(const LinearModel& m);

}  // namespace trackctl
