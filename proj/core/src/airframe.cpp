#include "trackctl/airframe.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace trackctl {

Vector StateVector::to_vector() const {
  Vector x(longitudinal::kStates);
  x << u, w, q, theta, h;
  return x;
}

StateVector StateVector::from_vector(const Vector& x) {
  if (x.size() != longitudinal::kStates) {
    throw DimensionError(fmt::format("StateVector expects 5 entries, got {}", x.size()));
  }
  return {x(0), x(1), x(2), wrap_angle(x(3)), x(4)};
}

Vector ControlInput::to_vector() const {
  Vector v(longitudinal::kInputs);
  v << delta_e, delta_t;
  return v;
}

double wrap_angle(double rad) {
  constexpr double pi = std::numbers::pi;
  double wrapped = std::remainder(rad, 2.0 * pi);
  if (wrapped <= -pi) wrapped += 2.0 * pi;
  return wrapped;
}

void StabilityDerivatives::validate() const {
  const double all[] = {Xu, Xw, Xq, Zu, Zw, Zq, Mu, Mw, Mq, Xde, Xdt, Zde, Mde, g, theta0};
  for (double v : all) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("stability derivatives must be finite");
    }
  }
  if (!(g > 0.0)) throw std::invalid_argument("gravity g must be positive");
}

StabilityDerivatives StabilityDerivatives::demonstration() {
  StabilityDerivatives d;
  d.Xu = -0.045;
  d.Xw = 0.036;
  d.Xq = 0.0;
  d.Zu = -0.37;
  d.Zw = -1.19775146689701651;
  d.Zq = 30.0;
  d.Mu = 6.70296621186014528;
  d.Mw = -2.33575159882879842;
  d.Mq = -14.3872485331029835;
  d.Xde = -0.2;
  d.Xdt = 4.0;
  d.Zde = -8.0;
  d.Mde = -12.0;
  return d;
}

void LinearModel::validate() const {
  const auto n = a.rows();
  if (a.cols() != n || n == 0) {
    throw DimensionError(fmt::format("model A must be square and nonempty, got {}x{}",
                                     a.rows(), a.cols()));
  }
  if (b.rows() != n) throw DimensionError("model B rows must equal state count");
  if (g_noise.rows() != n) throw DimensionError("model G rows must equal state count");
  if (h_meas.cols() != n) throw DimensionError("model H columns must equal state count");
  if (!all_finite(a) || !all_finite(b) || !all_finite(g_noise) || !all_finite(h_meas)) {
    throw std::invalid_argument("model matrices must be finite");
  }
  if (is_discrete) {
    if (!dt || !(*dt > 0.0)) throw std::invalid_argument("discrete model needs dt > 0");
  } else if (dt) {
    throw std::invalid_argument("continuous model must not carry dt");
  }
}

LinearModel build_longitudinal_model(const StabilityDerivatives& d) {
  d.validate();
  using namespace longitudinal;
  const double st = std::sin(d.theta0);
  const double ct = std::cos(d.theta0);

  LinearModel m;
  m.a = Matrix::Zero(kStates, kStates);
  m.a.row(kU) << d.Xu, d.Xw, d.Xq, -d.g * ct, 0.0;
  m.a.row(kW) << d.Zu, d.Zw, d.Zq, -d.g * st, 0.0;
  m.a.row(kQ) << d.Mu, d.Mw, d.Mq, 0.0, 0.0;
  m.a.row(kTheta) << 0.0, 0.0, 1.0, 0.0, 0.0;
  if (d.height_row == HeightRow::printed) {
    m.a.row(kHeight) << -st, -ct, 0.0, 1.0, 0.0;
  } else {
    m.a.row(kHeight) << st, -ct, 0.0, 0.0, 0.0;
  }

  m.b = Matrix::Zero(kStates, kInputs);
  m.b(kU, kElevator) = d.Xde;
  m.b(kU, kThrottle) = d.Xdt;
  m.b(kW, kElevator) = d.Zde;
  m.b(kQ, kElevator) = d.Mde;

  m.g_noise = Matrix::Identity(kStates, kStates);
  m.h_meas = Matrix::Identity(kStates, kStates);
  return m;
}

LinearModel build_planar_model() {
  LinearModel m;
  m.a = Matrix::Zero(4, 4);
  m.a(0, 1) = 1.0;
  m.a(2, 3) = 1.0;
  m.b = Matrix::Zero(4, 2);
  m.b(1, 0) = 1.0;
  m.b(3, 1) = 1.0;
  m.g_noise = m.b;
  m.h_meas = Matrix::Identity(4, 4);
  return m;
}

LinearModel euler_discretize(const LinearModel& m, double dt) {
  if (m.is_discrete) {
    throw std::invalid_argument("euler_discretize: model is already discrete");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("euler_discretize: dt must be positive");
  }
  m.validate();
  LinearModel d;
  d.a = Matrix::Identity(m.a.rows(), m.a.cols()) + dt * m.a;
  d.b = dt * m.b;
  d.g_noise = dt * m.g_noise;
  d.h_meas = m.h_meas;
  d.is_discrete = true;
  d.dt = dt;
  return d;
}

LinearModel leading_block(const LinearModel& m, int n) {
  if (n <= 0 || n > m.states()) {
    throw DimensionError(fmt::format("leading_block: {} outside 1..{}", n, m.states()));
  }
  LinearModel out;
  out.a = m.a.topLeftCorner(n, n);
  out.b = m.b.topRows(n);
  out.g_noise = m.g_noise.topRows(n);
  out.h_meas = Matrix::Identity(n, n);
  out.is_discrete = m.is_discrete;
  out.dt = m.dt;
  return out;
}

std::vector<double> characteristic_polynomial(const LinearModel& m) {
  const Matrix& a = m.a;
  if (a.rows() != a.cols()) throw DimensionError("characteristic_polynomial: A not square");
  const Eigen::Index n = a.rows();
  if (n > 8) {
    throw DimensionError(fmt::format("characteristic_polynomial: n = {} exceeds 8", n));
  }
  // coeffs[k] multiplies s^(n-k).
  std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
  coeffs[0] = 1.0;
  const Matrix eye = Matrix::Identity(n, n);
  Matrix mk = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk + coeffs[static_cast<std::size_t>(k - 1)] * eye;
    coeffs[static_cast<std::size_t>(k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  return coeffs;
}

StabilityReport stability_roots(const LinearModel& m) {
  StabilityReport report;
  report.roots = eigenvalues(m.a);
  // Marginal roots computed as +-1e-17 must not count as stable.
  const double eps = 1e-12 * (1.0 + m.a.norm());
  if (m.is_discrete) {
    double radius = 0.0;
    for (const auto& r : report.roots) radius = std::max(radius, std::hypot(r.re, r.im));
    report.margin_measure = radius;
    report.stable = radius < 1.0 - eps;
  } else {
    double abscissa = -std::numeric_limits<double>::infinity();
    for (const auto& r : report.roots) abscissa = std::max(abscissa, r.re);
    report.margin_measure = abscissa;
    report.stable = abscissa < -eps;
  }
  return report;
}

}  // namespace trackctl
