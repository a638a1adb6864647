#include "trackctl/kf3d.hpp"

#include <fmt/format.h>

namespace trackctl {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kPsdTol = 1e-10;

void check_square(const Matrix& m, Eigen::Index n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(
        fmt::format("{} is {}x{}, expected {}x{}", name, m.rows(), m.cols(), n, n));
  }
}

void check_covariance(const Matrix& m, const char* name, bool positive_definite) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if (!is_symmetric(m, kSymTol * scale)) {
    throw std::invalid_argument(fmt::format("{} must be symmetric", name));
  }
  const double lo = min_symmetric_eigenvalue(m);
  if (positive_definite ? !(lo > 0.0) : lo < -kPsdTol * scale) {
    throw std::invalid_argument(fmt::format(
        "{} must be positive {}definite (min eigenvalue {:.3e})", name,
        positive_definite ? "" : "semi", lo));
  }
}

}  // namespace

NoiseSpec NoiseSpec::zeros(const LinearModel& m) {
  return {Matrix::Zero(m.noise_inputs(), m.noise_inputs()),
          Matrix::Zero(m.outputs(), m.outputs()), Matrix::Zero(m.inputs(), m.inputs())};
}

void NoiseSpec::validate(const LinearModel& m, bool require_pd_r) const {
  check_square(q_process, m.noise_inputs(), "q_process");
  check_square(r_meas, m.outputs(), "r_meas");
  check_square(d_control, m.inputs(), "d_control");
  check_covariance(q_process, "q_process", false);
  check_covariance(r_meas, "r_meas", require_pd_r);
  check_covariance(d_control, "d_control", false);
}

void FilterConfig::validate() const {
  model.validate();
  if (!model.is_discrete) {
    throw std::invalid_argument("filter model must be discrete");
  }
  noise.validate(model, /*require_pd_r=*/false);
  if (k_lqr.rows() != model.inputs() || k_lqr.cols() != model.states()) {
    throw DimensionError(fmt::format("k_lqr is {}x{}, expected {}x{}", k_lqr.rows(),
                                     k_lqr.cols(), model.inputs(), model.states()));
  }
  if (x_desired.size() != model.states()) {
    throw DimensionError("x_desired length must equal state count");
  }
}

FilterState kf_init(const FilterConfig& cfg, const Vector& x0, const Matrix& p0) {
  const auto n = cfg.model.states();
  if (x0.size() != n) throw DimensionError("kf_init: x0 length must equal state count");
  check_square(p0, n, "kf_init: p0");
  check_covariance(p0, "kf_init: p0", false);
  FilterState s;
  s.x_est = x0;
  s.p_cov = p0;
  return s;
}

FilterState kf_predict(const FilterState& s, const FilterConfig& cfg) {
  if (s.phase != FilterPhase::posterior) {
    throw std::logic_error("kf_predict: state is already a-priori");
  }
  const LinearModel& m = cfg.model;
  if (s.x_est.size() != m.states() || s.p_cov.rows() != m.states()) {
    throw DimensionError("kf_predict: filter state does not match the model");
  }
  FilterState out = s;
  out.x_est = m.a * s.x_est + m.b * (cfg.k_lqr * (cfg.x_desired - s.x_est));
  out.p_cov = symmetrize(m.a * s.p_cov * m.a.transpose() +
                         m.b * cfg.noise.d_control * m.b.transpose() +
                         m.g_noise * cfg.noise.q_process * m.g_noise.transpose());
  out.phase = FilterPhase::prior;
  return out;
}

Vector kf_innovation(const FilterState& prior, const Vector& z, const FilterConfig& cfg) {
  if (z.size() != cfg.model.outputs()) {
    throw DimensionError(fmt::format("measurement has {} entries, expected {}", z.size(),
                                     cfg.model.outputs()));
  }
  return z - cfg.model.h_meas * prior.x_est;
}

Matrix kf_gain(const FilterState& prior, const FilterConfig& cfg) {
  const Matrix& h = cfg.model.h_meas;
  const Matrix hp = h * prior.p_cov;
  const Matrix s = symmetrize(hp * h.transpose() + cfg.noise.r_meas);
  try {
    return solve_linear(s, hp).transpose();
  } catch (const SingularMatrixError& e) {
    throw FilterError(fmt::format("step {}: singular innovation covariance ({})",
                                  prior.k_step + 1, e.what()));
  }
}

FilterState kf_update(const FilterState& prior, const Vector& z, const FilterConfig& cfg) {
  if (prior.phase != FilterPhase::prior) {
    throw std::logic_error("kf_update: state must be a-priori");
  }
  const Matrix& h = cfg.model.h_meas;
  const Vector innovation = kf_innovation(prior, z, cfg);
  const Matrix gain = kf_gain(prior, cfg);
  const auto n = cfg.model.states();
  const Matrix i_kh = Matrix::Identity(n, n) - gain * h;

  FilterState out = prior;
  out.x_est = prior.x_est + gain * innovation;
  if (cfg.joseph_form) {
    out.p_cov = symmetrize(i_kh * prior.p_cov * i_kh.transpose() +
                           gain * cfg.noise.r_meas * gain.transpose());
  } else {
    out.p_cov = symmetrize(i_kh * prior.p_cov);
  }
  out.k_step = prior.k_step + 1;
  out.phase = FilterPhase::posterior;
  out.last_innovation = innovation;
  out.last_gain = gain;
  return out;
}

FilterState kf_step(const FilterState& s, const Vector& z, const FilterConfig& cfg) {
  return kf_update(kf_predict(s, cfg), z, cfg);
}

}  // namespace trackctl
