#include "trackctl/tuning.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "trackctl/simrun.hpp"

namespace trackctl {

namespace {

constexpr double kFloor = 1e-12;

std::vector<Matrix*> targets(Scenario& s, const std::vector<TuneTarget>& what) {
  std::vector<Matrix*> out;
  for (TuneTarget t : what) {
    if (t == TuneTarget::kf_noise) {
      out.push_back(&s.assumed_noise.q_process);
      out.push_back(&s.assumed_noise.r_meas);
    } else {
      out.push_back(&s.lqr_q);
      out.push_back(&s.lqr_r);
    }
  }
  return out;
}

}  // namespace

TuneTarget parse_tune_target(const std::string& name) {
  if (name == "kf" || name == "kf-noise-diagonals") return TuneTarget::kf_noise;
  if (name == "lqr" || name == "lqr-weight-diagonals") return TuneTarget::lqr_weights;
  throw std::invalid_argument(fmt::format("unknown tuning target \"{}\"", name));
}

std::string to_string(TuneTarget t) {
  return t == TuneTarget::kf_noise ? "kf-noise-diagonals" : "lqr-weight-diagonals";
}

Vector selected_diagonals(const Scenario& s, const std::vector<TuneTarget>& what) {
  Scenario copy = s;
  std::vector<double> values;
  for (const Matrix* m : targets(copy, what)) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) values.push_back((*m)(i, i));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Scenario apply_diagonals(const Scenario& s, const std::vector<TuneTarget>& what,
                         const Vector& diagonals) {
  Scenario out = s;
  Eigen::Index offset = 0;
  for (Matrix* m : targets(out, what)) {
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      if (offset >= diagonals.size()) throw DimensionError("apply_diagonals: too few values");
      (*m)(i, i) = diagonals(offset++);
    }
  }
  if (offset != diagonals.size()) throw DimensionError("apply_diagonals: too many values");
  return out;
}

SearchSpace default_search_space(const Scenario& s, const std::vector<TuneTarget>& what,
                                 double decades) {
  const Vector centre =
      selected_diagonals(s, what).unaryExpr([](double v) { return std::log10(std::max(v, kFloor)); });
  return {centre.array() - decades, centre.array() + decades};
}

double mean_mse(const Scenario& s) {
  const ClosedLoopSetup setup = prepare_closed_loop(s);
  double sum = 0.0;
  for (std::uint64_t seed : s.seeds) sum += run_scenario(s, setup, seed).summary.mse;
  return sum / static_cast<double>(s.seeds.size());
}

TuneResult tune_pipeline(const Scenario& s, const std::vector<TuneTarget>& what,
                         const SearchSpace& space, const FireflyParams& params) {
  if (what.empty()) throw std::invalid_argument("tune_pipeline: nothing selected");
  s.validate();
  const auto dims = selected_diagonals(s, what).size();
  if (space.dims() != dims) {
    throw DimensionError(fmt::format("tune_pipeline: search space has {} dims, selection has {}",
                                     space.dims(), dims));
  }
  auto objective = [&](const Vector& log_diag) {
    const Vector diag = log_diag.unaryExpr([](double v) { return std::pow(10.0, v); });
    return mean_mse(apply_diagonals(s, what, diag));
  };

  // The starting configuration competes too, so tuning never reports a
  // result worse than what it was given.
  std::vector<Vector> start;
  const Vector current = selected_diagonals(s, what).unaryExpr(
      [](double v) { return std::log10(std::max(v, kFloor)); });
  if (space.contains(current)) start.push_back(current);

  TuneResult result;
  result.optimization = optimize(objective, space, params, {}, start);
  result.tuned_diagonals =
      result.optimization.best_position.unaryExpr([](double v) { return std::pow(10.0, v); });
  result.tuned = apply_diagonals(s, what, result.tuned_diagonals);
  return result;
}

}  // namespace trackctl
