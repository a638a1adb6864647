#include "trackctl/simrun.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace trackctl {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kTruthStream = 0x7472757468ULL;

double distance_to_goal(const Vector& x, const std::array<int, 2>& idx,
                        const std::array<double, 2>& goal) {
  return std::hypot(x(idx[0]) - goal[0], x(idx[1]) - goal[1]);
}

// Rate with the degenerate-class convention: an empty class reports 1 when
// its error count is 0, else 0.
double rate(long hits, long misses, bool& degenerate) {
  const long total = hits + misses;
  degenerate = total == 0;
  if (degenerate) return misses == 0 ? 1.0 : 0.0;
  return static_cast<double>(hits) / static_cast<double>(total);
}

json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::invalid_argument("unexpected string for a numeric metric: " + s);
  }
  return j.get<double>();
}

void append_values(std::string& line, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    line += ',';
    line += fmt::format("{:.17g}", v(i));
  }
}

void append_header(std::string& line, const char* prefix, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) line += fmt::format(",{}_{}", prefix, i);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path.string()));
  out << content;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

}  // namespace

NoiseSource::NoiseSource(const NoiseSpec& spec, std::uint64_t seed)
    : process_(spec.q_process), measurement_(spec.r_meas), rng_(make_stream(seed, kTruthStream)) {}

NoiseDraw NoiseSource::next() {
  NoiseDraw d;
  d.process = process_(rng_);
  d.measurement = measurement_(rng_);
  return d;
}

NoiseDraw sample_noise(const NoiseSpec& spec, Rng& rng) {
  NoiseDraw d;
  d.process = GaussianSampler(spec.q_process)(rng);
  d.measurement = GaussianSampler(spec.r_meas)(rng);
  return d;
}

ClosedLoopSetup prepare_closed_loop(const Scenario& s) {
  s.validate();
  ClosedLoopSetup setup;
  setup.discrete = euler_discretize(s.model, s.dt);
  setup.lqr = lqr_gain(s.model, s.lqr_q, s.lqr_r);
  setup.filter.model = setup.discrete;
  setup.filter.noise = s.assumed_noise;
  setup.filter.k_lqr = setup.lqr.k_gain;
  setup.filter.x_desired = s.x_desired;
  setup.filter.joseph_form = s.joseph_form;
  setup.filter.validate();
  return setup;
}

RunTrace run_scenario(const Scenario& s, std::uint64_t seed, const RunOptions& options) {
  return run_scenario(s, prepare_closed_loop(s), seed, options);
}

RunTrace run_scenario(const Scenario& s, const ClosedLoopSetup& setup, std::uint64_t seed,
                      const RunOptions& options) {
  const LinearModel& m = setup.discrete;
  const FilterConfig& cfg = setup.filter;
  const long steps = s.steps();
  if (options.feedback == FeedbackSource::measurement && m.outputs() != m.states()) {
    throw std::invalid_argument("measurement feedback needs a full-state measurement");
  }

  RunTrace trace;
  trace.seed = seed;
  trace.track_indices = s.track_indices;
  trace.plot_stride = s.plot_stride;
  trace.rows.reserve(static_cast<std::size_t>(steps));

  NoiseSource noise(s.true_noise, seed);
  Vector truth = s.initial_state;
  FilterState state = kf_init(cfg, s.initial_estimate, s.initial_covariance);
  Vector feedback = s.initial_estimate;

  for (long k = 1; k <= steps; ++k) {
    const Vector control = cfg.k_lqr * (cfg.x_desired - feedback);
    const NoiseDraw draw = noise.next();
    truth = m.a * truth + m.b * control + m.g_noise * draw.process;
    const Vector z = m.h_meas * truth + draw.measurement;

    TraceRow row;
    row.t = static_cast<double>(k) * s.dt;
    row.truth = truth;
    row.measurement = z;
    row.control = control;

    if (options.feedback == FeedbackSource::estimate) {
      try {
        const FilterState prior = kf_predict(state, cfg);
        FilterState posterior = kf_update(prior, z, cfg);
        if (options.observer) options.observer(k, prior, posterior);
        row.prior = prior.x_est;
        row.estimate = posterior.x_est;
        row.innovation = *posterior.last_innovation;
        state = std::move(posterior);
      } catch (const FilterError& e) {
        throw SimulationError(k, fmt::format("run aborted at step {}: {}", k, e.what()));
      }
      feedback = state.x_est;
    } else {
      row.prior = z;
      row.estimate = z;
      row.innovation = Vector::Zero(z.size());
      feedback = z;
    }
    trace.rows.push_back(std::move(row));
  }

  trace.summary = compute_metrics(trace, s);
  return trace;
}

MetricsReport compute_metrics(const RunTrace& trace, const Scenario& s) {
  if (trace.rows.empty()) throw std::invalid_argument("compute_metrics: empty trace");
  MetricsReport r;
  r.steps = static_cast<long>(trace.rows.size());
  r.channels = static_cast<long>(trace.rows.front().truth.size());

  for (const auto& row : trace.rows) {
    r.truth_energy += row.truth.squaredNorm();
    r.error_energy += (row.estimate - row.truth).squaredNorm();
    r.peak = std::max(r.peak, row.truth.cwiseAbs().maxCoeff());

    const bool actual = distance_to_goal(row.truth, s.track_indices, s.goal) <= s.detection_radius;
    const bool predicted =
        distance_to_goal(row.estimate, s.track_indices, s.goal) <= s.detection_radius;
    if (actual && predicted) ++r.tp;
    if (!actual && predicted) ++r.fp;
    if (!actual && !predicted) ++r.tn;
    if (actual && !predicted) ++r.fn;

    if (!s.speed_indices.empty()) {
      Vector v(static_cast<Eigen::Index>(s.speed_indices.size()));
      for (std::size_t i = 0; i < s.speed_indices.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = row.truth(s.speed_indices[i]);
      }
      v(0) += s.speed_trim;
      const double speed = v.norm();
      if (speed < s.speed.min) ++r.speed_below_min;
      if (speed > s.speed.max) ++r.speed_above_max;
    }
  }

  const double samples = static_cast<double>(r.steps) * static_cast<double>(r.channels);
  r.mse = r.error_energy / samples;
  if (r.error_energy == 0.0) {
    r.snr_db = kInf;
    r.psnr_db = kInf;
  } else {
    r.snr_db = 10.0 * std::log10(r.truth_energy / r.error_energy);
    r.psnr_db = 10.0 * std::log10(r.peak * r.peak / r.mse);
  }

  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.steps);
  r.sensitivity = rate(r.tp, r.fn, r.sensitivity_degenerate);
  r.specificity = rate(r.tn, r.fp, r.specificity_degenerate);
  r.terminal_distance = distance_to_goal(trace.rows.back().truth, s.track_indices, s.goal);
  return r;
}

json metrics_to_json(const MetricsReport& m) {
  return json{
      {"mse", number_json(m.mse)},
      {"snr_db", number_json(m.snr_db)},
      {"psnr_db", number_json(m.psnr_db)},
      {"accuracy", number_json(m.accuracy)},
      {"sensitivity", number_json(m.sensitivity)},
      {"specificity", number_json(m.specificity)},
      {"confusion", {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}}},
      {"steps", m.steps},
      {"channels", m.channels},
      {"peak", number_json(m.peak)},
      {"truth_energy", number_json(m.truth_energy)},
      {"error_energy", number_json(m.error_energy)},
      {"sensitivity_degenerate", m.sensitivity_degenerate},
      {"specificity_degenerate", m.specificity_degenerate},
      {"degenerate_class_rule",
       "a rate whose class is empty is 1 when its error count is 0, otherwise 0"},
      {"speed_violations", {{"below_min", m.speed_below_min}, {"above_max", m.speed_above_max}}},
      {"terminal_distance", number_json(m.terminal_distance)},
  };
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.mse = number_from_json(j.at("mse"));
  m.snr_db = number_from_json(j.at("snr_db"));
  m.psnr_db = number_from_json(j.at("psnr_db"));
  m.accuracy = number_from_json(j.at("accuracy"));
  m.sensitivity = number_from_json(j.at("sensitivity"));
  m.specificity = number_from_json(j.at("specificity"));
  const auto& c = j.at("confusion");
  m.tp = c.at("tp").get<long>();
  m.fp = c.at("fp").get<long>();
  m.tn = c.at("tn").get<long>();
  m.fn = c.at("fn").get<long>();
  m.steps = j.at("steps").get<long>();
  m.channels = j.at("channels").get<long>();
  m.peak = number_from_json(j.at("peak"));
  m.truth_energy = number_from_json(j.at("truth_energy"));
  m.error_energy = number_from_json(j.at("error_energy"));
  m.sensitivity_degenerate = j.at("sensitivity_degenerate").get<bool>();
  m.specificity_degenerate = j.at("specificity_degenerate").get<bool>();
  const auto& v = j.at("speed_violations");
  m.speed_below_min = v.at("below_min").get<long>();
  m.speed_above_max = v.at("above_max").get<long>();
  m.terminal_distance = number_from_json(j.at("terminal_distance"));
  return m;
}

void write_trace(const RunTrace& trace, const std::filesystem::path& dir) {
  if (trace.rows.empty()) throw std::invalid_argument("write_trace: empty trace");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }

  const TraceRow& first = trace.rows.front();
  std::string csv = "t";
  append_header(csv, "truth", first.truth.size());
  append_header(csv, "meas", first.measurement.size());
  append_header(csv, "est", first.estimate.size());
  append_header(csv, "ctrl", first.control.size());
  append_header(csv, "innov", first.innovation.size());
  csv += '\n';
  for (const auto& row : trace.rows) {
    csv += fmt::format("{:.17g}", row.t);
    append_values(csv, row.truth);
    append_values(csv, row.measurement);
    append_values(csv, row.estimate);
    append_values(csv, row.control);
    append_values(csv, row.innovation);
    csv += '\n';
  }
  write_file(dir / "trace.csv", csv);

  json metrics = metrics_to_json(trace.summary);
  metrics["seed"] = trace.seed;
  write_file(dir / "metrics.json", metrics.dump(2) + "\n");

  const auto [ix, iy] = trace.track_indices;
  std::string plot = "t,x,y,est_x,est_y\n";
  const std::size_t stride = static_cast<std::size_t>(std::max(trace.plot_stride, 1));
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const bool last = i + 1 == trace.rows.size();
    if ((i + 1) % stride != 0 && !last) continue;
    const auto& row = trace.rows[i];
    plot += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", row.t, row.truth(ix),
                        row.truth(iy), row.estimate(ix), row.estimate(iy));
  }
  write_file(dir / "plot.csv", plot);
}

}  // namespace trackctl
