#include "trackctl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace trackctl {

using nlohmann::json;

namespace {

// Vehicle parameters carried for reference; none enters the linear model.
json default_inert() {
  return json{
      {"rotational_capability_rad", std::numbers::pi / 180.0},
      {"frequency_hz", 60.0},
      {"light_speed_m_s", 299792458.0},
      {"boltzman_constant", 17.0},
      {"spin_speed_m_s", 200.0},
      {"initial_gain", 1.0},
      {"path_to_goal_m", 2500.0},
      {"engine_heat_c", 23.0},
  };
}

void reset_dimension_defaults(Scenario& s) {
  const auto n = s.model.states();
  const auto m = s.model.inputs();
  s.true_noise = NoiseSpec::zeros(s.model);
  s.assumed_noise = s.true_noise;
  s.lqr_q = Matrix::Identity(n, n);
  s.lqr_r = Matrix::Identity(m, m);
  s.x_desired = Vector::Zero(n);
  s.initial_state = Vector::Zero(n);
  s.initial_estimate = Vector::Zero(n);
  s.initial_covariance = Matrix::Identity(n, n);
  s.track_indices = {0, n > 1 ? 1 : 0};
  s.speed_indices.clear();
  s.speed_trim = 0.0;
}

Scenario planar_preset() {
  Scenario s;
  s.name = std::string(kPresetPlanar);
  s.preset = std::string(kPresetPlanar);
  s.model = build_planar_model();
  reset_dimension_defaults(s);

  s.track_indices = {0, 2};
  s.speed_indices = {1, 3};
  s.goal = {8000.0, 8000.0};
  s.x_desired = Vector::Zero(4);
  s.x_desired << s.goal[0], 0.0, s.goal[1], 0.0;

  // Acceleration noise sigma 0.5 m/s^2, position sigma 50 m, velocity 2 m/s.
  s.true_noise.q_process = 0.25 * Matrix::Identity(2, 2);
  s.true_noise.r_meas = Vector{{2500.0, 4.0, 2500.0, 4.0}}.asDiagonal();
  s.assumed_noise = s.true_noise;
  s.initial_covariance = s.true_noise.r_meas;

  // Slow position loop: natural frequency ~0.03 rad/s keeps the approach
  // within one flight time.
  s.lqr_q = Vector{{1e-6, 1e-3, 1e-6, 1e-3}}.asDiagonal();
  s.lqr_r = Matrix::Identity(2, 2);

  s.detection_radius = 500.0;
  s.seeds = {1, 2, 3, 4, 5};
  return s;
}

Scenario longitudinal_preset(const StabilityDerivatives& d) {
  Scenario s;
  s.name = std::string(kPresetLongitudinal);
  s.preset = std::string(kPresetLongitudinal);
  s.height_row = d.height_row;
  s.model = build_longitudinal_model(d);
  reset_dimension_defaults(s);

  using namespace longitudinal;
  // Euler at 0.5 s is unstable for the short-period mode; step at 60 Hz.
  s.dt = 1.0 / 60.0;
  s.track_indices = {kU, kHeight};
  s.goal = {0.0, s.cruise_height};
  s.speed_indices = {kU};
  s.speed_trim = s.speed.avg;
  s.x_desired(kHeight) = s.cruise_height;

  s.true_noise.q_process = Vector{{0.05, 0.05, 1e-3, 1e-4, 0.05}}.asDiagonal();
  s.true_noise.r_meas = Vector{{0.25, 0.25, 1e-4, 1e-4, 4.0}}.asDiagonal();
  s.assumed_noise = s.true_noise;
  s.initial_covariance = s.true_noise.r_meas;

  s.detection_radius = 10.0;
  s.seeds = {1, 2, 3, 4, 5};
  return s;
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "must be finite");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
  return j.get<int>();
}

Vector get_vector(const json& j, const std::string& where, Eigen::Index expected) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw ConfigError(where, fmt::format("expected {} entries, got {}", expected, j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = get_number(j[i], fmt::format("{}[{}]", where, i));
  }
  return v;
}

// Nested arrays, or a flat list meaning a diagonal when `allow_diagonal`.
Matrix get_matrix(const json& j, const std::string& where, Eigen::Index rows,
                  Eigen::Index cols, bool allow_diagonal) {
  if (!j.is_array()) throw ConfigError(where, "expected a matrix (array of rows)");
  if (allow_diagonal && (j.empty() || !j[0].is_array())) {
    if (rows >= 0 && rows != cols) throw ConfigError(where, "diagonal form needs a square matrix");
    const Vector diag = get_vector(j, where, rows);
    return diag.asDiagonal();
  }
  const auto r = static_cast<Eigen::Index>(j.size());
  if (r == 0) throw ConfigError(where, "matrix must have at least one row");
  if (rows >= 0 && r != rows) {
    throw ConfigError(where, fmt::format("expected {} rows, got {}", rows, r));
  }
  if (!j[0].is_array()) throw ConfigError(where, "expected nested arrays");
  const auto c = static_cast<Eigen::Index>(j[0].size());
  if (cols >= 0 && c != cols) {
    throw ConfigError(where, fmt::format("expected {} columns, got {}", cols, c));
  }
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    const std::string row_where = fmt::format("{}[{}]", where, i);
    const Vector v = get_vector(row, row_where, c);
    m.row(i) = v.transpose();
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "<document>" : where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(join_path(where, key), "unknown key");
  }
}

NoiseSpec parse_noise(const json& j, const std::string& where, const LinearModel& model,
                      NoiseSpec base) {
  check_keys(j, where, {"q_process", "r_meas", "d_control"});
  if (j.contains("q_process")) {
    base.q_process = get_matrix(j["q_process"], join_path(where, "q_process"),
                                model.noise_inputs(), model.noise_inputs(), true);
  }
  if (j.contains("r_meas")) {
    base.r_meas = get_matrix(j["r_meas"], join_path(where, "r_meas"), model.outputs(),
                             model.outputs(), true);
  }
  if (j.contains("d_control")) {
    base.d_control = get_matrix(j["d_control"], join_path(where, "d_control"), model.inputs(),
                                model.inputs(), true);
  }
  return base;
}

json noise_json(const NoiseSpec& n) {
  return json{{"q_process", matrix_json(n.q_process)},
              {"r_meas", matrix_json(n.r_meas)},
              {"d_control", matrix_json(n.d_control)}};
}

HeightRow parse_height_row(const json& j) {
  if (j == "printed") return HeightRow::printed;
  if (j == "standard") return HeightRow::standard;
  throw ConfigError("height_row", "expected \"printed\" or \"standard\"");
}

StabilityDerivatives parse_derivatives(const json& j, StabilityDerivatives d) {
  static const std::set<std::string> keys = {"Xu", "Xw", "Xq", "Zu", "Zw", "Zq", "Mu", "Mw",
                                             "Mq", "Xde", "Xdt", "Zde", "Mde", "g", "theta0"};
  check_keys(j, "derivatives", keys);
  auto take = [&](const char* key, double& field) {
    if (j.contains(key)) field = get_number(j[key], std::string("derivatives.") + key);
  };
  take("Xu", d.Xu), take("Xw", d.Xw), take("Xq", d.Xq);
  take("Zu", d.Zu), take("Zw", d.Zw), take("Zq", d.Zq);
  take("Mu", d.Mu), take("Mw", d.Mw), take("Mq", d.Mq);
  take("Xde", d.Xde), take("Xdt", d.Xdt), take("Zde", d.Zde), take("Mde", d.Mde);
  take("g", d.g), take("theta0", d.theta0);
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("derivatives", e.what());
  }
  return d;
}

void check_psd(const Matrix& m, const std::string& where, bool strictly) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  if (!is_symmetric(m, 1e-12 * scale)) throw ConfigError(where, "must be symmetric");
  const double lo = min_symmetric_eigenvalue(m);
  if (strictly ? !(lo > 0.0) : lo < -1e-10 * scale) {
    throw ConfigError(where, strictly ? "must be positive definite"
                                      : "must be positive semidefinite");
  }
}

}  // namespace

long Scenario::steps() const {
  return static_cast<long>(std::floor(duration / dt + 1e-9));
}

void Scenario::validate() const {
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError("model", e.what());
  }
  if (model.is_discrete) throw ConfigError("model", "scenario models are continuous");
  const auto n = model.states();
  const auto m = model.inputs();

  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!(duration >= dt) || !std::isfinite(duration)) {
    throw ConfigError("duration", "must be at least dt");
  }
  for (int i = 0; i < 2; ++i) {
    if (!(env_extent_km[i] > 0.0)) throw ConfigError("env_extent_km", "must be positive");
    if (goal[i] < 0.0 || goal[i] > env_extent_km[i] * 1000.0) {
      throw ConfigError("goal", "must lie within env_extent_km");
    }
    if (track_indices[i] < 0 || track_indices[i] >= n) {
      throw ConfigError("track_indices", "index outside the state vector");
    }
  }
  if (!(speed.min <= speed.avg && speed.avg <= speed.max)) {
    throw ConfigError("speed", "need min <= avg <= max");
  }
  for (int idx : speed_indices) {
    if (idx < 0 || idx >= n) throw ConfigError("speed_indices", "index outside the state vector");
  }
  try {
    true_noise.validate(model, false);
  } catch (const std::exception& e) {
    throw ConfigError("true_noise", e.what());
  }
  try {
    assumed_noise.validate(model, false);
  } catch (const std::exception& e) {
    throw ConfigError("assumed_noise", e.what());
  }
  if (lqr_q.rows() != n || lqr_q.cols() != n) throw ConfigError("lqr_weights.q", "wrong size");
  if (lqr_r.rows() != m || lqr_r.cols() != m) throw ConfigError("lqr_weights.r", "wrong size");
  check_psd(lqr_q, "lqr_weights.q", false);
  check_psd(lqr_r, "lqr_weights.r", true);
  if (x_desired.size() != n) throw ConfigError("x_desired", "wrong length");
  if (initial_state.size() != n) throw ConfigError("initial_state", "wrong length");
  if (initial_estimate.size() != n) throw ConfigError("initial_estimate", "wrong length");
  if (initial_covariance.rows() != n || initial_covariance.cols() != n) {
    throw ConfigError("initial_covariance", "wrong size");
  }
  check_psd(initial_covariance, "initial_covariance", false);
  if (!(detection_radius > 0.0)) throw ConfigError("detection_radius", "must be positive");
  if (seeds.empty()) throw ConfigError("seeds", "need at least one seed");
  if (plot_stride < 1) throw ConfigError("plot_stride", "must be >= 1");
  if (!inert.is_object()) throw ConfigError("inert", "expected an object");
}

bool Scenario::operator==(const Scenario& o) const {
  auto same = [](const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  auto same_noise = [&](const NoiseSpec& x, const NoiseSpec& y) {
    return same(x.q_process, y.q_process) && same(x.r_meas, y.r_meas) &&
           same(x.d_control, y.d_control);
  };
  return name == o.name && preset == o.preset && same(model.a, o.model.a) &&
         same(model.b, o.model.b) && same(model.g_noise, o.model.g_noise) &&
         same(model.h_meas, o.model.h_meas) && height_row == o.height_row && dt == o.dt &&
         duration == o.duration && env_extent_km == o.env_extent_km && goal == o.goal &&
         track_indices == o.track_indices && cruise_height == o.cruise_height &&
         speed.avg == o.speed.avg && speed.min == o.speed.min && speed.max == o.speed.max &&
         speed_indices == o.speed_indices && speed_trim == o.speed_trim &&
         same_noise(true_noise, o.true_noise) && same_noise(assumed_noise, o.assumed_noise) &&
         same(lqr_q, o.lqr_q) && same(lqr_r, o.lqr_r) && same(x_desired, o.x_desired) &&
         same(initial_state, o.initial_state) && same(initial_estimate, o.initial_estimate) &&
         same(initial_covariance, o.initial_covariance) &&
         detection_radius == o.detection_radius && seeds == o.seeds &&
         joseph_form == o.joseph_form && plot_stride == o.plot_stride && inert == o.inert;
}

bool is_preset_name(std::string_view name) {
  return name == kPresetPlanar || name == kPresetLongitudinal;
}

Scenario make_preset(std::string_view preset) {
  Scenario s;
  if (preset == kPresetPlanar) {
    s = planar_preset();
  } else if (preset == kPresetLongitudinal) {
    s = longitudinal_preset(StabilityDerivatives::demonstration());
  } else {
    throw ConfigError("preset", fmt::format("unknown preset \"{}\"", preset));
  }
  s.inert = default_inert();
  return s;
}

Scenario load_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("byte {}", e.byte), e.what());
  }
  static const std::set<std::string> keys = {
      "name",          "preset",           "model",         "height_row",
      "derivatives",   "dt",               "duration",      "env_extent_km",
      "goal",          "track_indices",    "cruise_height", "speed",
      "speed_indices", "speed_trim",       "true_noise",    "assumed_noise",
      "lqr_weights",   "x_desired",        "initial_state", "initial_estimate",
      "initial_covariance", "detection_radius", "seeds",    "joseph_form",
      "plot_stride",   "inert"};
  check_keys(doc, "", keys);

  std::string preset;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("preset", "expected a string");
    preset = doc["preset"].get<std::string>();
    if (!preset.empty() && !is_preset_name(preset)) {
      throw ConfigError("preset", fmt::format("unknown preset \"{}\"", preset));
    }
  } else if (!doc.contains("model")) {
    preset = std::string(kPresetPlanar);
  }

  Scenario s = preset.empty() ? Scenario{} : make_preset(preset);
  if (preset.empty()) {
    s.inert = default_inert();
    s.seeds = {1};
  }

  if (doc.contains("cruise_height")) s.cruise_height = get_number(doc["cruise_height"], "cruise_height");
  if (doc.contains("speed")) {
    const auto& j = doc["speed"];
    check_keys(j, "speed", {"avg", "min", "max"});
    if (j.contains("avg")) s.speed.avg = get_number(j["avg"], "speed.avg");
    if (j.contains("min")) s.speed.min = get_number(j["min"], "speed.min");
    if (j.contains("max")) s.speed.max = get_number(j["max"], "speed.max");
  }

  if (doc.contains("height_row")) s.height_row = parse_height_row(doc["height_row"]);
  const bool rebuild_longitudinal =
      preset == kPresetLongitudinal && (doc.contains("height_row") || doc.contains("derivatives"));

  if (doc.contains("model")) {
    const auto& j = doc["model"];
    check_keys(j, "model", {"a", "b", "g", "h"});
    if (!j.contains("a") || !j.contains("b")) throw ConfigError("model", "needs \"a\" and \"b\"");
    LinearModel m;
    m.a = get_matrix(j["a"], "model.a", -1, -1, false);
    const auto n = m.a.rows();
    m.b = get_matrix(j["b"], "model.b", n, -1, false);
    m.g_noise = j.contains("g") ? get_matrix(j["g"], "model.g", n, -1, false)
                                : Matrix(Matrix::Identity(n, n));
    m.h_meas = j.contains("h") ? get_matrix(j["h"], "model.h", -1, n, false)
                               : Matrix(Matrix::Identity(n, n));
    try {
      m.validate();
    } catch (const std::exception& e) {
      throw ConfigError("model", e.what());
    }
    const bool reshaped = m.states() != s.model.states() || m.inputs() != s.model.inputs() ||
                          m.noise_inputs() != s.model.noise_inputs() ||
                          m.outputs() != s.model.outputs();
    s.model = std::move(m);
    if (reshaped) reset_dimension_defaults(s);
  } else if (rebuild_longitudinal) {
    StabilityDerivatives d = StabilityDerivatives::demonstration();
    if (doc.contains("derivatives")) d = parse_derivatives(doc["derivatives"], d);
    d.height_row = s.height_row;
    s.model = build_longitudinal_model(d);
  } else if (doc.contains("derivatives")) {
    throw ConfigError("derivatives", "only valid with the longitudinal-demo preset");
  }

  const auto n = s.model.states();
  const auto m = s.model.inputs();

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("name", "expected a string");
    s.name = doc["name"].get<std::string>();
  }
  if (doc.contains("dt")) s.dt = get_number(doc["dt"], "dt");
  if (doc.contains("duration")) s.duration = get_number(doc["duration"], "duration");
  if (doc.contains("env_extent_km")) {
    const Vector v = get_vector(doc["env_extent_km"], "env_extent_km", 2);
    s.env_extent_km = {v(0), v(1)};
  }
  if (doc.contains("goal")) {
    const Vector v = get_vector(doc["goal"], "goal", 2);
    s.goal = {v(0), v(1)};
  } else if (preset == kPresetLongitudinal && doc.contains("cruise_height")) {
    s.goal[1] = s.cruise_height;
  }
  if (doc.contains("track_indices")) {
    const auto& j = doc["track_indices"];
    if (!j.is_array() || j.size() != 2) throw ConfigError("track_indices", "expected two indices");
    s.track_indices = {get_int(j[0], "track_indices[0]"), get_int(j[1], "track_indices[1]")};
  }
  if (doc.contains("speed_indices")) {
    const auto& j = doc["speed_indices"];
    if (!j.is_array()) throw ConfigError("speed_indices", "expected an array");
    s.speed_indices.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      s.speed_indices.push_back(get_int(j[i], fmt::format("speed_indices[{}]", i)));
    }
  }
  if (doc.contains("speed_trim")) s.speed_trim = get_number(doc["speed_trim"], "speed_trim");

  if (doc.contains("true_noise")) {
    s.true_noise = parse_noise(doc["true_noise"], "true_noise", s.model, s.true_noise);
    if (!doc.contains("assumed_noise")) s.assumed_noise = s.true_noise;
  }
  if (doc.contains("assumed_noise")) {
    s.assumed_noise = parse_noise(doc["assumed_noise"], "assumed_noise", s.model, s.assumed_noise);
  }
  if (doc.contains("lqr_weights")) {
    const auto& j = doc["lqr_weights"];
    check_keys(j, "lqr_weights", {"q", "r"});
    if (j.contains("q")) s.lqr_q = get_matrix(j["q"], "lqr_weights.q", n, n, true);
    if (j.contains("r")) s.lqr_r = get_matrix(j["r"], "lqr_weights.r", m, m, true);
  }

  if (doc.contains("x_desired")) {
    s.x_desired = get_vector(doc["x_desired"], "x_desired", n);
  } else if (preset == kPresetPlanar && doc.contains("goal") && !doc.contains("model")) {
    s.x_desired << s.goal[0], 0.0, s.goal[1], 0.0;
  } else if (preset == kPresetLongitudinal && doc.contains("cruise_height") &&
             !doc.contains("model")) {
    s.x_desired(longitudinal::kHeight) = s.cruise_height;
  }
  if (doc.contains("initial_state")) {
    s.initial_state = get_vector(doc["initial_state"], "initial_state", n);
    if (!doc.contains("initial_estimate")) s.initial_estimate = s.initial_state;
  }
  if (doc.contains("initial_estimate")) {
    s.initial_estimate = get_vector(doc["initial_estimate"], "initial_estimate", n);
  }
  if (doc.contains("initial_covariance")) {
    s.initial_covariance = get_matrix(doc["initial_covariance"], "initial_covariance", n, n, true);
  }
  if (doc.contains("detection_radius")) {
    s.detection_radius = get_number(doc["detection_radius"], "detection_radius");
  }
  if (doc.contains("seeds")) {
    const auto& j = doc["seeds"];
    if (!j.is_array()) throw ConfigError("seeds", "expected an array of integers");
    s.seeds.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number_integer() || (j[i].is_number_integer() && !j[i].is_number_unsigned() &&
                                        j[i].get<std::int64_t>() < 0)) {
        throw ConfigError(fmt::format("seeds[{}]", i), "expected a non-negative integer");
      }
      s.seeds.push_back(j[i].get<std::uint64_t>());
    }
  }
  if (doc.contains("joseph_form")) {
    if (!doc["joseph_form"].is_boolean()) throw ConfigError("joseph_form", "expected a boolean");
    s.joseph_form = doc["joseph_form"].get<bool>();
  }
  if (doc.contains("plot_stride")) s.plot_stride = get_int(doc["plot_stride"], "plot_stride");
  if (doc.contains("inert")) {
    if (!doc["inert"].is_object()) throw ConfigError("inert", "expected an object");
    for (const auto& [key, value] : doc["inert"].items()) s.inert[key] = value;
  }

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario_text(buffer.str());
}

Scenario load_scenario(const std::string& name_or_path) {
  if (is_preset_name(name_or_path)) return make_preset(name_or_path);
  return load_scenario_file(name_or_path);
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.preset.empty()) j["preset"] = s.preset;
  j["model"] = json{{"a", matrix_json(s.model.a)},
                    {"b", matrix_json(s.model.b)},
                    {"g", matrix_json(s.model.g_noise)},
                    {"h", matrix_json(s.model.h_meas)}};
  j["height_row"] = s.height_row == HeightRow::printed ? "printed" : "standard";
  j["dt"] = s.dt;
  j["duration"] = s.duration;
  j["env_extent_km"] = {s.env_extent_km[0], s.env_extent_km[1]};
  j["goal"] = {s.goal[0], s.goal[1]};
  j["track_indices"] = {s.track_indices[0], s.track_indices[1]};
  j["cruise_height"] = s.cruise_height;
  j["speed"] = json{{"avg", s.speed.avg}, {"min", s.speed.min}, {"max", s.speed.max}};
  j["speed_indices"] = s.speed_indices;
  j["speed_trim"] = s.speed_trim;
  j["true_noise"] = noise_json(s.true_noise);
  j["assumed_noise"] = noise_json(s.assumed_noise);
  j["lqr_weights"] = json{{"q", matrix_json(s.lqr_q)}, {"r", matrix_json(s.lqr_r)}};
  j["x_desired"] = vector_json(s.x_desired);
  j["initial_state"] = vector_json(s.initial_state);
  j["initial_estimate"] = vector_json(s.initial_estimate);
  j["initial_covariance"] = matrix_json(s.initial_covariance);
  j["detection_radius"] = s.detection_radius;
  j["seeds"] = s.seeds;
  j["joseph_form"] = s.joseph_form;
  j["plot_stride"] = s.plot_stride;
  j["inert"] = s.inert;
  return j;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write scenario to {}", path.string()));
  out << scenario_to_json(s).dump(2) << '\n';
  if (!out) throw std::runtime_error(fmt::format("write failed for {}", path.string()));
}

}  // namespace trackctl
