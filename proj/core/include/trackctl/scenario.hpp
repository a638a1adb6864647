#pragma once

// Scenario description and its JSON configuration format.

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "trackctl/airframe.hpp"
#include "trackctl/kf3d.hpp"
#include "trackctl/matstack.hpp"

namespace trackctl {

/// Malformed or invalid scenario document. `where` names the offending field
/// or, for syntax errors, the byte offset.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr std::string_view kPresetPlanar = "planar-goal";
inline constexpr std::string_view kPresetLongitudinal = "longitudinal-demo";

struct SpeedLimits {
  double avg = 30.0;
  double min = 15.0;
  double max = 50.0;
};

struct Scenario {
  std::string name;
  std::string preset;  // empty for a fully custom model
  LinearModel model;   // continuous
  HeightRow height_row = HeightRow::printed;

  double dt = 0.5;
  double duration = 270.0;
  std::array<double, 2> env_extent_km{12.0, 12.0};
  std::array<double, 2> goal{8000.0, 8000.0};  // m, in the track plane
  std::array<int, 2> track_indices{0, 2};
  double cruise_height = 200.0;
  SpeedLimits speed;
  std::vector<int> speed_indices;
  double speed_trim = 0.0;

  NoiseSpec true_noise;
  NoiseSpec assumed_noise;
  Matrix lqr_q;
  Matrix lqr_r;

  Vector x_desired;
  Vector initial_state;
  Vector initial_estimate;
  Matrix initial_covariance;

  double detection_radius = 500.0;
  std::vector<std::uint64_t> seeds;
  bool joseph_form = false;
  int plot_stride = 5;

  /// Physically inert parameters carried verbatim.
  nlohmann::json inert = nlohmann::json::object();

  /// floor(duration / dt)
  long steps() const;

  /// Throws ConfigError naming the first violated field.
  void validate() const;

  bool operator==(const Scenario& other) const;
};

Scenario make_preset(std::string_view preset);

bool is_preset_name(std::string_view name);

Scenario load_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Preset name or path to a JSON document.
Scenario load_scenario(const std::string& name_or_path);

nlohmann::json scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace trackctl
