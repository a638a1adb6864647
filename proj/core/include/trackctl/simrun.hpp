#pragma once

// Closed-loop scenario engine: truth propagation, noisy measurements, the
// LQR-coupled filter and the controller in the loop, plus run metrics.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <vector>

#include "trackctl/kf3d.hpp"
#include "trackctl/lqr.hpp"
#include "trackctl/random.hpp"
#include "trackctl/scenario.hpp"

namespace trackctl {

struct TraceRow {
  double t = 0.0;
  Vector truth;
  Vector measurement;
  Vector prior;
  Vector estimate;
  Vector control;
  Vector innovation;
};

struct MetricsReport {
  double mse = 0.0;
  double snr_db = 0.0;
  double psnr_db = 0.0;
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;
  long steps = 0;
  long channels = 0;
  double peak = 0.0;
  double truth_energy = 0.0;
  double error_energy = 0.0;
  bool sensitivity_degenerate = false;
  bool specificity_degenerate = false;
  long speed_below_min = 0;
  long speed_above_max = 0;
  double terminal_distance = 0.0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  MetricsReport summary;
  std::uint64_t seed = 0;
  std::array<int, 2> track_indices{0, 1};
  int plot_stride = 5;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(long step, const std::string& what)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

enum class FeedbackSource {
  estimate,     // u = K (x_d - x+), the filter in the loop
  measurement,  // u = K (x_d - z), raw measurement as the state
};

/// Called after each filter step with the a-priori and a-posteriori states.
using StepObserver = std::function<void(long step, const FilterState& prior,
                                        const FilterState& posterior)>;

struct RunOptions {
  FeedbackSource feedback = FeedbackSource::estimate;
  StepObserver observer;
};

struct NoiseDraw {
  Vector process;
  Vector measurement;
};

/// Zero-mean Gaussian draws for one step, process first.
class NoiseSource {
 public:
  NoiseSource(const NoiseSpec& spec, std::uint64_t seed);
  NoiseDraw next();

 private:
  GaussianSampler process_;
  GaussianSampler measurement_;
  Rng rng_;
};

NoiseDraw sample_noise(const NoiseSpec& spec, Rng& rng);

/// Discrete model, LQR design and filter configuration derived from a
/// scenario.
struct ClosedLoopSetup {
  LinearModel discrete;
  LqrDesign lqr;
  FilterConfig filter;
};

ClosedLoopSetup prepare_closed_loop(const Scenario& s);

RunTrace run_scenario(const Scenario& s, std::uint64_t seed, const RunOptions& options = {});
RunTrace run_scenario(const Scenario& s, const ClosedLoopSetup& setup, std::uint64_t seed,
                      const RunOptions& options = {});

MetricsReport compute_metrics(const RunTrace& trace, const Scenario& s);

/// Writes trace.csv, metrics.json and plot.csv into `dir` (created if
/// missing).
void write_trace(const RunTrace& trace, const std::filesystem::path& dir);

nlohmann::json metrics_to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);

}  // namespace trackctl
