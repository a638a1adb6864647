#pragma once

// Firefly tuning of scenario weight matrices against closed-loop estimate
// MSE.

#include <string>
#include <vector>

#include "trackctl/firefly.hpp"
#include "trackctl/scenario.hpp"

namespace trackctl {

enum class TuneTarget {
  kf_noise,     // assumed q_process and r_meas diagonals
  lqr_weights,  // Q and R diagonals
};

/// Parses "kf", "lqr", "kf-noise-diagonals", "lqr-weight-diagonals".
TuneTarget parse_tune_target(const std::string& name);
std::string to_string(TuneTarget t);

/// Current diagonals in decision order.
Vector selected_diagonals(const Scenario& s, const std::vector<TuneTarget>& what);

/// Returns a copy with the diagonals replaced.
Scenario apply_diagonals(const Scenario& s, const std::vector<TuneTarget>& what,
                         const Vector& diagonals);

/// log10 of the current diagonals +- `decades`.
SearchSpace default_search_space(const Scenario& s, const std::vector<TuneTarget>& what,
                                 double decades = 3.0);

/// Mean estimate MSE across the scenario's seeds.
double mean_mse(const Scenario& s);

struct TuneResult {
  OptimizationResult optimization;  // positions are log10 diagonals
  Vector tuned_diagonals;
  Scenario tuned;
};

TuneResult tune_pipeline(const Scenario& s, const std::vector<TuneTarget>& what,
                         const SearchSpace& space, const FireflyParams& params);

}  // namespace trackctl
