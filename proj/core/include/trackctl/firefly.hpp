#pragma once

// Firefly-algorithm minimizer over a box.
//
// Each firefly's brightness is its (negated) cost. Every iteration, each
// firefly moves toward every brighter one by
//
//   x <- x + beta0 exp(-gamma r^2) (x_j - x) + alpha_t (U(-0.5, 0.5)) (upper - lower)
//
// with alpha_t = alpha0 * alpha_decay^t, then is clamped to the box. A
// firefly with no brighter partner takes the random term only.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "trackctl/matstack.hpp"
#include "trackctl/random.hpp"

namespace trackctl {

struct FireflyParams {
  int population = 25;
  int iterations = 1000;
  double beta0 = 2.0;  // attraction rate
  double gamma = 0.3;  // light absorption
  double alpha0 = 0.2;
  double alpha_decay = 0.98;
  std::uint64_t seed = 0;
  /// Worker threads for objective evaluation; results do not depend on it.
  int threads = 1;

  void validate() const;
};

struct SearchSpace {
  Vector lower;
  Vector upper;

  int dims() const { return static_cast<int>(lower.size()); }
  /// lower <= upper componentwise; equal bounds pin a dimension.
  void validate() const;
  Vector clamp(const Vector& x) const;
  bool contains(const Vector& x) const;
};

struct OptimizationResult {
  Vector best_position;
  double best_cost = 0.0;
  /// Best cost after initialization (entry 0) and after each iteration.
  std::vector<double> history;
  /// Position of the best candidate at each history entry.
  std::vector<Vector> best_positions;
  long evaluations = 0;
};

using Objective = std::function<double(const Vector&)>;

/// Called with every evaluated candidate, in deterministic order.
using EvaluationObserver = std::function<void(const Vector&, double)>;

double attractiveness(double beta0, double gamma, double r);

double alpha_at(const FireflyParams& params, int iteration);

Vector move_firefly(const Vector& xi, const Vector& xj, const FireflyParams& params,
                    const SearchSpace& space, Rng& rng, int iteration);

/// Random step for a firefly with no brighter partner.
Vector random_walk(const Vector& xi, const FireflyParams& params, const SearchSpace& space,
                   Rng& rng, int iteration);

/// `initial` replaces the first random starting positions (clamped to the
/// box), e.g. to keep a known configuration in the running.
OptimizationResult optimize(const Objective& objective, const SearchSpace& space,
                            const FireflyParams& params,
                            const EvaluationObserver& observer = {},
                            std::span<const Vector> initial = {});

}  // namespace trackctl
