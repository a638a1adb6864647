#include "trackctl/firefly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace trackctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags: initial population uses iteration key 0, moves use t + 1.
constexpr std::uint64_t kInitKey = 0;

double safe_cost(const Objective& objective, const Vector& x) {
  try {
    const double c = objective(x);
    return std::isfinite(c) ? c : kInf;
  } catch (const std::exception&) {
    return kInf;
  }
}

std::vector<double> evaluate_all(const Objective& objective, const std::vector<Vector>& xs,
                                 int threads) {
  std::vector<double> costs(xs.size(), kInf);
  const auto count = static_cast<int>(xs.size());
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) costs[i] = safe_cost(objective, xs[i]);
    return costs;
  }
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) costs[i] = safe_cost(objective, xs[i]);
      });
    }
  }
  return costs;
}

Vector uniform_noise(const FireflyParams& params, const SearchSpace& space, Rng& rng,
                     int iteration) {
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  Vector step(space.dims());
  const double alpha = alpha_at(params, iteration);
  for (int d = 0; d < space.dims(); ++d) {
    step(d) = alpha * unit(rng) * (space.upper(d) - space.lower(d));
  }
  return step;
}

}  // namespace

void FireflyParams::validate() const {
  if (population < 1) throw std::invalid_argument("firefly: population must be >= 1");
  if (iterations < 1) throw std::invalid_argument("firefly: iterations must be >= 1");
  if (!(beta0 > 0.0)) throw std::invalid_argument("firefly: beta0 must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("firefly: gamma must be >= 0");
  if (!(alpha0 >= 0.0)) throw std::invalid_argument("firefly: alpha0 must be >= 0");
  if (!(alpha_decay > 0.0 && alpha_decay <= 1.0)) {
    throw std::invalid_argument("firefly: alpha_decay must lie in (0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("firefly: threads must be >= 1");
}

void SearchSpace::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw DimensionError("search space bounds must be nonempty and equally sized");
  }
  for (int d = 0; d < dims(); ++d) {
    if (!std::isfinite(lower(d)) || !std::isfinite(upper(d)) || lower(d) > upper(d)) {
      throw std::invalid_argument(
          fmt::format("search space dimension {}: need finite lower <= upper", d));
    }
  }
}

Vector SearchSpace::clamp(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

bool SearchSpace::contains(const Vector& x) const {
  return x.size() == lower.size() && (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

double attractiveness(double beta0, double gamma, double r) {
  if (r < 0.0) throw std::invalid_argument("attractiveness: distance must be >= 0");
  return beta0 * std::exp(-gamma * r * r);
}

double alpha_at(const FireflyParams& params, int iteration) {
  return params.alpha0 * std::pow(params.alpha_decay, iteration);
}

Vector move_firefly(const Vector& xi, const Vector& xj, const FireflyParams& params,
                    const SearchSpace& space, Rng& rng, int iteration) {
  const double beta = attractiveness(params.beta0, params.gamma, (xi - xj).norm());
  const Vector moved = xi + beta * (xj - xi) + uniform_noise(params, space, rng, iteration);
  return space.clamp(moved);
}

Vector random_walk(const Vector& xi, const FireflyParams& params, const SearchSpace& space,
                   Rng& rng, int iteration) {
  return space.clamp(xi + uniform_noise(params, space, rng, iteration));
}

OptimizationResult optimize(const Objective& objective, const SearchSpace& space,
                            const FireflyParams& params, const EvaluationObserver& observer,
                            std::span<const Vector> initial) {
  params.validate();
  space.validate();
  const int pop = params.population;

  std::vector<Vector> positions(static_cast<std::size_t>(pop));
  for (int i = 0; i < pop; ++i) {
    Rng rng = make_stream(params.seed, kInitKey, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector x(space.dims());
    for (int d = 0; d < space.dims(); ++d) {
      x(d) = space.lower(d) + unit(rng) * (space.upper(d) - space.lower(d));
    }
    positions[static_cast<std::size_t>(i)] = space.clamp(x);
  }
  for (std::size_t i = 0; i < initial.size() && i < positions.size(); ++i) {
    if (initial[i].size() != space.dims()) {
      throw DimensionError("firefly: initial position has the wrong dimension");
    }
    positions[i] = space.clamp(initial[i]);
  }

  OptimizationResult result;
  result.best_cost = kInf;
  result.best_position = positions.front();

  auto absorb = [&](const std::vector<Vector>& xs, const std::vector<double>& costs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (observer) observer(xs[i], costs[i]);
      ++result.evaluations;
      if (costs[i] < result.best_cost) {
        result.best_cost = costs[i];
        result.best_position = xs[i];
      }
    }
    result.history.push_back(result.best_cost);
    result.best_positions.push_back(result.best_position);
  };

  std::vector<double> costs = evaluate_all(objective, positions, params.threads);
  absorb(positions, costs);

  for (int t = 0; t < params.iterations; ++t) {
    std::vector<Vector> next(positions.size());
    for (int i = 0; i < pop; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      Rng rng = make_stream(params.seed, static_cast<std::uint64_t>(t) + 1,
                            static_cast<std::uint64_t>(i));
      Vector x = positions[ui];
      bool moved = false;
      for (int j = 0; j < pop; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (costs[uj] < costs[ui]) {
          x = move_firefly(x, positions[uj], params, space, rng, t);
          moved = true;
        }
      }
      if (!moved) x = random_walk(x, params, space, rng, t);
      next[ui] = std::move(x);
    }
    positions = std::move(next);
    costs = evaluate_all(objective, positions, params.threads);
    absorb(positions, costs);
  }
  return result;
}

}  // namespace trackctl
