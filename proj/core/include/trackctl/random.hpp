#pragma once

#include <cstdint>
#include <random>

#include "trackctl/matstack.hpp"

namespace trackctl {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream keyed by (seed, a, b).
Rng make_stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0);

/// Draws N(0, cov) samples. The square root is taken from the symmetric
/// eigen-decomposition, so singular covariances are fine and a zero
/// covariance yields an exact zero vector.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Matrix& cov);
  Vector operator()(Rng& rng) const;
  Eigen::Index dims() const { return root_.rows(); }

 private:
  Matrix root_;
};

}  // namespace trackctl
