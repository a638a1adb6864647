#include "trackctl/random.hpp"

#include <algorithm>
#include <cmath>

namespace trackctl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t key = splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Rng(seq);
}

GaussianSampler::GaussianSampler(const Matrix& cov) {
  if (cov.rows() != cov.cols()) throw DimensionError("covariance must be square");
  if (cov.size() == 0) {
    root_ = Matrix(0, 0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(cov));
  Vector scale = solver.eigenvalues().unaryExpr([](double v) { return std::sqrt(std::max(v, 0.0)); });
  root_ = solver.eigenvectors() * scale.asDiagonal();
}

Vector GaussianSampler::operator()(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(root_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  return root_ * z;
}

}  // namespace trackctl
