#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace plsaddle {

// SplitMix64 step; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform draw in [0, 1) built from the top 53 bits of the engine output.
// std::uniform_real_distribution is implementation-defined; this mapping is
// identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Vector with independent coordinates uniform on [-radius, radius].
inline Eigen::VectorXd sample_uniform(Eigen::Index dim, double radius, std::mt19937_64& rng) {
  if (!(radius > 0.0)) throw std::invalid_argument("sample_uniform: radius must be positive");
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = (2.0 * uniform01(rng) - 1.0) * radius;
  return v;
}

}  // namespace plsaddle
