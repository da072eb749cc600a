#pragma once

#include <cstdint>
#include <random>

#include "inexact/types.hpp"

namespace inexact {

// Instance generator, version 1.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Stream s of seed k is seeded with splitmix64(k ^ splitmix64(s + 1)).
// Transforms (all explicit, no std distributions):
//   uniform01  = (next() >> 11) * 2^-53
//   normal     = Box-Muller on two uniforms, u1 mapped to (0, 1]; the sine
//                branch is discarded so every normal consumes two draws
//   uniform(a, b) = a + (b - a) * uniform01
class Rng {
 public:
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal();
  Vector normal_vector(Eigen::Index n);
  Vector uniform_vector(Eigen::Index n, double lo, double hi);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace inexact
