#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "hmlbn/scenario.hpp"

namespace hmlbn {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded generator with platform-independent uniform and exponential draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate);
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// Stochastic region-to-region movement of one MN.
class RandomWalk {
 public:
  RandomWalk(const StochasticSpec& spec, std::uint64_t seed);

  double next_dwell() { return rng_.exponential(spec_.mu); }
  /// Region to move to after a dwell, or nothing when the MN stays put.
  std::optional<std::string> next_region(const std::string& current);

 private:
  StochasticSpec spec_;
  Rng rng_;
};

}  // namespace hmlbn
