#include "hmlbn/mobility.hpp"

#include <cmath>

namespace hmlbn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

RandomWalk::RandomWalk(const StochasticSpec& spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

std::optional<std::string> RandomWalk::next_region(const std::string& current) {
  const double u = rng_.uniform();
  auto it = spec_.adjacency.find(current);
  if (it == spec_.adjacency.end() || it->second.empty() || u >= spec_.p) return std::nullopt;
  return it->second[rng_.index(it->second.size())];
}

}  // namespace hmlbn
