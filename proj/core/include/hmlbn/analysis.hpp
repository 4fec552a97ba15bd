#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmlbn/scenario.hpp"

namespace hmlbn {

enum class PenaltyKind { FixedToMobile, MobileToMobile };

std::string_view to_string(PenaltyKind kind);

/// Triangular-routing penalty parameters. Delays in ms, rates in 1/s.
struct PenaltyModel {
  int k = 10;
  int d_m = 18;
  PenaltyKind kind = PenaltyKind::FixedToMobile;
  double alpha = 5.0;
  double zeta = 2.0;
  double p_loss = 0.005;
  double mu = 1.0;
  double p = 0.5;

  double q() const;  // 1/d_m, throws InvalidDm for d_m < 1
  double eta() const { return p * mu; }
};

/// pi_j for j = 0..d_m. Throws InvalidDm for d_m < 1.
std::vector<double> stationary_distribution(int d_m);
/// Mean of the stationary hop penalty. Throws InvalidDm for d_m < 0.
double expected_penalty(int d_m);

struct DmBound {
  int d_m = 0;
  double d_bar = 0.0;
};
/// Worst-case d_m for network diameter `k` (router hops). Throws InvalidArgument for k < 1.
DmBound dm_upper_bound(int k, PenaltyKind kind);

struct DelayPenalty {
  double mean_ms = 0.0;
  double sd_ms = 0.0;
};
DelayPenalty delay_penalty(double d_bar, double alpha_ms, double zeta_ms);
double loss_penalty(double d_bar, double p_loss);

struct MonteCarloResult {
  std::vector<double> pi;     // time-weighted occupancy
  std::vector<double> sigma;  // standard error per bin
  double mean = 0.0;
  double mean_sigma = 0.0;
  std::uint64_t jumps = 0;
  std::uint64_t seed = 0;
};

/// Simulates the hop-penalty chain: Exp(eta) holding, next state uniform
/// over the other d_m states. Work is split into fixed chunks with derived
/// seeds and merged by chunk index, so results do not depend on `threads`.
MonteCarloResult monte_carlo_ctmc(const PenaltyModel& model, std::uint64_t jumps, std::uint64_t seed,
                                  unsigned threads = 0);

/// Undirected graph on vertices 0..n-1.
class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n = 0) : adj_(n) {}
  void add_edge(std::size_t a, std::size_t b);
  std::size_t size() const noexcept { return adj_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_.at(v); }

 private:
  std::vector<std::vector<std::size_t>> adj_;
};

/// Hop distances from `src`; -1 for unreachable vertices.
std::vector<int> bfs_distances(const SimpleGraph& g, std::size_t src);
/// Largest shortest-path distance in edges. Throws InvalidTopology if disconnected.
int diameter_edges(const SimpleGraph& g);
/// Diameter counted in routers along the path (edges + 1).
int diameter_router_hops(const SimpleGraph& g);

struct HopDifference {
  int k_opt = 0;
  int k_tri = 0;
  int d = 0;
};
/// Direct CN-MN distance against the CN-HA-MN detour. Throws VertexNotFound.
HopDifference hop_difference(const SimpleGraph& g, std::size_t cn, std::size_t ha, std::size_t mn);

struct HopDifferenceProfile {
  std::vector<std::size_t> positions;
  std::vector<HopDifference> values;
  int d_m = 0;
  std::vector<std::size_t> histogram;  // count of positions per d
};
HopDifferenceProfile hop_difference_profile(const SimpleGraph& g, std::size_t cn, std::size_t ha,
                                            const std::vector<std::size_t>& positions);

struct PositionPenalty {
  std::string region;
  std::string ler;
  bool intra_area = false;
  int hmlbn_hops = 0;
  int direct_hops = 0;
  int triangular_hops = 0;
  int hmlbn_difference() const { return hmlbn_hops - direct_hops; }
  int triangular_difference() const { return triangular_hops - direct_hops; }
};

/// Runs the scenario's single flow once per region and compares the
/// converged path with the direct path and the detour via `analysis.ha`.
/// Throws ScenarioInvalid when the flow or HA vertex is missing.
std::vector<PositionPenalty> measure_simulated_penalty(const Scenario& scenario);

}  // namespace hmlbn
