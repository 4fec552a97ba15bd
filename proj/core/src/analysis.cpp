#include "hmlbn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <thread>

#include "hmlbn/mobility.hpp"
#include "hmlbn/simulator.hpp"

namespace hmlbn {

namespace {

constexpr std::uint64_t kChunks = 64;

struct ChunkTally {
  std::vector<double> time;
  double total = 0.0;
};

ChunkTally run_chunk(int d_m, double eta, std::uint64_t jumps, std::uint64_t seed) {
  Rng rng(seed);
  ChunkTally t;
  t.time.assign(static_cast<std::size_t>(d_m) + 1, 0.0);
  auto state = rng.index(t.time.size());
  for (std::uint64_t i = 0; i < jumps; ++i) {
    const double hold = rng.exponential(eta);
    t.time[state] += hold;
    t.total += hold;
    auto next = rng.index(static_cast<std::size_t>(d_m));
    state = next >= state ? next + 1 : next;
  }
  return t;
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
  return kind == PenaltyKind::FixedToMobile ? "fixedToMobile" : "mobileToMobile";
}

double PenaltyModel::q() const {
  if (d_m < 1) throw Error(Errc::InvalidDm, "q needs d_m >= 1");
  return 1.0 / d_m;
}

std::vector<double> stationary_distribution(int d_m) {
  if (d_m < 1) throw Error(Errc::InvalidDm, "d_m must be >= 1, got " + std::to_string(d_m));
  return std::vector<double>(static_cast<std::size_t>(d_m) + 1, 1.0 / (d_m + 1));
}

double expected_penalty(int d_m) {
  if (d_m < 0) throw Error(Errc::InvalidDm, "d_m must be >= 0, got " + std::to_string(d_m));
  return d_m / 2.0;
}

DmBound dm_upper_bound(int k, PenaltyKind kind) {
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  const int d_m = kind == PenaltyKind::FixedToMobile ? 2 * (k - 1) : 3 * k - 2;
  return {d_m, expected_penalty(d_m)};
}

DelayPenalty delay_penalty(double d_bar, double alpha_ms, double zeta_ms) {
  if (d_bar < 0.0) throw Error(Errc::InvalidArgument, "negative d_bar");
  return {alpha_ms * d_bar, zeta_ms * std::sqrt(d_bar)};
}

double loss_penalty(double d_bar, double p_loss) {
  if (d_bar < 0.0) throw Error(Errc::InvalidArgument, "negative d_bar");
  if (p_loss < 0.0 || p_loss > 1.0) throw Error(Errc::InvalidArgument, "p_loss outside [0, 1]");
  return 1.0 - std::pow(1.0 - p_loss, d_bar);
}

MonteCarloResult monte_carlo_ctmc(const PenaltyModel& model, std::uint64_t jumps, std::uint64_t seed,
                                  unsigned threads) {
  if (model.d_m < 1) throw Error(Errc::InvalidDm, "Monte Carlo needs d_m >= 1");
  if (jumps < 1) throw Error(Errc::InvalidArgument, "need at least one jump");
  if (!(model.eta() > 0.0)) throw Error(Errc::InvalidArgument, "eta must be positive");

  const std::uint64_t chunks = std::min(kChunks, jumps);
  std::vector<ChunkTally> tallies(chunks);
  auto work = [&](std::uint64_t c) {
    const std::uint64_t n = jumps / chunks + (c < jumps % chunks ? 1 : 0);
    tallies[c] = run_chunk(model.d_m, model.eta(), n, splitmix64(seed + c));
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t c = w; c < chunks; c += threads) work(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  const std::size_t bins = static_cast<std::size_t>(model.d_m) + 1;
  std::vector<double> time(bins, 0.0);
  double total = 0.0;
  for (const auto& t : tallies) {
    for (std::size_t j = 0; j < bins; ++j) time[j] += t.time[j];
    total += t.total;
  }

  MonteCarloResult r;
  r.jumps = jumps;
  r.seed = seed;
  const double n = static_cast<double>(jumps);
  // Consecutive states are anti-correlated and holding times add variance.
  const double inflation = 2.0 * model.d_m / (model.d_m + 1.0);
  const double p0 = 1.0 / bins;
  for (std::size_t j = 0; j < bins; ++j) {
    r.pi.push_back(time[j] / total);
    r.mean += static_cast<double>(j) * r.pi.back();
    r.sigma.push_back(std::sqrt(p0 * (1.0 - p0) / n * inflation));
  }
  const double var = (static_cast<double>(bins) * bins - 1.0) / 12.0;
  r.mean_sigma = std::sqrt(var / n * inflation);
  return r;
}

void SimpleGraph::add_edge(std::size_t a, std::size_t b) {
  if (a >= adj_.size() || b >= adj_.size()) throw Error(Errc::VertexNotFound, "edge endpoint out of range");
  if (a == b) return;
  if (std::find(adj_[a].begin(), adj_[a].end(), b) != adj_[a].end()) return;
  adj_[a].push_back(b);
  adj_[b].push_back(a);
}

std::vector<int> bfs_distances(const SimpleGraph& g, std::size_t src) {
  if (src >= g.size()) throw Error(Errc::VertexNotFound, "vertex " + std::to_string(src));
  std::vector<int> dist(g.size(), -1);
  std::deque<std::size_t> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    const auto v = q.front();
    q.pop_front();
    for (auto w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

int diameter_edges(const SimpleGraph& g) {
  int best = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (int d : bfs_distances(g, v)) {
      if (d < 0) throw Error(Errc::InvalidTopology, "graph is disconnected");
      best = std::max(best, d);
    }
  }
  return best;
}

int diameter_router_hops(const SimpleGraph& g) { return diameter_edges(g) + 1; }

HopDifference hop_difference(const SimpleGraph& g, std::size_t cn, std::size_t ha, std::size_t mn) {
  for (auto v : {cn, ha, mn}) {
    if (v >= g.size()) throw Error(Errc::VertexNotFound, "vertex " + std::to_string(v));
  }
  const auto from_cn = bfs_distances(g, cn);
  const auto from_ha = bfs_distances(g, ha);
  if (from_cn[mn] < 0 || from_cn[ha] < 0 || from_ha[mn] < 0) {
    throw Error(Errc::InvalidTopology, "vertices are not connected");
  }
  HopDifference h;
  h.k_opt = from_cn[mn];
  h.k_tri = from_cn[ha] + from_ha[mn];
  h.d = h.k_tri - h.k_opt;
  return h;
}

HopDifferenceProfile hop_difference_profile(const SimpleGraph& g, std::size_t cn, std::size_t ha,
                                            const std::vector<std::size_t>& positions) {
  HopDifferenceProfile p;
  p.positions = positions;
  for (auto mn : positions) {
    p.values.push_back(hop_difference(g, cn, ha, mn));
    p.d_m = std::max(p.d_m, p.values.back().d);
  }
  p.histogram.assign(static_cast<std::size_t>(p.d_m) + 1, 0);
  for (const auto& v : p.values) ++p.histogram[static_cast<std::size_t>(v.d)];
  return p;
}

std::vector<PositionPenalty> measure_simulated_penalty(const Scenario& scenario) {
  if (scenario.flows.size() != 1) throw Error(Errc::ScenarioInvalid, "need exactly one flow");
  if (!scenario.analysis.ha) throw Error(Errc::ScenarioInvalid, "analysis.ha is not set");
  const FlowSpec flow = scenario.flows.front();

  const auto graph = NetworkGraph::build(scenario.topology);
  const auto lsps = LspTable::compute(graph);
  const Node* src = graph.find(flow.src);
  const Node* ha = graph.find(*scenario.analysis.ha);
  if (!src || src->role != NodeRole::Ler) throw Error(Errc::ScenarioInvalid, "flow source must be an LER");
  if (!ha || !graph.is_forwarding(ha->rid)) throw Error(Errc::ScenarioInvalid, "HA must be a forwarding node");

  std::vector<PositionPenalty> out;
  for (const auto& [id, region] : graph.regions()) {
    Scenario s = scenario;
    s.mobility.script.clear();
    s.mobility.stochastic.clear();
    s.faults.clear();
    s.duration = 2.0;
    s.mobility.script.push_back(ScriptStep{0.1, flow.dst, MnAction::Attach, region.cells.front()});
    s.flows.front().start = 1.0;
    s.flows.front().stop = 1.5;
    s.flows.front().rate_pps = 20.0;
    Simulator sim(s);
    sim.run();

    PositionPenalty p;
    p.region = id;
    p.ler = graph.name_of(region.ler);
    p.intra_area = graph.node(region.ler).area == src->area;
    p.direct_hops = static_cast<int>(lsps.hop_count(src->rid, region.ler));
    p.triangular_hops =
        static_cast<int>(lsps.hop_count(src->rid, ha->rid) + lsps.hop_count(ha->rid, region.ler));
    p.hmlbn_hops = -1;
    for (auto it = sim.packets().rbegin(); it != sim.packets().rend(); ++it) {
      if (it->outcome == PacketRecord::Outcome::Delivered) {
        p.hmlbn_hops = static_cast<int>(it->hops);
        break;
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace hmlbn
