#include <cmath>

#include <gtest/gtest.h>

#include "hmlbn/simulator.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using hmlbn::test::bundled;

namespace {

// Packets a constant-rate flow emits, counted without the simulator.
std::uint64_t expected_packets(const FlowSpec& f, double duration) {
  std::uint64_t n = 0;
  for (std::uint64_t i = 0;; ++i) {
    const double t = f.start + static_cast<double>(i) / f.rate_pps;
    if (t >= f.stop || t > duration) break;
    ++n;
  }
  return n;
}

std::size_t count_kind(const Trace& trace, const std::string& kind, double after = -1.0) {
  std::size_t n = 0;
  for (const auto& ev : trace.events()) n += ev.kind == kind && ev.t > after;
  return n;
}

}  // namespace

TEST(Simulator, EveryPacketIsAccountedFor) {
  for (const auto& name : hmlbn::test::bundled_names()) {
    const Scenario s = bundled(name);
    const auto sim = simulate(s);
    const auto m = sim->metrics();
    std::uint64_t expected = 0;
    for (const auto& f : s.flows) expected += expected_packets(f, s.duration);
    EXPECT_EQ(sim->packets().size(), expected) << name;
    const auto t = m.totals();
    EXPECT_EQ(t.ingress, t.delivered + t.dropped + t.in_flight) << name;
    EXPECT_EQ(t.delivered, count_kind(sim->trace(), "deliver")) << name;
    EXPECT_EQ(t.dropped, count_kind(sim->trace(), "drop")) << name;
  }
}

TEST(Simulator, TransitNodesNeverLookUpIp) {
  for (const auto& name : hmlbn::test::bundled_names()) {
    const auto m = simulate(bundled(name))->metrics();
    EXPECT_EQ(m.transit_ip_lookups, 0u) << name;
    EXPECT_LE(m.max_stack_depth, 2u) << name;
  }
}

TEST(Simulator, StartupDeliversEverythingOverSixHops) {
  const Scenario s = bundled("startup");
  const auto sim = simulate(s);
  const auto t = sim->metrics().totals();
  EXPECT_EQ(t.ingress, expected_packets(s.flows[0], s.duration));
  EXPECT_EQ(t.delivered, t.ingress);
  // LER33 > ALER3 > C3 > C1 > ALER1 > LER12 on the first-hop tie-break.
  const auto& lsps = sim->lsps();
  const auto& g = sim->graph();
  const auto via = lsps.hop_count(g.node("LER33").rid, g.node("ALER1").rid) +
                   lsps.hop_count(g.node("ALER1").rid, g.node("LER12").rid);
  EXPECT_DOUBLE_EQ(t.mean_hops(), static_cast<double>(via));
}

TEST(Simulator, IntraAreaTrafficTakesTheShortestPath) {
  Scenario s = bundled("startup");
  s.flows[0].src = "LER11";
  const auto sim = simulate(s);
  const auto& g = sim->graph();
  const auto direct = sim->lsps().hop_count(g.node("LER11").rid, g.node("LER12").rid);
  for (const auto& p : sim->packets()) {
    ASSERT_EQ(p.outcome, PacketRecord::Outcome::Delivered);
    EXPECT_EQ(p.hops, direct);
  }
}

TEST(Simulator, SameRunSameTrace) {
  const Scenario s = bundled("stochastic_walk");
  const auto a = simulate(s);
  const auto b = simulate(s);
  EXPECT_EQ(a->trace().to_jsonl(), b->trace().to_jsonl());
  EXPECT_EQ(a->metrics().to_csv(), b->metrics().to_csv());
  Scenario other = s;
  other.seed = s.seed + 1;
  EXPECT_NE(simulate(other)->trace().to_jsonl(), a->trace().to_jsonl());
}

TEST(Simulator, LocalHandoffIsSilent) {
  const Scenario s = bundled("msf_local_handoff");
  const auto sim = simulate(s);
  ASSERT_EQ(sim->mn("MN1").moves.size(), 1u);
  const double move = sim->mn("MN1").moves[0];
  EXPECT_EQ(count_kind(sim->trace(), "ctrl_send", move), 0u);
  EXPECT_EQ(count_kind(sim->trace(), "local_handoff"), 1u);
  EXPECT_EQ(sim->metrics().totals().dropped, 0u);
}

TEST(Simulator, FailedNodeDropsInFlightTraffic) {
  const auto sim = simulate(bundled("ha_failover"));
  EXPECT_TRUE(sim->failed(sim->graph().node("ALER1B").rid));
  const auto t = sim->metrics().totals();
  EXPECT_GT(t.delivered, 0u);
  EXPECT_EQ(t.dropped, t.drops_by_reason.count(DropReason::NodeFailed) ? t.drops_by_reason.at(DropReason::NodeFailed)
                                                                        : 0u);
}

TEST(Simulator, ScheduledStepsMustNotBeInThePast) {
  Simulator sim(bundled("startup"));
  sim.run_until(1.0);
  EXPECT_EQ(sim.now(), 1.0);
  EXPECT_TRUE(hmlbn::test::error_code([&] { sim.schedule(ScriptStep{0.5, "MN1", MnAction::Move, "MR13/c1"}); }));
}

TEST(RandomWalk, DwellMeanMatchesRate) {
  StochasticSpec spec;
  spec.mu = 2.5;
  spec.p = 0.8;
  spec.adjacency = {{"A", {"B", "C"}}, {"B", {"A"}}, {"C", {"A"}}};
  RandomWalk walk(spec, 42);
  constexpr int n = 10000;
  double sum = 0.0;
  int moves = 0;
  std::map<std::string, int> targets;
  for (int i = 0; i < n; ++i) {
    const double d = walk.next_dwell();
    ASSERT_GT(d, 0.0);
    sum += d;
    if (auto next = walk.next_region("A")) {
      ++moves;
      ++targets[*next];
    }
  }
  EXPECT_NEAR(sum / n, 1.0 / spec.mu, 0.03 / spec.mu);
  // Binomial(n, p): 4 sigma is about 0.016.
  EXPECT_NEAR(static_cast<double>(moves) / n, spec.p, 0.016);
  EXPECT_EQ(targets.size(), 2u);
  EXPECT_NEAR(static_cast<double>(targets["B"]) / moves, 0.5, 0.025);
}

TEST(RandomWalk, IsolatedRegionStays) {
  StochasticSpec spec;
  spec.p = 1.0;
  RandomWalk walk(spec, 1);
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(walk.next_region("X"));
}

TEST(Rng, UniformStaysInUnitInterval) {
  Rng rng(7);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}
