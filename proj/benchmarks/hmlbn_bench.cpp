#include <random>

#include <benchmark/benchmark.h>

#include "hmlbn/analysis.hpp"
#include "hmlbn/messages.hpp"
#include "hmlbn/simulator.hpp"

using namespace hmlbn;

namespace {

Scenario load(const char* name) { return load_scenario(std::string(HMLBN_SCENARIO_DIR) + "/" + name + ".json"); }

void BM_LspMesh(benchmark::State& state) {
  const auto graph = NetworkGraph::build(load("scaling_inter_10").topology);
  for (auto _ : state) benchmark::DoNotOptimize(LspTable::compute(graph));
  state.SetLabel(std::to_string(graph.forwarding_nodes().size()) + " forwarding nodes");
}
BENCHMARK(BM_LspMesh)->Unit(benchmark::kMicrosecond);

// One infrastructure swap at a core router.
void BM_ForwardingStep(benchmark::State& state) {
  const auto graph = NetworkGraph::build(load("startup").topology);
  const auto lsps = LspTable::compute(graph);
  std::map<RouterId, Ler> lers;
  std::map<RouterId, Aler> alers;
  ForwardingEngine engine({graph, lsps}, lers, alers);
  const RouterId core = graph.node("C3").rid;
  const RouterId fec = graph.node("ALER1").rid;
  DataPacket pkt;
  pkt.dst = MobilePrefix::parse("10.1.1.1/32");
  for (auto _ : state) {
    pkt.stack = LabelStack();
    pkt.stack.push(Label(16), LabelTag::Mobility);
    pkt.stack.push(lsps.in_label(core, fec), LabelTag::Infrastructure);
    pkt.hops.clear();
    benchmark::DoNotOptimize(engine.step(pkt, core, 0.0));
  }
}
BENCHMARK(BM_ForwardingStep);

void BM_WireRoundTrip(benchmark::State& state) {
  MobilityBinding b;
  b.prefix = MobilePrefix::parse("10.1.1.1/32");
  b.origin = RouterId(0x1401010c);
  b.label = Label(16);
  b.area = AreaId{1};
  const auto msg = make_message(MessageKind::BindingUpdate, b.origin, RouterId(0x14010201), 0.1, b);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_decode(canonical_encode(msg)));
}
BENCHMARK(BM_WireRoundTrip);

void BM_MonteCarlo(benchmark::State& state) {
  PenaltyModel model;
  model.d_m = 18;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_ctmc(model, static_cast<std::uint64_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_HopDifference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  SimpleGraph g(n);
  for (std::size_t v = 1; v < n; ++v) g.add_edge(rng() % v, v);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hop_difference(g, i % n, (i * 7) % n, (i * 13) % n));
    ++i;
  }
}
BENCHMARK(BM_HopDifference)->Arg(30)->Arg(300);

void BM_Simulate(benchmark::State& state, const char* name) {
  const Scenario s = load(name);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s));
}
BENCHMARK_CAPTURE(BM_Simulate, startup, "startup")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, inter_area_handoff, "inter_area_handoff")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Simulate, stochastic_walk, "stochastic_walk")->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
