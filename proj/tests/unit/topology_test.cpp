#include <gtest/gtest.h>

#include <map>
#include <set>

#include "hmlbn/topology.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using hmlbn::test::error_code;

namespace {

TopologySpec three_areas() { return hmlbn::test::bundled("startup").topology; }

RouterId rid(const NetworkGraph& g, const char* name) { return g.node(name).rid; }

// Forwarding-only edges as index pairs over forwarding_nodes().
hmlbn::test::EdgeList forwarding_edges(const NetworkGraph& g, const TopologySpec& spec,
                                       std::map<RouterId, std::size_t>& index) {
  for (std::size_t i = 0; i < g.forwarding_nodes().size(); ++i) index[g.forwarding_nodes()[i]] = i;
  hmlbn::test::EdgeList edges;
  for (const auto& e : spec.edges) {
    auto a = g.node(e.a).rid, b = g.node(e.b).rid;
    if (index.count(a) && index.count(b)) edges.emplace_back(index[a], index[b]);
  }
  return edges;
}

}  // namespace

TEST(Topology, ThreeAreaTopologyBuilds) {
  const auto g = NetworkGraph::build(three_areas());
  EXPECT_EQ(g.areas().size(), 3u);
  EXPECT_EQ(g.members(AreaId{1}, NodeRole::Ler).size(), 3u);
  EXPECT_FALSE(g.is_forwarding(rid(g, "AMRR1")));
  EXPECT_TRUE(g.is_forwarding(rid(g, "P1")));
  EXPECT_EQ(g.region_of_cell("MR12/c2")->ler, rid(g, "LER12"));
  EXPECT_EQ(g.cells_of(rid(g, "LER12")), (std::vector<std::string>{"MR12/c1", "MR12/c2"}));
}

TEST(Topology, ControlLatencyIsShortestPath) {
  const auto g = NetworkGraph::build(three_areas());
  // AMRR1-C1 (1 ms), C1-C3 (2 ms), C3-AMRR3 (1 ms).
  EXPECT_NEAR(g.control_latency(rid(g, "AMRR1"), rid(g, "AMRR3")), 0.004, 1e-12);
  EXPECT_NEAR(g.control_latency(rid(g, "LER12"), rid(g, "AMRR1")), 0.003, 1e-12);
}

TEST(Topology, InterfaceNamesFollowNeighborOrder) {
  const auto g = NetworkGraph::build(three_areas());
  const auto a1 = rid(g, "ALER1");
  const auto& n = g.forwarding_neighbors(a1);
  ASSERT_EQ(n.size(), 4u);  // C1 and LER11..13
  EXPECT_TRUE(std::is_sorted(n.begin(), n.end()));
  EXPECT_EQ(g.interface_name(a1, n.front()), "GIG1/0/1");
  EXPECT_EQ(g.interface_name(a1, n.back()), "GIG1/0/4");
  EXPECT_EQ(g.interface_name(a1, rid(g, "LER33")), "none");
}

TEST(Topology, ValidationErrors) {
  auto dup = three_areas();
  dup.nodes[1].rid = dup.nodes[0].rid;
  EXPECT_EQ(error_code([&] { NetworkGraph::build(dup); }), Errc::DuplicateRouterId);

  auto no_aler = three_areas();
  std::erase_if(no_aler.nodes, [](const NodeSpec& n) { return n.name == "ALER2"; });
  std::erase_if(no_aler.edges, [](const EdgeSpec& e) { return e.a == "ALER2" || e.b == "ALER2"; });
  EXPECT_EQ(error_code([&] { NetworkGraph::build(no_aler); }), Errc::AreaWithoutAler);

  auto no_amrr = three_areas();
  std::erase_if(no_amrr.nodes, [](const NodeSpec& n) { return n.name == "AMRR3"; });
  std::erase_if(no_amrr.edges, [](const EdgeSpec& e) { return e.a == "AMRR3" || e.b == "AMRR3"; });
  EXPECT_EQ(error_code([&] { NetworkGraph::build(no_amrr); }), Errc::AreaWithoutAmrr);

  auto loop = three_areas();
  loop.edges.push_back({"C1", "C1", 1.0});
  EXPECT_EQ(error_code([&] { NetworkGraph::build(loop); }), Errc::InvalidTopology);

  // LER11 reachable only through an AMRR: control plane fine, forwarding split.
  auto split = three_areas();
  std::erase_if(split.edges, [](const EdgeSpec& e) { return e.a == "LER11"; });
  split.edges.push_back({"LER11", "AMRR1", 1.0});
  EXPECT_EQ(error_code([&] { NetworkGraph::build(split); }), Errc::DisconnectedForwardingGraph);

  auto lonely = three_areas();
  std::erase_if(lonely.edges, [](const EdgeSpec& e) { return e.a == "AMRR2"; });
  EXPECT_EQ(error_code([&] { NetworkGraph::build(lonely); }), Errc::DisconnectedControlGraph);

  auto region = three_areas();
  region.regions[0].ler = "ALER1";
  EXPECT_EQ(error_code([&] { NetworkGraph::build(region); }), Errc::InvalidTopology);
}

TEST(LspTable, HopCountsMatchFloydWarshall) {
  const auto spec = three_areas();
  const auto g = NetworkGraph::build(spec);
  const auto lsps = LspTable::compute(g);
  std::map<RouterId, std::size_t> index;
  const auto oracle = hmlbn::test::floyd_warshall(g.forwarding_nodes().size(), forwarding_edges(g, spec, index));
  for (RouterId a : g.forwarding_nodes()) {
    for (RouterId b : g.forwarding_nodes()) {
      EXPECT_EQ(static_cast<int>(lsps.hop_count(a, b)), oracle[index[a]][index[b]]);
    }
  }
}

// Following labels hop by hop must reproduce trail() and end in a pop at the FEC.
TEST(LspTable, LabelChainsReachTheFec) {
  const auto g = NetworkGraph::build(three_areas());
  const auto lsps = LspTable::compute(g);
  for (RouterId src : g.forwarding_nodes()) {
    for (RouterId fec : g.forwarding_nodes()) {
      if (src == fec) {
        EXPECT_FALSE(lsps.toward(src, fec).has_value());
        continue;
      }
      std::vector<RouterId> walked{src};
      auto hop = *lsps.toward(src, fec);
      InfraLabel label = hop.out_label;
      RouterId at = hop.next_hop;
      for (std::size_t guard = 0; guard < 64; ++guard) {
        walked.push_back(at);
        EXPECT_EQ(lsps.in_label(at, fec), label);
        auto act = lsps.action(at, label);
        ASSERT_TRUE(act.has_value());
        EXPECT_EQ(act->fec, fec);
        if (act->kind == LabelAction::Kind::Pop) break;
        label = act->out_label;
        at = act->next_hop;
      }
      EXPECT_EQ(walked.back(), fec);
      EXPECT_EQ(walked, lsps.trail(src, fec));
      EXPECT_EQ(walked.size(), lsps.hop_count(src, fec) + 1);
    }
  }
}

TEST(LspTable, TieBreakPrefersLowestRouterId) {
  // Square a-b-d, a-c-d: two equal paths from a to d.
  TopologySpec spec;
  spec.nodes = {{"LERA", RouterId::parse("1.0.0.1"), NodeRole::Ler, AreaId{1}},
                {"X", RouterId::parse("1.0.0.9"), NodeRole::Lsr, AreaId{1}},
                {"Y", RouterId::parse("1.0.0.5"), NodeRole::Lsr, AreaId{1}},
                {"ALERD", RouterId::parse("1.0.0.2"), NodeRole::Aler, AreaId{1}},
                {"AMRR", RouterId::parse("1.0.0.3"), NodeRole::Amrr, AreaId{1}}};
  spec.edges = {{"LERA", "X"}, {"LERA", "Y"}, {"X", "ALERD"}, {"Y", "ALERD"}, {"AMRR", "ALERD"}};
  const auto g = NetworkGraph::build(spec);
  const auto lsps = LspTable::compute(g);
  EXPECT_EQ(lsps.toward(g.node("LERA").rid, g.node("ALERD").rid)->next_hop, g.node("Y").rid);
}

// Position-based labels: every node advertises 16 + rank of the FEC, so the
// same FEC has the same label everywhere and each node's labels are distinct.
TEST(LspTable, LabelsAreUniquePerNode) {
  const auto g = NetworkGraph::build(three_areas());
  const auto lsps = LspTable::compute(g);
  for (RouterId n : g.forwarding_nodes()) {
    std::set<std::uint32_t> seen;
    for (RouterId f : g.forwarding_nodes()) {
      const auto l = lsps.in_label(n, f).value();
      EXPECT_GE(l, Label::kFirstUnreserved);
      EXPECT_TRUE(seen.insert(l).second);
    }
  }
}
