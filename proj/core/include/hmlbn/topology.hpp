#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hmlbn/types.hpp"

namespace hmlbn {

struct NodeSpec {
  std::string name;
  RouterId rid;
  NodeRole role = NodeRole::Lsr;
  AreaId area;
};

struct EdgeSpec {
  std::string a;
  std::string b;
  double latency_ms = 1.0;
};

struct RegionSpec {
  std::string id;
  std::string ler;
  std::vector<std::string> cells;
};

/// Scenario-level description of the network, before validation.
struct TopologySpec {
  std::vector<NodeSpec> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<RegionSpec> regions;
};

struct Node {
  std::string name;
  RouterId rid;
  NodeRole role;
  AreaId area;
};

/// A Mobility Region: RAN cells terminated on one LER.
struct Region {
  std::string id;
  RouterId ler;
  std::vector<std::string> cells;
};

/// Validated, immutable regionalized network graph.
///
/// Forwarding nodes are LERs, ALERs and LSRs. AMRRs are present for control
/// message latency only: edges touching an AMRR never carry data packets.
class NetworkGraph {
 public:
  /// Validates `spec` and builds the graph. Throws Error with one of
  /// DuplicateRouterId, AreaWithoutAler, AreaWithoutAmrr,
  /// DisconnectedForwardingGraph, DisconnectedControlGraph or InvalidTopology.
  static NetworkGraph build(const TopologySpec& spec);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(RouterId rid) const;
  const Node& node(std::string_view name) const;
  const Node* find(RouterId rid) const;
  const Node* find(std::string_view name) const;
  const std::string& name_of(RouterId rid) const { return node(rid).name; }

  bool is_forwarding(RouterId rid) const;
  /// Forwarding nodes sorted by RouterId.
  const std::vector<RouterId>& forwarding_nodes() const noexcept { return forwarding_; }
  /// Forwarding neighbors of a forwarding node, sorted by RouterId.
  const std::vector<RouterId>& forwarding_neighbors(RouterId rid) const;
  double edge_latency_ms(RouterId a, RouterId b) const;
  /// One-way control-message latency in seconds along the minimum-latency path.
  SimTime control_latency(RouterId a, RouterId b) const;

  std::vector<AreaId> areas() const;
  /// Nodes of `role` in `area`, sorted by RouterId.
  std::vector<RouterId> members(AreaId area, NodeRole role) const;

  const std::map<std::string, Region>& regions() const noexcept { return regions_; }
  const Region* region_of_cell(std::string_view cell) const;
  std::vector<std::string> cells_of(RouterId ler) const;

  /// Interface name on `node` facing `neighbor`, e.g. "GIG1/0/3".
  std::string interface_name(RouterId node, RouterId neighbor) const;

 private:
  std::size_t index(RouterId rid) const;

  std::vector<Node> nodes_;
  std::unordered_map<RouterId, std::size_t> by_rid_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::vector<RouterId> forwarding_;
  std::vector<std::vector<RouterId>> fwd_neighbors_;
  std::vector<std::map<RouterId, double>> fwd_latency_;
  std::vector<double> control_latency_;  // row-major, seconds
  std::map<std::string, Region> regions_;
  std::map<std::string, std::string, std::less<>> cell_region_;
};

/// Convenience wrapper matching the scenario vocabulary.
inline NetworkGraph build_topology(const TopologySpec& spec) { return NetworkGraph::build(spec); }

struct LspHop {
  InfraLabel out_label;
  RouterId next_hop;
};

struct LabelAction {
  enum class Kind { Pop, Swap };
  Kind kind;
  RouterId fec;
  InfraLabel out_label;  // Swap only
  RouterId next_hop;     // Swap only
};

/// Pre-constructed full mesh of node-to-node LSPs keyed by Router-ID FECs.
///
/// Every forwarding node allocates one incoming label per FEC (its own
/// included, which pops). Paths are shortest by hop count with the lowest
/// next-hop RouterId breaking ties. No penultimate-hop popping.
class LspTable {
 public:
  static LspTable compute(const NetworkGraph& graph);

  /// Outgoing label and next hop from `node` toward `fec`; empty when node == fec.
  std::optional<LspHop> toward(RouterId node, RouterId fec) const;
  /// Label `node` advertises for `fec`.
  InfraLabel in_label(RouterId node, RouterId fec) const;
  std::optional<LabelAction> action(RouterId node, InfraLabel in) const;

  /// Sequence of nodes visited from src to dst, both included.
  std::vector<RouterId> trail(RouterId src, RouterId dst) const;
  std::size_t hop_count(RouterId src, RouterId dst) const;

  const std::vector<RouterId>& nodes() const noexcept { return nodes_; }
  bool contains(RouterId rid) const { return index_.count(rid) != 0; }

 private:
  std::size_t idx(RouterId rid) const;

  std::vector<RouterId> nodes_;
  std::unordered_map<RouterId, std::size_t> index_;
  std::vector<int> next_;          // row-major [node][fec] -> node index, -1 for self
  std::vector<std::uint32_t> dist_;
  // Incoming labels are 16 + fec index, so label -> fec is arithmetic.
};

inline LspTable compute_infrastructure_lsps(const NetworkGraph& graph) { return LspTable::compute(graph); }

}  // namespace hmlbn
