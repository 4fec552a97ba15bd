#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmlbn/messages.hpp"
#include "hmlbn/topology.hpp"

namespace hmlbn {

using Outbox = std::vector<ControlMessage>;

/// Shared read-only view every node state machine works against.
struct NodeContext {
  const NetworkGraph& graph;
  const LspTable& lsps;
};

/// Longest-prefix match over a prefix-keyed map.
template <typename Map>
auto longest_match(Map& map, const MobilePrefix& target) -> decltype(&map.begin()->second) {
  decltype(&map.begin()->second) best = nullptr;
  int best_len = -1;
  for (auto& [prefix, value] : map) {
    if (prefix.contains(target) && prefix.length() > best_len) {
      best = &value;
      best_len = prefix.length();
    }
  }
  return best;
}

/// Lowest-RID AMRR of an area; it alone answers requests and peers with other areas.
inline RouterId primary_amrr(const NetworkGraph& graph, AreaId area) {
  auto amrrs = graph.members(area, NodeRole::Amrr);
  if (amrrs.empty()) throw Error(Errc::AreaWithoutAmrr, "area " + std::to_string(area.value()) + " has no AMRR");
  return amrrs.front();
}

}  // namespace hmlbn
