#include "hmlbn/forwarding.hpp"

#include <algorithm>

namespace hmlbn {

void record_hop(DataPacket& packet, RouterId node, SimTime now) {
  packet.hops.push_back(Hop{node, now, packet.stack.to_string()});
  packet.max_depth = std::max(packet.max_depth, packet.stack.depth());
}

Disposition ForwardingEngine::step(DataPacket& packet, RouterId node, SimTime now) {
  Disposition d = [&] {
    if (packet.stack.empty()) return Disposition::drop(DropReason::NoLabelEntry);
    auto action = ctx_.lsps.action(node, packet.stack.top().label);
    if (!action) return Disposition::drop(DropReason::NoLabelEntry);
    if (action->kind == LabelAction::Kind::Swap) {
      packet.stack.swap_top(action->out_label);
      return Disposition::forward(action->next_hop);
    }
    packet.stack.pop();
    if (auto a = alers_.find(node); a != alers_.end()) return a->second.forward_transit(packet, now);
    if (auto l = lers_.find(node); l != lers_.end()) return l->second.egress_deliver(packet, now);
    return Disposition::drop(DropReason::NoLabelEntry);
  }();
  record_hop(packet, node, now);
  return d;
}

std::string path_string(const DataPacket& packet, const NetworkGraph& graph) {
  std::string out;
  for (const auto& h : packet.hops) {
    if (!out.empty()) out += '>';
    out += graph.name_of(h.node);
  }
  return out;
}

std::string aler_path(const DataPacket& packet, const NetworkGraph& graph) {
  std::string out;
  for (const auto& h : packet.hops) {
    const Node& n = graph.node(h.node);
    if (n.role != NodeRole::Aler) continue;
    if (!out.empty()) out += '>';
    out += n.name;
  }
  return out;
}

}  // namespace hmlbn
