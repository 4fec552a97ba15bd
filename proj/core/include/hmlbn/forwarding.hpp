#pragma once

#include <map>
#include <string>

#include "hmlbn/aler.hpp"
#include "hmlbn/ler.hpp"
#include "hmlbn/packet.hpp"

namespace hmlbn {

/// Per-hop data plane: infrastructure label switching everywhere, plus the
/// ALER transit and LER egress operations where a top label terminates.
class ForwardingEngine {
 public:
  ForwardingEngine(NodeContext ctx, std::map<RouterId, Ler>& lers, std::map<RouterId, Aler>& alers)
      : ctx_(ctx), lers_(lers), alers_(alers) {}

  /// Processes a labelled packet that has just arrived at `node` and records the hop.
  Disposition step(DataPacket& packet, RouterId node, SimTime now);

 private:
  NodeContext ctx_;
  std::map<RouterId, Ler>& lers_;
  std::map<RouterId, Aler>& alers_;
};

void record_hop(DataPacket& packet, RouterId node, SimTime now);

/// "LER33>P1>ALER3>C3>C1>ALER1>LER12"
std::string path_string(const DataPacket& packet, const NetworkGraph& graph);
/// Only the ALERs visited, in order: "ALER3>ALER1".
std::string aler_path(const DataPacket& packet, const NetworkGraph& graph);

}  // namespace hmlbn
