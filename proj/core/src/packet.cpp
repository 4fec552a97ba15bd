#include "hmlbn/packet.hpp"

namespace hmlbn {

StackEntry LabelStack::pop() {
  if (entries_.empty()) throw Error(Errc::InvalidArgument, "pop on empty label stack");
  StackEntry e = entries_.front();
  entries_.erase(entries_.begin());
  return e;
}

const StackEntry& LabelStack::top() const {
  if (entries_.empty()) throw Error(Errc::InvalidArgument, "top of empty label stack");
  return entries_.front();
}

void LabelStack::swap_top(Label label) {
  if (entries_.empty()) throw Error(Errc::InvalidArgument, "swap on empty label stack");
  entries_.front().label = label;
}

std::string LabelStack::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i].label.value());
  }
  return out + ']';
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::QueueOverflow: return "QueueOverflow";
    case DropReason::NoBinding: return "NoBinding";
    case DropReason::UnknownMobilityLabel: return "UnknownMobilityLabel";
    case DropReason::UnknownLocalMobilityLabel: return "UnknownLocalMobilityLabel";
    case DropReason::NoLabelEntry: return "NoLabelEntry";
    case DropReason::NoRouteToNextHop: return "NoRouteToNextHop";
    case DropReason::OutsideMobilityRange: return "OutsideMobilityRange";
    case DropReason::MnNotAttached: return "MnNotAttached";
    case DropReason::NodeFailed: return "NodeFailed";
  }
  return "?";
}

}  // namespace hmlbn
