#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmlbn/prefix.hpp"
#include "hmlbn/types.hpp"

namespace hmlbn {

enum class LabelTag : std::uint8_t { Infrastructure, Mobility };

struct StackEntry {
  Label label;
  LabelTag tag;
  friend bool operator==(const StackEntry&, const StackEntry&) = default;
};

/// MPLS label stack, top first. Tags are for trace output only.
class LabelStack {
 public:
  void push(Label label, LabelTag tag) { entries_.insert(entries_.begin(), StackEntry{label, tag}); }
  StackEntry pop();
  const StackEntry& top() const;
  void swap_top(Label label);
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t depth() const noexcept { return entries_.size(); }
  const std::vector<StackEntry>& entries() const noexcept { return entries_; }
  /// "[17,116]"
  std::string to_string() const;

  friend bool operator==(const LabelStack&, const LabelStack&) = default;

 private:
  std::vector<StackEntry> entries_;
};

enum class DropReason : std::uint8_t {
  QueueOverflow,
  NoBinding,
  UnknownMobilityLabel,
  UnknownLocalMobilityLabel,
  NoLabelEntry,
  NoRouteToNextHop,
  OutsideMobilityRange,
  MnNotAttached,
  NodeFailed,
};

std::string_view to_string(DropReason reason);
inline constexpr std::size_t kDropReasonCount = 9;

struct Hop {
  RouterId node;
  SimTime time;
  std::string stack;  // stack as it leaves the node
};

struct DataPacket {
  std::uint64_t id = 0;  // shared by replicas
  std::string flow;
  std::uint64_t seq = 0;
  MobilePrefix dst;
  LabelStack stack;
  std::vector<Hop> hops;
  SimTime created_at = 0.0;
  RouterId ingress;
  int mobility_rewrites = 0;
  int transit_ip_lookups = 0;  // must stay zero: only the ingress LER reads dst
  std::size_t max_depth = 0;
  bool replica = false;
};

/// What a node decided to do with a packet.
struct Disposition {
  enum class Kind { Forward, Deliver, Drop, Queued };
  Kind kind = Kind::Drop;
  RouterId next_hop;                    // Forward
  std::vector<std::string> interfaces;  // Deliver: candidate RAN cells
  DropReason reason = DropReason::NoLabelEntry;
  std::optional<DataPacket> replica;    // extra copy to forward to `replica_next_hop`
  RouterId replica_next_hop;

  static Disposition forward(RouterId nh) { return {Kind::Forward, nh, {}, {}, {}, {}}; }
  static Disposition drop(DropReason r) { return {Kind::Drop, {}, {}, r, {}, {}}; }
  static Disposition queued() { return {Kind::Queued, {}, {}, {}, {}, {}}; }
  static Disposition deliver(std::vector<std::string> ifs) { return {Kind::Deliver, {}, std::move(ifs), {}, {}, {}}; }
};

}  // namespace hmlbn
