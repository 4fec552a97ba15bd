#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hmlbn/messages.hpp"
#include "hmlbn/packet.hpp"

namespace hmlbn {

struct FlowMetrics {
  std::uint64_t ingress = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t hop_sum = 0;
  double latency_sum_ms = 0.0;
  double max_gap_ms = 0.0;
  std::uint64_t stale_after_withdrawal = 0;  // sent to an LER the MN had left, after the withdrawal arrived
  std::map<DropReason, std::uint64_t> drops_by_reason;

  double mean_hops() const { return delivered ? static_cast<double>(hop_sum) / delivered : 0.0; }
  double mean_latency_ms() const { return delivered ? latency_sum_ms / delivered : 0.0; }
};

/// Largest inter-delivery interval of one flow around one MN move.
struct HandoffGap {
  std::string mn;
  std::string flow;
  SimTime move_at = 0.0;
  double gap_ms = 0.0;
};

struct Metrics {
  std::map<std::string, FlowMetrics> flows;
  std::uint64_t ctrl_total = 0;
  std::uint64_t ctrl_intra_area = 0;
  std::uint64_t ctrl_area_crossing = 0;
  std::map<MessageKind, std::uint64_t> ctrl_by_kind;
  std::vector<HandoffGap> handoffs;
  std::uint64_t transit_ip_lookups = 0;
  std::size_t max_stack_depth = 0;

  FlowMetrics totals() const;
  /// Header plus one row per flow plus a "total" row.
  std::string to_csv() const;
  /// One human-readable line: delivery %, mean hops, control counts.
  std::string summary() const;
};

}  // namespace hmlbn
