#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "hmlbn/node.hpp"
#include "hmlbn/packet.hpp"

namespace hmlbn {

struct AlerConfig {
  double lifetime = 300.0;
  bool replicate = false;  // keep forwarding on the previous segment for a while after a trail change
  SimTime replication_seconds = 0.0;
};

struct Segment {
  RouterId origin;
  MobilityLabel cml;
  InfraLabel out_top;
  RouterId next_hop;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// One label-trail record plus bookkeeping.
struct FibEntry {
  MobilePrefix prefix;
  RouterId origin;
  InfraLabel in_top;
  MobilityLabel lml;
  MobilityLabel cml;
  InfraLabel out_top;
  std::string out_interface;
  RouterId next_hop;
  AreaId area;
  SimTime expiry = 0.0;
  std::optional<Segment> previous;
  SimTime previous_until = -1.0;

  Segment segment() const { return {origin, cml, out_top, next_hop}; }
};

class Aler {
 public:
  Aler(RouterId rid, NodeContext ctx, AlerConfig config);

  RouterId router_id() const noexcept { return rid_; }
  AreaId area() const noexcept { return area_; }

  /// Binding reflected by an AMRR. Returns the entry after the update.
  /// Throws LabelSpaceExhausted / NoRouteToOrigin.
  const FibEntry& handle_internal_update(const MobilityBinding& binding, SimTime now, Outbox& out);
  const FibEntry& handle_external_update(const MobilityBinding& binding, SimTime now, Outbox& out);
  void handle_control(const ControlMessage& msg, SimTime now, Outbox& out);

  /// Called when the packet's top label popped here.
  Disposition forward_transit(DataPacket& packet, SimTime now);

  void handle_withdrawal(const MobilePrefix& prefix);
  /// Rewrites entries pointing at any ALER of `area` other than `surviving`.
  std::size_t handle_blanket(RouterId surviving, AreaId area);
  void expire(SimTime now);

  const FibEntry* entry(const MobilePrefix& prefix) const;
  const FibEntry* entry_by_lml(MobilityLabel lml) const;
  const std::map<MobilePrefix, FibEntry>& fib() const noexcept { return fib_; }
  /// Tab-separated dump, header first, one record per line.
  std::string dump_fib() const;

  void set_next_label(std::uint32_t value) { labels_ = LabelAllocator(value); }

 private:
  const FibEntry& apply(const MobilityBinding& binding, UpdateType announce_as, SimTime now, Outbox& out);
  void set_trail(FibEntry& e, RouterId origin) const;
  void announce(const FibEntry& e, UpdateType type, SimTime now, Outbox& out) const;

  RouterId rid_;
  AreaId area_;
  NodeContext ctx_;
  AlerConfig config_;
  LabelAllocator labels_;
  std::map<MobilePrefix, FibEntry> fib_;
  std::map<std::uint32_t, MobilePrefix> by_lml_;
};

}  // namespace hmlbn
