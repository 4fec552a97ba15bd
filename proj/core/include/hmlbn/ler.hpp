#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmlbn/node.hpp"
#include "hmlbn/packet.hpp"

namespace hmlbn {

struct LerConfig {
  SimTime dead_time = 9.0;
  double lifetime = 300.0;
  std::size_t queue_limit = 64;
  std::vector<MobilePrefix> mobility_range;
  bool replicate = false;  // deliver on old and new interface after a local hand-off
  SimTime replication_seconds = 0.0;
};

struct RegistrationRecord {
  MobilePrefix prefix;
  std::string l2_address;
  std::string interface_id;
  MobilityLabel label;
  AreaId advertised_area;
  SimTime last_heard = 0.0;
  bool superseded = false;  // AMRR told us the MN is bound elsewhere
  std::string previous_interface;
  SimTime replicate_until = -1.0;
};

struct RegistrationResult {
  RegistrationRecord record;
  AreaId reply_area;
};

struct CacheEntry {
  MobilityBinding binding;
  SimTime expiry;
};

/// Packets released or dropped as a side effect of a control message.
struct LerControlResult {
  std::vector<DataPacket> release;
  std::vector<DataPacket> dropped;
  DropReason reason = DropReason::NoBinding;
};

/// Mobility Support Function of one LER.
class Ler {
 public:
  Ler(RouterId rid, NodeContext ctx, LerConfig config);

  RouterId router_id() const noexcept { return rid_; }
  AreaId area() const noexcept { return area_; }

  /// Registers (or re-registers) a mobile prefix and emits the internal update
  /// to every AMRR of the area. Throws UnknownInterface / LabelSpaceExhausted.
  RegistrationResult handle_registration(const MobilePrefix& prefix, const std::string& l2_address,
                                         const std::string& interface_id, AreaId mn_area, SimTime now,
                                         Outbox& out);

  /// MSF-Local hand-off. Emits nothing. Throws NotRegistered / UnknownInterface.
  const RegistrationRecord& track_local_handoff(const MobilePrefix& prefix, const std::string& interface_id,
                                                SimTime now);
  void keepalive(const MobilePrefix& prefix, SimTime now);

  Disposition ingress_forward(DataPacket& packet, SimTime now, Outbox& out);
  LerControlResult handle_control(const ControlMessage& msg, SimTime now);
  /// Packet whose top label popped here; the remaining top is the mobility label.
  Disposition egress_deliver(DataPacket& packet, SimTime now);
  void scan_dead_registrations(SimTime now, Outbox& out);
  void expire_cache(SimTime now);

  const std::map<MobilePrefix, RegistrationRecord>& registrations() const noexcept { return registrations_; }
  const RegistrationRecord* registration(const MobilePrefix& prefix) const;
  const std::map<MobilePrefix, CacheEntry>& cache() const noexcept { return cache_; }
  std::size_t pending(const MobilePrefix& prefix) const;
  bool in_mobility_range(const MobilePrefix& prefix) const;

  /// Test hook: force the next allocated label value.
  void set_next_label(std::uint32_t value) { labels_ = LabelAllocator(value); }

 private:
  void send_to_area_amrrs(MessageKind kind, const Payload& payload, SimTime now, Outbox& out) const;
  Disposition deliver_local(const MobilePrefix& dst, SimTime now);

  RouterId rid_;
  AreaId area_;
  NodeContext ctx_;
  LerConfig config_;
  LabelAllocator labels_;
  std::map<MobilePrefix, RegistrationRecord> registrations_;
  std::map<std::uint32_t, MobilePrefix> by_label_;
  std::map<MobilePrefix, CacheEntry> cache_;
  std::map<MobilePrefix, std::deque<DataPacket>> pending_;
};

}  // namespace hmlbn
