#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hmlbn/node.hpp"

namespace hmlbn {

struct AmrrConfig {
  double lifetime = 300.0;
  bool reflect_to_previous_ler = false;
};

struct AmrrRecord {
  MobilityBinding binding;  // as last received from an LER or a peer AMRR
  std::vector<RouterId> alers;                 // serving ALERs of this area, arrival order
  std::map<RouterId, MobilityLabel> lml;       // LML per serving ALER
  AreaId area;
  LastRequestorList lrl;
  SimTime expiry = 0.0;
  bool provisional = false;  // created by an ALER update that preceded the internal one

  std::optional<AreaId> pending_lrl_area;  // inter-area move waiting for our LML
  std::vector<RouterId> waiting_lers;
  std::vector<RequestPayload> waiting_peers;
  std::optional<std::string> announced;  // key of the last LER-facing binding handed out
  std::size_t rr = 0;

  bool has_lml() const { return !alers.empty(); }
};

/// Area Mobility Route Reflector.
///
/// Only the primary (lowest RouterId) AMRR of an area emits messages; others
/// mirror client updates into their store as hot standbys.
class Amrr {
 public:
  Amrr(RouterId rid, NodeContext ctx, AmrrConfig config);

  RouterId router_id() const noexcept { return rid_; }
  AreaId area() const noexcept { return area_; }
  bool primary() const noexcept { return primary_; }
  const std::vector<RouterId>& peers() const noexcept { return peers_; }

  void handle_control(const ControlMessage& msg, SimTime now, Outbox& out);

  void handle_internal_update_from_ler(const MobilityBinding& b, RouterId from, SimTime now, Outbox& out);
  void handle_update_from_aler(const MobilityBinding& b, RouterId from, SimTime now, Outbox& out);
  void handle_update_from_peer(const MobilityBinding& b, RouterId from, SimTime now, Outbox& out);
  void handle_binding_request(const RequestPayload& req, RouterId from, SimTime now, Outbox& out);
  void handle_reply(const ControlMessage& msg, SimTime now, Outbox& out);
  void handle_lrl_request(const LrlRequestPayload& req, RouterId from, SimTime now, Outbox& out);
  void handle_lrl_reply(const LrlReplyPayload& rep, RouterId from, SimTime now, Outbox& out);
  void handle_withdrawal(const WithdrawalPayload& w, RouterId from, SimTime now, Outbox& out);
  void handle_blanket(const BlanketPayload& p, SimTime now, Outbox& out);
  /// Peering session with `failed` lost: drop it everywhere and tell the peers.
  void handle_aler_failure(RouterId failed, SimTime now, Outbox& out);
  void expire_records(SimTime now);

  /// Round robin over the serving ALERs. Throws NoAlerAvailable.
  RouterId select_aler(AmrrRecord& rec);

  const std::map<MobilePrefix, AmrrRecord>& records() const noexcept { return records_; }
  const AmrrRecord* record(const MobilePrefix& prefix) const;
  std::vector<std::string> warnings() const { return warnings_; }
  /// One line per record: prefix, area, origin, LML, ALERs, eLRL, iLRL, expiry.
  std::string dump() const;

 private:
  struct Fanout {
    std::set<RouterId> outstanding;
    std::vector<RouterId> waiting_lers;
  };

  bool answerable(const AmrrRecord& rec) const;
  std::string facing_key(const AmrrRecord& rec) const;
  MobilityBinding ler_facing(AmrrRecord& rec);
  MobilityBinding external_binding(AmrrRecord& rec, RouterId aler);
  void reflect_to_alers(const MobilityBinding& b, SimTime now, Outbox& out) const;
  void reflect_external(AmrrRecord& rec, SimTime now, Outbox& out) const;
  void send(MessageKind kind, RouterId dst, Payload payload, SimTime now, Outbox& out) const;
  void try_start_lrl(AmrrRecord& rec, SimTime now, Outbox& out);
  void answer_waiting(AmrrRecord& rec, SimTime now, Outbox& out);
  void push_to_ilrl(AmrrRecord& rec, SimTime now, Outbox& out);
  std::optional<RouterId> amrr_of(AreaId area) const;
  AmrrRecord* find(const MobilePrefix& prefix);
  AmrrRecord* match(const MobilePrefix& prefix);

  RouterId rid_;
  AreaId area_;
  NodeContext ctx_;
  AmrrConfig config_;
  bool primary_ = false;
  std::vector<RouterId> peers_;
  std::vector<RouterId> own_alers_;
  std::set<RouterId> failed_alers_;
  std::map<MobilePrefix, AmrrRecord> records_;
  std::map<MobilePrefix, Fanout> fanouts_;
  std::vector<std::string> warnings_;
};

}  // namespace hmlbn
