#include "hmlbn/ler.hpp"

#include <algorithm>

namespace hmlbn {

Ler::Ler(RouterId rid, NodeContext ctx, LerConfig config)
    : rid_(rid), area_(ctx.graph.node(rid).area), ctx_(ctx), config_(std::move(config)) {}

void Ler::send_to_area_amrrs(MessageKind kind, const Payload& payload, SimTime now, Outbox& out) const {
  for (RouterId amrr : ctx_.graph.members(area_, NodeRole::Amrr)) {
    out.push_back(make_message(kind, rid_, amrr, now, payload));
  }
}

bool Ler::in_mobility_range(const MobilePrefix& prefix) const {
  if (config_.mobility_range.empty()) return true;
  return std::any_of(config_.mobility_range.begin(), config_.mobility_range.end(),
                     [&](const MobilePrefix& r) { return r.contains(prefix); });
}

RegistrationResult Ler::handle_registration(const MobilePrefix& prefix, const std::string& l2_address,
                                            const std::string& interface_id, AreaId mn_area, SimTime now,
                                            Outbox& out) {
  const auto cells = ctx_.graph.cells_of(rid_);
  if (std::find(cells.begin(), cells.end(), interface_id) == cells.end()) {
    throw Error(Errc::UnknownInterface, "interface " + interface_id + " is not on " + ctx_.graph.name_of(rid_));
  }
  if (!in_mobility_range(prefix)) {
    throw Error(Errc::InvalidArgument, prefix.to_string() + " is outside the mobility address range");
  }
  const Label label = labels_.allocate();
  if (auto it = registrations_.find(prefix); it != registrations_.end()) {
    by_label_.erase(it->second.label.value());
  }
  RegistrationRecord rec;
  rec.prefix = prefix;
  rec.l2_address = l2_address;
  rec.interface_id = interface_id;
  rec.label = label;
  rec.advertised_area = area_;
  rec.last_heard = now;
  registrations_[prefix] = rec;
  by_label_[label.value()] = prefix;

  MobilityBinding b;
  b.prefix = prefix;
  b.origin = rid_;
  b.label = label;
  b.area = mn_area.is_unknown() ? area_ : mn_area;
  b.mode = UpdateMode::UnsolicitedDownstreamPush;
  b.type = UpdateType::Internal;
  b.lifetime = config_.lifetime;
  send_to_area_amrrs(MessageKind::BindingUpdate, b, now, out);
  return {rec, area_};
}

const RegistrationRecord& Ler::track_local_handoff(const MobilePrefix& prefix, const std::string& interface_id,
                                                   SimTime now) {
  auto it = registrations_.find(prefix);
  if (it == registrations_.end()) throw Error(Errc::NotRegistered, prefix.to_string() + " is not registered");
  const auto cells = ctx_.graph.cells_of(rid_);
  if (std::find(cells.begin(), cells.end(), interface_id) == cells.end()) {
    throw Error(Errc::UnknownInterface, "interface " + interface_id + " is not on " + ctx_.graph.name_of(rid_));
  }
  auto& rec = it->second;
  if (rec.interface_id != interface_id && config_.replicate) {
    rec.previous_interface = rec.interface_id;
    rec.replicate_until = now + config_.replication_seconds;
  }
  rec.interface_id = interface_id;
  rec.last_heard = now;
  return rec;
}

void Ler::keepalive(const MobilePrefix& prefix, SimTime now) {
  if (auto it = registrations_.find(prefix); it != registrations_.end()) it->second.last_heard = now;
}

const RegistrationRecord* Ler::registration(const MobilePrefix& prefix) const {
  auto it = registrations_.find(prefix);
  return it == registrations_.end() ? nullptr : &it->second;
}

std::size_t Ler::pending(const MobilePrefix& prefix) const {
  auto it = pending_.find(prefix);
  return it == pending_.end() ? 0 : it->second.size();
}

Disposition Ler::deliver_local(const MobilePrefix& dst, SimTime now) {
  const RegistrationRecord* rec = nullptr;
  int best = -1;
  for (const auto& [p, r] : registrations_) {
    if (p.contains(dst) && p.length() > best) {
      rec = &r;
      best = p.length();
    }
  }
  if (!rec) return Disposition::drop(DropReason::UnknownMobilityLabel);
  std::vector<std::string> ifs{rec->interface_id};
  if (rec->replicate_until >= now && !rec->previous_interface.empty()) ifs.push_back(rec->previous_interface);
  return Disposition::deliver(std::move(ifs));
}

Disposition Ler::ingress_forward(DataPacket& packet, SimTime now, Outbox& out) {
  if (!in_mobility_range(packet.dst)) return Disposition::drop(DropReason::OutsideMobilityRange);
  CacheEntry* hit = longest_match(cache_, packet.dst);
  if (hit && hit->expiry < now) hit = nullptr;
  if (hit) {
    const auto& b = hit->binding;
    if (b.origin == rid_) return deliver_local(packet.dst, now);
    auto hop = ctx_.lsps.toward(rid_, b.origin);
    if (!hop) return Disposition::drop(DropReason::NoRouteToNextHop);
    packet.stack.push(b.label, LabelTag::Mobility);
    packet.stack.push(hop->out_label, LabelTag::Infrastructure);
    return Disposition::forward(hop->next_hop);
  }
  auto& queue = pending_[packet.dst];
  if (queue.size() >= config_.queue_limit) return Disposition::drop(DropReason::QueueOverflow);
  const bool first = queue.empty();
  queue.push_back(packet);
  if (first) {
    out.push_back(make_message(MessageKind::BindingRequest, rid_, primary_amrr(ctx_.graph, area_), now,
                               RequestPayload{packet.dst, area_, rid_}));
  }
  return Disposition::queued();
}

LerControlResult Ler::handle_control(const ControlMessage& msg, SimTime now) {
  LerControlResult result;
  auto release_matching = [&](const MobilePrefix& prefix, std::vector<DataPacket>& into) {
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (prefix.contains(it->first)) {
        for (auto& p : it->second) into.push_back(std::move(p));
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
  };
  switch (msg.kind) {
    case MessageKind::BindingUpdate:
    case MessageKind::BindingReplyPositive: {
      const auto& b = msg.binding();
      cache_[b.prefix] = CacheEntry{b, now + b.lifetime};
      if (auto it = registrations_.find(b.prefix); it != registrations_.end() && b.origin != rid_) {
        it->second.superseded = true;
      }
      release_matching(b.prefix, result.release);
      break;
    }
    case MessageKind::BindingReplyNegative: {
      const auto& p = std::get<NegativePayload>(msg.payload);
      release_matching(p.prefix, result.dropped);
      result.reason = DropReason::NoBinding;
      break;
    }
    case MessageKind::BindingWithdrawal: {
      const auto& w = std::get<WithdrawalPayload>(msg.payload);
      cache_.erase(w.prefix);
      break;
    }
    default:
      break;
  }
  return result;
}

Disposition Ler::egress_deliver(DataPacket& packet, SimTime now) {
  if (packet.stack.empty()) return Disposition::drop(DropReason::NoLabelEntry);
  const Label inner = packet.stack.pop().label;
  auto it = by_label_.find(inner.value());
  if (it == by_label_.end()) return Disposition::drop(DropReason::UnknownMobilityLabel);
  const auto& rec = registrations_.at(it->second);
  std::vector<std::string> ifs{rec.interface_id};
  if (rec.replicate_until >= now && !rec.previous_interface.empty()) ifs.push_back(rec.previous_interface);
  return Disposition::deliver(std::move(ifs));
}

void Ler::scan_dead_registrations(SimTime now, Outbox& out) {
  for (auto it = registrations_.begin(); it != registrations_.end();) {
    const auto& rec = it->second;
    if (now - rec.last_heard > config_.dead_time) {
      if (!rec.superseded) {
        send_to_area_amrrs(MessageKind::BindingWithdrawal, WithdrawalPayload{rec.prefix, rid_}, now, out);
      }
      by_label_.erase(rec.label.value());
      it = registrations_.erase(it);
    } else {
      ++it;
    }
  }
}

void Ler::expire_cache(SimTime now) {
  std::erase_if(cache_, [&](const auto& kv) { return kv.second.expiry < now; });
}

}  // namespace hmlbn
