#include "hmlbn/amrr.hpp"

#include <algorithm>
#include <sstream>

namespace hmlbn {

Amrr::Amrr(RouterId rid, NodeContext ctx, AmrrConfig config)
    : rid_(rid), area_(ctx.graph.node(rid).area), ctx_(ctx), config_(config) {
  primary_ = primary_amrr(ctx_.graph, area_) == rid_;
  for (AreaId a : ctx_.graph.areas()) {
    if (a != area_) peers_.push_back(primary_amrr(ctx_.graph, a));
  }
  own_alers_ = ctx_.graph.members(area_, NodeRole::Aler);
}

void Amrr::send(MessageKind kind, RouterId dst, Payload payload, SimTime now, Outbox& out) const {
  out.push_back(make_message(kind, rid_, dst, now, std::move(payload)));
}

std::optional<RouterId> Amrr::amrr_of(AreaId area) const {
  auto amrrs = ctx_.graph.members(area, NodeRole::Amrr);
  if (amrrs.empty()) return std::nullopt;
  return amrrs.front();
}

AmrrRecord* Amrr::find(const MobilePrefix& prefix) {
  auto it = records_.find(prefix);
  return it == records_.end() ? nullptr : &it->second;
}

AmrrRecord* Amrr::match(const MobilePrefix& prefix) { return longest_match(records_, prefix); }

const AmrrRecord* Amrr::record(const MobilePrefix& prefix) const {
  auto it = records_.find(prefix);
  return it == records_.end() ? nullptr : &it->second;
}

RouterId Amrr::select_aler(AmrrRecord& rec) {
  if (rec.alers.empty()) {
    throw Error(Errc::NoAlerAvailable, "no serving ALER for " + rec.binding.prefix.to_string());
  }
  return rec.alers[rec.rr++ % rec.alers.size()];
}

bool Amrr::answerable(const AmrrRecord& rec) const {
  const Node* origin = ctx_.graph.find(rec.binding.origin);
  const bool local = rec.area == area_ && origin && origin->role == NodeRole::Ler;
  return local || rec.has_lml();
}

std::string Amrr::facing_key(const AmrrRecord& rec) const {
  const Node* origin = ctx_.graph.find(rec.binding.origin);
  if (rec.area == area_ && origin && origin->role == NodeRole::Ler) {
    return "L" + rec.binding.origin.to_string() + "/" + std::to_string(rec.binding.label.value());
  }
  std::string key = "E";
  for (RouterId a : rec.alers) key += a.to_string() + "/" + std::to_string(rec.lml.at(a).value()) + ";";
  return key;
}

MobilityBinding Amrr::external_binding(AmrrRecord& rec, RouterId aler) {
  MobilityBinding b;
  b.prefix = rec.binding.prefix;
  b.origin = aler;
  b.label = rec.lml.at(aler);
  b.area = rec.area;
  b.mode = UpdateMode::UnsolicitedDownstreamPush;
  b.type = UpdateType::External;
  b.lifetime = config_.lifetime;
  return b;
}

MobilityBinding Amrr::ler_facing(AmrrRecord& rec) {
  const Node* origin = ctx_.graph.find(rec.binding.origin);
  if (rec.area == area_ && origin && origin->role == NodeRole::Ler) {
    MobilityBinding b = rec.binding;
    b.area = area_;
    b.mode = UpdateMode::UnsolicitedDownstreamPush;
    return b;
  }
  return external_binding(rec, select_aler(rec));
}

void Amrr::reflect_to_alers(const MobilityBinding& b, SimTime now, Outbox& out) const {
  for (RouterId aler : own_alers_) {
    if (!failed_alers_.count(aler)) send(MessageKind::BindingUpdate, aler, b, now, out);
  }
}

void Amrr::reflect_external(AmrrRecord& rec, SimTime now, Outbox& out) const {
  MobilityBinding b = rec.binding;
  b.type = UpdateType::External;
  // Selective push asks the ALER to announce its LML back even if it already has one.
  b.mode = rec.has_lml() ? UpdateMode::UnsolicitedDownstreamPush : UpdateMode::SelectiveDownstreamPush;
  reflect_to_alers(b, now, out);
}

void Amrr::try_start_lrl(AmrrRecord& rec, SimTime now, Outbox& out) {
  if (!rec.pending_lrl_area || !rec.has_lml()) return;
  const AreaId old_area = *rec.pending_lrl_area;
  rec.pending_lrl_area.reset();
  const auto dst = amrr_of(old_area);
  if (!dst) return;
  send(MessageKind::LrlRequest, *dst, LrlRequestPayload{rec.binding.prefix, area_}, now, out);
  MobilityBinding b = external_binding(rec, select_aler(rec));
  b.area = area_;
  send(MessageKind::BindingUpdate, *dst, b, now, out);
}

void Amrr::answer_waiting(AmrrRecord& rec, SimTime now, Outbox& out) {
  if (answerable(rec) && !rec.waiting_lers.empty()) {
    for (RouterId ler : rec.waiting_lers) {
      send(MessageKind::BindingReplyPositive, ler, ler_facing(rec), now, out);
    }
    rec.waiting_lers.clear();
    rec.announced = facing_key(rec);
  }
  if (rec.waiting_peers.empty()) return;
  if (rec.area == area_ && !rec.has_lml()) return;  // still waiting for our ALER
  for (const auto& req : rec.waiting_peers) {
    if (rec.area == area_) {
      send(MessageKind::BindingReplyPositive, req.requestor, external_binding(rec, select_aler(rec)), now, out);
      if (req.requestor_area != area_) rec.lrl.external.insert(req.requestor_area);
    } else {
      send(MessageKind::BindingReplyNegative, req.requestor, NegativePayload{req.prefix}, now, out);
    }
  }
  rec.waiting_peers.clear();
}

void Amrr::push_to_ilrl(AmrrRecord& rec, SimTime now, Outbox& out) {
  if (!rec.announced || rec.lrl.internal.empty() || !answerable(rec)) return;
  const std::string key = facing_key(rec);
  if (key == *rec.announced) return;
  rec.announced = key;
  for (RouterId ler : rec.lrl.internal) {
    send(MessageKind::BindingUpdate, ler, ler_facing(rec), now, out);
  }
}

void Amrr::handle_internal_update_from_ler(const MobilityBinding& b, RouterId from, SimTime now, Outbox& out) {
  AmrrRecord* existing = find(b.prefix);
  const bool existed = existing != nullptr;
  const RouterId prev_origin = existed ? existing->binding.origin : RouterId{};
  const AreaId prev_area = existed ? existing->area : AreaId{};

  AmrrRecord& rec = records_[b.prefix];
  rec.binding = b;
  rec.binding.area = area_;
  rec.area = area_;
  rec.expiry = now + b.lifetime;
  rec.provisional = false;
  reflect_to_alers(rec.binding, now, out);

  if (config_.reflect_to_previous_ler && existed && prev_area == area_ && prev_origin != from) {
    const Node* prev = ctx_.graph.find(prev_origin);
    if (prev && prev->role == NodeRole::Ler) send(MessageKind::BindingUpdate, prev_origin, rec.binding, now, out);
  }
  if (b.area != area_) {
    if (amrr_of(b.area)) {
      rec.pending_lrl_area = b.area;
      try_start_lrl(rec, now, out);
    } else {
      warnings_.push_back("UnknownPeerArea " + std::to_string(b.area.value()) + " for " + b.prefix.to_string());
    }
  }
  answer_waiting(rec, now, out);
  push_to_ilrl(rec, now, out);
}

void Amrr::handle_update_from_aler(const MobilityBinding& b, RouterId from, SimTime now, Outbox& out) {
  if (failed_alers_.count(from)) return;
  AmrrRecord* rec = find(b.prefix);
  if (!rec) {
    warnings_.push_back("NoSuchRecord " + b.prefix.to_string() + " from " + from.to_string());
    rec = &records_[b.prefix];
    rec->binding = b;
    rec->area = b.area;
    rec->expiry = now + b.lifetime;
    rec->provisional = true;
  }
  if (std::find(rec->alers.begin(), rec->alers.end(), from) == rec->alers.end()) rec->alers.push_back(from);
  rec->lml[from] = b.label;
  try_start_lrl(*rec, now, out);
  answer_waiting(*rec, now, out);
  push_to_ilrl(*rec, now, out);
}

void Amrr::handle_update_from_peer(const MobilityBinding& b, RouterId, SimTime now, Outbox& out) {
  AmrrRecord* rec = find(b.prefix);
  if (!rec) return;  // never asked for it
  rec->binding = b;
  rec->area = b.area;
  rec->expiry = now + b.lifetime;
  reflect_external(*rec, now, out);
  answer_waiting(*rec, now, out);
  push_to_ilrl(*rec, now, out);
}

void Amrr::handle_binding_request(const RequestPayload& req, RouterId from, SimTime now, Outbox& out) {
  const Node* sender = ctx_.graph.find(from);
  if (sender && sender->role == NodeRole::Amrr) {
    AmrrRecord* rec = match(req.prefix);
    // Anti-loop rule: only the area currently serving the MN answers positively.
    if (rec && rec->area == area_) {
      if (rec->has_lml()) {
        send(MessageKind::BindingReplyPositive, from, external_binding(*rec, select_aler(*rec)), now, out);
        if (req.requestor_area != area_) rec->lrl.external.insert(req.requestor_area);
      } else {
        RequestPayload waiting = req;
        waiting.requestor = from;
        rec->waiting_peers.push_back(waiting);
      }
    } else {
      send(MessageKind::BindingReplyNegative, from, NegativePayload{req.prefix}, now, out);
    }
    return;
  }

  if (AmrrRecord* rec = match(req.prefix)) {
    rec->lrl.internal.insert(from);
    if (answerable(*rec)) {
      send(MessageKind::BindingReplyPositive, from, ler_facing(*rec), now, out);
      rec->announced = facing_key(*rec);
    } else {
      rec->waiting_lers.push_back(from);
    }
    return;
  }
  if (auto it = fanouts_.find(req.prefix); it != fanouts_.end()) {
    it->second.waiting_lers.push_back(from);
    return;
  }
  if (peers_.empty()) {
    send(MessageKind::BindingReplyNegative, from, NegativePayload{req.prefix}, now, out);
    return;
  }
  Fanout& f = fanouts_[req.prefix];
  f.outstanding = {peers_.begin(), peers_.end()};
  f.waiting_lers.push_back(from);
  for (RouterId peer : peers_) {
    send(MessageKind::BindingRequest, peer, RequestPayload{req.prefix, area_, rid_}, now, out);
  }
}

void Amrr::handle_reply(const ControlMessage& msg, SimTime now, Outbox& out) {
  if (msg.kind == MessageKind::BindingReplyNegative) {
    const auto& p = std::get<NegativePayload>(msg.payload);
    auto it = fanouts_.find(p.prefix);
    if (it == fanouts_.end()) return;
    it->second.outstanding.erase(msg.src);
    if (it->second.outstanding.empty()) {
      for (RouterId ler : it->second.waiting_lers) {
        send(MessageKind::BindingReplyNegative, ler, NegativePayload{p.prefix}, now, out);
      }
      fanouts_.erase(it);
    }
    return;
  }
  const auto& b = msg.binding();
  std::vector<RouterId> waiting;
  for (auto it = fanouts_.begin(); it != fanouts_.end();) {
    if (b.prefix.contains(it->first)) {
      waiting.insert(waiting.end(), it->second.waiting_lers.begin(), it->second.waiting_lers.end());
      it = fanouts_.erase(it);
    } else {
      ++it;
    }
  }
  if (waiting.empty()) return;  // a later positive after the first one won
  AmrrRecord& rec = records_[b.prefix];
  rec.binding = b;
  rec.area = b.area;
  rec.expiry = now + b.lifetime;
  for (RouterId ler : waiting) {
    rec.lrl.internal.insert(ler);
    rec.waiting_lers.push_back(ler);
  }
  reflect_external(rec, now, out);
  answer_waiting(rec, now, out);
}

void Amrr::handle_lrl_request(const LrlRequestPayload& req, RouterId from, SimTime now, Outbox& out) {
  LrlReplyPayload reply{req.prefix, {}};
  if (AmrrRecord* rec = find(req.prefix)) {
    for (AreaId a : rec->lrl.external) {
      if (a != req.requestor_area) reply.areas.push_back(a);
    }
    rec->lrl.external.clear();
  }
  send(MessageKind::LrlReply, from, std::move(reply), now, out);
}

void Amrr::handle_lrl_reply(const LrlReplyPayload& rep, RouterId from, SimTime now, Outbox& out) {
  AmrrRecord* rec = find(rep.prefix);
  if (!rec) return;
  const AreaId old_area = ctx_.graph.node(from).area;
  // The old area keeps a trail toward us, so it must hear about later changes too.
  if (old_area != area_) rec->lrl.external.insert(old_area);
  for (AreaId a : rep.areas) {
    if (a == area_) continue;
    rec->lrl.external.insert(a);
    if (a == old_area || !rec->has_lml()) continue;
    if (auto dst = amrr_of(a)) {
      MobilityBinding b = external_binding(*rec, select_aler(*rec));
      b.area = area_;
      send(MessageKind::BindingUpdate, *dst, b, now, out);
    }
  }
}

void Amrr::handle_withdrawal(const WithdrawalPayload& w, RouterId from, SimTime now, Outbox& out) {
  auto it = records_.find(w.prefix);
  if (it == records_.end()) return;
  AmrrRecord& rec = it->second;
  const Node* sender = ctx_.graph.find(from);
  const bool from_peer = sender && sender->role == NodeRole::Amrr;
  if (from_peer) {
    if (rec.area == area_) return;  // the MN has since registered here
  } else if (rec.binding.origin != from || w.origin != from) {
    return;  // stale: the MN already re-registered elsewhere
  }
  for (RouterId ler : rec.lrl.internal) {
    if (ler != from) send(MessageKind::BindingWithdrawal, ler, w, now, out);
  }
  for (RouterId aler : own_alers_) {
    if (!failed_alers_.count(aler)) send(MessageKind::BindingWithdrawal, aler, w, now, out);
  }
  if (!from_peer) {
    for (AreaId a : rec.lrl.external) {
      if (auto dst = amrr_of(a)) send(MessageKind::BindingWithdrawal, *dst, w, now, out);
    }
  }
  records_.erase(it);
}

void Amrr::handle_blanket(const BlanketPayload& p, SimTime now, Outbox& out) {
  const auto alers = ctx_.graph.members(p.area, NodeRole::Aler);
  for (auto& [prefix, rec] : records_) {
    const RouterId o = rec.binding.origin;
    if (o != p.surviving && std::find(alers.begin(), alers.end(), o) != alers.end()) rec.binding.origin = p.surviving;
  }
  for (RouterId aler : own_alers_) {
    if (!failed_alers_.count(aler)) send(MessageKind::AlerFailoverBlanket, aler, p, now, out);
  }
}

void Amrr::handle_aler_failure(RouterId failed, SimTime now, Outbox& out) {
  failed_alers_.insert(failed);
  for (auto& [prefix, rec] : records_) {
    std::erase(rec.alers, failed);
    rec.lml.erase(failed);
  }
  if (!primary_) return;
  auto surviving = std::find_if(own_alers_.begin(), own_alers_.end(),
                                [&](RouterId a) { return !failed_alers_.count(a); });
  if (surviving == own_alers_.end()) {
    warnings_.push_back("NoAlerAvailable in area " + std::to_string(area_.value()));
    return;
  }
  for (RouterId peer : peers_) {
    send(MessageKind::AlerFailoverBlanket, peer, BlanketPayload{*surviving, area_}, now, out);
  }
}

void Amrr::expire_records(SimTime now) {
  std::erase_if(records_, [&](const auto& kv) { return kv.second.expiry < now; });
}

void Amrr::handle_control(const ControlMessage& msg, SimTime now, Outbox& out) {
  const Node* sender = ctx_.graph.find(msg.src);
  const NodeRole role = sender ? sender->role : NodeRole::Lsr;
  Outbox discard;
  Outbox& sink = primary_ ? out : discard;
  if (!primary_) {
    // Hot standby: mirror client state only.
    const bool client_update = msg.kind == MessageKind::BindingUpdate && role != NodeRole::Amrr;
    const bool client_withdrawal = msg.kind == MessageKind::BindingWithdrawal && role == NodeRole::Ler;
    if (!client_update && !client_withdrawal) return;
  }
  switch (msg.kind) {
    case MessageKind::BindingUpdate:
      if (role == NodeRole::Ler) {
        handle_internal_update_from_ler(msg.binding(), msg.src, now, sink);
      } else if (role == NodeRole::Aler) {
        handle_update_from_aler(msg.binding(), msg.src, now, sink);
      } else if (role == NodeRole::Amrr) {
        handle_update_from_peer(msg.binding(), msg.src, now, sink);
      }
      break;
    case MessageKind::BindingRequest:
      handle_binding_request(std::get<RequestPayload>(msg.payload), msg.src, now, sink);
      break;
    case MessageKind::BindingReplyPositive:
    case MessageKind::BindingReplyNegative:
      handle_reply(msg, now, sink);
      break;
    case MessageKind::LrlRequest:
      handle_lrl_request(std::get<LrlRequestPayload>(msg.payload), msg.src, now, sink);
      break;
    case MessageKind::LrlReply:
      handle_lrl_reply(std::get<LrlReplyPayload>(msg.payload), msg.src, now, sink);
      break;
    case MessageKind::BindingWithdrawal:
      handle_withdrawal(std::get<WithdrawalPayload>(msg.payload), msg.src, now, sink);
      break;
    case MessageKind::AlerFailoverBlanket:
      handle_blanket(std::get<BlanketPayload>(msg.payload), now, sink);
      break;
  }
}

std::string Amrr::dump() const {
  std::ostringstream os;
  os << "prefix\tarea\torigin\tlml\talers\telrl\tilrl\texpiry\n";
  for (const auto& [prefix, rec] : records_) {
    os << prefix.to_string() << '\t' << rec.area.value() << '\t' << rec.binding.origin.to_string() << '\t';
    std::string lml, alers, elrl, ilrl;
    for (RouterId a : rec.alers) {
      if (!lml.empty()) {
        lml += ',';
        alers += ',';
      }
      lml += std::to_string(rec.lml.at(a).value());
      alers += a.to_string();
    }
    for (AreaId a : rec.lrl.external) elrl += (elrl.empty() ? "" : ",") + std::to_string(a.value());
    for (RouterId r : rec.lrl.internal) ilrl += (ilrl.empty() ? "" : ",") + r.to_string();
    os << (lml.empty() ? "-" : lml) << '\t' << (alers.empty() ? "-" : alers) << '\t' << (elrl.empty() ? "-" : elrl)
       << '\t' << (ilrl.empty() ? "-" : ilrl) << '\t' << rec.expiry << '\n';
  }
  return os.str();
}

}  // namespace hmlbn
