#include "hmlbn/aler.hpp"

#include <algorithm>
#include <sstream>

namespace hmlbn {

Aler::Aler(RouterId rid, NodeContext ctx, AlerConfig config)
    : rid_(rid), area_(ctx.graph.node(rid).area), ctx_(ctx), config_(config) {}

void Aler::set_trail(FibEntry& e, RouterId origin) const {
  auto hop = ctx_.lsps.toward(rid_, origin);
  if (!hop) {
    throw Error(Errc::NoRouteToOrigin, "no LSP from " + rid_.to_string() + " to " + origin.to_string());
  }
  e.origin = origin;
  e.in_top = ctx_.lsps.in_label(rid_, origin);
  e.out_top = hop->out_label;
  e.next_hop = hop->next_hop;
  e.out_interface = ctx_.graph.interface_name(rid_, hop->next_hop);
}

void Aler::announce(const FibEntry& e, UpdateType type, SimTime now, Outbox& out) const {
  MobilityBinding b;
  b.prefix = e.prefix;
  b.origin = rid_;
  b.label = e.lml;
  b.area = e.area;
  b.mode = UpdateMode::UnsolicitedDownstreamPush;
  b.type = type;
  b.lifetime = config_.lifetime;
  for (RouterId amrr : ctx_.graph.members(area_, NodeRole::Amrr)) {
    out.push_back(make_message(MessageKind::BindingUpdate, rid_, amrr, now, b));
  }
}

const FibEntry& Aler::apply(const MobilityBinding& binding, UpdateType announce_as, SimTime now, Outbox& out) {
  auto it = fib_.find(binding.prefix);
  if (it == fib_.end()) {
    FibEntry e;
    e.prefix = binding.prefix;
    set_trail(e, binding.origin);
    e.lml = labels_.allocate();
    e.cml = binding.label;
    e.area = binding.area;
    e.expiry = now + binding.lifetime;
    by_lml_[e.lml.value()] = e.prefix;
    it = fib_.emplace(e.prefix, std::move(e)).first;
    announce(it->second, announce_as, now, out);
    return it->second;
  }
  FibEntry& e = it->second;
  const Segment before = e.segment();
  if (binding.origin != e.origin) set_trail(e, binding.origin);
  e.cml = binding.label;
  e.area = binding.area;
  e.expiry = now + binding.lifetime;
  if (config_.replicate && e.segment() != before) {
    e.previous = before;
    e.previous_until = now + config_.replication_seconds;
  }
  // The LML already exists, so no re-origination unless the AMRR has lost it.
  if (binding.mode == UpdateMode::SelectiveDownstreamPush) announce(e, announce_as, now, out);
  return e;
}

const FibEntry& Aler::handle_internal_update(const MobilityBinding& binding, SimTime now, Outbox& out) {
  return apply(binding, UpdateType::External, now, out);
}

const FibEntry& Aler::handle_external_update(const MobilityBinding& binding, SimTime now, Outbox& out) {
  return apply(binding, UpdateType::Internal, now, out);
}

void Aler::handle_control(const ControlMessage& msg, SimTime now, Outbox& out) {
  switch (msg.kind) {
    case MessageKind::BindingUpdate: {
      const auto& b = msg.binding();
      if (b.type == UpdateType::Internal) {
        handle_internal_update(b, now, out);
      } else {
        handle_external_update(b, now, out);
      }
      break;
    }
    case MessageKind::BindingWithdrawal:
      handle_withdrawal(std::get<WithdrawalPayload>(msg.payload).prefix);
      break;
    case MessageKind::AlerFailoverBlanket: {
      const auto& p = std::get<BlanketPayload>(msg.payload);
      handle_blanket(p.surviving, p.area);
      break;
    }
    default:
      break;
  }
}

Disposition Aler::forward_transit(DataPacket& packet, SimTime now) {
  if (packet.stack.empty()) return Disposition::drop(DropReason::NoLabelEntry);
  const MobilityLabel inner = packet.stack.top().label;
  auto idx = by_lml_.find(inner.value());
  if (idx == by_lml_.end()) return Disposition::drop(DropReason::UnknownLocalMobilityLabel);
  const FibEntry& e = fib_.at(idx->second);

  std::optional<DataPacket> copy;
  if (e.previous && e.previous_until >= now && e.previous->next_hop != RouterId{}) {
    copy = packet;
    copy->replica = true;
    copy->stack.swap_top(e.previous->cml);
    copy->stack.push(e.previous->out_top, LabelTag::Infrastructure);
    ++copy->mobility_rewrites;
  }
  packet.stack.swap_top(e.cml);
  packet.stack.push(e.out_top, LabelTag::Infrastructure);
  ++packet.mobility_rewrites;
  auto d = Disposition::forward(e.next_hop);
  if (copy) {
    d.replica = std::move(copy);
    d.replica_next_hop = e.previous->next_hop;
  }
  return d;
}

void Aler::handle_withdrawal(const MobilePrefix& prefix) {
  auto it = fib_.find(prefix);
  if (it == fib_.end()) return;
  by_lml_.erase(it->second.lml.value());
  fib_.erase(it);
}

std::size_t Aler::handle_blanket(RouterId surviving, AreaId area) {
  const auto alers = ctx_.graph.members(area, NodeRole::Aler);
  std::size_t rewritten = 0;
  for (auto& [prefix, e] : fib_) {
    if (e.origin == surviving) continue;
    if (std::find(alers.begin(), alers.end(), e.origin) == alers.end()) continue;
    set_trail(e, surviving);
    ++rewritten;
  }
  return rewritten;
}

void Aler::expire(SimTime now) {
  for (auto it = fib_.begin(); it != fib_.end();) {
    if (it->second.expiry < now) {
      by_lml_.erase(it->second.lml.value());
      it = fib_.erase(it);
    } else {
      ++it;
    }
  }
}

const FibEntry* Aler::entry(const MobilePrefix& prefix) const {
  auto it = fib_.find(prefix);
  return it == fib_.end() ? nullptr : &it->second;
}

const FibEntry* Aler::entry_by_lml(MobilityLabel lml) const {
  auto it = by_lml_.find(lml.value());
  return it == by_lml_.end() ? nullptr : entry(it->second);
}

std::string Aler::dump_fib() const {
  std::ostringstream os;
  os << "Mobile Prefix (FEC)\tOrigin Router ID\tIn Top Label\tLocal Mobility Label\tCurrent Mobility Label\t"
        "Out Top Label\tOut Interface ID\n";
  for (const auto& [prefix, e] : fib_) {
    os << prefix.to_string() << '\t' << e.origin.to_string() << '\t' << e.in_top.value() << '\t' << e.lml.value()
       << '\t' << e.cml.value() << '\t' << e.out_top.value() << '\t' << e.out_interface << '\n';
  }
  return os.str();
}

}  // namespace hmlbn
