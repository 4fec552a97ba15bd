#include "hmlbn/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace hmlbn {

namespace {

using ojson = nlohmann::ordered_json;

std::string_view action_name(MnAction a) {
  switch (a) {
    case MnAction::Attach: return "attach";
    case MnAction::Move: return "move";
    case MnAction::Detach: return "detach";
    case MnAction::Reset: return "reset";
  }
  return "?";
}

ojson binding_json(const MobilityBinding& b) {
  ojson j;
  j["prefix"] = b.prefix.to_string();
  j["origin"] = b.origin.to_string();
  j["label"] = b.label.value();
  j["area"] = b.area.value();
  j["mode"] = std::string(to_string(b.mode));
  j["type"] = std::string(to_string(b.type));
  j["lifetime"] = b.lifetime;
  return j;
}

ojson payload_json(const ControlMessage& msg) {
  return std::visit(
      [](const auto& p) -> ojson {
        using T = std::decay_t<decltype(p)>;
        ojson j;
        if constexpr (std::is_same_v<T, MobilityBinding>) {
          j = binding_json(p);
        } else if constexpr (std::is_same_v<T, WithdrawalPayload>) {
          j["prefix"] = p.prefix.to_string();
          j["origin"] = p.origin.to_string();
        } else if constexpr (std::is_same_v<T, RequestPayload>) {
          j["prefix"] = p.prefix.to_string();
          j["requestorArea"] = p.requestor_area.value();
          j["requestor"] = p.requestor.to_string();
        } else if constexpr (std::is_same_v<T, NegativePayload>) {
          j["prefix"] = p.prefix.to_string();
        } else if constexpr (std::is_same_v<T, LrlRequestPayload>) {
          j["prefix"] = p.prefix.to_string();
          j["requestorArea"] = p.requestor_area.value();
        } else if constexpr (std::is_same_v<T, LrlReplyPayload>) {
          j["prefix"] = p.prefix.to_string();
          j["areas"] = ojson::array();
          for (AreaId a : p.areas) j["areas"].push_back(a.value());
        } else if constexpr (std::is_same_v<T, BlanketPayload>) {
          j["surviving"] = p.surviving.to_string();
          j["area"] = p.area.value();
        }
        return j;
      },
      msg.payload);
}

ojson hops_json(const DataPacket& p, const NetworkGraph& g) {
  ojson a = ojson::array();
  for (const Hop& h : p.hops) a.push_back(ojson{{"node", g.name_of(h.node)}, {"t", h.time}, {"stack", h.stack}});
  return a;
}

}  // namespace

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)) {
  graph_ = std::make_unique<NetworkGraph>(NetworkGraph::build(scenario_.topology));
  lsps_ = std::make_unique<LspTable>(LspTable::compute(*graph_));
  const NodeContext ctx{*graph_, *lsps_};
  const auto& f = scenario_.flags;
  const auto& tm = scenario_.timers;
  for (const Node& n : graph_->nodes()) {
    switch (n.role) {
      case NodeRole::Ler: {
        LerConfig c;
        c.dead_time = tm.dead_time;
        c.lifetime = tm.lifetime;
        c.queue_limit = f.queue_limit;
        c.mobility_range = scenario_.mobility.range;
        c.replicate = f.replicate_at_ler;
        c.replication_seconds = f.replication_seconds;
        lers_.emplace(n.rid, Ler(n.rid, ctx, c));
        break;
      }
      case NodeRole::Aler:
        alers_.emplace(n.rid, Aler(n.rid, ctx, AlerConfig{tm.lifetime, f.replicate_at_aler, f.replication_seconds}));
        break;
      case NodeRole::Amrr:
        amrrs_.emplace(n.rid, Amrr(n.rid, ctx, AmrrConfig{tm.lifetime, f.reflect_to_previous_ler}));
        break;
      case NodeRole::Lsr:
        break;
    }
  }
  engine_ = std::make_unique<ForwardingEngine>(ctx, lers_, alers_);

  for (const auto& spec : scenario_.mobility.nodes) mns_.push_back(MnState{spec, {}, {}, {}, kStartupArea, 0, {}});
  for (const auto& step : scenario_.mobility.script) schedule(step);
  for (std::size_t i = 0; i < scenario_.mobility.stochastic.size(); ++i) {
    const auto& s = scenario_.mobility.stochastic[i];
    const std::size_t mn = *mn_index(s.mn);
    walks_.emplace_back(s, scenario_.seed * 1000003ULL + i);
    walk_mn_.push_back(mn);
    const auto& region = graph_->regions().at(s.start_region);
    Event ev;
    ev.time = s.start;
    ev.kind = EventKind::Script;
    ev.index = mn;
    ev.action = MnAction::Attach;
    ev.cell = region.cells.front();
    push(std::move(ev));
    Event dwell;
    dwell.time = s.start + walks_.back().next_dwell();
    dwell.kind = EventKind::Dwell;
    dwell.index = i;
    push(std::move(dwell));
  }
  for (std::size_t i = 0; i < scenario_.flows.size(); ++i) {
    Event ev;
    ev.time = scenario_.flows[i].start;
    ev.kind = EventKind::FlowPacket;
    ev.index = i;
    ev.number = 0;
    push(std::move(ev));
  }
  for (const auto& fault : scenario_.faults) schedule_fault(fault);
  Event tick;
  tick.time = tm.keepalive;
  tick.kind = EventKind::Tick;
  push(std::move(tick));
}

void Simulator::push(Event ev) {
  ev.seq = next_seq_++;
  queue_.push(std::move(ev));
}

void Simulator::schedule(const ScriptStep& step) {
  auto mn = mn_index(step.mn);
  if (!mn) throw Error(Errc::UnknownNode, "unknown mobile node " + step.mn);
  if (step.at < now_) throw Error(Errc::InvalidArgument, "script step in the past");
  Event ev;
  ev.time = step.at;
  ev.kind = EventKind::Script;
  ev.index = *mn;
  ev.action = step.action;
  ev.cell = step.cell;
  push(std::move(ev));
}

void Simulator::schedule_fault(const FaultSpec& fault) {
  Event ev;
  ev.time = fault.at;
  ev.kind = EventKind::Fault;
  ev.node = graph_->node(fault.node).rid;
  push(std::move(ev));
}

void Simulator::run_until(SimTime t) {
  t = std::min(t, scenario_.duration);
  while (!queue_.empty() && queue_.top().time <= t) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    process(ev);
  }
  now_ = std::max(now_, t);
}

void Simulator::process(Event& ev) {
  switch (ev.kind) {
    case EventKind::Script: on_script(ev.index, ev.action, ev.cell); break;
    case EventKind::Register: on_register(ev.index, ev.cell, ev.number); break;
    case EventKind::OverlapEnd: {
      MnState& m = mns_[ev.index];
      if (m.cell != ev.cell) m.attached.erase(ev.cell);
      break;
    }
    case EventKind::Control: on_control(ev.number, *ev.msg); break;
    case EventKind::FlowPacket: on_flow_packet(ev.index, ev.number); break;
    case EventKind::DataHop: on_data_hop(std::move(*ev.packet), ev.node); break;
    case EventKind::Tick: on_tick(); break;
    case EventKind::Fault: on_fault(ev.node); break;
    case EventKind::Dwell: on_dwell(ev.index); break;
  }
}

void Simulator::log(std::string kind, std::string src, std::string dst, ojson detail) {
  trace_.add(TraceEvent{now_, 0, std::move(kind), std::move(src), std::move(dst), std::move(detail)});
}

std::optional<std::size_t> Simulator::mn_index(std::string_view name) const {
  for (std::size_t i = 0; i < mns_.size(); ++i) {
    if (mns_[i].spec.name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Simulator::mn_for(const MobilePrefix& dst) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < mns_.size(); ++i) {
    const auto& p = mns_[i].spec.prefix;
    if (p.contains(dst) && (!best || p.length() > mns_[*best].spec.prefix.length())) best = i;
  }
  return best;
}

// Mobility

void Simulator::on_script(std::size_t mn, MnAction action, const std::string& cell) {
  MnState& m = mns_[mn];
  switch (action) {
    case MnAction::Attach:
    case MnAction::Move:
      attach(mn, cell, action == MnAction::Move);
      return;
    case MnAction::Detach:
    case MnAction::Reset:
      m.attached.clear();
      m.cell.reset();
      m.ler.reset();
      ++m.epoch;
      if (action == MnAction::Reset) m.area = kStartupArea;
      log(std::string("mn_") + std::string(action_name(action)), m.spec.name, "", ojson::object());
      return;
  }
}

void Simulator::attach(std::size_t mn, const std::string& cell, bool move) {
  MnState& m = mns_[mn];
  const Region* region = graph_->region_of_cell(cell);
  if (!region) throw Error(Errc::UnknownInterface, "unknown cell " + cell);
  const RouterId target = region->ler;
  log(move ? "mn_move" : "mn_attach", m.spec.name, name(target),
      ojson{{"cell", cell}, {"region", region->id}});
  if (m.cell == cell) return;
  if (m.cell) m.moves.push_back(now_);

  Ler& ler = lers_.at(target);
  if (m.cell && m.ler == target && ler.registration(m.spec.prefix) && !failed(target)) {
    ler.track_local_handoff(m.spec.prefix, cell, now_);
    m.attached.erase(*m.cell);
    m.attached.insert(cell);
    m.cell = cell;
    log("local_handoff", m.spec.name, name(target), ojson{{"cell", cell}});
    return;
  }

  if (m.cell) {
    if (scenario_.flags.overlap_attach) {
      Event end;
      end.time = now_ + scenario_.flags.overlap_seconds;
      end.kind = EventKind::OverlapEnd;
      end.index = mn;
      end.cell = *m.cell;
      push(std::move(end));
    } else {
      m.attached.erase(*m.cell);
    }
  }
  m.attached.insert(cell);
  m.cell = cell;
  m.ler = target;
  ++m.epoch;
  Event reg;
  reg.time = now_ + scenario_.flags.registration_delay;
  reg.kind = EventKind::Register;
  reg.index = mn;
  reg.cell = cell;
  reg.number = m.epoch;
  push(std::move(reg));
}

void Simulator::on_register(std::size_t mn, const std::string& cell, std::uint64_t epoch) {
  MnState& m = mns_[mn];
  if (epoch != m.epoch || m.cell != cell || !m.ler || failed(*m.ler)) return;
  Outbox out;
  const AreaId sent = m.area;
  auto res = lers_.at(*m.ler).handle_registration(m.spec.prefix, m.spec.l2_address, cell, m.area, now_, out);
  m.area = res.reply_area;
  log("registration", m.spec.name, name(*m.ler),
      ojson{{"cell", cell},
            {"label", res.record.label.value()},
            {"mnArea", sent.value()},
            {"advertisedArea", res.record.advertised_area.value()},
            {"replyArea", res.reply_area.value()}});
  dispatch(out);
}

void Simulator::on_dwell(std::size_t walk) {
  const std::size_t mn = walk_mn_[walk];
  MnState& m = mns_[mn];
  if (m.cell) {
    const Region* here = graph_->region_of_cell(*m.cell);
    if (auto next = walks_[walk].next_region(here->id)) {
      log("stochastic_move", m.spec.name, "", ojson{{"from", here->id}, {"to", *next}});
      attach(mn, graph_->regions().at(*next).cells.front(), true);
    }
  }
  Event ev;
  ev.time = now_ + walks_[walk].next_dwell();
  ev.kind = EventKind::Dwell;
  ev.index = walk;
  if (ev.time <= scenario_.duration) push(std::move(ev));
}

void Simulator::on_tick() {
  for (const MnState& m : mns_) {
    if (m.ler && m.cell && !failed(*m.ler)) lers_.at(*m.ler).keepalive(m.spec.prefix, now_);
  }
  Outbox out;
  for (auto& [rid, ler] : lers_) {
    if (failed(rid)) continue;
    ler.scan_dead_registrations(now_, out);
    ler.expire_cache(now_);
  }
  for (auto& [rid, aler] : alers_) {
    if (!failed(rid)) aler.expire(now_);
  }
  for (auto& [rid, amrr] : amrrs_) {
    if (!failed(rid)) amrr.expire_records(now_);
  }
  dispatch(out);
  Event next;
  next.time = now_ + scenario_.timers.keepalive;
  next.kind = EventKind::Tick;
  if (next.time <= scenario_.duration) push(std::move(next));
}

void Simulator::on_fault(RouterId node) {
  failed_.insert(node);
  const Node& n = graph_->node(node);
  log("node_fail", n.name, "", ojson{{"role", std::string(to_string(n.role))}});
  if (n.role != NodeRole::Aler) return;
  Outbox out;
  for (RouterId a : graph_->members(n.area, NodeRole::Amrr)) {
    if (!failed(a)) amrrs_.at(a).handle_aler_failure(node, now_, out);
  }
  dispatch(out);
}

// Control plane

void Simulator::dispatch(Outbox& out) {
  for (const ControlMessage& msg : out) send(msg);
  out.clear();
}

void Simulator::send(const ControlMessage& msg) {
  if (failed(msg.src)) return;
  const Node& s = graph_->node(msg.src);
  const Node& d = graph_->node(msg.dst);
  const bool crossing = s.area != d.area;
  const std::uint64_t id = next_msg_++;
  ++ctrl_total_;
  if (crossing) ++ctrl_crossing_;
  ++ctrl_by_kind_[msg.kind];
  ojson detail;
  detail["id"] = id;
  detail["msg"] = std::string(to_string(msg.kind));
  if (msg.kind == MessageKind::BindingUpdate || msg.kind == MessageKind::BindingReplyPositive) {
    detail["type"] = std::string(to_string(msg.binding().type));
    detail["mode"] = std::string(to_string(msg.binding().mode));
  }
  detail["srcRole"] = std::string(to_string(s.role));
  detail["dstRole"] = std::string(to_string(d.role));
  detail["srcArea"] = s.area.value();
  detail["dstArea"] = d.area.value();
  detail["areaCrossing"] = crossing;
  detail["payload"] = payload_json(msg);
  detail["hex"] = to_hex(canonical_encode(msg));
  log("ctrl_send", s.name, d.name, std::move(detail));

  Event ev;
  ev.time = now_ + graph_->control_latency(msg.src, msg.dst);
  ev.kind = EventKind::Control;
  ev.number = id;
  ev.msg = std::make_shared<ControlMessage>(msg);
  push(std::move(ev));
}

void Simulator::on_control(std::uint64_t id, const ControlMessage& msg) {
  const Node& d = graph_->node(msg.dst);
  if (failed(msg.dst)) {
    log("ctrl_lost", name(msg.src), d.name, ojson{{"id", id}, {"msg", std::string(to_string(msg.kind))}});
    return;
  }
  log("ctrl_recv", name(msg.src), d.name, ojson{{"id", id}, {"msg", std::string(to_string(msg.kind))}});
  if (msg.kind == MessageKind::BindingWithdrawal) withdrawn_at_[std::get<WithdrawalPayload>(msg.payload).prefix] = now_;
  Outbox out;
  switch (d.role) {
    case NodeRole::Ler: {
      auto res = lers_.at(msg.dst).handle_control(msg, now_);
      for (auto& p : res.dropped) dropped(p, msg.dst, res.reason);
      for (auto& p : res.release) ingress(std::move(p), msg.dst);
      break;
    }
    case NodeRole::Aler:
      alers_.at(msg.dst).handle_control(msg, now_, out);
      break;
    case NodeRole::Amrr:
      amrrs_.at(msg.dst).handle_control(msg, now_, out);
      break;
    case NodeRole::Lsr:
      break;
  }
  dispatch(out);
}

// Data plane

void Simulator::on_flow_packet(std::size_t flow, std::uint64_t seq) {
  const FlowSpec& f = scenario_.flows[flow];
  const MnState& dst = mns_[*mn_index(f.dst)];

  DataPacket p;
  p.id = next_packet_++;
  p.flow = f.id;
  p.seq = seq;
  p.dst = dst.spec.prefix;
  p.created_at = now_;
  PacketRecord rec;
  rec.id = p.id;
  rec.flow = f.id;
  rec.seq = seq;
  rec.created_at = now_;
  packets_.push_back(rec);

  std::optional<RouterId> at;
  if (auto src_mn = mn_index(f.src)) {
    at = mns_[*src_mn].ler;
    if (!mns_[*src_mn].cell) at.reset();
  } else {
    at = graph_->node(f.src).rid;
  }
  if (!at) {
    dropped(p, RouterId{}, DropReason::MnNotAttached);
  } else {
    p.ingress = *at;
    ingress(std::move(p), *at);
  }

  Event next;
  next.time = f.start + static_cast<double>(seq + 1) / f.rate_pps;
  next.kind = EventKind::FlowPacket;
  next.index = flow;
  next.number = seq + 1;
  if (next.time < f.stop && next.time <= scenario_.duration) push(std::move(next));
}

void Simulator::ingress(DataPacket packet, RouterId ler) {
  if (failed(ler)) {
    dropped(packet, ler, DropReason::NodeFailed);
    return;
  }
  Outbox out;
  Disposition d = lers_.at(ler).ingress_forward(packet, now_, out);
  if (d.kind != Disposition::Kind::Queued) record_hop(packet, ler, now_);
  dispatch(out);
  dispose(std::move(packet), ler, std::move(d));
}

void Simulator::dispose(DataPacket packet, RouterId node, Disposition d) {
  max_depth_ = std::max(max_depth_, packet.max_depth);
  switch (d.kind) {
    case Disposition::Kind::Queued:
      return;
    case Disposition::Kind::Drop:
      dropped(packet, node, d.reason);
      return;
    case Disposition::Kind::Deliver: {
      auto mn = mn_for(packet.dst);
      bool ok = false;
      if (mn) {
        for (const auto& i : d.interfaces) ok = ok || mns_[*mn].attached.count(i) != 0;
      }
      if (ok) {
        delivered(packet, node);
      } else {
        dropped(packet, node, DropReason::MnNotAttached);
      }
      return;
    }
    case Disposition::Kind::Forward:
      break;
  }
  if (d.replica) {
    ++packets_[packet.id].copies;
    Event copy;
    copy.time = now_ + graph_->edge_latency_ms(node, d.replica_next_hop) / 1000.0;
    copy.kind = EventKind::DataHop;
    copy.node = d.replica_next_hop;
    copy.packet = std::make_shared<DataPacket>(std::move(*d.replica));
    push(std::move(copy));
  }
  Event ev;
  ev.time = now_ + graph_->edge_latency_ms(node, d.next_hop) / 1000.0;
  ev.kind = EventKind::DataHop;
  ev.node = d.next_hop;
  ev.packet = std::make_shared<DataPacket>(std::move(packet));
  push(std::move(ev));
}

void Simulator::on_data_hop(DataPacket packet, RouterId node) {
  if (failed(node)) {
    dropped(packet, node, DropReason::NodeFailed);
    return;
  }
  Disposition d = engine_->step(packet, node, now_);
  dispose(std::move(packet), node, std::move(d));
}

void Simulator::delivered(const DataPacket& packet, RouterId node) {
  PacketRecord& rec = packets_[packet.id];
  --rec.copies;
  transit_ip_lookups_ += static_cast<std::uint64_t>(packet.transit_ip_lookups);
  if (rec.outcome == PacketRecord::Outcome::Delivered) {
    ++rec.duplicates;
    log("duplicate", name(packet.ingress), name(node), ojson{{"flow", packet.flow}, {"pkt", packet.seq}});
    return;
  }
  rec.outcome = PacketRecord::Outcome::Delivered;
  rec.delivered_at = now_;
  rec.hops = packet.hops.empty() ? 0 : packet.hops.size() - 1;
  rec.path = path_string(packet, *graph_);
  rec.aler_path = aler_path(packet, *graph_);
  rec.rewrites = packet.mobility_rewrites;
  log("deliver", name(packet.ingress), name(node),
      ojson{{"flow", packet.flow},
            {"pkt", packet.seq},
            {"replica", packet.replica},
            {"path", rec.path},
            {"alerPath", rec.aler_path},
            {"hops", hops_json(packet, *graph_)},
            {"rewrites", packet.mobility_rewrites},
            {"latencyMs", (now_ - packet.created_at) * 1000.0}});
}

void Simulator::dropped(const DataPacket& packet, RouterId node, DropReason reason) {
  PacketRecord& rec = packets_[packet.id];
  --rec.copies;
  transit_ip_lookups_ += static_cast<std::uint64_t>(packet.transit_ip_lookups);
  const std::string at = node == RouterId{} ? "" : name(node);
  log("drop", packet.ingress == RouterId{} ? "" : name(packet.ingress), at,
      ojson{{"flow", packet.flow},
            {"pkt", packet.seq},
            {"replica", packet.replica},
            {"reason", std::string(to_string(reason))},
            {"path", path_string(packet, *graph_)},
            {"hops", hops_json(packet, *graph_)}});
  if (reason == DropReason::MnNotAttached && node != RouterId{}) {
    auto w = withdrawn_at_.find(packet.dst);
    if (w != withdrawn_at_.end() && packet.created_at > w->second) rec.stale = true;
  }
  if (rec.outcome == PacketRecord::Outcome::InFlight && rec.copies <= 0) {
    rec.outcome = PacketRecord::Outcome::Dropped;
    rec.reason = reason;
  }
}

// Inspection

Metrics Simulator::metrics() const {
  Metrics m;
  m.ctrl_total = ctrl_total_;
  m.ctrl_area_crossing = ctrl_crossing_;
  m.ctrl_intra_area = ctrl_total_ - ctrl_crossing_;
  m.ctrl_by_kind = ctrl_by_kind_;
  m.transit_ip_lookups = transit_ip_lookups_;
  m.max_stack_depth = max_depth_;

  std::map<std::string, std::vector<SimTime>> deliveries;
  for (const auto& f : scenario_.flows) m.flows[f.id];
  for (const PacketRecord& r : packets_) {
    FlowMetrics& fm = m.flows[r.flow];
    ++fm.ingress;
    fm.stale_after_withdrawal += r.stale;
    switch (r.outcome) {
      case PacketRecord::Outcome::Delivered:
        ++fm.delivered;
        fm.hop_sum += r.hops;
        fm.latency_sum_ms += (r.delivered_at - r.created_at) * 1000.0;
        deliveries[r.flow].push_back(r.delivered_at);
        break;
      case PacketRecord::Outcome::Dropped:
        ++fm.dropped;
        ++fm.drops_by_reason[r.reason];
        break;
      case PacketRecord::Outcome::InFlight:
        ++fm.in_flight;
        break;
    }
  }
  for (auto& [flow, times] : deliveries) {
    std::sort(times.begin(), times.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) gap = std::max(gap, times[i] - times[i - 1]);
    m.flows[flow].max_gap_ms = gap * 1000.0;
  }
  for (const auto& f : scenario_.flows) {
    const MnState& dst = mn(f.dst);
    const auto& times = deliveries[f.id];
    for (SimTime tm : dst.moves) {
      double gap = -1.0;
      for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] >= tm && times[i - 1] <= tm + 1.0) gap = std::max(gap, times[i] - times[i - 1]);
      }
      if (gap >= 0.0) m.handoffs.push_back(HandoffGap{dst.spec.name, f.id, tm, gap * 1000.0});
    }
  }
  return m;
}

const Ler& Simulator::ler(std::string_view n) const { return lers_.at(graph_->node(n).rid); }
const Aler& Simulator::aler(std::string_view n) const { return alers_.at(graph_->node(n).rid); }
const Amrr& Simulator::amrr(std::string_view n) const { return amrrs_.at(graph_->node(n).rid); }

const MnState& Simulator::mn(std::string_view n) const {
  auto i = mn_index(n);
  if (!i) throw Error(Errc::UnknownNode, "unknown mobile node " + std::string(n));
  return mns_[*i];
}

std::unique_ptr<Simulator> simulate(const Scenario& scenario) {
  auto sim = std::make_unique<Simulator>(scenario);
  sim->run();
  return sim;
}

}  // namespace hmlbn
