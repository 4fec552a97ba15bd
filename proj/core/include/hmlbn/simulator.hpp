#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "hmlbn/aler.hpp"
#include "hmlbn/amrr.hpp"
#include "hmlbn/forwarding.hpp"
#include "hmlbn/ler.hpp"
#include "hmlbn/metrics.hpp"
#include "hmlbn/mobility.hpp"
#include "hmlbn/scenario.hpp"
#include "hmlbn/topology.hpp"
#include "hmlbn/trace.hpp"

namespace hmlbn {

/// Final fate of one packet (replicas included).
struct PacketRecord {
  enum class Outcome { InFlight, Delivered, Dropped };

  std::uint64_t id = 0;
  std::string flow;
  std::uint64_t seq = 0;
  SimTime created_at = 0.0;
  Outcome outcome = Outcome::InFlight;
  DropReason reason = DropReason::NoBinding;
  SimTime delivered_at = 0.0;
  std::size_t hops = 0;  // links traversed by the delivered copy
  std::string path;
  std::string aler_path;
  int rewrites = 0;
  int copies = 1;
  int duplicates = 0;
  bool stale = false;  // reached a stale LER although created after a withdrawal for its prefix
};

struct MnState {
  MobileNodeSpec spec;
  std::optional<std::string> cell;
  std::optional<RouterId> ler;
  std::set<std::string> attached;
  AreaId area = kStartupArea;
  std::uint64_t epoch = 0;
  std::vector<SimTime> moves;
};

class Simulator {
 public:
  explicit Simulator(Scenario scenario);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Processes every event with time <= `t` (capped at the scenario duration).
  void run_until(SimTime t);
  void run() { run_until(scenario_.duration); }
  SimTime now() const noexcept { return now_; }

  /// Extra script step, e.g. from a test. Must not lie in the past.
  void schedule(const ScriptStep& step);
  void schedule_fault(const FaultSpec& fault);

  const Scenario& scenario() const noexcept { return scenario_; }
  const NetworkGraph& graph() const noexcept { return *graph_; }
  const LspTable& lsps() const noexcept { return *lsps_; }
  const Trace& trace() const noexcept { return trace_; }
  const std::vector<PacketRecord>& packets() const noexcept { return packets_; }
  Metrics metrics() const;

  const std::map<RouterId, Ler>& lers() const noexcept { return lers_; }
  const std::map<RouterId, Aler>& alers() const noexcept { return alers_; }
  const std::map<RouterId, Amrr>& amrrs() const noexcept { return amrrs_; }
  const Ler& ler(std::string_view name) const;
  const Aler& aler(std::string_view name) const;
  const Amrr& amrr(std::string_view name) const;
  const MnState& mn(std::string_view name) const;
  bool failed(RouterId rid) const { return failed_.count(rid) != 0; }

 private:
  enum class EventKind {
    Script,
    Register,
    OverlapEnd,
    Control,
    FlowPacket,
    DataHop,
    Tick,
    Fault,
    Dwell,
  };

  struct Event {
    SimTime time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Tick;
    std::size_t index = 0;  // MN, flow or walk index
    std::uint64_t number = 0;  // epoch, packet sequence or message id
    std::string cell;
    MnAction action = MnAction::Attach;
    RouterId node;
    std::shared_ptr<ControlMessage> msg;
    std::shared_ptr<DataPacket> packet;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void push(Event ev);
  void process(Event& ev);

  void on_script(std::size_t mn, MnAction action, const std::string& cell);
  void attach(std::size_t mn, const std::string& cell, bool move);
  void on_register(std::size_t mn, const std::string& cell, std::uint64_t epoch);
  void on_tick();
  void on_fault(RouterId node);
  void on_dwell(std::size_t walk);

  void dispatch(Outbox& out);
  void send(const ControlMessage& msg);
  void on_control(std::uint64_t id, const ControlMessage& msg);

  void on_flow_packet(std::size_t flow, std::uint64_t seq);
  void ingress(DataPacket packet, RouterId ler);
  void dispose(DataPacket packet, RouterId node, Disposition d);
  void on_data_hop(DataPacket packet, RouterId node);
  void delivered(const DataPacket& packet, RouterId node);
  void dropped(const DataPacket& packet, RouterId node, DropReason reason);

  std::optional<std::size_t> mn_index(std::string_view name) const;
  std::optional<std::size_t> mn_for(const MobilePrefix& dst) const;
  void log(std::string kind, std::string src, std::string dst, nlohmann::ordered_json detail);
  std::string name(RouterId rid) const { return graph_->name_of(rid); }

  Scenario scenario_;
  std::unique_ptr<NetworkGraph> graph_;
  std::unique_ptr<LspTable> lsps_;
  std::map<RouterId, Ler> lers_;
  std::map<RouterId, Aler> alers_;
  std::map<RouterId, Amrr> amrrs_;
  std::unique_ptr<ForwardingEngine> engine_;
  std::vector<MnState> mns_;
  std::vector<RandomWalk> walks_;
  std::vector<std::size_t> walk_mn_;
  std::set<RouterId> failed_;
  std::map<MobilePrefix, SimTime> withdrawn_at_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_msg_ = 0;
  std::uint64_t next_packet_ = 0;
  SimTime now_ = 0.0;

  Trace trace_;
  std::vector<PacketRecord> packets_;
  std::uint64_t ctrl_total_ = 0;
  std::uint64_t ctrl_crossing_ = 0;
  std::map<MessageKind, std::uint64_t> ctrl_by_kind_;
  std::uint64_t transit_ip_lookups_ = 0;
  std::size_t max_depth_ = 0;
};

/// Convenience: build, run to the end, return the simulator for inspection.
std::unique_ptr<Simulator> simulate(const Scenario& scenario);

}  // namespace hmlbn
