#include "hmlbn/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hmlbn {

using nlohmann::json;

namespace {

class Checker {
 public:
  explicit Checker(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void error(const std::string& path, const std::string& code, const std::string& message) {
    diags_.push_back({path, code, message});
  }

  /// Checks `j` is an object holding only `allowed` keys.
  bool object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      error(path.empty() ? "$" : path, "type", "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) error(join(path, key), "unknown-key", "unknown key '" + key + "'");
    }
    return true;
  }

  const json* field(const json& j, const std::string& path, const char* key, bool required) {
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) error(join(path, key), "missing", "required key '" + std::string(key) + "' is missing");
      return nullptr;
    }
    return &*it;
  }

  void str(const json& j, const std::string& path, const char* key, std::string& out, bool required = true) {
    if (const json* v = field(j, path, key, required)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        error(join(path, key), "type", "expected a string");
      }
    }
  }

  void num(const json& j, const std::string& path, const char* key, double& out, bool required = false) {
    if (const json* v = field(j, path, key, required)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        error(join(path, key), "type", "expected a number");
      }
    }
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (const json* v = field(j, path, key, false)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        error(join(path, key), "type", "expected a boolean");
      }
    }
  }

  template <typename T>
  void uint(const json& j, const std::string& path, const char* key, T& out, bool required = false) {
    if (const json* v = field(j, path, key, required)) {
      if (v->is_number_unsigned() || (v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        out = static_cast<T>(v->get<std::uint64_t>());
      } else {
        error(join(path, key), "type", "expected a non-negative integer");
      }
    }
  }

  const json* array(const json& j, const std::string& path, const char* key, bool required = false) {
    const json* v = field(j, path, key, required);
    if (v && !v->is_array()) {
      error(join(path, key), "type", "expected an array");
      return nullptr;
    }
    return v;
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

 private:
  std::vector<Diagnostic>& diags_;
};

void parse_topology(Checker& c, const json& j, const std::string& path, TopologySpec& topo) {
  if (!c.object(j, path, {"nodes", "edges", "regions"})) return;
  if (const json* nodes = c.array(j, path, "nodes", true)) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto p = Checker::at(path + ".nodes", i);
      const json& n = (*nodes)[i];
      if (!c.object(n, p, {"name", "rid", "role", "area"})) continue;
      NodeSpec spec;
      c.str(n, p, "name", spec.name);
      std::string rid, role;
      c.str(n, p, "rid", rid);
      c.str(n, p, "role", role);
      std::uint32_t area = 0;
      c.uint(n, p, "area", area);
      spec.area = AreaId(area);
      try {
        if (!rid.empty()) spec.rid = RouterId::parse(rid);
      } catch (const Error& e) {
        c.error(p + ".rid", "value", e.what());
      }
      if (auto r = parse_role(role)) {
        spec.role = *r;
      } else if (!role.empty()) {
        c.error(p + ".role", "value", "role must be LER, ALER, AMRR or LSR");
      }
      topo.nodes.push_back(spec);
    }
  }
  if (const json* edges = c.array(j, path, "edges", true)) {
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const auto p = Checker::at(path + ".edges", i);
      const json& e = (*edges)[i];
      if (!c.object(e, p, {"a", "b", "latencyMs"})) continue;
      EdgeSpec spec;
      c.str(e, p, "a", spec.a);
      c.str(e, p, "b", spec.b);
      c.num(e, p, "latencyMs", spec.latency_ms);
      topo.edges.push_back(spec);
    }
  }
  if (const json* regions = c.array(j, path, "regions", true)) {
    for (std::size_t i = 0; i < regions->size(); ++i) {
      const auto p = Checker::at(path + ".regions", i);
      const json& r = (*regions)[i];
      if (!c.object(r, p, {"id", "ler", "cells"})) continue;
      RegionSpec spec;
      c.str(r, p, "id", spec.id);
      c.str(r, p, "ler", spec.ler);
      if (const json* cells = c.array(r, p, "cells", true)) {
        for (std::size_t k = 0; k < cells->size(); ++k) {
          if ((*cells)[k].is_string()) {
            spec.cells.push_back((*cells)[k].get<std::string>());
          } else {
            c.error(Checker::at(p + ".cells", k), "type", "expected a string");
          }
        }
      }
      topo.regions.push_back(spec);
    }
  }
}

std::optional<MobilePrefix> prefix_field(Checker& c, const json& j, const std::string& path, const char* key) {
  std::string text;
  c.str(j, path, key, text);
  if (text.empty()) return std::nullopt;
  try {
    return MobilePrefix::parse(text);
  } catch (const Error& e) {
    c.error(Checker::join(path, key), "value", e.what());
    return std::nullopt;
  }
}

void parse_mobility(Checker& c, const json& j, const std::string& path, MobilitySpec& mob) {
  if (!c.object(j, path, {"range", "nodes", "script", "stochastic"})) return;
  if (const json* range = c.array(j, path, "range", true)) {
    for (std::size_t i = 0; i < range->size(); ++i) {
      const auto p = Checker::at(path + ".range", i);
      if (!(*range)[i].is_string()) {
        c.error(p, "type", "expected a prefix string");
        continue;
      }
      try {
        mob.range.push_back(MobilePrefix::parse((*range)[i].get<std::string>()));
      } catch (const Error& e) {
        c.error(p, "value", e.what());
      }
    }
  }
  if (const json* nodes = c.array(j, path, "nodes", true)) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto p = Checker::at(path + ".nodes", i);
      const json& n = (*nodes)[i];
      if (!c.object(n, p, {"name", "prefix", "l2"})) continue;
      MobileNodeSpec spec;
      c.str(n, p, "name", spec.name);
      if (auto pr = prefix_field(c, n, p, "prefix")) spec.prefix = *pr;
      c.str(n, p, "l2", spec.l2_address, false);
      if (spec.l2_address.empty()) spec.l2_address = "l2:" + spec.name;
      mob.nodes.push_back(spec);
    }
  }
  if (const json* script = c.array(j, path, "script")) {
    for (std::size_t i = 0; i < script->size(); ++i) {
      const auto p = Checker::at(path + ".script", i);
      const json& s = (*script)[i];
      if (!c.object(s, p, {"at", "mn", "action", "cell"})) continue;
      ScriptStep step;
      c.num(s, p, "at", step.at, true);
      c.str(s, p, "mn", step.mn);
      std::string action;
      c.str(s, p, "action", action);
      if (action == "attach") {
        step.action = MnAction::Attach;
      } else if (action == "move") {
        step.action = MnAction::Move;
      } else if (action == "detach") {
        step.action = MnAction::Detach;
      } else if (action == "reset") {
        step.action = MnAction::Reset;
      } else if (!action.empty()) {
        c.error(p + ".action", "value", "action must be attach, move, detach or reset");
      }
      const bool needs_cell = step.action == MnAction::Attach || step.action == MnAction::Move;
      c.str(s, p, "cell", step.cell, needs_cell);
      mob.script.push_back(step);
    }
  }
  if (const json* st = c.array(j, path, "stochastic")) {
    for (std::size_t i = 0; i < st->size(); ++i) {
      const auto p = Checker::at(path + ".stochastic", i);
      const json& s = (*st)[i];
      if (!c.object(s, p, {"mn", "startRegion", "start", "mu", "p", "adjacency"})) continue;
      StochasticSpec spec;
      c.str(s, p, "mn", spec.mn);
      c.str(s, p, "startRegion", spec.start_region);
      c.num(s, p, "start", spec.start);
      c.num(s, p, "mu", spec.mu, true);
      c.num(s, p, "p", spec.p, true);
      if (const json* adj = c.field(s, p, "adjacency", true)) {
        if (!adj->is_object()) {
          c.error(p + ".adjacency", "type", "expected an object of region -> [regions]");
        } else {
          for (const auto& [region, list] : adj->items()) {
            auto& out = spec.adjacency[region];
            if (!list.is_array()) {
              c.error(p + ".adjacency." + region, "type", "expected an array");
              continue;
            }
            for (const auto& r : list) {
              if (r.is_string()) {
                out.push_back(r.get<std::string>());
              } else {
                c.error(p + ".adjacency." + region, "type", "expected region names");
              }
            }
          }
        }
      }
      mob.stochastic.push_back(spec);
    }
  }
}

void check_invariants(Checker& c, const Scenario& s) {
  if (!(s.duration > 0)) c.error("duration", "value", "duration must be positive");
  const auto& t = s.timers;
  if (!(t.keepalive > 0)) c.error("timers.keepalive", "value", "keepalive must be positive");
  if (!(t.dead_time >= 3 * t.keepalive)) {
    c.error("timers.deadTime", "value", "deadTime must be at least 3 x keepalive (D >= 3R)");
  }
  if (!(t.lifetime >= 10 * t.dead_time)) {
    c.error("timers.lifetime", "value", "lifetime must be at least 10 x deadTime (L >= 10D)");
  }

  std::optional<NetworkGraph> graph;
  try {
    graph = NetworkGraph::build(s.topology);
  } catch (const Error& e) {
    c.error("topology", std::string(to_string(e.code())), e.what());
  }

  std::set<std::string> mn_names;
  for (std::size_t i = 0; i < s.mobility.nodes.size(); ++i) {
    const auto& n = s.mobility.nodes[i];
    const auto p = Checker::at("mobility.nodes", i);
    if (!mn_names.insert(n.name).second) c.error(p + ".name", "value", "duplicate mobile node " + n.name);
    if (graph && graph->find(n.name)) c.error(p + ".name", "value", n.name + " clashes with a router name");
    bool inside = false;
    for (const auto& r : s.mobility.range) inside = inside || r.contains(n.prefix);
    if (!inside) c.error(p + ".prefix", "value", n.prefix.to_string() + " is outside the mobility range");
  }
  for (std::size_t i = 0; i < s.mobility.script.size(); ++i) {
    const auto& st = s.mobility.script[i];
    const auto p = Checker::at("mobility.script", i);
    if (!mn_names.count(st.mn)) c.error(p + ".mn", "value", "unknown mobile node " + st.mn);
    if (st.at < 0 || st.at > s.duration) c.error(p + ".at", "value", "step time outside [0, duration]");
    if (graph && (st.action == MnAction::Attach || st.action == MnAction::Move) && !graph->region_of_cell(st.cell)) {
      c.error(p + ".cell", "value", "unknown RAN cell " + st.cell);
    }
  }
  for (std::size_t i = 0; i < s.mobility.stochastic.size(); ++i) {
    const auto& st = s.mobility.stochastic[i];
    const auto p = Checker::at("mobility.stochastic", i);
    if (!mn_names.count(st.mn)) c.error(p + ".mn", "value", "unknown mobile node " + st.mn);
    if (!(st.mu > 0)) c.error(p + ".mu", "value", "mu must be positive");
    if (!(st.p >= 0 && st.p <= 1)) c.error(p + ".p", "value", "p must lie in [0, 1]");
    if (graph) {
      if (!graph->regions().count(st.start_region)) {
        c.error(p + ".startRegion", "value", "unknown region " + st.start_region);
      }
      for (const auto& [region, list] : st.adjacency) {
        if (!graph->regions().count(region)) c.error(p + ".adjacency." + region, "value", "unknown region " + region);
        for (const auto& r : list) {
          if (!graph->regions().count(r)) c.error(p + ".adjacency." + region, "value", "unknown region " + r);
        }
      }
    }
  }
  std::set<std::string> flow_ids;
  for (std::size_t i = 0; i < s.flows.size(); ++i) {
    const auto& f = s.flows[i];
    const auto p = Checker::at("flows", i);
    if (!flow_ids.insert(f.id).second) c.error(p + ".id", "value", "duplicate flow id " + f.id);
    const bool src_ok = mn_names.count(f.src) || (graph && graph->find(f.src) &&
                                                  graph->find(f.src)->role == NodeRole::Ler);
    if (!src_ok) c.error(p + ".src", "value", "flow source must be an LER or a mobile node");
    if (!mn_names.count(f.dst)) c.error(p + ".dst", "value", "flow destination must be a mobile node");
    if (!(f.rate_pps > 0)) c.error(p + ".ratePps", "value", "rate must be positive");
    if (!(f.start >= 0 && f.stop > f.start)) c.error(p + ".stop", "value", "flow needs 0 <= start < stop");
  }
  const auto& fl = s.flags;
  if (fl.overlap_seconds < 0) c.error("flags.overlapSeconds", "value", "must be non-negative");
  if (fl.registration_delay < 0) c.error("flags.registrationDelay", "value", "must be non-negative");
  if (fl.replication_seconds < 0) c.error("flags.replicationSeconds", "value", "must be non-negative");
  if (fl.queue_limit == 0) c.error("flags.queueLimit", "value", "must be at least 1");
  for (std::size_t i = 0; i < s.faults.size(); ++i) {
    const auto& f = s.faults[i];
    const auto p = Checker::at("faults", i);
    if (graph && !graph->find(f.node)) c.error(p + ".node", "value", "unknown node " + f.node);
    if (f.at < 0 || f.at > s.duration) c.error(p + ".at", "value", "fault time outside [0, duration]");
  }
  if (s.analysis.ha && graph && !graph->find(*s.analysis.ha)) {
    c.error("analysis.ha", "value", "unknown node " + *s.analysis.ha);
  }
}

}  // namespace

std::string to_jsonl(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    nlohmann::ordered_json j;
    j["path"] = d.path;
    j["code"] = d.code;
    j["message"] = d.message;
    out += j.dump() + "\n";
  }
  return out;
}

std::optional<Scenario> parse_scenario(const json& doc, std::vector<Diagnostic>& diags) {
  Checker c(diags);
  const std::size_t before = diags.size();
  Scenario s;
  if (!c.object(doc, "", {"name", "description", "duration", "topology", "timers", "mobility", "flows", "flags",
                          "faults", "analysis", "seed"})) {
    return std::nullopt;
  }
  c.str(doc, "", "name", s.name);
  c.str(doc, "", "description", s.description, false);
  c.num(doc, "", "duration", s.duration, true);
  c.uint(doc, "", "seed", s.seed);
  if (const json* topo = c.field(doc, "", "topology", true)) parse_topology(c, *topo, "topology", s.topology);
  if (const json* t = c.field(doc, "", "timers", false)) {
    if (c.object(*t, "timers", {"keepalive", "deadTime", "lifetime"})) {
      c.num(*t, "timers", "keepalive", s.timers.keepalive);
      c.num(*t, "timers", "deadTime", s.timers.dead_time);
      c.num(*t, "timers", "lifetime", s.timers.lifetime);
    }
  }
  if (const json* m = c.field(doc, "", "mobility", true)) parse_mobility(c, *m, "mobility", s.mobility);
  if (const json* flows = c.array(doc, "", "flows")) {
    for (std::size_t i = 0; i < flows->size(); ++i) {
      const auto p = Checker::at("flows", i);
      const json& f = (*flows)[i];
      if (!c.object(f, p, {"id", "src", "dst", "ratePps", "start", "stop"})) continue;
      FlowSpec spec;
      c.str(f, p, "id", spec.id);
      c.str(f, p, "src", spec.src);
      c.str(f, p, "dst", spec.dst);
      c.num(f, p, "ratePps", spec.rate_pps, true);
      c.num(f, p, "start", spec.start, true);
      c.num(f, p, "stop", spec.stop, true);
      s.flows.push_back(spec);
    }
  }
  if (const json* f = c.field(doc, "", "flags", false)) {
    if (c.object(*f, "flags", {"reflectToPreviousLer", "overlapAttach", "overlapSeconds", "registrationDelay",
                               "replicateAtLer", "replicateAtAler", "replicationSeconds", "queueLimit"})) {
      auto& fl = s.flags;
      c.boolean(*f, "flags", "reflectToPreviousLer", fl.reflect_to_previous_ler);
      c.boolean(*f, "flags", "overlapAttach", fl.overlap_attach);
      c.num(*f, "flags", "overlapSeconds", fl.overlap_seconds);
      c.num(*f, "flags", "registrationDelay", fl.registration_delay);
      c.boolean(*f, "flags", "replicateAtLer", fl.replicate_at_ler);
      c.boolean(*f, "flags", "replicateAtAler", fl.replicate_at_aler);
      c.num(*f, "flags", "replicationSeconds", fl.replication_seconds);
      c.uint(*f, "flags", "queueLimit", fl.queue_limit);
    }
  }
  if (const json* faults = c.array(doc, "", "faults")) {
    for (std::size_t i = 0; i < faults->size(); ++i) {
      const auto p = Checker::at("faults", i);
      const json& f = (*faults)[i];
      if (!c.object(f, p, {"at", "node"})) continue;
      FaultSpec spec;
      c.num(f, p, "at", spec.at, true);
      c.str(f, p, "node", spec.node);
      s.faults.push_back(spec);
    }
  }
  if (const json* a = c.field(doc, "", "analysis", false)) {
    if (c.object(*a, "analysis", {"ha"})) {
      std::string ha;
      c.str(*a, "analysis", "ha", ha, false);
      if (!ha.empty()) s.analysis.ha = ha;
    }
  }
  if (diags.size() != before) return std::nullopt;
  check_invariants(c, s);
  if (diags.size() != before) return std::nullopt;
  return s;
}

Scenario parse_scenario(const json& doc) {
  std::vector<Diagnostic> diags;
  auto s = parse_scenario(doc, diags);
  if (!s) {
    std::string msg = "invalid scenario:";
    for (const auto& d : diags) msg += "\n  " + d.path + ": " + d.message;
    throw Error(Errc::ScenarioInvalid, msg);
  }
  return std::move(*s);
}

namespace {

std::optional<json> read_json(const std::string& path, std::vector<Diagnostic>& diags) {
  std::ifstream in(path);
  if (!in) {
    diags.push_back({"$", "io", "cannot open " + path});
    return std::nullopt;
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    diags.push_back({"$", "syntax", e.what()});
    return std::nullopt;
  }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::vector<Diagnostic> diags;
  auto doc = read_json(path, diags);
  if (!doc) throw Error(Errc::ScenarioInvalid, diags.front().message);
  return parse_scenario(*doc);
}

std::vector<Diagnostic> validate_scenario_file(const std::string& path) {
  std::vector<Diagnostic> diags;
  if (auto doc = read_json(path, diags)) parse_scenario(*doc, diags);
  return diags;
}

nlohmann::ordered_json to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["duration"] = s.duration;
  j["seed"] = s.seed;
  auto& topo = j["topology"];
  topo["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : s.topology.nodes) {
    topo["nodes"].push_back({{"name", n.name},
                             {"rid", n.rid.to_string()},
                             {"role", std::string(to_string(n.role))},
                             {"area", n.area.value()}});
  }
  topo["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : s.topology.edges) {
    topo["edges"].push_back({{"a", e.a}, {"b", e.b}, {"latencyMs", e.latency_ms}});
  }
  topo["regions"] = nlohmann::ordered_json::array();
  for (const auto& r : s.topology.regions) topo["regions"].push_back({{"id", r.id}, {"ler", r.ler}, {"cells", r.cells}});
  j["timers"] = {{"keepalive", s.timers.keepalive}, {"deadTime", s.timers.dead_time}, {"lifetime", s.timers.lifetime}};
  auto& mob = j["mobility"];
  mob["range"] = nlohmann::ordered_json::array();
  for (const auto& r : s.mobility.range) mob["range"].push_back(r.to_string());
  mob["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : s.mobility.nodes) {
    mob["nodes"].push_back({{"name", n.name}, {"prefix", n.prefix.to_string()}, {"l2", n.l2_address}});
  }
  static constexpr const char* kActions[] = {"attach", "move", "detach", "reset"};
  mob["script"] = nlohmann::ordered_json::array();
  for (const auto& st : s.mobility.script) {
    nlohmann::ordered_json step{{"at", st.at}, {"mn", st.mn}, {"action", kActions[static_cast<int>(st.action)]}};
    if (!st.cell.empty()) step["cell"] = st.cell;
    mob["script"].push_back(step);
  }
  if (!s.mobility.stochastic.empty()) {
    mob["stochastic"] = nlohmann::ordered_json::array();
    for (const auto& st : s.mobility.stochastic) {
      nlohmann::ordered_json adj = nlohmann::ordered_json::object();
      for (const auto& [k, v] : st.adjacency) adj[k] = v;
      mob["stochastic"].push_back({{"mn", st.mn},
                                   {"startRegion", st.start_region},
                                   {"start", st.start},
                                   {"mu", st.mu},
                                   {"p", st.p},
                                   {"adjacency", adj}});
    }
  }
  j["flows"] = nlohmann::ordered_json::array();
  for (const auto& f : s.flows) {
    j["flows"].push_back({{"id", f.id},
                          {"src", f.src},
                          {"dst", f.dst},
                          {"ratePps", f.rate_pps},
                          {"start", f.start},
                          {"stop", f.stop}});
  }
  const auto& fl = s.flags;
  j["flags"] = {{"reflectToPreviousLer", fl.reflect_to_previous_ler},
                {"overlapAttach", fl.overlap_attach},
                {"overlapSeconds", fl.overlap_seconds},
                {"registrationDelay", fl.registration_delay},
                {"replicateAtLer", fl.replicate_at_ler},
                {"replicateAtAler", fl.replicate_at_aler},
                {"replicationSeconds", fl.replication_seconds},
                {"queueLimit", fl.queue_limit}};
  if (!s.faults.empty()) {
    j["faults"] = nlohmann::ordered_json::array();
    for (const auto& f : s.faults) j["faults"].push_back({{"at", f.at}, {"node", f.node}});
  }
  if (s.analysis.ha) j["analysis"] = {{"ha", *s.analysis.ha}};
  return j;
}

}  // namespace hmlbn
