#include "hmlbn/sequence.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "hmlbn/messages.hpp"

namespace hmlbn {

namespace {

bool endpoint_matches(const std::string& want, const std::string& name, const nlohmann::ordered_json& role) {
  return want == "*" || want == name || (role.is_string() && role.get<std::string>() == want);
}

bool step_matches(const ControlStep& s, const TraceEvent& ev) {
  const auto& d = ev.detail;
  if (d.value("msg", "") != s.kind) return false;
  if (s.type && d.value("type", "") != *s.type) return false;
  return endpoint_matches(s.src, ev.src, d.value("srcRole", nlohmann::ordered_json())) &&
         endpoint_matches(s.dst, ev.dst, d.value("dstRole", nlohmann::ordered_json()));
}

std::string describe(const ControlStep& s) {
  std::string out = s.kind;
  if (s.type) out += "(" + *s.type + ")";
  return out + " " + s.src + "->" + s.dst;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return "[" + out + "]";
}

}  // namespace

SequencePattern parse_pattern(const nlohmann::json& doc) {
  try {
    SequencePattern p;
    p.name = doc.value("name", "");
    if (doc.contains("flow")) p.flow = doc.at("flow").get<std::string>();
    for (const auto& c : doc.value("control", nlohmann::json::array())) {
      ControlStep s;
      s.kind = c.at("kind").get<std::string>();
      if (!parse_message_kind(s.kind)) throw Error(Errc::InvalidArgument, "unknown message kind " + s.kind);
      if (c.contains("type")) s.type = c.at("type").get<std::string>();
      s.src = c.value("src", "*");
      s.dst = c.value("dst", "*");
      p.control.push_back(std::move(s));
    }
    for (const auto& d : doc.value("dataPhases", nlohmann::json::array())) p.data_phases.push_back(d.get<std::string>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("bad pattern: ") + e.what());
  }
}

SequencePattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot read " + path);
  try {
    return parse_pattern(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidArgument, path + ": " + e.what());
  }
}

std::vector<std::string> data_phases(const Trace& trace, const std::optional<std::string>& flow) {
  std::map<std::uint64_t, std::string> by_seq;
  for (const auto& ev : trace.events()) {
    if (ev.kind != "deliver" || ev.detail.value("replica", false)) continue;
    if (flow && ev.detail.value("flow", "") != *flow) continue;
    by_seq.emplace(ev.detail.at("pkt").get<std::uint64_t>(), ev.detail.value("alerPath", ""));
  }
  std::vector<std::string> phases;
  for (const auto& [seq, path] : by_seq) {
    if (phases.empty() || phases.back() != path) phases.push_back(path);
  }
  return phases;
}

SequenceResult check_sequence(const Trace& trace, const SequencePattern& pattern) {
  std::size_t next = 0;
  for (const auto& ev : trace.events()) {
    if (next == pattern.control.size()) break;
    if (ev.kind == "ctrl_send" && step_matches(pattern.control[next], ev)) ++next;
  }
  if (next < pattern.control.size()) {
    return {false, "control step " + std::to_string(next + 1) + " not found: " + describe(pattern.control[next])};
  }
  if (!pattern.data_phases.empty()) {
    const auto seen = data_phases(trace, pattern.flow);
    std::size_t i = 0;
    for (const auto& phase : seen) {
      if (i < pattern.data_phases.size() && phase == pattern.data_phases[i]) ++i;
    }
    if (i < pattern.data_phases.size()) {
      return {false, "data phase " + pattern.data_phases[i] + " missing; observed " + join(seen)};
    }
  }
  return {true, pattern.name + ": " + std::to_string(pattern.control.size()) + " control steps, " +
                    std::to_string(pattern.data_phases.size()) + " data phases matched"};
}

}  // namespace hmlbn
