#include "hmlbn/trace.hpp"

#include <fstream>
#include <sstream>

namespace hmlbn {

void Trace::add(TraceEvent ev) {
  ev.seq = events_.size();
  events_.push_back(std::move(ev));
}

std::string to_json_line(const TraceEvent& ev) {
  nlohmann::ordered_json j;
  j["t"] = ev.t;
  j["seq"] = ev.seq;
  j["kind"] = ev.kind;
  j["src"] = ev.src;
  j["dst"] = ev.dst;
  j["detail"] = ev.detail;
  return j.dump();
}

void Trace::write_jsonl(std::ostream& os) const {
  for (const auto& ev : events_) os << to_json_line(ev) << '\n';
}

std::string Trace::to_jsonl() const {
  std::ostringstream os;
  write_jsonl(os);
  return os.str();
}

Trace Trace::parse_jsonl(std::istream& is) {
  Trace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      TraceEvent ev;
      ev.t = j.at("t").get<double>();
      ev.seq = j.at("seq").get<std::uint64_t>();
      ev.kind = j.at("kind").get<std::string>();
      ev.src = j.at("src").get<std::string>();
      ev.dst = j.at("dst").get<std::string>();
      ev.detail = j.at("detail");
      trace.events_.push_back(std::move(ev));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidArgument, "trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trace;
}

Trace Trace::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open trace " + path);
  return parse_jsonl(in);
}

}  // namespace hmlbn
