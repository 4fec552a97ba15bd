#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hmlbn/types.hpp"

namespace hmlbn {

struct TraceEvent {
  SimTime t = 0.0;
  std::uint64_t seq = 0;
  std::string kind;
  std::string src;
  std::string dst;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
};

/// In-memory event log rendered as JSONL: {t, seq, kind, src, dst, detail}.
class Trace {
 public:
  void add(TraceEvent ev);
  const std::vector<TraceEvent>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }

  void write_jsonl(std::ostream& os) const;
  std::string to_jsonl() const;
  static Trace parse_jsonl(std::istream& is);
  static Trace load(const std::string& path);

 private:
  std::vector<TraceEvent> events_;
};

std::string to_json_line(const TraceEvent& ev);

}  // namespace hmlbn
