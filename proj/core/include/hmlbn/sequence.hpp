#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hmlbn/trace.hpp"

namespace hmlbn {

/// One expected control message. `src`/`dst` accept a node name, a role
/// ("LER", "ALER", "AMRR") or "*".
struct ControlStep {
  std::string kind;
  std::optional<std::string> type;
  std::string src = "*";
  std::string dst = "*";
};

/// Expected control sequence (in order, gaps allowed) and data-path phases.
struct SequencePattern {
  std::string name;
  std::optional<std::string> flow;
  std::vector<ControlStep> control;
  std::vector<std::string> data_phases;  // ALER paths such as "ALER3>ALER1"
};

struct SequenceResult {
  bool pass = false;
  std::string diagnostic;
};

SequencePattern parse_pattern(const nlohmann::json& doc);
SequencePattern load_pattern(const std::string& path);

SequenceResult check_sequence(const Trace& trace, const SequencePattern& pattern);

/// Distinct ALER paths of delivered originals, ordered by packet sequence,
/// with consecutive repeats collapsed.
std::vector<std::string> data_phases(const Trace& trace, const std::optional<std::string>& flow);

}  // namespace hmlbn
