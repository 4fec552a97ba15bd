#include "hmlbn/types.hpp"

#include <charconv>

namespace hmlbn {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DisconnectedForwardingGraph: return "DisconnectedForwardingGraph";
    case Errc::DisconnectedControlGraph: return "DisconnectedControlGraph";
    case Errc::AreaWithoutAler: return "AreaWithoutAler";
    case Errc::AreaWithoutAmrr: return "AreaWithoutAmrr";
    case Errc::DuplicateRouterId: return "DuplicateRouterId";
    case Errc::InvalidTopology: return "InvalidTopology";
    case Errc::LabelSpaceExhausted: return "LabelSpaceExhausted";
    case Errc::UnknownInterface: return "UnknownInterface";
    case Errc::NotRegistered: return "NotRegistered";
    case Errc::NoRouteToOrigin: return "NoRouteToOrigin";
    case Errc::NoAlerAvailable: return "NoAlerAvailable";
    case Errc::DecodeError: return "DecodeError";
    case Errc::VertexNotFound: return "VertexNotFound";
    case Errc::InvalidDm: return "InvalidDm";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ScenarioInvalid: return "ScenarioInvalid";
    case Errc::UnknownNode: return "UnknownNode";
  }
  return "Unknown";
}

RouterId RouterId::parse(std::string_view text) {
  std::uint32_t value = 0;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int octet = 0; octet < 4; ++octet) {
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc{} || next == p || part > 255) {
      throw Error(Errc::InvalidArgument, "malformed router id '" + std::string(text) + "'");
    }
    value = (value << 8) | part;
    p = next;
    if (octet < 3) {
      if (p == end || *p != '.') {
        throw Error(Errc::InvalidArgument, "malformed router id '" + std::string(text) + "'");
      }
      ++p;
    }
  }
  if (p != end) {
    throw Error(Errc::InvalidArgument, "malformed router id '" + std::string(text) + "'");
  }
  return RouterId(value);
}

std::string RouterId::to_string() const {
  return std::to_string(value_ >> 24) + '.' + std::to_string((value_ >> 16) & 0xff) + '.' +
         std::to_string((value_ >> 8) & 0xff) + '.' + std::to_string(value_ & 0xff);
}

Label LabelAllocator::allocate() {
  if (exhausted()) {
    throw Error(Errc::LabelSpaceExhausted, "20-bit label space exhausted");
  }
  return Label(next_++);
}

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Ler: return "LER";
    case NodeRole::Aler: return "ALER";
    case NodeRole::Amrr: return "AMRR";
    case NodeRole::Lsr: return "LSR";
  }
  return "?";
}

std::optional<NodeRole> parse_role(std::string_view text) {
  if (text == "LER") return NodeRole::Ler;
  if (text == "ALER") return NodeRole::Aler;
  if (text == "AMRR") return NodeRole::Amrr;
  if (text == "LSR") return NodeRole::Lsr;
  return std::nullopt;
}

}  // namespace hmlbn
