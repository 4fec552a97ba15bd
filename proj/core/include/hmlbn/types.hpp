#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hmlbn {

/// Simulation time in seconds.
using SimTime = double;

enum class Errc {
  DisconnectedForwardingGraph,
  DisconnectedControlGraph,
  AreaWithoutAler,
  AreaWithoutAmrr,
  DuplicateRouterId,
  InvalidTopology,
  LabelSpaceExhausted,
  UnknownInterface,
  NotRegistered,
  NoRouteToOrigin,
  NoAlerAvailable,
  DecodeError,
  VertexNotFound,
  InvalidDm,
  InvalidArgument,
  ScenarioInvalid,
  UnknownNode,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Router-ID: a 32-bit value rendered as dotted-quad text.
class RouterId {
 public:
  constexpr RouterId() = default;
  constexpr explicit RouterId(std::uint32_t value) : value_(value) {}

  /// Parses "a.b.c.d"; throws Error(InvalidArgument) on malformed text.
  static RouterId parse(std::string_view text);

  constexpr std::uint32_t value() const noexcept { return value_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(RouterId, RouterId) = default;

 private:
  std::uint32_t value_ = 0;
};

/// Mobility Area identifier. Zero is the start-up/unknown value.
class AreaId {
 public:
  constexpr AreaId() = default;
  constexpr explicit AreaId(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const noexcept { return value_; }
  constexpr bool is_unknown() const noexcept { return value_ == 0; }

  friend constexpr auto operator<=>(AreaId, AreaId) = default;

 private:
  std::uint32_t value_ = 0;
};

inline constexpr AreaId kStartupArea{0};

/// 20-bit MPLS label value. Values 0-15 are reserved and never allocated.
class Label {
 public:
  static constexpr std::uint32_t kFirstUnreserved = 16;
  static constexpr std::uint32_t kMax = (1u << 20) - 1;

  constexpr Label() = default;
  constexpr explicit Label(std::uint32_t value) : value_(value) {}

  constexpr std::uint32_t value() const noexcept { return value_; }

  friend constexpr auto operator<=>(Label, Label) = default;

 private:
  std::uint32_t value_ = 0;
};

using MobilityLabel = Label;
using InfraLabel = Label;

/// Monotonic per-node label allocator: 16, 17, ... up to 2^20 - 1.
class LabelAllocator {
 public:
  LabelAllocator() = default;
  explicit LabelAllocator(std::uint32_t next) : next_(next) {}

  Label allocate();
  std::uint32_t peek() const noexcept { return next_; }
  bool exhausted() const noexcept { return next_ > Label::kMax; }

 private:
  std::uint32_t next_ = Label::kFirstUnreserved;
};

enum class NodeRole { Ler, Aler, Amrr, Lsr };

std::string_view to_string(NodeRole role);
std::optional<NodeRole> parse_role(std::string_view text);

}  // namespace hmlbn

template <>
struct std::hash<hmlbn::RouterId> {
  std::size_t operator()(hmlbn::RouterId id) const noexcept { return std::hash<std::uint32_t>{}(id.value()); }
};
