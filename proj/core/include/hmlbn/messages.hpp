#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hmlbn/prefix.hpp"
#include "hmlbn/types.hpp"

namespace hmlbn {

enum class UpdateMode : std::uint8_t { SelectiveDownstreamPush = 1, UnsolicitedDownstreamPush = 2 };
enum class UpdateType : std::uint8_t { Internal = 1, External = 2, InterCarrier = 3 };

std::string_view to_string(UpdateMode mode);
std::string_view to_string(UpdateType type);

struct MobilityBinding {
  MobilePrefix prefix;
  RouterId origin;  // origin next hop: an LER or ALER
  MobilityLabel label;
  AreaId area;
  UpdateMode mode = UpdateMode::UnsolicitedDownstreamPush;
  UpdateType type = UpdateType::Internal;
  double lifetime = 300.0;

  friend bool operator==(const MobilityBinding&, const MobilityBinding&) = default;
};

enum class MessageKind : std::uint8_t {
  BindingUpdate = 1,
  BindingWithdrawal,
  BindingRequest,
  BindingReplyPositive,
  BindingReplyNegative,
  LrlRequest,
  LrlReply,
  AlerFailoverBlanket,
};

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_message_kind(std::string_view text);

struct WithdrawalPayload {
  MobilePrefix prefix;
  RouterId origin;
  friend bool operator==(const WithdrawalPayload&, const WithdrawalPayload&) = default;
};

/// Requestor identity: LERs send their own area and RouterId; AMRRs forwarding
/// on behalf of a client send their own area and RouterId as well.
struct RequestPayload {
  MobilePrefix prefix;
  AreaId requestor_area;
  RouterId requestor;
  friend bool operator==(const RequestPayload&, const RequestPayload&) = default;
};

struct NegativePayload {
  MobilePrefix prefix;
  friend bool operator==(const NegativePayload&, const NegativePayload&) = default;
};

struct LrlRequestPayload {
  MobilePrefix prefix;
  AreaId requestor_area;
  friend bool operator==(const LrlRequestPayload&, const LrlRequestPayload&) = default;
};

struct LrlReplyPayload {
  MobilePrefix prefix;
  std::vector<AreaId> areas;
  friend bool operator==(const LrlReplyPayload&, const LrlReplyPayload&) = default;
};

/// Surviving ALER of `area`; every other ALER of that area is to be replaced by it.
struct BlanketPayload {
  RouterId surviving;
  AreaId area;
  friend bool operator==(const BlanketPayload&, const BlanketPayload&) = default;
};

using Payload = std::variant<MobilityBinding, WithdrawalPayload, RequestPayload, NegativePayload, LrlRequestPayload,
                             LrlReplyPayload, BlanketPayload>;

struct ControlMessage {
  MessageKind kind = MessageKind::BindingUpdate;
  RouterId src;
  RouterId dst;
  SimTime send_time = 0.0;
  Payload payload;

  /// Prefix the message concerns, or nullptr for blanket updates.
  const MobilePrefix* prefix() const;
  const MobilityBinding& binding() const { return std::get<MobilityBinding>(payload); }

  friend bool operator==(const ControlMessage&, const ControlMessage&) = default;
};

/// Checks that `kind` and the payload alternative agree.
bool well_formed(const ControlMessage& msg);

std::vector<std::uint8_t> canonical_encode(const ControlMessage& msg);
/// Throws Error(DecodeError) on truncation, trailing bytes or invalid values.
ControlMessage canonical_decode(std::span<const std::uint8_t> bytes);
std::string to_hex(std::span<const std::uint8_t> bytes);

ControlMessage make_withdrawal(const MobilityBinding& binding, RouterId src = {}, RouterId dst = {},
                               SimTime at = 0.0);

ControlMessage make_message(MessageKind kind, RouterId src, RouterId dst, SimTime at, Payload payload);

/// eLRL (areas) and iLRL (LER RouterIds) of one binding.
struct LastRequestorList {
  std::set<AreaId> external;
  std::set<RouterId> internal;

  friend bool operator==(const LastRequestorList&, const LastRequestorList&) = default;
};

}  // namespace hmlbn
