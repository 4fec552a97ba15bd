#include "hmlbn/messages.hpp"

#include <bit>
#include <cstring>

namespace hmlbn {

std::string_view to_string(UpdateMode mode) {
  return mode == UpdateMode::SelectiveDownstreamPush ? "SelectiveDownstreamPush" : "UnsolicitedDownstreamPush";
}

std::string_view to_string(UpdateType type) {
  switch (type) {
    case UpdateType::Internal: return "Internal";
    case UpdateType::External: return "External";
    case UpdateType::InterCarrier: return "InterCarrier";
  }
  return "?";
}

namespace {

constexpr std::string_view kKindNames[] = {"BindingUpdate",        "BindingWithdrawal",    "BindingRequest",
                                           "BindingReplyPositive", "BindingReplyNegative", "LrlRequest",
                                           "LrlReply",             "AlerFailoverBlanket"};

constexpr std::uint8_t kMagic0 = 'H';
constexpr std::uint8_t kMagic1 = 'M';
constexpr std::uint8_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) u8(static_cast<std::uint8_t>(v >> s));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void prefix(const MobilePrefix& p) {
    u8(static_cast<std::uint8_t>(p.family()));
    u8(p.length());
    for (std::size_t i = 0; i < p.address_size(); ++i) u8(p.bytes()[i]);
  }
  std::vector<std::uint8_t>& bytes() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    std::uint16_t hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | u8();
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  MobilePrefix prefix() {
    const std::uint8_t fam = u8();
    if (fam != 4 && fam != 6) bad("address family");
    const auto family = static_cast<AddressFamily>(fam);
    const std::uint8_t len = u8();
    std::array<std::uint8_t, 16> bytes{};
    const std::size_t n = family == AddressFamily::V4 ? 4 : 16;
    if (len > n * 8) bad("prefix length");
    for (std::size_t i = 0; i < n; ++i) bytes[i] = u8();
    MobilePrefix p(family, bytes, len);
    if (p.bytes() != bytes) bad("host bits set beyond prefix length");
    return p;
  }
  void expect_end() const {
    if (pos_ != in_.size()) bad("trailing bytes");
  }
  std::size_t remaining() const { return in_.size() - pos_; }

  [[noreturn]] static void bad(const std::string& what) { throw Error(Errc::DecodeError, "decode: " + what); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) bad("truncated");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void encode_payload(Writer& w, const Payload& payload) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MobilityBinding>) {
          w.prefix(p.prefix);
          w.u32(p.origin.value());
          w.u32(p.label.value());
          w.u32(p.area.value());
          w.u8(static_cast<std::uint8_t>(p.mode));
          w.u8(static_cast<std::uint8_t>(p.type));
          w.f64(p.lifetime);
        } else if constexpr (std::is_same_v<T, WithdrawalPayload>) {
          w.prefix(p.prefix);
          w.u32(p.origin.value());
        } else if constexpr (std::is_same_v<T, RequestPayload>) {
          w.prefix(p.prefix);
          w.u32(p.requestor_area.value());
          w.u32(p.requestor.value());
        } else if constexpr (std::is_same_v<T, NegativePayload>) {
          w.prefix(p.prefix);
        } else if constexpr (std::is_same_v<T, LrlRequestPayload>) {
          w.prefix(p.prefix);
          w.u32(p.requestor_area.value());
        } else if constexpr (std::is_same_v<T, LrlReplyPayload>) {
          w.prefix(p.prefix);
          w.u16(static_cast<std::uint16_t>(p.areas.size()));
          for (AreaId a : p.areas) w.u32(a.value());
        } else if constexpr (std::is_same_v<T, BlanketPayload>) {
          w.u32(p.surviving.value());
          w.u32(p.area.value());
        }
      },
      payload);
}

Payload decode_payload(Reader& r, MessageKind kind) {
  switch (kind) {
    case MessageKind::BindingUpdate:
    case MessageKind::BindingReplyPositive: {
      MobilityBinding b;
      b.prefix = r.prefix();
      b.origin = RouterId(r.u32());
      b.label = MobilityLabel(r.u32());
      if (b.label.value() > Label::kMax) Reader::bad("label exceeds 20 bits");
      b.area = AreaId(r.u32());
      const std::uint8_t mode = r.u8();
      if (mode < 1 || mode > 2) Reader::bad("update mode");
      b.mode = static_cast<UpdateMode>(mode);
      const std::uint8_t type = r.u8();
      if (type < 1 || type > 3) Reader::bad("update type");
      b.type = static_cast<UpdateType>(type);
      b.lifetime = r.f64();
      if (!(b.lifetime > 0.0)) Reader::bad("lifetime");
      return b;
    }
    case MessageKind::BindingWithdrawal: {
      WithdrawalPayload p;
      p.prefix = r.prefix();
      p.origin = RouterId(r.u32());
      return p;
    }
    case MessageKind::BindingRequest: {
      RequestPayload p;
      p.prefix = r.prefix();
      p.requestor_area = AreaId(r.u32());
      p.requestor = RouterId(r.u32());
      return p;
    }
    case MessageKind::BindingReplyNegative: return NegativePayload{r.prefix()};
    case MessageKind::LrlRequest: {
      LrlRequestPayload p;
      p.prefix = r.prefix();
      p.requestor_area = AreaId(r.u32());
      return p;
    }
    case MessageKind::LrlReply: {
      LrlReplyPayload p;
      p.prefix = r.prefix();
      const std::uint16_t n = r.u16();
      for (std::uint16_t i = 0; i < n; ++i) p.areas.emplace_back(r.u32());
      return p;
    }
    case MessageKind::AlerFailoverBlanket: {
      BlanketPayload p;
      p.surviving = RouterId(r.u32());
      p.area = AreaId(r.u32());
      return p;
    }
  }
  Reader::bad("message kind");
}

}  // namespace

std::string_view to_string(MessageKind kind) {
  const auto i = static_cast<std::size_t>(kind) - 1;
  return i < std::size(kKindNames) ? kKindNames[i] : "?";
}

std::optional<MessageKind> parse_message_kind(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i) {
    if (kKindNames[i] == text) return static_cast<MessageKind>(i + 1);
  }
  return std::nullopt;
}

const MobilePrefix* ControlMessage::prefix() const {
  return std::visit(
      [](const auto& p) -> const MobilePrefix* {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, BlanketPayload>) {
          return nullptr;
        } else {
          return &p.prefix;
        }
      },
      payload);
}

bool well_formed(const ControlMessage& msg) {
  switch (msg.kind) {
    case MessageKind::BindingUpdate:
    case MessageKind::BindingReplyPositive: return std::holds_alternative<MobilityBinding>(msg.payload);
    case MessageKind::BindingWithdrawal: return std::holds_alternative<WithdrawalPayload>(msg.payload);
    case MessageKind::BindingRequest: return std::holds_alternative<RequestPayload>(msg.payload);
    case MessageKind::BindingReplyNegative: return std::holds_alternative<NegativePayload>(msg.payload);
    case MessageKind::LrlRequest: return std::holds_alternative<LrlRequestPayload>(msg.payload);
    case MessageKind::LrlReply: return std::holds_alternative<LrlReplyPayload>(msg.payload);
    case MessageKind::AlerFailoverBlanket: return std::holds_alternative<BlanketPayload>(msg.payload);
  }
  return false;
}

std::vector<std::uint8_t> canonical_encode(const ControlMessage& msg) {
  if (!well_formed(msg)) throw Error(Errc::InvalidArgument, "message kind does not match payload");
  Writer body;
  encode_payload(body, msg.payload);
  Writer w;
  w.u8(kMagic0);
  w.u8(kMagic1);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(msg.kind));
  w.u32(msg.src.value());
  w.u32(msg.dst.value());
  w.f64(msg.send_time);
  w.u32(static_cast<std::uint32_t>(body.bytes().size()));
  auto out = std::move(w.bytes());
  out.insert(out.end(), body.bytes().begin(), body.bytes().end());
  return out;
}

ControlMessage canonical_decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.u8() != kMagic0 || r.u8() != kMagic1) Reader::bad("magic");
  if (r.u8() != kVersion) Reader::bad("version");
  const std::uint8_t kind = r.u8();
  if (kind < 1 || kind > std::size(kKindNames)) Reader::bad("message kind");
  ControlMessage m;
  m.kind = static_cast<MessageKind>(kind);
  m.src = RouterId(r.u32());
  m.dst = RouterId(r.u32());
  m.send_time = r.f64();
  const std::uint32_t len = r.u32();
  if (len != r.remaining()) Reader::bad(len > r.remaining() ? "truncated" : "trailing bytes");
  m.payload = decode_payload(r, m.kind);
  r.expect_end();
  return m;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

ControlMessage make_withdrawal(const MobilityBinding& binding, RouterId src, RouterId dst, SimTime at) {
  return make_message(MessageKind::BindingWithdrawal, src, dst, at, WithdrawalPayload{binding.prefix, binding.origin});
}

ControlMessage make_message(MessageKind kind, RouterId src, RouterId dst, SimTime at, Payload payload) {
  ControlMessage m{kind, src, dst, at, std::move(payload)};
  if (!well_formed(m)) throw Error(Errc::InvalidArgument, "message kind does not match payload");
  return m;
}

}  // namespace hmlbn
