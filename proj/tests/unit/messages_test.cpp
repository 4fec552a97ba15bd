#include <gtest/gtest.h>

#include <random>

#include "hmlbn/messages.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using hmlbn::test::error_code;

namespace {

MobilePrefix host(const char* text) { return MobilePrefix::parse(text); }

ControlMessage random_message(std::mt19937_64& rng) {
  auto u32 = [&] { return static_cast<std::uint32_t>(rng()); };
  auto prefix = [&] {
    std::array<std::uint8_t, 16> b{};
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
    const bool v6 = rng() & 1;
    return MobilePrefix(v6 ? AddressFamily::V6 : AddressFamily::V4, b,
                        static_cast<std::uint8_t>(rng() % (v6 ? 129 : 33)));
  };
  const auto kind = static_cast<MessageKind>(1 + rng() % 8);
  Payload p;
  switch (kind) {
    case MessageKind::BindingUpdate:
    case MessageKind::BindingReplyPositive: {
      MobilityBinding b;
      b.prefix = prefix();
      b.origin = RouterId(u32());
      b.label = Label(16 + u32() % (Label::kMax - 15));
      b.area = AreaId(u32() % 100);
      b.mode = rng() & 1 ? UpdateMode::SelectiveDownstreamPush : UpdateMode::UnsolicitedDownstreamPush;
      b.type = static_cast<UpdateType>(1 + rng() % 3);
      b.lifetime = 1.0 + static_cast<double>(rng() % 1000);
      p = b;
      break;
    }
    case MessageKind::BindingWithdrawal: p = WithdrawalPayload{prefix(), RouterId(u32())}; break;
    case MessageKind::BindingRequest: p = RequestPayload{prefix(), AreaId(u32()), RouterId(u32())}; break;
    case MessageKind::BindingReplyNegative: p = NegativePayload{prefix()}; break;
    case MessageKind::LrlRequest: p = LrlRequestPayload{prefix(), AreaId(u32())}; break;
    case MessageKind::LrlReply: {
      LrlReplyPayload r{prefix(), {}};
      for (auto n = rng() % 5; n > 0; --n) r.areas.push_back(AreaId(u32() % 50));
      p = r;
      break;
    }
    case MessageKind::AlerFailoverBlanket: p = BlanketPayload{RouterId(u32()), AreaId(u32())}; break;
  }
  return make_message(kind, RouterId(u32()), RouterId(u32()), static_cast<double>(rng() % 100000) / 1000.0, p);
}

}  // namespace

TEST(Messages, WithdrawalWireLayout) {
  MobilityBinding b;
  b.prefix = host("10.1.1.1/32");
  b.origin = RouterId::parse("20.1.1.12");
  const auto msg = make_withdrawal(b, RouterId::parse("20.1.1.12"), RouterId::parse("20.1.2.1"), 0.0);
  const std::vector<std::uint8_t> expected = {
      'H', 'M', 1, 2,                // magic, version, kind
      20, 1, 1, 12, 20, 1, 2, 1,     // src, dst
      0, 0, 0, 0, 0, 0, 0, 0,        // send time 0.0
      0, 0, 0, 10,                   // payload length
      4, 32, 10, 1, 1, 1,            // prefix
      20, 1, 1, 12};                 // origin
  EXPECT_EQ(canonical_encode(msg), expected);
}

TEST(Messages, RoundTripProperty) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const auto msg = random_message(rng);
    const auto bytes = canonical_encode(msg);
    EXPECT_EQ(canonical_decode(bytes), msg);
    EXPECT_EQ(canonical_encode(canonical_decode(bytes)), bytes);
  }
}

TEST(Messages, EveryTruncationIsRejected) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto bytes = canonical_encode(random_message(rng));
    for (std::size_t n = 0; n < bytes.size(); ++n) {
      EXPECT_EQ(error_code([&] { canonical_decode(std::span(bytes.data(), n)); }), Errc::DecodeError);
    }
    auto longer = bytes;
    longer.push_back(0);
    EXPECT_EQ(error_code([&] { canonical_decode(longer); }), Errc::DecodeError);
  }
}

TEST(Messages, BadFieldsAreRejected) {
  MobilityBinding b;
  b.prefix = host("10.1.1.1/32");
  b.origin = RouterId(1);
  b.label = Label(16);
  const auto good = canonical_encode(make_message(MessageKind::BindingUpdate, RouterId(1), RouterId(2), 0, b));

  auto kind = good;
  kind[3] = 9;
  EXPECT_EQ(error_code([&] { canonical_decode(kind); }), Errc::DecodeError);
  auto magic = good;
  magic[0] = 'X';
  EXPECT_EQ(error_code([&] { canonical_decode(magic); }), Errc::DecodeError);
  auto family = good;
  family[24] = 5;
  EXPECT_EQ(error_code([&] { canonical_decode(family); }), Errc::DecodeError);
  auto hostbits = good;
  hostbits[25] = 24;  // /24 with a non-zero last octet
  EXPECT_EQ(error_code([&] { canonical_decode(hostbits); }), Errc::DecodeError);
  auto mode = good;
  mode[24 + 6 + 12] = 7;
  EXPECT_EQ(error_code([&] { canonical_decode(mode); }), Errc::DecodeError);
}

TEST(Messages, KindMustMatchPayload) {
  EXPECT_EQ(error_code([] {
              make_message(MessageKind::BindingUpdate, RouterId(1), RouterId(2), 0, NegativePayload{});
            }),
            Errc::InvalidArgument);
  for (int k = 1; k <= 8; ++k) {
    const auto kind = static_cast<MessageKind>(k);
    EXPECT_EQ(parse_message_kind(to_string(kind)), kind);
  }
}
