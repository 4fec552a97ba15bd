#include <gtest/gtest.h>

#include "hmlbn/ler.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using hmlbn::test::error_code;

namespace {

class LerTest : public ::testing::Test {
 protected:
  LerTest() : ler(net.rid("LER12"), net.ctx(), config()) {}

  static LerConfig config() {
    LerConfig c;
    c.mobility_range = {MobilePrefix::parse("10.0.0.0/8")};
    c.queue_limit = 3;
    return c;
  }

  DataPacket packet(std::uint64_t seq = 0) {
    DataPacket p;
    p.id = seq;
    p.seq = seq;
    p.dst = mn;
    return p;
  }

  MobilityBinding remote() const {
    MobilityBinding b;
    b.prefix = mn;
    b.origin = net.rid("ALER1");
    b.label = Label(40);
    b.area = AreaId{1};
    return b;
  }

  hmlbn::test::Network net;
  Ler ler;
  MobilePrefix mn = MobilePrefix::parse("10.1.1.1/32");
  Outbox out;
};

}  // namespace

TEST_F(LerTest, RegistrationSendsInternalUpdateToAreaAmrr) {
  const auto res = ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.1, out);
  EXPECT_EQ(res.reply_area, AreaId{1});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MessageKind::BindingUpdate);
  EXPECT_EQ(out[0].dst, net.rid("AMRR1"));
  const auto& b = out[0].binding();
  EXPECT_EQ(b.origin, net.rid("LER12"));
  EXPECT_EQ(b.label, res.record.label);
  EXPECT_EQ(b.type, UpdateType::Internal);
  EXPECT_EQ(b.area, AreaId{1});
}

TEST_F(LerTest, RegistrationCarriesTheMobilesArea) {
  ler.handle_registration(mn, "aa", "MR12/c1", AreaId{2}, 0.1, out);
  EXPECT_EQ(out.at(0).binding().area, AreaId{2});
}

TEST_F(LerTest, RegistrationChecks) {
  EXPECT_EQ(error_code([&] { ler.handle_registration(mn, "aa", "MR13/c1", kStartupArea, 0, out); }),
            Errc::UnknownInterface);
  EXPECT_EQ(error_code([&] {
              ler.handle_registration(MobilePrefix::parse("192.0.2.1/32"), "aa", "MR12/c1", kStartupArea, 0, out);
            }),
            Errc::InvalidArgument);
  EXPECT_EQ(error_code([&] { ler.track_local_handoff(mn, "MR12/c2", 0); }), Errc::NotRegistered);
  ler.set_next_label(Label::kMax + 1);
  EXPECT_EQ(error_code([&] { ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0, out); }),
            Errc::LabelSpaceExhausted);
}

TEST_F(LerTest, LocalHandoffIsSilent) {
  ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.1, out);
  out.clear();
  const auto& rec = ler.track_local_handoff(mn, "MR12/c2", 1.0);
  EXPECT_EQ(rec.interface_id, "MR12/c2");
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(error_code([&] { ler.track_local_handoff(mn, "MR13/c1", 1.0); }), Errc::UnknownInterface);
}

TEST_F(LerTest, MissQueuesAndAsksOnce) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto p = packet(i);
    EXPECT_EQ(ler.ingress_forward(p, 1.0, out).kind, Disposition::Kind::Queued);
  }
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MessageKind::BindingRequest);
  EXPECT_EQ(out[0].dst, net.rid("AMRR1"));
  auto extra = packet(3);
  auto d = ler.ingress_forward(extra, 1.0, out);
  EXPECT_EQ(d.kind, Disposition::Kind::Drop);
  EXPECT_EQ(d.reason, DropReason::QueueOverflow);
  EXPECT_EQ(ler.pending(mn), 3u);
}

TEST_F(LerTest, PositiveReplyReleasesInOrder) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    auto p = packet(i);
    ler.ingress_forward(p, 1.0, out);
  }
  auto reply = make_message(MessageKind::BindingReplyPositive, net.rid("AMRR1"), net.rid("LER12"), 1.01, remote());
  auto res = ler.handle_control(reply, 1.01);
  ASSERT_EQ(res.release.size(), 3u);
  for (std::uint64_t i = 0; i < 3; ++i) EXPECT_EQ(res.release[i].seq, i);
  EXPECT_EQ(ler.pending(mn), 0u);

  auto p = packet(9);
  auto d = ler.ingress_forward(p, 1.02, out);
  ASSERT_EQ(d.kind, Disposition::Kind::Forward);
  ASSERT_EQ(p.stack.depth(), 2u);
  EXPECT_EQ(p.stack.entries()[1].label, Label(40));
  const auto hop = *net.lsps.toward(net.rid("LER12"), net.rid("ALER1"));
  EXPECT_EQ(p.stack.top().label, hop.out_label);
  EXPECT_EQ(d.next_hop, hop.next_hop);
}

TEST_F(LerTest, NegativeReplyDropsQueued) {
  auto p = packet();
  ler.ingress_forward(p, 1.0, out);
  auto neg = make_message(MessageKind::BindingReplyNegative, net.rid("AMRR1"), net.rid("LER12"), 1.01,
                          NegativePayload{mn});
  auto res = ler.handle_control(neg, 1.01);
  EXPECT_EQ(res.dropped.size(), 1u);
  EXPECT_EQ(res.reason, DropReason::NoBinding);
}

TEST_F(LerTest, OutOfRangeDestinationIsDropped) {
  auto p = packet();
  p.dst = MobilePrefix::parse("192.0.2.1/32");
  EXPECT_EQ(ler.ingress_forward(p, 1.0, out).reason, DropReason::OutsideMobilityRange);
  EXPECT_TRUE(out.empty());
}

TEST_F(LerTest, EgressUsesTheMobilityLabel) {
  const auto res = ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.1, out);
  auto p = packet();
  p.stack.push(res.record.label, LabelTag::Mobility);
  auto d = ler.egress_deliver(p, 1.0);
  ASSERT_EQ(d.kind, Disposition::Kind::Deliver);
  EXPECT_EQ(d.interfaces, std::vector<std::string>{"MR12/c1"});
  auto stale = packet();
  stale.stack.push(Label(999), LabelTag::Mobility);
  EXPECT_EQ(ler.egress_deliver(stale, 1.0).reason, DropReason::UnknownMobilityLabel);
}

TEST_F(LerTest, DeadRegistrationIsWithdrawnAfterDeadTime) {
  ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.0, out);
  out.clear();
  ler.keepalive(mn, 3.0);
  ler.scan_dead_registrations(12.0, out);
  EXPECT_TRUE(out.empty());
  ler.scan_dead_registrations(12.5, out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MessageKind::BindingWithdrawal);
  EXPECT_EQ(std::get<WithdrawalPayload>(out[0].payload).origin, net.rid("LER12"));
  EXPECT_EQ(ler.registration(mn), nullptr);
}

TEST_F(LerTest, SupersededRegistrationDiesQuietly) {
  ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.0, out);
  out.clear();
  auto elsewhere = make_message(MessageKind::BindingUpdate, net.rid("AMRR1"), net.rid("LER12"), 1.0, remote());
  ler.handle_control(elsewhere, 1.0);
  ler.scan_dead_registrations(20.0, out);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(ler.registration(mn), nullptr);
}

TEST_F(LerTest, OwnBindingDeliversLocally) {
  ler.handle_registration(mn, "aa", "MR12/c1", kStartupArea, 0.0, out);
  MobilityBinding own = remote();
  own.origin = net.rid("LER12");
  ler.handle_control(make_message(MessageKind::BindingReplyPositive, net.rid("AMRR1"), net.rid("LER12"), 1, own), 1);
  auto p = packet();
  auto d = ler.ingress_forward(p, 1.0, out);
  EXPECT_EQ(d.kind, Disposition::Kind::Deliver);
  EXPECT_TRUE(p.stack.empty());
}
