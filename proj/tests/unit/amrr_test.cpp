#include <gtest/gtest.h>

#include "hmlbn/amrr.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using hmlbn::test::error_code;

namespace {

class AmrrTest : public ::testing::Test {
 protected:
  AmrrTest()
      : amrr1(net.rid("AMRR1"), net.ctx(), AmrrConfig{}),
        amrr3(net.rid("AMRR3"), net.ctx(), AmrrConfig{}) {}

  MobilityBinding binding(const char* origin, std::uint32_t label, std::uint32_t area, UpdateType type) const {
    MobilityBinding b;
    b.prefix = mn;
    b.origin = net.rid(origin);
    b.label = Label(label);
    b.area = AreaId{area};
    b.type = type;
    return b;
  }

  Outbox deliver(Amrr& a, MessageKind kind, const char* from, Payload p, SimTime now = 1.0) {
    Outbox out;
    a.handle_control(make_message(kind, net.rid(from), a.router_id(), now, std::move(p)), now, out);
    return out;
  }

  // LER12 registers, ALER1 answers with LML 16.
  void settle_area1() {
    deliver(amrr1, MessageKind::BindingUpdate, "LER12", binding("LER12", 16, 1, UpdateType::Internal));
    deliver(amrr1, MessageKind::BindingUpdate, "ALER1", binding("ALER1", 16, 1, UpdateType::External));
  }

  std::vector<std::pair<MessageKind, RouterId>> summary(const Outbox& out) const {
    std::vector<std::pair<MessageKind, RouterId>> s;
    for (const auto& m : out) s.emplace_back(m.kind, m.dst);
    return s;
  }

  hmlbn::test::Network net;
  Amrr amrr1;
  Amrr amrr3;
  MobilePrefix mn = MobilePrefix::parse("10.1.1.1/32");
};

}  // namespace

TEST_F(AmrrTest, PeersAreOtherPrimaries) {
  EXPECT_TRUE(amrr1.primary());
  EXPECT_EQ(amrr1.peers(), (std::vector<RouterId>{net.rid("AMRR2"), net.rid("AMRR3")}));
}

TEST_F(AmrrTest, LerUpdateIsReflectedToAreaAlers) {
  auto out = deliver(amrr1, MessageKind::BindingUpdate, "LER12", binding("LER12", 16, 1, UpdateType::Internal));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].dst, net.rid("ALER1"));
  EXPECT_EQ(out[0].binding().type, UpdateType::Internal);
  EXPECT_EQ(out[0].binding().origin, net.rid("LER12"));
  EXPECT_EQ(amrr1.record(mn)->area, AreaId{1});
}

TEST_F(AmrrTest, AlerUpdateRecordsLml) {
  settle_area1();
  const auto* rec = amrr1.record(mn);
  ASSERT_NE(rec, nullptr);
  EXPECT_EQ(rec->alers, std::vector<RouterId>{net.rid("ALER1")});
  EXPECT_EQ(rec->lml.at(net.rid("ALER1")), Label(16));
}

TEST_F(AmrrTest, UnknownPrefixFansOutToPeers) {
  RequestPayload req{mn, AreaId{3}, net.rid("LER33")};
  auto out = deliver(amrr3, MessageKind::BindingRequest, "LER33", req);
  EXPECT_EQ(summary(out), (std::vector<std::pair<MessageKind, RouterId>>{
                              {MessageKind::BindingRequest, net.rid("AMRR1")},
                              {MessageKind::BindingRequest, net.rid("AMRR2")}}));
  EXPECT_EQ(std::get<RequestPayload>(out[0].payload).requestor, net.rid("AMRR3"));

  // A second LER joins the fan-out without new requests.
  EXPECT_TRUE(deliver(amrr3, MessageKind::BindingRequest, "LER32", RequestPayload{mn, AreaId{3}, net.rid("LER32")})
                  .empty());

  EXPECT_TRUE(deliver(amrr3, MessageKind::BindingReplyNegative, "AMRR2", NegativePayload{mn}).empty());
  auto last = deliver(amrr3, MessageKind::BindingReplyNegative, "AMRR1", NegativePayload{mn});
  EXPECT_EQ(summary(last), (std::vector<std::pair<MessageKind, RouterId>>{
                               {MessageKind::BindingReplyNegative, net.rid("LER33")},
                               {MessageKind::BindingReplyNegative, net.rid("LER32")}}));
}

TEST_F(AmrrTest, ServingAreaAnswersPeerAndRemembersIt) {
  settle_area1();
  auto out = deliver(amrr1, MessageKind::BindingRequest, "AMRR3", RequestPayload{mn, AreaId{3}, net.rid("AMRR3")});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MessageKind::BindingReplyPositive);
  EXPECT_EQ(out[0].binding().origin, net.rid("ALER1"));
  EXPECT_EQ(out[0].binding().type, UpdateType::External);
  EXPECT_EQ(amrr1.record(mn)->lrl.external, std::set<AreaId>{AreaId{3}});
}

TEST_F(AmrrTest, NonServingAreaAnswersNegative) {
  auto out = deliver(amrr3, MessageKind::BindingRequest, "AMRR1", RequestPayload{mn, AreaId{1}, net.rid("AMRR1")});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MessageKind::BindingReplyNegative);
}

TEST_F(AmrrTest, PositiveReplyIsReflectedThenAnswered) {
  deliver(amrr3, MessageKind::BindingRequest, "LER33", RequestPayload{mn, AreaId{3}, net.rid("LER33")});
  auto out = deliver(amrr3, MessageKind::BindingReplyPositive, "AMRR1",
                     binding("ALER1", 16, 1, UpdateType::External));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].dst, net.rid("ALER3"));
  EXPECT_EQ(out[0].binding().mode, UpdateMode::SelectiveDownstreamPush);
  auto answer = deliver(amrr3, MessageKind::BindingUpdate, "ALER3", binding("ALER3", 20, 1, UpdateType::Internal));
  ASSERT_EQ(answer.size(), 1u);
  EXPECT_EQ(answer[0].kind, MessageKind::BindingReplyPositive);
  EXPECT_EQ(answer[0].dst, net.rid("LER33"));
  EXPECT_EQ(answer[0].binding().origin, net.rid("ALER3"));
  EXPECT_EQ(answer[0].binding().label, Label(20));
  EXPECT_EQ(amrr3.record(mn)->lrl.internal, std::set<RouterId>{net.rid("LER33")});
}

TEST_F(AmrrTest, LrlRequestHandsOverAndClears) {
  settle_area1();
  deliver(amrr1, MessageKind::BindingRequest, "AMRR3", RequestPayload{mn, AreaId{3}, net.rid("AMRR3")});
  deliver(amrr1, MessageKind::BindingRequest, "AMRR2", RequestPayload{mn, AreaId{2}, net.rid("AMRR2")});
  auto out = deliver(amrr1, MessageKind::LrlRequest, "AMRR2", LrlRequestPayload{mn, AreaId{2}});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(std::get<LrlReplyPayload>(out[0].payload).areas, std::vector<AreaId>{AreaId{3}});
  EXPECT_TRUE(amrr1.record(mn)->lrl.external.empty());
}

TEST_F(AmrrTest, WithdrawalIsScopedByLrls) {
  settle_area1();
  deliver(amrr1, MessageKind::BindingRequest, "AMRR3", RequestPayload{mn, AreaId{3}, net.rid("AMRR3")});
  deliver(amrr1, MessageKind::BindingRequest, "LER11", RequestPayload{mn, AreaId{1}, net.rid("LER11")});
  auto out = deliver(amrr1, MessageKind::BindingWithdrawal, "LER12", WithdrawalPayload{mn, net.rid("LER12")});
  EXPECT_EQ(summary(out), (std::vector<std::pair<MessageKind, RouterId>>{
                              {MessageKind::BindingWithdrawal, net.rid("LER11")},
                              {MessageKind::BindingWithdrawal, net.rid("ALER1")},
                              {MessageKind::BindingWithdrawal, net.rid("AMRR3")}}));
  EXPECT_EQ(amrr1.record(mn), nullptr);
}

TEST_F(AmrrTest, StaleWithdrawalIsIgnored) {
  settle_area1();
  deliver(amrr1, MessageKind::BindingUpdate, "LER13", binding("LER13", 16, 1, UpdateType::Internal));
  auto out = deliver(amrr1, MessageKind::BindingWithdrawal, "LER12", WithdrawalPayload{mn, net.rid("LER12")});
  EXPECT_TRUE(out.empty());
  EXPECT_NE(amrr1.record(mn), nullptr);
}

TEST_F(AmrrTest, RoundRobinAndEmptyAlerSet) {
  AmrrRecord rec;
  EXPECT_EQ(error_code([&] { amrr1.select_aler(rec); }), Errc::NoAlerAvailable);
  rec.alers = {RouterId(1), RouterId(2)};
  EXPECT_EQ(amrr1.select_aler(rec), RouterId(1));
  EXPECT_EQ(amrr1.select_aler(rec), RouterId(2));
  EXPECT_EQ(amrr1.select_aler(rec), RouterId(1));
}

TEST(AmrrHa, SecondaryMirrorsButNeverSpeaks) {
  hmlbn::test::Network net(hmlbn::test::bundled("ha_failover").topology);
  Amrr primary(net.rid("AMRR1"), net.ctx(), AmrrConfig{});
  Amrr standby(net.rid("AMRR1B"), net.ctx(), AmrrConfig{});
  EXPECT_TRUE(primary.primary());
  EXPECT_FALSE(standby.primary());
  MobilityBinding b;
  b.prefix = MobilePrefix::parse("10.1.1.1/32");
  b.origin = net.rid("LER12");
  b.label = Label(16);
  b.area = AreaId{1};
  const auto msg = [&](RouterId dst) { return make_message(MessageKind::BindingUpdate, b.origin, dst, 0, b); };
  Outbox p_out, s_out;
  primary.handle_control(msg(primary.router_id()), 0, p_out);
  standby.handle_control(msg(standby.router_id()), 0, s_out);
  EXPECT_EQ(p_out.size(), 2u);  // ALER1 and ALER1B
  EXPECT_TRUE(s_out.empty());
  EXPECT_EQ(primary.record(b.prefix)->binding, standby.record(b.prefix)->binding);

  Outbox req_out;
  standby.handle_control(make_message(MessageKind::BindingRequest, net.rid("AMRR3"), standby.router_id(), 1,
                                      RequestPayload{b.prefix, AreaId{3}, net.rid("AMRR3")}),
                         1, req_out);
  EXPECT_TRUE(req_out.empty());
}

TEST(AmrrHa, AlerFailureSendsBlanketToPeers) {
  hmlbn::test::Network net(hmlbn::test::bundled("ha_failover").topology);
  Amrr primary(net.rid("AMRR1"), net.ctx(), AmrrConfig{});
  Outbox out;
  primary.handle_aler_failure(net.rid("ALER1B"), 2.0, out);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& m : out) {
    EXPECT_EQ(m.kind, MessageKind::AlerFailoverBlanket);
    EXPECT_EQ(std::get<BlanketPayload>(m.payload).surviving, net.rid("ALER1"));
  }
}
