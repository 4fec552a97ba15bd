#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hmlbn/scenario.hpp"
#include "test_support.hpp"

using namespace hmlbn;
using nlohmann::json;

namespace {

json raw(const std::string& name) {
  std::ifstream is(hmlbn::test::scenario_path(name));
  return json::parse(is);
}

std::vector<Diagnostic> diagnose(const json& doc) {
  std::vector<Diagnostic> diags;
  parse_scenario(doc, diags);
  return diags;
}

bool has_path(const std::vector<Diagnostic>& diags, const std::string& path) {
  for (const auto& d : diags) {
    if (d.path == path) return true;
  }
  return false;
}

}  // namespace

TEST(Scenario, BundledScenariosAreValid) {
  for (const auto& name : hmlbn::test::bundled_names()) {
    EXPECT_TRUE(validate_scenario_file(hmlbn::test::scenario_path(name)).empty()) << name;
  }
}

TEST(Scenario, LifetimeMustCoverTenDeadTimes) {
  auto doc = raw("startup");
  doc["timers"]["lifetime"] = 10.0;
  const auto diags = diagnose(doc);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].path, "timers.lifetime");
  EXPECT_EQ(diags[0].code, "value");

  doc["timers"]["lifetime"] = 90.0;  // exactly 10 D
  EXPECT_TRUE(diagnose(doc).empty());
}

TEST(Scenario, DeadTimeMustCoverThreeKeepalives) {
  auto doc = raw("startup");
  doc["timers"]["deadTime"] = 8.9;
  doc["timers"]["lifetime"] = 300.0;
  EXPECT_TRUE(has_path(diagnose(doc), "timers.deadTime"));
}

TEST(Scenario, UnknownKeyNamesFullPath) {
  auto doc = raw("startup");
  doc["topology"]["nodes"][2]["colour"] = "red";
  const auto diags = diagnose(doc);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].path, "topology.nodes[2].colour");
  EXPECT_EQ(diags[0].code, "unknown-key");
}

TEST(Scenario, MissingAndMistypedFields) {
  auto doc = raw("startup");
  doc.erase("duration");
  doc["flows"][0]["ratePps"] = "fast";
  const auto diags = diagnose(doc);
  EXPECT_TRUE(has_path(diags, "duration"));
  EXPECT_TRUE(has_path(diags, "flows[0].ratePps"));
}

TEST(Scenario, UnknownCellIsReported) {
  auto doc = raw("startup");
  doc["mobility"]["script"][0]["cell"] = "MR99/c1";
  EXPECT_TRUE(has_path(diagnose(doc), "mobility.script[0].cell"));
}

TEST(Scenario, TopologyErrorsCarryTheirCode) {
  auto doc = raw("startup");
  auto& nodes = doc["topology"]["nodes"];
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    if ((*it)["name"] == "AMRR2") {
      (*it)["role"] = "LSR";
      break;
    }
  }
  const auto diags = diagnose(doc);
  ASSERT_FALSE(diags.empty());
  EXPECT_EQ(diags[0].path, "topology");
  EXPECT_EQ(diags[0].code, "AreaWithoutAmrr");
}

TEST(Scenario, PrefixOutsideRange) {
  auto doc = raw("startup");
  doc["mobility"]["nodes"][0]["prefix"] = "11.0.0.1/32";
  EXPECT_TRUE(has_path(diagnose(doc), "mobility.nodes[0].prefix"));
}

TEST(Scenario, ThrowingOverloadCarriesScenarioInvalid) {
  auto doc = raw("startup");
  doc["timers"]["lifetime"] = 10.0;
  EXPECT_EQ(hmlbn::test::error_code([&] { parse_scenario(doc); }), Errc::ScenarioInvalid);
}

TEST(Scenario, JsonRoundTripIsStable) {
  for (const auto& name : hmlbn::test::bundled_names()) {
    const Scenario s = hmlbn::test::bundled(name);
    const auto once = to_json(s);
    const Scenario again = parse_scenario(json::parse(once.dump()));
    EXPECT_EQ(to_json(again).dump(), once.dump()) << name;
  }
}

TEST(Scenario, DiagnosticsRenderAsJsonLines) {
  const std::vector<Diagnostic> diags{{"a.b", "value", "x"}, {"c", "missing", "y"}};
  std::istringstream is(to_jsonl(diags));
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    const auto j = json::parse(line);
    EXPECT_TRUE(j.contains("path"));
    ++n;
  }
  EXPECT_EQ(n, 2);
}
