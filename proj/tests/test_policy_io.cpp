#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace rsgraph;
using rsgraph::testing::five_period;

namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(InstanceJson, RoundTrip) {
  auto inst = five_period();
  inst.seed = 99;
  inst.costs.unit = 0.5;
  const auto back = parse_instance(to_json(inst).dump());
  EXPECT_EQ(back.means, inst.means);
  EXPECT_EQ(back.cv, inst.cv);
  EXPECT_EQ(back.costs.fixed, 50.0);
  EXPECT_EQ(back.costs.unit, 0.5);
  EXPECT_EQ(back.costs.penalty, 19.0);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.id, "five-period");
}

TEST(InstanceJson, Diagnostics) {
  EXPECT_NE(error_of("{\n\"means\": [1, 2,\n}").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(R"({"means": [], "cv": 0.1, "K": 1, "h": 1, "b": 2})").find("'means'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"means": [1, -2], "cv": 0.1, "K": 1, "h": 1, "b": 2})").find("means[1]"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"means": [1], "K": 1, "h": 1, "b": 2})").find("'cv'"), std::string::npos);
  EXPECT_NE(error_of(R"({"horizon": 3, "means": [1], "cv": 0, "K": 1, "h": 1, "b": 2})").find("'horizon'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"means": [1], "cv": 0, "K": 1, "h": 1, "b": 2, "z": 3})").find("'z'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"means": [1], "cv": 0, "K": "x", "h": 1, "b": 2})").find("'K'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"means": [1], "cv": 0, "K": 1, "h": 1, "b": 2, "pattern": "spiky"})")
                .find("spiky"),
            std::string::npos);
}

TEST(InstanceJson, MissingFileIsIoFailure) {
  EXPECT_THROW(load_instance("/nonexistent/dir/instance.json"), std::ios_base::failure);
  EXPECT_THROW(write_text_file("/nonexistent/dir/out.json", "x"), std::ios_base::failure);
}

TEST(PolicyJson, RoundTripThroughFile) {
  const auto rep = solve(five_period());
  const fs::path dir = fs::temp_directory_path() / "rsgraph_policy_io";
  fs::create_directories(dir);
  const std::string path = (dir / "policy.json").string();
  save_policy(rep.policy, path);
  const auto back = load_policy(path);
  EXPECT_EQ(back.review_periods(), rep.policy.review_periods());
  EXPECT_EQ(back.source, PolicySource::augmented);
  for (int t : back.review_periods()) EXPECT_DOUBLE_EQ(back.at(t).order_up_to, rep.policy.at(t).order_up_to);
  fs::remove_all(dir);
}

TEST(PolicyJson, Validation) {
  EXPECT_THROW(policy_from_json(nlohmann::json::parse(R"({"horizon": 2, "reviews": []})")), InputError);
  EXPECT_THROW(policy_from_json(nlohmann::json::parse(
                   R"({"horizon": 2, "reviews": [{"period": 1, "order_up_to": 5}, {"period": 3, "order_up_to": 1}]})")),
               InputError);
  EXPECT_THROW(policy_from_json(nlohmann::json::parse(R"({"horizon": 2, "reviews": [{"period": 1}]})")),
               InputError);
  EXPECT_THROW(policy_from_json(nlohmann::json::parse(
                   R"({"horizon": 2, "reviews": [{"period": 1, "order_up_to": 5, "zero_quantity": true}]})")),
               InputError);
  const auto ok = policy_from_json(nlohmann::json::parse(
      R"({"horizon": 3, "reviews": [{"period": 1, "order_up_to": 5}, {"period": 3, "order_up_to": 2, "zero_quantity": true}]})"));
  EXPECT_EQ(ok.review_periods(), (std::vector<int>{1, 3}));
  EXPECT_EQ(ok.source, PolicySource::external);
}
