#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "basiscount/cli.hpp"

using basiscount::cli::run;
using nlohmann::ordered_json;

namespace {

const std::string kData = BASISCOUNT_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("basiscount_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

double as_number(const ordered_json& j) { return std::stod(j.get<std::string>()); }

}  // namespace

TEST(Cli, CountK4) {
  const auto r = call({"count", kData + "/k4.json", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = ordered_json::parse(r.out);
  EXPECT_EQ(j["exact"], "16");
  EXPECT_NEAR(as_number(j["beta_upper"]), 64.0, 0.64);
  EXPECT_EQ(j["mode"], "single");
  EXPECT_EQ(j["r"], 3);
  EXPECT_EQ(j["n"], 6);
  EXPECT_TRUE(j["elapsed_ms"].is_null());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> head(keys.begin(), keys.begin() + 9);
  EXPECT_EQ(head, (std::vector<std::string>{"tau_found", "gap", "beta_upper", "lower_bounds", "mode", "r", "n", "exact",
                                            "elapsed_ms"}));
}

TEST(Cli, IntersectK33) {
  const auto r = call({"intersect-count", kData + "/pm_rows.json", kData + "/pm_cols.json", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = ordered_json::parse(r.out);
  EXPECT_EQ(j["exact"], "6");
  EXPECT_NEAR(as_number(j["beta_upper"]), 307.5, 3.075);
}

TEST(Cli, MissingSpec) {
  const auto r = call({"count", "missing.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);
}

TEST(Cli, MalformedSpecNamesPath) {
  const auto f = write_temp("bad.json", R"({"type":"graphic","vertices":2,"edges":[[0,1],[0,5]]})");
  const auto r = call({"count", f});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("$.edges[1][1]"), std::string::npos) << r.err;
  const auto g = write_temp("notjson.json", "{not json");
  EXPECT_EQ(call({"count", g}).code, 2);
}

TEST(Cli, InfeasibleIntersectionIsExactZero) {
  const auto a = write_temp("a.json", R"({"type":"partition","n":4,"blocks":[{"elements":[0,1],"cap":1}]})");
  const auto b = write_temp("b.json", R"({"type":"partition","n":4,"blocks":[{"elements":[2,3],"cap":1}]})");
  const auto r = call({"intersect-count", a, b});
  EXPECT_EQ(r.code, 3);
  const auto j = ordered_json::parse(r.out);
  EXPECT_EQ(j["exact"], "0");
  EXPECT_EQ(j["beta_upper"], "0");
  const auto c = write_temp("c.json", R"({"type":"uniform","n":4,"r":2})");
  EXPECT_EQ(call({"intersect-count", a, c}).code, 3);
}

TEST(Cli, GuardRefusal) {
  const auto f = write_temp("big.json", R"({"type":"uniform","n":30,"r":2})");
  EXPECT_EQ(call({"count", f}).code, 0);
  const auto r = call({"count", f, "--exact"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("--force"), std::string::npos);
  const auto forced = call({"count", f, "--exact", "--force"});
  EXPECT_EQ(forced.code, 0);
  EXPECT_EQ(ordered_json::parse(forced.out)["exact"], "435");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
  EXPECT_EQ(call({"count", kData + "/k4.json", "--tol", "-1"}).code, 1);
  EXPECT_EQ(call({"count", kData + "/k4.json", "--max-iters", "0"}).code, 1);
  EXPECT_EQ(call({"count", kData + "/k4.json", "--format", "xml"}).code, 1);
  EXPECT_EQ(call({"intersect-count", kData + "/k4.json"}).code, 1);
  EXPECT_EQ(call({"weighted-count", kData + "/k3.json"}).code, 1);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, CountK) {
  const auto r = call({"count-k", kData + "/k4.json", "--k", "2", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ordered_json::parse(r.out)["exact"], "15");
  EXPECT_EQ(call({"count-k", kData + "/k4.json", "--k", "4"}).code, 2);
}

TEST(Cli, WeightedAndExact) {
  const auto r = call({"weighted-count", kData + "/k3.json", "--weights", kData + "/k3_weights.json", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = ordered_json::parse(r.out);
  EXPECT_EQ(j["exact"], "7/2");  // 2*1 + 2*(1/2) + 1*(1/2)
  EXPECT_EQ(j["constant_note"], "conservative constant");
  const auto e = call({"exact", kData + "/pm_rows.json", kData + "/pm_cols.json"});
  EXPECT_EQ(ordered_json::parse(e.out)["exact"], "6");
  const auto bad = write_temp("w.json", R"([1, 2])");
  EXPECT_EQ(call({"weighted-count", kData + "/k3.json", "--weights", bad}).code, 2);
}

TEST(Cli, Determinism) {
  const std::vector<std::string> args{"intersect-count", kData + "/pm_rows.json", kData + "/pm_cols.json", "--seed", "7"};
  EXPECT_EQ(call(args).out, call(args).out);
  const std::vector<std::string> lab{"lab-hessian", kData + "/k4.json", "--trials", "20"};
  EXPECT_EQ(call(lab).out, call(lab).out);
}

TEST(Cli, TimingAndTable) {
  const auto r = call({"count", kData + "/k3.json", "--timing"});
  EXPECT_TRUE(ordered_json::parse(r.out)["elapsed_ms"].is_number());
  const auto t = call({"count", kData + "/k3.json", "--format", "table"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("beta_upper"), std::string::npos);
}

TEST(Cli, LabCommands) {
  const auto v = call({"validate", kData + "/k4.json"});
  EXPECT_TRUE(ordered_json::parse(v.out)["passed"].get<bool>());
  const auto h = ordered_json::parse(call({"lab-hessian", kData + "/k4.json", "--trials", "30"}).out);
  ASSERT_EQ(h.size(), 3u);
  for (const auto& rep : h) EXPECT_EQ(rep["failures"], 0);
  const auto e = ordered_json::parse(call({"lab-entropy", kData + "/k4.json"}).out);
  EXPECT_TRUE(e["pass"].get<bool>());
  EXPECT_NEAR(e["entropy"].get<double>(), std::log(16.0), 1e-10);
  const auto c = ordered_json::parse(call({"lab-capacity", kData + "/k3.json"}).out);
  EXPECT_NEAR(c["log_capacity"].get<double>(), std::log(3.0), 1e-9);
  const auto p = ordered_json::parse(call({"lab-phi", kData + "/pm_rows.json", kData + "/pm_cols.json"}).out);
  EXPECT_TRUE(p["pass"].get<bool>());
  EXPECT_EQ(p["lhs"], "6");
  const auto outside = write_temp("p.json", R"([0.9, 0.9])");
  const auto u = write_temp("u12.json", R"({"type":"uniform","n":2,"r":1})");
  const auto cap = ordered_json::parse(call({"lab-capacity", u, "--point", outside}).out);
  EXPECT_TRUE(cap["log_capacity"].is_null());
}
