#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "largeorder/engine.hpp"
#include "largeorder/oracle.hpp"

using namespace largeorder;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + LARGEORDER_CLI + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args, const std::string& env = "") {
  const Run r = run(args + " --json", env);
  EXPECT_EQ(r.code, 0) << args;
  return json::parse(r.out);
}

SearchOutcome outcome_from(const json& j, const Int& n) {
  const Int value(j.at("value").get<std::string>());
  if (j.at("kind") == "divisor") {
    return NontrivialDivisor{value};
  }
  std::optional<Int> order;
  if (j.contains("order")) {
    order = Int(j.at("order").get<std::string>());
  }
  return LargeOrderElement{Residue(value, n), order};
}

}  // namespace

TEST(Cli, FindExamples) {
  json j = run_json("find --n 10 --d 1");
  EXPECT_EQ(j["kind"], "divisor");
  EXPECT_EQ(j["value"], "2");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "find");
  EXPECT_EQ(j["inputs"]["n"], "10");
  EXPECT_TRUE(j["timing_ms"].is_number());

  j = run_json("find --n 15 --d 3");
  EXPECT_EQ(j["kind"], "element");
  EXPECT_EQ(j["value"], "2");

  EXPECT_EQ(run("find --n 15 --d 14").code, 2);
}

TEST(Cli, FindTrace) {
  const json j = run_json("find --n 217 --d 15 --threshold 3 --trace");
  EXPECT_EQ(j["value"], "31");
  EXPECT_EQ(j["trace"]["exit"], "gcd_split");
  EXPECT_EQ(j["trace"]["iterations"][0]["m"], "15");
  EXPECT_EQ(j["trace"]["fallback_invocations"], 0);
}

TEST(Cli, ThresholdFromEnvironment) {
  EXPECT_EQ(run_json("find --n 217 --d 15")["value"], "7");
  EXPECT_EQ(run_json("find --n 217 --d 15", "LARGEORDER_THRESHOLD=3")["value"], "31");
  // the flag wins over the environment
  EXPECT_EQ(run_json("find --n 217 --d 15 --threshold 1000", "LARGEORDER_THRESHOLD=3")["value"],
            "7");
  EXPECT_EQ(run("find --n 217 --d 15", "LARGEORDER_THRESHOLD=abc").code, 2);
}

TEST(Cli, BigIntegersAreStrings) {
  const json j = run_json("find --n 18446744073709551557 --d 1048576");
  EXPECT_EQ(j["inputs"]["n"], "18446744073709551557");
  EXPECT_EQ(j["kind"], "element");
  EXPECT_EQ(j["value"], "2");
}

TEST(Cli, OrderExamples) {
  json j = run_json("order --n 7 --alpha 3 --bound 10");
  EXPECT_EQ(j["kind"], "exact");
  EXPECT_EQ(j["order"], "6");
  EXPECT_EQ(j["factorization"], "2 * 3");

  EXPECT_EQ(run_json("order --n 7 --alpha 2 --bound 2")["kind"], "exceeds_bound");

  j = run_json("order --n 9 --alpha 3 --bound 5");
  EXPECT_EQ(j["kind"], "divisor");
  EXPECT_EQ(j["value"], "3");

  EXPECT_EQ(run("order --n 9 --alpha 9 --bound 5").code, 2);
  EXPECT_EQ(run("order --n 9 --alpha 2 --bound 0").code, 2);
}

TEST(Cli, PsiExamples) {
  json j = run_json("psi --x 10 --y 3");
  EXPECT_EQ(j["count"], "7");
  EXPECT_NEAR(j["bound"].get<double>(), 1.7411, 1e-4);

  j = run_json("psi --x 100000000 --y 100 --bound-only");
  EXPECT_TRUE(j["count"].is_null());
  EXPECT_TRUE(j["bound"].is_number());

  EXPECT_EQ(run("psi --x 100000000 --y 100").code, 2);
  EXPECT_EQ(run("psi --x 3 --y 2 --bound-only").code, 2);
}

TEST(Cli, VerifyExamples) {
  json j = run_json("verify --n 217 --d 15 --threshold 3");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_EQ(j["kind"], "divisor");
  EXPECT_EQ(j["value"], "31");
  EXPECT_EQ(run("verify --n 217 --d 15").code, 0);
  EXPECT_EQ(run("verify --n 100000007 --d 15").code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("find --n 15").code, 2);
  EXPECT_EQ(run("find --n abc --d 3").code, 2);
  EXPECT_EQ(run("find --n 2 --d 1").code, 2);
  EXPECT_EQ(run("find --n 15 --d 0").code, 2);
  EXPECT_EQ(run("find --n 15 --d 3 --threshold 2").code, 2);
  EXPECT_EQ(run("bench --pair 15").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, Bench) {
  const json j = run_json("bench --pair 1000003:1000 --pair 1000003:4000 --repeats 1");
  ASSERT_EQ(j["runs"].size(), 2u);
  EXPECT_EQ(j["runs"][1]["d"], "4000");
  EXPECT_EQ(j["time_ratios"].size(), 1u);
  EXPECT_TRUE(j["runs"][0]["multiplications"].is_number());
}

TEST(Cli, JsonRoundTripsThroughVerification) {
  for (unsigned long n = 3; n <= 241; n += 2) {
    for (unsigned long d : {1UL, 2UL, 5UL, 9UL, 15UL, n / 2, n - 2}) {
      if (d < 1 || d > n - 2) {
        continue;
      }
      const std::string args = "find --n " + std::to_string(n) + " --d " + std::to_string(d);
      const json j = run_json(args + " --threshold 3");
      const auto report = oracle::verify_outcome(Int(n), Int(d), outcome_from(j, Int(n)));
      ASSERT_TRUE(report.pass) << args << ": " << report.detail;
    }
  }
}
