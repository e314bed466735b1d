#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "greenkernel/audit.hpp"
#include "greenkernel/cli.hpp"

using namespace greenkernel;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const CliRun r = run(args);
  EXPECT_EQ(r.code, kExitOk) << r.err;
  return nlohmann::json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(CliGreen, ValueOfSymmetricGroupAtThree) {
  const auto j = run_json({"green", "value", "--group", "S3", "--p", "3", "--n", "1"});
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["order"], 6);
  EXPECT_EQ(j["profile_or_basis"]["basis"], nlohmann::json::array({"1", "x^2"}));
  EXPECT_EQ(j["ind_one"]["text"], "x^2");
}

TEST(CliGreen, ValueOfPPrimeGroupIsTheField) {
  const auto j = run_json({"green", "value", "--group", "C2", "--p", "3", "--n", "1"});
  EXPECT_EQ(j["dim"], 1);
  EXPECT_EQ(j["ind_one"]["vector"], nlohmann::json::array({1}));
}

TEST(CliGreen, ValueOfAbelianGroupsGivesTheProfile) {
  // |C_{p^r}| = q^r for the profile of A(C_{p^r}); V4 at height 2 has profile (4, 4).
  EXPECT_EQ(run_json({"green", "value", "--group", "C4", "--p", "2"})["profile_or_basis"]["profile"],
            nlohmann::json::array({4}));
  const auto v4 = run_json({"green", "value", "--group", "V4", "--p", "2", "--n", "2"});
  EXPECT_EQ(v4["profile_or_basis"]["profile"], nlohmann::json::array({4, 4}));
  EXPECT_EQ(v4["dim"], 16);
}

TEST(CliGreen, StableElementsAndMaps) {
  const auto s = run_json({"green", "stable", "--group", "S3", "--p", "3"});
  EXPECT_EQ(s["lim_dim"], 2);
  EXPECT_EQ(s["colim_dim"], 2);
  EXPECT_EQ(s["double_coset_reps"].size(), 2u);
  const auto res = run_json({"green", "res", "--group", "S3", "--p", "3", "--h", "sylow"});
  EXPECT_EQ(res["matrix"], nlohmann::json::parse("[[1,0],[0,0],[0,1]]"));
  // ind^{C4}_{C2}: 1 -> x^2, y -> x^3 (y the generator of A(C2)).
  const auto ind = run_json({"green", "ind", "--group", "C4", "--p", "2", "--h", "(1 3)(2 4)"});
  EXPECT_EQ(ind["matrix"], nlohmann::json::parse("[[0,0],[0,0],[1,0],[0,1]]"));
}

TEST(CliTower, ShowPrintsTheCoproduct) {
  const CliRun r = run({"tower", "show", "--p", "2", "--n", "1", "--r", "1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("ψ(x) = x⊗1 + 1⊗x + x⊗x"), std::string::npos) << r.out;
}

TEST(CliTower, CheckPassesAndReportsStructure) {
  const CliRun r = run({"tower", "check", "--p", "3", "--r", "1", "--s", "1", "--format", "json"});
  EXPECT_EQ(r.code, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["axioms"]["all"]);
  EXPECT_TRUE(j["pdiv"]["all"]);
  EXPECT_EQ(j["pdiv"]["kernel_dim"], 6);  // 9 - 3
}

TEST(CliFgl, MultiplicativeLawAtTwo) {
  // Height 1 at p = 2: F(x, y) = x + y + xy over F_2.
  const auto j = run_json({"fgl", "show", "--p", "2", "--n", "1"});
  EXPECT_EQ(j["law"]["text"], "x + y + x*y");
  EXPECT_EQ(j["inverse"]["text"], "x");
}

TEST(CliFrob, CheckAndGysin) {
  EXPECT_EQ(run({"frob", "check", "--profile", "4,2", "--p", "2"}).code, kExitOk);
  EXPECT_EQ(run({"frob", "check", "--profile", "4", "--p", "2", "--form", "0,1,0,0"}).code, kExitCheckFailed);
  const auto j = run_json({"frob", "check", "--profile", "4", "--p", "2", "--form", "1,0,0,1"});
  EXPECT_EQ(j["pairing_rank"], 4);
  const auto g = run_json({"frob", "gysin", "--profile", "2", "--target-profile", "4", "--p", "2", "--images", "0,0,1,0"});
  EXPECT_TRUE(g["module_map"]);
  EXPECT_EQ(g["gysin"], nlohmann::json::parse("[[0,1,0,0],[0,0,0,1]]"));
}

TEST(CliAudit, JsonReportIsValidAndReproducible) {
  const std::vector<std::string> args{"audit", "assumptions", "--p", "3", "--battery", "C3,S3", "--no-timing",
                                      "--jobs", "3", "--format", "json"};
  const CliRun a = run(args);
  const CliRun b = run(args);
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(validate_schema(nlohmann::json::parse(a.out), audit_report_schema()).empty());
}

TEST(CliAudit, MackeyOnSylowFamilyWritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "greenkernel_cli_mackey.json";
  const CliRun r = run({"audit", "mackey", "--group", "S3", "--p", "3", "--family", "sylow", "--no-timing", "--format",
                     "json", "--out", path.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["meta"]["battery"], nlohmann::json::array({"S3"}));
  EXPECT_FALSE(j["checks"].empty());
}

TEST(CliAudit, FailingRowsGiveExitThree) {
  // The order-3 conjugation does not preserve the canonical form on V4 at p = 2.
  const CliRun r = run({"audit", "mackey", "--group", "A4", "--p", "2", "--no-timing"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_NE(r.out.find("[fail]"), std::string::npos);
}

TEST(CliErrors, ExitCodes) {
  EXPECT_EQ(run({"green", "value", "--group", "D4", "--p", "2"}).code, kExitScope);
  EXPECT_EQ(run({"tower", "show", "--r", "9"}).code, kExitScope);
  EXPECT_EQ(run({"green", "value", "--group", "Q8x"}).code, kExitUsage);
  EXPECT_EQ(run({"green", "value", "--group", "C3", "--p", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"green", "value", "--format", "yaml", "--group", "C2"}).code, kExitUsage);
  EXPECT_EQ(run({"green", "value", "--group", "C2", "--group-file", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"audit", "mackey", "--group", "S3", "--family", "some"}).code, kExitUsage);
  EXPECT_EQ(run({"green", "value", "--help"}).code, kExitOk);
}

TEST(CliErrors, BudgetFlagOverridesEnvironment) {
  ::setenv("GREENKERNEL_BUDGET", "4", 1);
  const CliRun env = run({"tower", "show", "--r", "3"});
  EXPECT_EQ(env.code, kExitScope);
  EXPECT_NE(env.err.find("required budget 8"), std::string::npos) << env.err;
  EXPECT_EQ(run({"tower", "show", "--r", "3", "--budget", "8"}).code, kExitOk);
  ::setenv("GREENKERNEL_BUDGET", "abc", 1);
  EXPECT_EQ(run({"tower", "show"}).code, kExitUsage);
  ::unsetenv("GREENKERNEL_BUDGET");
  EXPECT_EQ(run({"tower", "show", "--r", "3"}).code, kExitOk);
}

TEST(CliGroupFile, ParsesGeneratorsAndNamesBadLines) {
  const auto good = temp_file("greenkernel_s3.txt", "# S3\n(1 2 3)\n(1 2)\n");
  const auto j = run_json({"green", "value", "--group-file", good.string(), "--p", "3"});
  EXPECT_EQ(j["dim"], 2);
  const auto bad = temp_file("greenkernel_bad.txt", "(1 2 3)\n(1 2\n");
  const CliRun r = run({"green", "value", "--group-file", bad.string(), "--p", "3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"green", "value", "--group-file", "/nonexistent/g.txt"}).code, kExitUsage);
}

TEST(CliOutput, RepeatedRunsAreByteIdentical) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"green", "value", "--group", "A4", "--p", "2", "--format", "json"},
        std::vector<std::string>{"tower", "show", "--p", "3", "--r", "2"},
        std::vector<std::string>{"fgl", "show", "--p", "2", "--n", "2", "--format", "json"}}) {
    EXPECT_EQ(run(args).out, run(args).out);
  }
}
