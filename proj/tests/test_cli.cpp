#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(NCP_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<nlohmann::json> lines(const std::string& s) {
  std::vector<nlohmann::json> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(nlohmann::json::parse(l));
  return out;
}

std::string write_config(const std::string& name, const std::string& body) {
  std::string path = std::string(NCP_TMP) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(Cli, CheckSuiteSelection) {
  auto r = run("check weyl-relations");
  EXPECT_EQ(r.code, 0);
  auto recs = lines(r.out);
  ASSERT_FALSE(recs.empty());
  for (auto& j : recs) EXPECT_EQ(j["suite"], "weyl-relations");
  EXPECT_EQ(recs.back()["record"], "suite");
  EXPECT_TRUE(recs.back()["pass"].get<bool>());
}

TEST(Cli, TightToleranceGoesRed) {
  EXPECT_EQ(run("check sklyanin-calibration").code, 0);
  auto r = run("check sklyanin-calibration --tol 1e-30");
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(lines(r.out).back()["pass"].get<bool>());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("check no-such-suite").code, 2);
  EXPECT_EQ(run("orbit --precision quad").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("orbit --config " + write_config("bad.json", R"({"stepz": 3})")).code, 2);
  EXPECT_EQ(run("orbit --config " + write_config("badtype.json", R"({"steps": "many"})")).code, 2);
  EXPECT_EQ(run("orbit --config " + write_config("badword.json", R"({"word": "q7"})")).code, 2);
  EXPECT_EQ(run("pairing --precision extended").code, 2);
  EXPECT_EQ(run("toy --tol 1e-3").code, 2);
}

TEST(Cli, OrbitRecords) {
  auto zero = run("orbit --config " + write_config("zero.json", R"({"steps": 0})"));
  EXPECT_EQ(zero.code, 0);
  EXPECT_EQ(lines(zero.out).size(), 1u);
  auto a = run("orbit --seed 5"), b = run("orbit --seed 5");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto recs = lines(a.out);
  ASSERT_EQ(recs.size(), 11u);
  EXPECT_EQ(recs[0]["inputs_hash"], recs[10]["inputs_hash"]);
  // [re, im] pairs with 17 significant digits
  auto at = a.out.find("\"constraint\":") + 13;
  std::string tok = a.out.substr(at, a.out.find(',', at) - at);
  int digits = 0;
  for (char ch : tok.substr(0, tok.find('e'))) digits += std::isdigit(static_cast<unsigned char>(ch)) != 0;
  EXPECT_EQ(digits, 17) << tok;
  EXPECT_EQ(recs[3]["P"][0][1].size(), 2u);
  EXPECT_NE(run("orbit --seed 6").out, a.out);
  auto rt = run("orbit --config " + write_config("rt.json", R"x({"word": "a(1,2) s3 a(4,9)", "steps": 5, "round_trip": true})x"));
  EXPECT_EQ(rt.code, 0);
  auto last = lines(rt.out).back();
  EXPECT_EQ(last["record"], "round_trip");
  EXPECT_LT(last["distance"].get<double>(), 1e-6);
}

TEST(Cli, OrbitFailureRecord) {
  // the chi = d+1 chart is the only one with alpha moves
  auto r = run("orbit --config " + write_config("level.json", R"({"chi": 1, "steps": 3})"));
  EXPECT_EQ(r.code, 1);
  auto recs = lines(r.out);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_FALSE(recs.back()["ok"].get<bool>());
  EXPECT_NE(recs.back()["error"].get<std::string>().find("UnsupportedLevel"), std::string::npos);
}

TEST(Cli, Wrappers) {
  auto sk = lines(run("sklyanin-info").out).at(0);
  EXPECT_EQ(sk["cubic"].size(), 10u);
  EXPECT_EQ(sk["t"].size(), 3u);
  EXPECT_EQ(sk["theta"].size(), 10u);
  EXPECT_EQ(sk["theta_kernel_dim"], 1);

  auto s0 = run("sheaf-s0");
  EXPECT_EQ(s0.code, 0);
  auto j = lines(s0.out).at(0);
  EXPECT_LT(j["distance"].get<double>(), 1e-5);
  EXPECT_EQ(j["new_params"].size(), 9u);

  auto pr = run("pairing");
  EXPECT_EQ(pr.code, 0);
  EXPECT_LT(lines(pr.out).at(0)["skew_relative"].get<double>(), 1e-6);

  auto toy = run("toy");
  EXPECT_EQ(toy.code, 0);
  auto t = lines(toy.out).at(0);
  EXPECT_EQ(t["roots_after"], nlohmann::json({"2/3", "2"}));
  EXPECT_TRUE(t["roots_match"].get<bool>());
  auto toy2 = run("toy --config " + write_config("toy.json", R"({"hbar": "-1/2", "s": 3, "f": [[-3, 1]]})"));
  EXPECT_EQ(lines(toy2.out).at(0)["roots_after"], nlohmann::json({"7/2"}));
  EXPECT_EQ(run("toy --config " + write_config("toy3.json", R"({"s": 5})")).code, 1);
}
