// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fieldlab/scenarios.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace fieldlab;
namespace sc = fieldlab::scenarios;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("fieldlab_test_" + name);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FIELDLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Registry, ListsEveryScenario) {
  const std::set<std::string> expected{"spin-packet",   "small-packet-trend", "charge-velocity",  "gordon-closure",
                                       "photon-goodwf", "photon-covariance",  "energy-identity",  "self-energy",
                                       "fock-demo",     "dirac-sea",          "fock-functional-map", "haag-overlap",
                                       "grassmann-demo"};
  std::set<std::string> names;
  for (const auto& s : sc::registry()) {
    names.insert(s.name);
    EXPECT_FALSE(s.claim.empty());
  }
  EXPECT_EQ(names, expected);
  EXPECT_THROW(sc::find("no-such-scenario"), domain_error);
}

TEST(Config, DefaultsAndOverrides) {
  const auto& s = sc::find("haag-overlap");
  const auto cfg = sc::resolve_config(s, nlohmann::json(), std::nullopt);
  EXPECT_EQ(cfg["max_modes"], 16);
  EXPECT_EQ(cfg["seed"].get<std::uint64_t>(), sc::default_seed);
  const auto custom = sc::resolve_config(
      s, nlohmann::json::parse(R"({"scenario": "haag-overlap", "max_modes": 8, "constants": {"mass": 2}})"), 99);
  EXPECT_EQ(custom["max_modes"], 8);
  EXPECT_EQ(custom["seed"].get<std::uint64_t>(), 99u);
  EXPECT_DOUBLE_EQ(custom["constants"]["mass"].get<double>(), 2.0);
}

TEST(Config, Rejections) {
  const auto& s = sc::find("haag-overlap");
  auto parse = [](const char* t) { return nlohmann::json::parse(t); };
  EXPECT_THROW(sc::resolve_config(s, parse(R"({"bogus": 1})"), std::nullopt), domain_error);
  EXPECT_THROW(sc::resolve_config(s, parse(R"({"max_modes": "many"})"), std::nullopt), domain_error);
  EXPECT_THROW(sc::resolve_config(s, parse(R"({"max_modes": 2.5})"), std::nullopt), domain_error);
  EXPECT_THROW(sc::resolve_config(s, parse(R"({"scenario": "dirac-sea"})"), std::nullopt), domain_error);
  EXPECT_THROW(sc::resolve_config(s, parse(R"({"constants": {"c": 0}})"), std::nullopt), domain_error);
  EXPECT_THROW(sc::resolve_config(s, parse("[1, 2]"), std::nullopt), domain_error);
}

TEST(Run, WritesArtifactsDeterministically) {
  const auto& s = sc::find("fock-functional-map");
  const nlohmann::json cfg = {{"samples", 2000}, {"pairs", 4}};
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto ra = sc::run_scenario(s, cfg, 5, a);
  const auto rb = sc::run_scenario(s, cfg, 5, b);
  EXPECT_EQ(ra.passed, rb.passed);
  for (const char* f : {"results.csv", "summary.txt", "run.json"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto run = nlohmann::json::parse(slurp(a / "run.json"));
  EXPECT_EQ(run["scenario"], "fock-functional-map");
  EXPECT_EQ(run["config"]["seed"], 5);
  EXPECT_EQ(run["checks"].size(), ra.checks.size());
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, DifferentSeedsChangeRandomizedResults) {
  const auto& s = sc::find("fock-functional-map");
  const nlohmann::json cfg = {{"samples", 2000}, {"pairs", 4}};
  const auto a = scratch("seed_a"), b = scratch("seed_b");
  sc::run_scenario(s, cfg, 1, a);
  sc::run_scenario(s, cfg, 2, b);
  EXPECT_NE(slurp(a / "results.csv"), slurp(b / "results.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Run, UnwritableOutputRejected) {
  const auto dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(sc::run_scenario(sc::find("dirac-sea"), nlohmann::json(), std::nullopt, dir / "file" / "sub"),
               std::runtime_error);
  fs::remove_all(dir);
}

TEST(Executable, ExitCodes) {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  EXPECT_EQ(run_cli("list"), 0);
  EXPECT_EQ(run_cli("run dirac-sea --out " + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "summary.txt"));
  EXPECT_EQ(run_cli("run no-such-scenario --out " + (dir / "x").string()), 2);
  std::ofstream(dir / "strict.json") << R"({"r2_min": 1.5})";
  EXPECT_EQ(run_cli("run haag-overlap --config " + (dir / "strict.json").string() + " --out " + (dir / "f").string()),
            1);
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_EQ(run_cli("run haag-overlap --config " + (dir / "broken.json").string() + " --out " + (dir / "g").string()),
            2);
  EXPECT_NE(run_cli(""), 0);
  fs::remove_all(dir);
}
