// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fieldlab/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <future>
#include <iostream>

namespace {

using fieldlab::scenarios::json;

json load_config(const std::string& path) {
  if (path.empty()) return json();
  std::ifstream in(path);
  if (!in) throw fieldlab::domain_error("cannot read config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw fieldlab::domain_error("config is not valid JSON: " + std::string(e.what()));
  }
}

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string error;
};

CheckResult run_one(const fieldlab::scenarios::Scenario& sc, std::optional<std::uint64_t> seed,
                    const std::filesystem::path& out) {
  try {
    const auto rec = fieldlab::scenarios::run_scenario(sc, json(), seed, out / sc.name);
    return {sc.name, rec.passed, rec.seconds, {}};
  } catch (const std::exception& e) {
    return {sc.name, false, 0.0, e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fieldlab: numerical experiments on classical and quantum field pictures"};
  app.require_subcommand(1);

  std::string scenario, config_path, out_dir = "runs";
  std::optional<std::uint64_t> seed;
  bool parallel = false;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", scenario, "scenario name")->required();
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed for randomized suites");
  run->add_flag("--parallel", parallel, "accepted for symmetry with check");

  auto* list = app.add_subcommand("list", "list scenarios");

  std::string check_out = "check_runs";
  auto* check = app.add_subcommand("check", "run every scenario at its default config");
  check->add_option("--out", check_out, "output directory");
  check->add_option("--seed", seed, "seed for randomized suites");
  check->add_flag("--parallel", parallel, "run scenarios concurrently");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& sc : fieldlab::scenarios::registry()) {
      std::printf("%-20s %s\n", sc.name.c_str(), sc.claim.c_str());
    }
    return 0;
  }

  if (run->parsed()) {
    try {
      const auto& sc = fieldlab::scenarios::find(scenario);
      const auto rec = fieldlab::scenarios::run_scenario(sc, load_config(config_path), seed, out_dir);
      for (const auto& c : rec.checks) {
        std::printf("%s %s: %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    fieldlab::io::format_double(c.value).c_str(), c.requirement.c_str());
      }
      std::printf("%s %s (%.2f s), artifacts in %s\n", rec.passed ? "PASS" : "FAIL", sc.name.c_str(), rec.seconds,
                  out_dir.c_str());
      return rec.passed ? 0 : 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }

  if (check->parsed()) {
    const auto& all = fieldlab::scenarios::registry();
    std::vector<CheckResult> results;
    const auto start = std::chrono::steady_clock::now();
    if (parallel) {
      std::vector<std::future<CheckResult>> jobs;
      for (const auto& sc : all) {
        jobs.push_back(std::async(std::launch::async, [&sc, &seed, &check_out] { return run_one(sc, seed, check_out); }));
      }
      for (auto& j : jobs) results.push_back(j.get());
    } else {
      for (const auto& sc : all) results.push_back(run_one(sc, seed, check_out));
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.passed;
      std::printf("%s %-20s %7.2f s%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                  r.error.empty() ? "" : "  error: ", r.error.c_str());
    }
    std::printf("%s all scenarios, %.2f s total\n", ok ? "PASS" : "FAIL", total);
    return ok ? 0 : 1;
  }
  return 0;
}
