// Copyright 2026 The fieldlab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fieldlab/fock.hpp"
#include "fieldlab/grassmann.hpp"
#include "fieldlab/scenarios.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
namespace sc = fieldlab::scenarios;

namespace {

struct Pass {
  std::map<std::string, sc::RunRecord> records;
  double seconds = 0.0;
};

Pass run_all(const fs::path& root) {
  Pass p;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& s : sc::registry()) p.records[s.name] = sc::run_scenario(s, sc::json(), std::nullopt, root / s.name);
  p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Byte comparison of every file under a against its counterpart under b.
bool identical_trees(const fs::path& a, const fs::path& b, std::string& diff) {
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    if (!fs::exists(b / rel) || slurp(e.path()) != slurp(b / rel)) {
      diff = rel.string();
      return false;
    }
  }
  return true;
}

class Report {
 public:
  void line(int n, bool ok, const std::string& what, const std::string& detail) {
    failures_ += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

const sc::Check* find_check(const sc::RunRecord& r, const std::string& prefix) {
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) == 0) return &c;
  }
  return nullptr;
}

// All checks of a scenario, or only those whose names start with one of the prefixes.
bool checks_pass(const sc::RunRecord& r, std::string& detail, const std::vector<std::string>& prefixes = {}) {
  bool ok = true;
  std::ostringstream d;
  auto consider = [&](const sc::Check& c) {
    ok = ok && c.passed;
    if (d.tellp() > 0) d << "; ";
    d << c.name << " = " << fieldlab::io::format_double(c.value);
  };
  if (prefixes.empty()) {
    for (const auto& c : r.checks) consider(c);
  } else {
    for (const auto& p : prefixes) {
      const auto* c = find_check(r, p);
      if (!c) {
        ok = false;
        d << (d.tellp() > 0 ? "; " : "") << "missing check '" << p << "'";
      } else {
        consider(*c);
      }
    }
  }
  detail = d.str();
  return ok;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

// Direct library sweep for criterion 10: every fermionic space with up to six
// modes and every bosonic space with up to four modes at cap 3.
bool algebra_sweep(std::string& detail) {
  using namespace fieldlab::fock;
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> w(n, 1.0);
    for (int i = 0; i < n; ++i) w[i] += 0.25 * i;
    const auto f = check_canonical_relations(std::make_shared<const ModeSet>(simple_fermionic_modes(w)));
    worst = std::max({worst, f.mixed, f.annihilators, f.creators});
    if (n <= 4) {
      const auto b = check_canonical_relations(std::make_shared<const ModeSet>(simple_bosonic_modes(w, 3)));
      worst = std::max({worst, b.mixed, b.annihilators, b.creators});
    }
  }
  detail = "library sweep max deviation " + fieldlab::io::format_double(worst);
  return worst < 1e-14;
}

// Direct exhaustive Grassmann check for criterion 13 on M <= 3 over values {0, 1, -1, i}.
bool soul_sweep(std::string& detail) {
  using namespace fieldlab::grassmann;
  const std::vector<fieldlab::cplx> choices{0.0, 1.0, -1.0, fieldlab::cplx(0, 1)};
  int fields = 0, with_soul = 0;
  for (int m = 1; m <= 3; ++m) {
    const ToyFermionField f(m);
    int total = 1;
    for (int i = 0; i < m; ++i) total *= 4;
    for (int code = 1; code < total; ++code) {
      std::vector<fieldlab::cplx> cfg(m);
      for (int i = 0, c = code; i < m; ++i, c /= 4) cfg[i] = choices[c % 4];
      ++fields;
      with_soul += f.density(f.grassmann_values(cfg)).soul().is_zero() ? 0 : 1;
    }
  }
  detail = std::to_string(with_soul) + "/" + std::to_string(fields) + " nonzero fields with a soul";
  return with_soul == fields;
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / "fieldlab_acceptance";
  fs::remove_all(root);
  Report rep;
  Pass first;
  try {
    first = run_all(root / "first");
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance runner: %s\n", e.what());
    return 1;
  }
  const auto& R = first.records;
  std::string d;

  {
    const auto& r = R.at("spin-packet");
    const bool ok = checks_pass(r, d) && r.seconds < 30.0;
    rep.line(1, ok, "spin packet L_z = hbar/2, m_z = -e hbar/2mc, antiparallel", d + "; " + seconds(r.seconds));
  }
  rep.line(2, checks_pass(R.at("small-packet-trend"), d), "small-packet energy and moment ordering", d);
  {
    const auto& r = R.at("charge-velocity");
    const bool ok = checks_pass(r, d, {"charge speed bounded by c on random fields"}) && r.seconds < 20.0;
    rep.line(3, ok, "charge velocity bounded by c on 10^4 random fields", d + "; " + seconds(r.seconds));
  }
  rep.line(4, checks_pass(R.at("charge-velocity"), d, {"superluminal energy flow exists"}),
           "superluminal energy flow in the scanned family", d);
  rep.line(5, checks_pass(R.at("gordon-closure"), d), "Gordon decomposition closure", d);
  rep.line(6, checks_pass(R.at("photon-goodwf"), d), "photon wave equation for the Good wave function", d);
  rep.line(7, checks_pass(R.at("energy-identity"), d), "helicity energy equals field energy", d);
  rep.line(8, checks_pass(R.at("photon-covariance"), d), "Dirac current covariant, photon density not", d);
  rep.line(9, checks_pass(R.at("self-energy"), d), "Gaussian self-energy converges, point charge diverges", d);
  {
    std::string d2, d3;
    const bool demo = checks_pass(R.at("fock-demo"), d);
    const bool sea = checks_pass(R.at("dirac-sea"), d2);
    const bool ok = algebra_sweep(d3) && demo && sea;
    rep.line(10, ok, "Fock algebra, antisymmetry and Dirac-sea holes", d + "; " + d2 + "; " + d3);
  }
  rep.line(11,
           checks_pass(R.at("fock-functional-map"), d,
                       {"Fock and functional inner products agree", "the map intertwines the free evolutions"}),
           "Fock and functional pictures intertwine", d);
  {
    const auto& r = R.at("haag-overlap");
    const bool ok = checks_pass(r, d) && r.seconds < 10.0;
    rep.line(12, ok, "vacuum overlap decreases with mode count", d + "; " + seconds(r.seconds));
  }
  {
    std::string d2;
    const bool demo = checks_pass(R.at("grassmann-demo"), d);
    const bool ok = soul_sweep(d2) && demo;
    rep.line(13, ok, "Grassmann anticommutation, counterexample, souls, probabilities", d + "; " + d2);
  }
  {
    bool all = true;
    for (const auto& [name, r] : R) all = all && r.passed;
    Pass second;
    std::string diff;
    bool same = false;
    try {
      second = run_all(root / "second");
      same = identical_trees(root / "first", root / "second", diff) &&
             identical_trees(root / "second", root / "first", diff);
    } catch (const std::exception& e) {
      diff = e.what();
    }
    const bool ok = all && first.seconds < 300.0 && same;
    rep.line(14, ok, "all scenarios pass, under 5 min, deterministic",
             std::string(all ? "all passed" : "some failed") + "; " + seconds(first.seconds) + "; " +
                 (same ? "artifacts byte-identical across runs" : "differs: " + diff));
  }
  fs::remove_all(root);
  std::printf("%d of 14 criteria failed\n", rep.failures());
  return rep.failures() == 0 ? 0 : 1;
}
