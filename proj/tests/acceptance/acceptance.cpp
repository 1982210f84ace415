#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sublin/app.hpp"
#include "sublin/corpus.hpp"
#include "sublin/experiments.hpp"
#include "sublin/lemmas.hpp"

using namespace sublin;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string line_summary(const CheckLine& l) {
  return l.name + " [" + std::to_string(l.instances) + " instances, " + std::to_string(l.violations) +
         " violations] " + l.detail.dump();
}

Result from_line(const CheckLine& l) { return {l.pass(), line_summary(l)}; }

Result from_suite(const SuiteReport& r) {
  std::ostringstream os;
  for (const auto& l : r.lines)
    os << "\n    " << (l.informational ? "INFO" : (l.pass() ? "PASS" : "FAIL")) << " " << line_summary(l);
  return {r.passed(), r.suite + " suite" + os.str()};
}

std::vector<CorpusGraph> corpus13;
std::vector<CorpusFacts> facts13;

void load_corpus() {
  if (corpus13.empty()) {
    corpus13 = small_corpus(13);
    facts13 = corpus_facts(corpus13);
  }
}

Result c1_parity() {
  std::vector<Graph> graphs;
  GenOptions opt;
  opt.phi_min = 1e-6;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t n = 8 + 56 * i / 19;
    if (i % 2 == 0)
      graphs.push_back(random_connected_gnp(n, 0.2, 100 + i));
    else
      graphs.push_back(gen_random_regular(n % 2 ? n + 1 : n, 3 + i % 4, 100 + i, opt).graph);
  }
  return from_line(check_parity_identities(graphs, 50));
}

Result c2_walk_norm() {
  load_corpus();
  std::vector<Graph> graphs;
  for (const auto& c : corpus13) graphs.push_back(c.graph);
  for (auto& g : expander_family(4096, 11)) graphs.push_back(std::move(g));
  return from_line(check_walk_norm_decay(graphs, 20, 100, 12));
}

Result c3_delta_gap() {
  load_corpus();
  return from_line(check_delta_gap(corpus13, facts13, MaxCutConfig{}.c_mc));
}

Result c4_bipartiteness() {
  load_corpus();
  return from_line(check_bipartiteness_lemma(corpus13, facts13));
}

Result c5_dist() {
  auto ex = dist_experiment(64, 4, {0.0, 0.5, 4.0, 8.0}, 200, 0.05, DistTestConfig{}, 3);
  bool ok = true;
  for (const auto& p : ex.points) {
    const double rate = p.ratio <= 1.0 ? p.accept_rate() : 1.0 - p.accept_rate();
    if (rate < 0.95) ok = false;
  }
  return {ok, ex.to_json().dump()};
}

Result c6_maxcut() {
  auto r = maxcut_end_to_end(2000, 8, 0.01, 0.45, 50, MaxCutConfig{}, 1);
  if (!r.feasible)
    return {false, "not runnable under the shipped constants: " + r.reason + "; projection " + r.projection.dump()};
  const bool ok = r.completeness.errors == 0 && r.soundness.errors == 0 && r.completeness.accept_rate() >= 2.0 / 3 &&
                  r.soundness.reject_rate() >= 2.0 / 3;
  return {ok, "completeness " + r.completeness.to_json().dump() + " soundness " + r.soundness.to_json().dump() +
                  " projection " + r.projection.dump()};
}

Result c7_e2lin_structure() { return from_suite(e2lin_suite(100, 500)); }

Result c8_e2lin() {
  auto r = e2lin_end_to_end(2000, 8, 2, 0.01, 0.45, 50, E2LinConfig{}, 1, true);
  std::ostringstream os;
  os << "phi_lower=" << r.phi << " lambda_2(planted extension)=" << r.lambda_q_planted
     << " lambda_2(random extension)=" << r.lambda_q_random << " rules " << r.rules.dump();
  if (!r.feasible) return {false, "not runnable under the shipped constants: " + r.reason + "; " + os.str()};
  const bool ok = r.completeness.errors == 0 && r.soundness.errors == 0 && r.completeness.accept_rate() >= 2.0 / 3 &&
                  r.soundness.reject_rate() >= 2.0 / 3;
  return {ok, "completeness " + r.completeness.to_json().dump() + " soundness " + r.soundness.to_json().dump() +
                  " " + os.str()};
}

Result c9_ulc_structure() { return from_suite(ulc_suite(50, 700)); }

Result c10_bracket() {
  auto ob = outer_bracket_experiment(500, 8, 40, 100, 5);
  return {ob.within * 100 >= 95 * ob.runs, ob.to_json().dump()};
}

Result c11_ulc() {
  UlcConfig cfg;
  cfg.q = 2;
  cfg.d = 4;
  cfg.phi = 0.05;
  cfg.rho = 0.25;
  cfg.log_eps = log_eps_hypothesis(cfg.q, cfg.phi);
  auto r = ulc_end_to_end(512, cfg, 50, 1, 1);
  const bool ok = r.completeness.errors == 0 && r.soundness.errors == 0 && r.completeness.accept_rate() >= 0.95 &&
                  r.soundness.reject_rate() >= 0.95;
  return {ok, "completeness " + r.completeness.to_json().dump() + " soundness " + r.soundness.to_json().dump()};
}

Result c12_hardness() { return from_suite(hardness_suite(100, 8, 900)); }

Result c13_scaling() {
  MaxCutConfig c;
  c.phi = 0.1;
  c.eps = 0.0;
  c.rho = 0.45;
  c.start_vertices = 1;
  c.dist.c_dist = 1e-3;
  c.dist.c_rep = 0.1;
  std::vector<std::uint64_t> ms;
  for (std::uint64_t m = 1024; m <= 65536; m *= 2) ms.push_back(m);
  auto res = profile_maxcut_queries(ms, c, 7);
  std::ostringstream os;
  os << "slope=" << res.slope << " rows(m:queries)";
  for (const auto& r : res.rows) os << " " << r.m << ":" << r.queries;
  return {res.slope >= 0.40 && res.slope <= 0.75, os.str()};
}

Result c14_replay() {
  const auto dir = fs::temp_directory_path() / ("sublin-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto g = [&](const std::string& f) { return (dir / f).string(); };
  std::vector<std::pair<std::string, json>> runs = {
      {"gen", {{"kind", "regular"}, {"n", 64}, {"d", 4}, {"seed", 3}, {"out", g("reg.txt")}}},
      {"gen", {{"kind", "planted-maxcut"}, {"n", 128}, {"d", 6}, {"seed", 4}, {"out", g("pm.txt")}}},
      {"gen", {{"kind", "planted-e2lin"}, {"n", 64}, {"d", 4}, {"q", 2}, {"seed", 5}, {"out", g("pe.txt")}}},
      {"gen", {{"kind", "planted-ulc"}, {"n", 64}, {"d", 4}, {"q", 2}, {"seed", 6}, {"out", g("pu.txt")}}},
      {"gen", {{"kind", "two-cluster"}, {"n", 64}, {"d", 4}, {"cross", 8}, {"seed", 7}, {"out", g("tc.txt")}}},
  };
  std::ostringstream os;
  std::size_t bad = 0;
  auto check = [&](const std::string& sub, const json& params) {
    try {
      auto m = execute(sub, params);
      auto r = replay(m);
      const bool match = r["match"].get<bool>();
      if (!match) {
        ++bad;
        os << " " << sub << ":MISMATCH" << r["mismatches"].dump();
      } else {
        os << " " << sub << ":ok";
      }
    } catch (const std::exception& e) {
      ++bad;
      os << " " << sub << ":ERROR(" << e.what() << ")";
    }
  };
  for (const auto& [sub, params] : runs) check(sub, params);
  check("maxcut-test", {{"graph", g("pm.txt")}, {"phi", 0.1}, {"rho", 0.45}, {"c-dist", 1e-3}, {"c-rep", 0.1},
                        {"trials", 3}, {"seed", 11}});
  check("e2lin-test", {{"graph", g("pe.txt")}, {"phi", 0.1}, {"rho", 0.3}, {"trials", 2}, {"seed", 12}});
  check("ulc-test", {{"graph", g("pu.txt")}, {"phi", 0.05}, {"rho", 0.25}, {"eps-at-bound", true}, {"trials", 2},
                     {"seed", 13}});
  check("oracle", {{"graph", g("pu.txt")}, {"degree", 3}, {"neighbor", "3,1"}, {"sample", 20}, {"seed", 14}});
  check("verify-lemmas", {{"suite", "spectral"}, {"n-max", 8}});
  check("calibrate", {{"algo", "maxcut-c"}, {"n-max", 8}});
  check("calibrate", {{"algo", "dist"}, {"trials", 5}, {"c-dist-grid", {2, 4}}, {"c-rep-grid", {4}}});
  check("profile-queries", {{"m", "1024..4096"}, {"fit", true}, {"seed", 15}});
  check("hardness-gen", {{"vars", 3}, {"clauses", 3}, {"seed", 16}, {"out", g("h.txt")}});
  fs::remove_all(dir);
  return {bad == 0, std::to_string(bad) + " mismatching manifests;" + os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"C1 exact parity identities", c1_parity},
      {"C2 walk-norm decay", c2_walk_norm},
      {"C3 Delta gap at shipped C_mc", c3_delta_gap},
      {"C4 bipartiteness-ratio lemma", c4_bipartiteness},
      {"C5 l2 difference test", c5_dist},
      {"C6 max cut tester end to end", c6_maxcut},
      {"C7 E2Lin structure", c7_e2lin_structure},
      {"C8 E2Lin tester end to end", c8_e2lin},
      {"C9 ULC structure", c9_ulc_structure},
      {"C10 outer conductance bracket", c10_bracket},
      {"C11 ULC tester end to end", c11_ulc},
      {"C12 3-coloring hardness construction", c12_hardness},
      {"C13 query scaling", c13_scaling},
      {"C14 manifest replay", c14_replay},
  };
  std::size_t failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!r.pass) ++failed;
    std::printf("%s %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", name.c_str(), secs);
    std::printf("    %s\n", r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
