#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sublin/app.hpp"

using nlohmann::json;

namespace {

// Flags of one subcommand; only flags given on the command line reach the
// parameter object, so library defaults stay in one place.
class Flags {
 public:
  explicit Flags(CLI::App* app) : app_(app) {}

  template <class T>
  Flags& opt(const std::string& name, const std::string& help) {
    auto v = std::make_shared<T>();
    CLI::Option* o = app_->add_option("--" + name, *v, help);
    collect_.push_back([v, o, name](json& j) {
      if (o->count()) j[name] = *v;
    });
    return *this;
  }

  Flags& flag(const std::string& name, const std::string& help) {
    auto v = std::make_shared<bool>(false);
    CLI::Option* o = app_->add_flag("--" + name, *v, help);
    collect_.push_back([v, o, name](json& j) {
      if (o->count()) j[name] = *v;
    });
    return *this;
  }

  json params() const {
    json j = json::object();
    for (const auto& c : collect_) c(j);
    return j;
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::vector<std::function<void(json&)>> collect_;
};

void common(Flags& f) { f.opt<std::uint64_t>("seed", "64-bit seed (default 1)").opt<unsigned>("jobs", "worker threads (default SUBLIN_CSP_JOBS or 1)"); }

void tester(Flags& f) {
  f.opt<std::string>("graph", "instance file")
      .opt<double>("phi", "conductance lower bound")
      .opt<double>("eps", "completeness parameter")
      .opt<double>("rho", "soundness parameter")
      .opt<std::size_t>("trials", "independent runs (default 1)")
      .opt<std::string>("sampling", "degree-weighted sampling: exact | rejection")
      .opt<std::string>("preset", "none | approx (rho from the approximation corollary)");
  common(f);
}

void maxcut_constants(Flags& f) {
  f.opt<std::size_t>("seeds", "start vertices")
      .opt<double>("c-mc", "walk-length constant C")
      .opt<double>("feasibility", "eps must not exceed C phi^2 rho / feasibility")
      .opt<std::string>("volume-mode", "exact | estimated")
      .opt<double>("volume-estimate", "volume estimate (estimated mode)")
      .opt<double>("max-queries", "projected query budget, 0 disables")
      .opt<double>("c-dist", "l2 test sample constant")
      .opt<double>("c-rep", "l2 test repetition constant")
      .opt<double>("max-samples", "l2 test sample cap, 0 disables");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sublin: sublinear-time testers for Max Cut, E2Lin and Unique Label Cover on expanders"};
  app.require_subcommand(0, 1);
  std::string replay_path;
  app.add_option("--replay", replay_path, "re-run a manifest and compare verdicts, queries and digests");
  std::string json_out;

  std::vector<std::pair<std::string, Flags>> subs;
  auto add = [&](const std::string& name, const std::string& help) -> Flags& {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--json-out", json_out, "also write the manifest to this file");
    subs.emplace_back(name, Flags(s));
    return subs.back().second;
  };

  {
    auto& f = add("gen", "generate an instance file plus a JSON sidecar");
    f.opt<std::string>("kind", "regular | planted-maxcut | planted-e2lin | planted-ulc | two-cluster")
        .opt<std::size_t>("n", "vertices")
        .opt<std::uint32_t>("d", "degree (default 8)")
        .opt<std::uint32_t>("q", "alphabet size (default 2)")
        .opt<double>("eps", "corruption fraction")
        .opt<double>("phi-min", "required certified conductance lower bound")
        .opt<int>("max-attempts", "resampling attempts for certification")
        .opt<std::string>("completion", "ulc completion: random | aligned")
        .opt<std::size_t>("cross", "two-cluster: crossing edges (even)")
        .opt<std::string>("out", "output file");
    common(f);
  }
  {
    auto& f = add("maxcut-test", "run the Max Cut expander tester");
    tester(f);
    maxcut_constants(f);
  }
  {
    auto& f = add("e2lin-test", "run the E2Lin expander tester");
    tester(f);
    f.opt<std::uint32_t>("q", "alphabet size (default: the instance's)")
        .opt<std::string>("lambda-rule", "lemma | algorithm")
        .opt<double>("c-lambda", "lemma rule constant")
        .opt<double>("c-lambda-alg", "algorithm rule constant")
        .opt<double>("feasibility", "rho must be at least feasibility q^3 sqrt(eps) / phi")
        .opt<std::string>("cluster", "clusterability variant: exact | sublinear")
        .opt<double>("c1", "conductance threshold constant")
        .opt<double>("c-seeds", "sublinear: seed count constant")
        .opt<double>("c-walk", "sublinear: walk length constant")
        .opt<double>("c-samples", "sublinear: endpoints per seed constant")
        .opt<double>("theta", "sublinear: far threshold constant")
        .opt<std::size_t>("max-walk-length", "sublinear: walk length cap");
  }
  {
    auto& f = add("ulc-test", "run the Unique Label Cover tester");
    tester(f);
    f.opt<std::uint32_t>("q", "alphabet size (default: the instance's)")
        .opt<std::uint32_t>("d", "degree bound (default: the instance's maximum)")
        .opt<double>("log-eps", "natural log of eps")
        .flag("eps-at-bound", "use the largest eps the hypothesis allows")
        .opt<std::string>("oracle", "clustering oracle: exact-ref")
        .opt<std::uint64_t>("oracle-seed", "reference oracle seed")
        .opt<double>("c-eps-shape", "eps hypothesis constant")
        .opt<double>("c-rho-shape", "rho hypothesis constant")
        .opt<double>("c-volume", "volume sample constant")
        .opt<double>("c-xi0", "volume accuracy constant")
        .opt<double>("max-volume-samples", "volume sample cap")
        .opt<double>("c-membership", "membership sample constant")
        .opt<double>("max-membership-samples", "membership sample cap")
        .opt<double>("c-xi", "cluster volume tolerance constant")
        .opt<double>("c-threshold", "outer conductance threshold constant")
        .opt<double>("c-outer-samples", "outer conductance sample constant")
        .opt<double>("max-outer-samples", "outer conductance sample cap");
  }
  {
    auto& f = add("oracle", "answer oracle queries and exact quantities on a graph");
    f.opt<std::string>("graph", "graph file")
        .opt<std::uint32_t>("degree", "degree of vertex v")
        .opt<std::string>("neighbor", "v,i: the i-th neighbor of v")
        .opt<std::size_t>("sample", "draw k degree-weighted vertices")
        .opt<std::string>("exact",
                          "comma list: conductance, maxcut, bipartiteness, dual-cheeger, rho, spectrum, lambda2, opt, "
                          "colorable")
        .opt<std::uint32_t>("k", "k for rho (default 2)")
        .opt<std::string>("sampling", "exact | rejection");
    common(f);
  }
  {
    auto& f = add("verify-lemmas", "exhaustive verification suites");
    f.opt<std::string>("suite", "spectral | maxcut | e2lin | ulc | hardness | all")
        .opt<std::size_t>("n-max", "largest corpus graph (default 13)")
        .opt<double>("c-mc", "maxcut: C under test")
        .opt<std::size_t>("expander-n-max", "maxcut: largest expander for walk-norm decay")
        .opt<std::size_t>("instances", "e2lin, ulc, hardness: instance count")
        .opt<std::uint32_t>("max-vars", "hardness: variables of random CNFs")
        .opt<std::uint64_t>("seed", "instance seed");
  }
  {
    auto& f = add("calibrate", "sweep named constants on planted desk-scale instances");
    f.opt<std::string>("algo", "maxcut-c | dist | ulc | cluster")
        .opt<std::size_t>("n-max", "maxcut-c: largest corpus graph")
        .opt<double>("c-mc", "maxcut-c: C used for the completeness probe")
        .opt<std::size_t>("n", "dist, ulc: vertices")
        .opt<std::uint32_t>("d", "degree")
        .opt<std::uint32_t>("q", "ulc: alphabet size")
        .opt<double>("phi", "ulc: conductance bound")
        .opt<double>("rho", "ulc: soundness parameter")
        .opt<std::size_t>("trials", "dist: trials per point")
        .opt<double>("delta", "dist: error target")
        .opt<std::size_t>("runs", "ulc, cluster: runs per side")
        .opt<std::size_t>("half", "cluster: half size")
        .opt<std::size_t>("cross", "cluster: crossing edges")
        .opt<double>("lambda", "cluster: spectral threshold")
        .opt<std::vector<double>>("c-dist-grid", "dist: c_dist values")
        .opt<std::vector<double>>("c-rep-grid", "dist: c_rep values")
        .opt<std::vector<double>>("c-threshold-grid", "ulc: c_threshold values")
        .opt<std::vector<double>>("c-samples-grid", "cluster: c_samples values")
        .opt<std::vector<double>>("theta-grid", "cluster: theta values")
        .opt<std::string>("csv", "write the sweep table here");
    common(f);
  }
  {
    auto& f = add("profile-queries", "query counts of a tester against m, with a log-log fit");
    f.opt<std::string>("algo", "maxcut")
        .opt<std::string>("m", "lo..hi (doubling) or a comma list")
        .flag("fit", "report the fitted log-log slope")
        .opt<double>("phi", "conductance bound")
        .opt<double>("eps", "completeness parameter")
        .opt<double>("rho", "soundness parameter")
        .opt<std::size_t>("seeds", "start vertices (default 1)")
        .opt<double>("c-mc", "walk-length constant C")
        .opt<double>("c-dist", "l2 test sample constant (default 1e-3)")
        .opt<double>("c-rep", "l2 test repetition constant (default 0.1)")
        .opt<double>("max-queries", "projected query budget per run")
        .opt<std::size_t>("n-cap", "largest n (default 4096)")
        .opt<std::string>("csv", "write (m, queries) here");
    common(f);
  }
  {
    auto& f = add("hardness-gen", "3-colorability instance from a 3-CNF");
    f.opt<std::string>("cnf", "DIMACS file (default: random formula)")
        .opt<std::uint32_t>("vars", "random formula: variables")
        .opt<std::uint32_t>("clauses", "random formula: clauses")
        .opt<std::uint32_t>("k", "literal occurrence bound (default 2)")
        .opt<std::uint32_t>("d-exp", "layer expander degree (default 3)")
        .flag("check-coloring", "build a witness 3-coloring when satisfiable")
        .opt<std::string>("out", "output file");
    common(f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n";
    CLI::App* shown = &app;
    for (auto* s : app.get_subcommands()) shown = s;
    std::cerr << shown->help();
    return 2;
  }

  auto emit = [&](const json& j) {
    std::cout << j.dump(2) << '\n';
    if (!json_out.empty()) sublin::app::write_json(json_out, j);
  };

  try {
    if (!replay_path.empty()) {
      if (!app.get_subcommands().empty()) throw sublin::ParameterError("--replay takes no subcommand");
      std::ifstream in(replay_path);
      if (!in) throw sublin::ParameterError("cannot open manifest " + replay_path);
      json manifest;
      try {
        manifest = json::parse(in);
      } catch (const json::exception& e) {
        throw sublin::ParameterError(std::string("manifest is not JSON: ") + e.what());
      }
      const json report = sublin::replay(manifest);
      emit(report);
      return report.at("match").get<bool>() ? 0 : 1;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    for (const auto& [name, flags] : subs) {
      if (!flags.app()->parsed()) continue;
      const json manifest = sublin::execute(name, flags.params());
      emit(manifest);
      return manifest.at("ok").get<bool>() ? 0 : 1;
    }
  } catch (const sublin::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
