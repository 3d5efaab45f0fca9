#include <doctest.h>

#include "rtadapt/config.hpp"
#include "rtadapt/run.hpp"
#include "rtadapt/solver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rtadapt;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("benchmark defaults") {
    auto c = parse_config("benchmark=kellogg1\n");
    CHECK(c.theta == 0.7);
    CHECK(c.policy == IndicatorPolicy::xi);
    CHECK(c.scheme == Scheme::centered);
    c = parse_config("benchmark=kellogg2");
    CHECK(c.theta == 0.94);
    c = parse_config("");
    CHECK(c.benchmark == BenchmarkCase::lshape);
    CHECK(c.theta == 0.5);
    CHECK(c.max_dof == 100000);
    c = parse_config("benchmark = layer\n# comment\neps=1e-3\na=0.05");
    CHECK(c.scheme == Scheme::upwind);
    CHECK(c.params.eps == 1e-3);
    CHECK(c.params.a == 0.05);
    CHECK(c.theta == 0.5);
    c = parse_config("benchmark=kellogg1\ntheta=0.5\npolicy=theorem");
    CHECK(c.theta == 0.5);
    CHECK(c.policy == IndicatorPolicy::theorem);
  }

  TEST_CASE("errors name the offending token") {
    CHECK(message_of("theta=1.5").find("theta=1.5") != std::string::npos);
    CHECK(message_of("theta=0").find("theta") != std::string::npos);
    CHECK(message_of("speed=3").find("speed") != std::string::npos);
    CHECK(message_of("a\n").find("line 1") != std::string::npos);
    CHECK(message_of("theta=0.3\ntheta=0.4").find("line 2") != std::string::npos);
    CHECK(message_of("max-dof=ten").find("ten") != std::string::npos);
    CHECK(message_of("scheme=sideways").find("sideways") != std::string::npos);
    CHECK(message_of("benchmark=lshape\neps=0.1").find("eps") != std::string::npos);
    CHECK(message_of("benchmark=layer\neps=-1").find("eps") != std::string::npos);
    CHECK(message_of("max-iter=0").find("max-iter") != std::string::npos);
    CHECK(message_of("theta=").find("theta") != std::string::npos);
  }

  TEST_CASE("flags override file entries") {
    const auto file = parse_config_text("benchmark=kellogg1\ntheta=0.6\nout=a");
    const auto merged = merge_entries(file, {{"theta", "0.9"}, {"out", "b"}});
    const auto c = resolve_config(merged);
    CHECK(c.theta == 0.9);
    CHECK(c.out == "b");
    CHECK(c.benchmark == BenchmarkCase::kellogg1);
  }

  TEST_CASE("render and parse round trip") {
    for (const char* text : {"", "benchmark=kellogg2\nmode=uniform\nmax-dof=5000",
                             "benchmark=layer\neps=0.001\na=0.1\ntheta=0.123456789012345\nout=x y",
                             "benchmark=kellogg1\nscheme=upwind\npolicy=theorem\nmax-iter=7"}) {
      const auto c = parse_config(text);
      CHECK(parse_config(render_config(c)) == c);
    }
  }

  TEST_CASE("loop options follow the config") {
    const auto c = parse_config("benchmark=kellogg2\nmax-iter=4\nmode=uniform");
    const auto o = c.loop_options();
    CHECK(o.theta == 0.94);
    CHECK(o.max_iter == 4);
    CHECK(o.mode == RefinementMode::uniform);
    CHECK(o.policy == IndicatorPolicy::xi);
  }
}

TEST_SUITE("config") {
  TEST_CASE("number formatting and rates") {
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(0.1)) == 0.1);
    std::vector<RunRecord> h(3);
    h[0].dof = 8;
    h[0].energy_error = 1.3665;
    h[1].dof = 20;
    h[1].energy_error = 1.1346;
    h[2].dof = 40;
    h[2].energy_error = 1.1346;
    const auto r = eoc_series(h, false);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(0.2030).epsilon(5e-4));
    CHECK(r[1] == 0.0);
  }

  TEST_CASE("study artifacts") {
    const auto dir = std::filesystem::temp_directory_path() / "rtadapt_config_test";
    std::filesystem::remove_all(dir);
    auto c = parse_config("benchmark=layer\nmax-iter=3\neps=0.1");
    c.out = dir.string();
    const auto res = run_study(c);
    CHECK(res.history.size() == 3);
    for (const char* f : {"config.txt", "history.csv", "mesh_final.txt", "mesh_final.svg", "estimators_final.csv",
                          "ptilde_nodal.csv"})
      CHECK(std::filesystem::exists(dir / f));
    const auto hist = lines_of(dir / "history.csv");
    REQUIRE(hist.size() == 5);
    CHECK(hist[0][0] == '#');
    CHECK(hist[1] == history_header);
    CHECK(hist[1] == "k,dof,E_k,eta_k,eta_D,eta_R,eta_NC,eta_C,eta_U,xi,EOC_E,EOC_eta,effectivity");
    CHECK(hist[2].find(",nan,nan,") != std::string::npos);
    for (std::size_t i = 2; i < hist.size(); ++i) CHECK(std::count(hist[i].begin(), hist[i].end(), ',') == 12);
    const auto est = lines_of(dir / "estimators_final.csv");
    CHECK(est[0] == "element_id,eta_D,eta_R,eta_NC,eta_C,eta_U,xi,total");
    CHECK(est.size() == res.history.back().dof + 1);
    const auto nodal = lines_of(dir / "ptilde_nodal.csv");
    CHECK(nodal[0] == "vertex,value");
    CHECK(nodal.size() == static_cast<std::size_t>(res.mesh.num_vertices()) + 1);
    std::ifstream cfg(dir / "config.txt");
    std::stringstream ss;
    ss << cfg.rdbuf();
    auto back = parse_config(ss.str());
    CHECK(back == c);
    std::filesystem::remove_all(dir);
  }
}
