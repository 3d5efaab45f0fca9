// rtadapt: adaptive mixed finite element studies from the command line.

#include "rtadapt/config.hpp"
#include "rtadapt/mesh_io.hpp"
#include "rtadapt/problem.hpp"
#include "rtadapt/run.hpp"
#include "rtadapt/solver.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rtadapt::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive lowest-order mixed finite elements with a posteriori error estimators"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an adaptive or uniform refinement study");
  std::string config_file;
  run->add_option("-c,--config", config_file, "key=value config file; flags override its entries");
  const char* run_keys[] = {"benchmark", "scheme", "policy", "theta", "mode", "max-dof", "max-iter", "eps", "a", "out"};
  const char* run_help[] = {"lshape | kellogg1 | kellogg2 | layer",
                            "centered | upwind",
                            "theorem | xi",
                            "Doerfler fraction in (0, 1]",
                            "adaptive | uniform",
                            "largest element count to solve on",
                            "largest number of iterations",
                            "layer diffusion",
                            "layer width",
                            "output directory"};
  std::string run_values[10];
  CLI::Option* run_opts[10];
  for (int i = 0; i < 10; ++i)
    run_opts[i] = run->add_option(std::string("--") + run_keys[i], run_values[i], run_help[i]);
  bool print_config = false;
  run->add_flag("--print-config", print_config, "print the resolved configuration and exit");
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "no per-iteration log");

  auto* mesh = app.add_subcommand("mesh", "dump and render a refined benchmark mesh without solving");
  std::string mesh_benchmark = "lshape";
  int levels = 0;
  std::string mesh_out = "mesh";
  mesh->add_option("--benchmark", mesh_benchmark, "benchmark whose initial mesh is used");
  mesh->add_option("--levels", levels, "uniform refinement steps")->check(CLI::Range(0, 14));
  mesh->add_option("--out", mesh_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      rtadapt::ConfigEntries flags;
      for (int i = 0; i < 10; ++i)
        if (run_opts[i]->count() > 0) flags.emplace_back(run_keys[i], run_values[i]);
      rtadapt::ConfigEntries file;
      if (!config_file.empty()) file = rtadapt::parse_config_text(read_file(config_file));
      const rtadapt::RunConfig config = rtadapt::resolve_config(rtadapt::merge_entries(file, flags));
      if (print_config) {
        std::cout << rtadapt::render_config(config);
        return 0;
      }
      const auto result = rtadapt::run_study(config, quiet ? nullptr : &std::cout);
      std::cout << "wrote " << result.history.size() << " iterations to " << config.out << '\n';
      return 0;
    }
    const auto id = rtadapt::parse_benchmark(mesh_benchmark);
    rtadapt::Triangulation t = rtadapt::benchmark(id).mesh;
    for (int i = 0; i < levels; ++i) t = rtadapt::uniform_refine(t);
    std::filesystem::create_directories(mesh_out);
    std::ofstream txt(std::filesystem::path(mesh_out) / "mesh.txt");
    std::ofstream svg(std::filesystem::path(mesh_out) / "mesh.svg");
    if (!txt || !svg) throw std::runtime_error("cannot write into " + mesh_out);
    rtadapt::write_mesh(txt, t);
    rtadapt::write_svg(svg, t);
    std::cout << t.num_elements() << " elements written to " << mesh_out << '\n';
    return 0;
  } catch (const rtadapt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const rtadapt::SolveError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
