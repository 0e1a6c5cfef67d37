#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cdflow/config.hpp"
#include "cdflow/errors.hpp"
#include "cdflow/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"steady axisymmetric stream with a free contact interface"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 1;
  bool quiet = false;
  for (const char* verb : {"solve", "sweep", "convergence", "verify"}) {
    auto* sub = app.add_subcommand(verb);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (config [run] output "
                                      "when omitted)");
    sub->add_option("--threads", threads, "worker threads for sweep rows");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const cdflow::SolveConfig c = cdflow::parse_config(config_path);
    const std::string dir = out_dir.empty() ? c.output : out_dir;
    const std::string verb = app.get_subcommands().front()->get_name();
    if (verb == "solve") return cdflow::run_solve(c, dir, quiet);
    if (verb == "sweep") return cdflow::run_sweep(c, dir, threads, quiet);
    if (verb == "convergence") return cdflow::run_convergence(c, dir, quiet);
    return cdflow::run_verify(c, dir, quiet);
  } catch (const cdflow::SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return int(e.code());
  }
}
