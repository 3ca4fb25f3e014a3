#include "nnlsg/experiment.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int effective_threads(int flag_value) {
  // NNLSG_THREADS takes precedence over --threads.
  if (const char *env = std::getenv("NNLSG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
    std::cerr << "warning: ignoring invalid NNLSG_THREADS='" << env << "'\n";
  }
  return flag_value;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Soliton transmission experiments on a four-bond star graph"};
  app.require_subcommand(1);

  bool seedless = false;
  app.add_flag("--seedless", seedless,
               "reserved; this tool uses no random numbers and rejects the flag");

  std::string scenario_arg, out_dir;
  int threads = 1;
  int resolution = 0;

  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("scenario", scenario_arg, "scenario file path or built-in name")->required();
    cmd->add_option("--out", out_dir, "output directory (default: ./out_<name>)");
    cmd->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    cmd->add_option("--resolution", resolution, "override grid points per bond")
        ->check(CLI::PositiveNumber);
  };

  CLI::App *cmd_run = app.add_subcommand("run", "run one scenario and write its outputs");
  add_common(cmd_run);
  CLI::App *cmd_sweep = app.add_subcommand("sweep", "run a (beta_m1, beta_p1) grid sweep");
  add_common(cmd_sweep);
  CLI::App *cmd_list = app.add_subcommand("list-builtins", "list built-in scenario names");

  CLI11_PARSE(app, argc, argv);

  if (seedless) {
    std::cerr << "error: --seedless is reserved; the tool is deterministic and uses no RNG\n";
    return 1;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto &name : nnlsg::builtin_names()) std::cout << name << '\n';
      return 0;
    }

    nnlsg::Scenario sc = nnlsg::resolve_scenario(scenario_arg);
    if (out_dir.empty()) out_dir = "out_" + sc.name;
    nnlsg::RunOverrides ov;
    ov.resolution = resolution;

    if (cmd_run->parsed()) {
      const auto summary = nnlsg::run_scenario(sc, out_dir, ov);
      std::cout << "scenario " << summary.name << ": status=" << summary.status
                << " Nerr=" << nnlsg::format_real(summary.norm_err) << " R(T)="
                << (summary.reflection_T ? nnlsg::format_real(*summary.reflection_T)
                                         : std::string("nan"))
                << " integrable=" << (summary.integrable ? "yes" : "no")
                << " transparent=" << (summary.transparent ? "yes" : "no") << '\n';
      std::cout << "outputs in " << out_dir << '\n';
      return summary.status == "ok" ? 0 : 2;
    }

    if (resolution > 0) sc.sweep_points = resolution;
    const auto result = nnlsg::run_sweep(sc, out_dir, effective_threads(threads));
    int failures = 0;
    for (const auto &c : result.cells)
      if (c.status != "ok") ++failures;
    std::cout << "sweep " << sc.name << ": " << result.cells.size() << " cells (" << result.rows
              << "x" << result.cols << "), " << failures << " failed\n";
    std::cout << "outputs in " << out_dir << '\n';
    return 0;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
