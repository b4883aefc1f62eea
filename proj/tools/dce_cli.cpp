#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "dce/errors.hpp"
#include "dce/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Moving-mirror cavity: Moore functions, effective trajectories and field energy"};
  app.require_subcommand(1);

  bool strict = false;
  std::string out_dir;
  int threads = 1;
  app.add_flag("--strict", strict, "Treat superluminal mirrors (effective or reference) as a failure");
  app.add_option("--out", out_dir, "Output directory (overrides [outputs] directory)");
  app.add_option("--threads", threads, "Worker threads; 0 uses all cores")->check(CLI::NonNegativeNumber);

  std::string config_file;
  auto* run = app.add_subcommand("run", "Run one scenario and write CSV files and summary.ini");
  run->add_option("config", config_file, "Scenario INI file")->required()->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Sweep the motion duration over [sweep] taus");
  sweep->add_option("config", config_file, "Scenario INI file")->required()->check(CLI::ExistingFile);

  run->fallthrough();
  sweep->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const dce::RunConfig config = dce::load_config(config_file);
    dce::RunOptions opt;
    opt.strict = strict;
    opt.threads = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const std::filesystem::path dir = out_dir.empty() ? config.outputs.directory : std::filesystem::path(out_dir);

    if (*run) {
      const dce::ScenarioResult result = dce::simulate(config, opt);
      dce::write_outputs(result, dir);
      for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';
      if (result.superluminal) std::cerr << "warning: effective trajectory is superluminal\n";
      if (!result.ok()) {
        for (const auto& f : result.failed_checks) std::cerr << "check failed: " << f << '\n';
        return 1;
      }
      std::cout << "wrote " << dir.string() << '\n';
      return 0;
    }
    const dce::SweepResult result = dce::sweep_tau(config, opt);
    dce::write_sweep(result, dir);
    std::cout << "residual slope " << dce::format_number(result.residual_slope) << '\n';
    return 0;
  } catch (const dce::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
