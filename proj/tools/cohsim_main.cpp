#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cohsim/kernels.hpp"
#include "cohsim/sim.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) throw cohsim::SimError("cannot open config: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent distributed-array synchronization simulator"};
  app.require_subcommand(0, 1);

  bool list = false;
  bool show_simd = false;
  app.add_flag("--list-presets", list, "print available presets and exit");
  app.add_flag("--simd", show_simd, "print the active kernel backend and exit");

  auto* run = app.add_subcommand("run", "run one scenario");
  std::string preset_name, config_path, out_dir = "out", dump_config;
  int epochs = -1;
  std::int64_t seed = -1;
  double scope_rate = 0.0;
  run->add_option("--preset", preset_name, "preset scenario name");
  run->add_option("--config", config_path, "JSON scenario file");
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--epochs", epochs, "override epoch count");
  run->add_option("--seed", seed, "override RNG seed");
  run->add_option("--scope-rate", scope_rate, "override scope sample rate [Sa/s]");
  run->add_option("--dump-config", dump_config, "write the resolved config JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list) {
      for (const auto& n : cohsim::preset_names()) std::printf("%s\n", n.c_str());
      return 0;
    }
    if (show_simd) {
      std::printf("%s\n", cohsim::kernels::active_ops().name);
      return 0;
    }
    if (!run->parsed()) {
      std::fprintf(stderr, "%s\n", app.help().c_str());
      return 1;
    }
    if (preset_name.empty() == config_path.empty())
      throw cohsim::SimError("run: give exactly one of --preset / --config");

    cohsim::ScenarioConfig cfg = preset_name.empty()
                                     ? cohsim::config_from_json(slurp(config_path))
                                     : cohsim::preset(preset_name);
    if (epochs > 0) cfg.n_epochs = epochs;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (scope_rate > 0) cfg.scope_rate = scope_rate;
    cohsim::validate(cfg);

    if (!dump_config.empty()) {
      std::ofstream os(dump_config, std::ios::binary);
      os << cohsim::to_json(cfg) << '\n';
    }

    const cohsim::ScenarioResult res = cohsim::run_scenario(cfg);
    cohsim::emit_report(res, out_dir);
    std::printf("wrote %s/epochs.csv and %s/summary.csv\n", out_dir.c_str(),
                out_dir.c_str());
    return 0;
  } catch (const cohsim::ConvergenceError& e) {
    std::fprintf(stderr, "convergence failure: %s\n", e.what());
    return 3;
  } catch (const cohsim::SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 2;
  }
}
