#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "contactwave/acceptance.hpp"
#include "contactwave/config.hpp"
#include "contactwave/series_io.hpp"

namespace {

std::string default_out_root() {
  if (const char* env = std::getenv("CONTACTWAVE_OUT")) return env;
  return "out";
}

int report_and_emit(const cw::RunRecord& rec, const std::string& out_dir) {
  const std::string summary = cw::emit_run(rec, out_dir);
  if (rec.failed) {
    std::cerr << "run failed: " << rec.failure << "\n";
    return 2;
  }
  int bad = 0;
  for (const auto& f : rec.flags) {
    if (f.asserted && !f.pass) {
      std::cerr << "FAIL " << f.name << ": " << f.claim << " (measured " << f.measured << ")\n";
      ++bad;
    }
  }
  std::cout << "wrote " << summary << "\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact-wave laboratory for 1D viscous heat-conducting flow"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long long seed = -1;
  int grid_refine = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "run configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "override the configured seed");
    cmd->add_option("--grid-refine", grid_refine, "multiply N by 2^K for convergence studies")
        ->check(CLI::Range(0, 8));
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run a single scenario from a config file");
  add_common(run_cmd, true);
  CLI::App* suite_cmd = app.add_subcommand("suite", "run the acceptance suite");
  add_common(suite_cmd, false);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a delta0 or amplitude sweep config");
  add_common(sweep_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (suite_cmd->parsed()) {
      cw::AcceptanceOutcome outcome = cw::run_acceptance(&std::cout);
      const std::string root = out_dir.empty() ? default_out_root() + "/suite" : out_dir;
      for (const auto& [name, rec] : outcome.records) cw::emit_run(rec, root + "/" + name);
      int bad = 0;
      for (const auto& c : outcome.criteria)
        if (!c.pass) ++bad;
      std::cout << (outcome.all_pass() ? "all criteria passed" : std::to_string(bad) +
                    " criteria failed")
                << "\n";
      return outcome.all_pass() ? 0 : 1;
    }

    cw::RunConfig cfg = cw::parse_config_file(config_path);
    if (seed >= 0) {
      cfg.scenario.seed = static_cast<std::uint64_t>(seed);
      cfg.scenario.init.seed = cfg.scenario.seed;
    }
    cfg.scenario.grid.refine += grid_refine;

    if (sweep_cmd->parsed() && cfg.scenario.kind != cw::ScenarioKind::delta0_sweep &&
        cfg.scenario.kind != cw::ScenarioKind::amplitude_sweep) {
      std::cerr << "sweep requires a delta0_sweep or amplitude_sweep scenario\n";
      return 2;
    }

    std::string dir = out_dir;
    if (dir.empty()) dir = !cfg.out_dir.empty() ? cfg.out_dir : default_out_root();
    dir += "/" + cw::to_string(cfg.scenario.kind);

    const cw::RunRecord rec = cw::run_scenario(cfg.scenario);
    return report_and_emit(rec, dir);
  } catch (const cw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
