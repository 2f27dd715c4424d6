// carpet: command-line driver for the rolling-carpet experiments.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "carpet/config.hpp"
#include "carpet/experiments.hpp"
#include "carpet/output.hpp"

namespace {

int fail(const std::exception& e) {
  std::cout << carpet::error_object(e).dump() << "\n";
  return carpet::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling-carpet eradication experiments"};
  app.set_version_flag("--version", std::string(CARPET_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<int> workers;
  for (const auto& name : carpet::experiment_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON config; omitted sections take their defaults");
    sub->add_option("--out", out_dir, "Output directory (default: output.dir from the config)");
    sub->add_option("--workers", workers, "Worker threads (default: CARPET_WORKERS, then hardware)");
  }

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  replay->add_option("manifest", manifest_path, "Path to manifest.json")->required();
  replay->add_option("--workers", workers, "Worker threads");

  std::string defaults_for;
  auto* defaults = app.add_subcommand("defaults", "Print the default config of an experiment");
  defaults->add_option("experiment", defaults_for, "Experiment name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*defaults) {
      std::cout << carpet::dump_json(carpet::default_config(carpet::parse_experiment(defaults_for)));
      return 0;
    }
    if (*replay) {
      const auto rep = carpet::replay(manifest_path, carpet::resolve_workers(workers));
      std::cout << nlohmann::json{{"matched", rep.matched}, {"mismatched", rep.mismatched}}.dump() << "\n";
      return 0;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();
    const carpet::ExperimentConfig cfg = config_path.empty()
                                             ? carpet::resolve_config(nlohmann::json::object(), experiment)
                                             : carpet::load_config(config_path, experiment);
    const auto res =
        carpet::run_experiment(cfg, out_dir.empty() ? cfg.out_dir : out_dir, carpet::resolve_workers(workers));
    std::cout << res.artifacts.summary.dump() << "\n";
    return res.artifacts.undecided ? 4 : 0;
  } catch (const std::exception& e) {
    return fail(e);
  }
}
