#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbloch/commands.hpp"
#include "gbloch/config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int cells_override = 0;
  long seed_override = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--n", args.cells_override, "cell count override");
  cmd->add_option("--seed", args.seed_override, "seed override");
}

gbloch::RunConfig resolve(const CommonArgs& args) {
  gbloch::RunConfig cfg = gbloch::load_config(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.cells_override > 0) {
    cfg.cells = args.cells_override;
    const int min_cells = 2 * cfg.to_spec().range() + 2;
    if (cfg.cells < min_cells)
      throw gbloch::config_error("--n: need at least " + std::to_string(min_cells) +
                                 " cells for this model (got " +
                                 std::to_string(cfg.cells) + ")");
  }
  if (args.seed_override >= 0) cfg.seed = static_cast<unsigned long>(args.seed_override);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gbloch: exact spectra, skin-effect and exceptional-point analysis of "
               "one-dimensional non-Hermitian tight-binding chains"};
  app.require_subcommand(1);

  CommonArgs spectrum_args, states_args, gbz_args, analyze_args;
  std::vector<int> state_indices;

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "open-chain spectrum: dense numerics vs closed-form solution");
  add_common(spectrum, spectrum_args);

  CLI::App* states =
      app.add_subcommand("states", "per-state amplitude profiles and localization fits");
  add_common(states, states_args);
  states->add_option("--index", state_indices, "state indices to emit (repeatable)");

  CLI::App* gbz = app.add_subcommand(
      "gbz", "generalized Brillouin zone trajectory and localization cross-check");
  add_common(gbz, gbz_args);

  CLI::App* analyze = app.add_subcommand(
      "analyze", "skin-effect conditions, exceptional points, pseudo-Hermiticity");
  add_common(analyze, analyze_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) gbloch::cmd_spectrum(resolve(spectrum_args));
    if (states->parsed()) gbloch::cmd_states(resolve(states_args), state_indices);
    if (gbz->parsed()) gbloch::cmd_gbz(resolve(gbz_args));
    if (analyze->parsed()) gbloch::cmd_analyze(resolve(analyze_args));
  } catch (const gbloch::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
