// ccm: coded distributed matrix multiplication toolkit.

#include <iostream>

#include <CLI11.hpp>

#include "ccm/error.hpp"
#include "commands.hpp"

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::string stragglers;
  bool presets = false;
};

ccm::cli::ExperimentConfig resolve(const Globals& g, bool config_required) {
  ccm::cli::ExperimentConfig cfg;
  if (!g.config.empty()) {
    cfg = ccm::cli::load_config(g.config);
  } else if (config_required) {
    throw ccm::ConfigError("--config is required for this command");
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out = *g.out;
  if (g.format) cfg.format = *g.format;
  if (!g.stragglers.empty()) cfg.stragglers = ccm::cli::parse_index_list(g.stragglers);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ccm::cli;
  CLI::App app{"Straggler-resilient coded matrix multiplication: build coding plans, "
               "run them, decode, and analyze thresholds, loads and conditioning."};
  app.footer(scheme_help());
  app.require_subcommand(1);

  Globals g;
  auto add_globals = [&g](CLI::App* cmd) {
    cmd->add_option("--config", g.config, "Experiment config (JSON)");
    cmd->add_option("--seed", g.seed, "Top-level seed; overrides config.seed");
    cmd->add_option("--out", g.out, "Output path (default: stdout, product.cmx for multiply)");
    cmd->add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->footer(scheme_help());
  };

  auto* multiply = app.add_subcommand("multiply", "Encode, compute, decode A^T B end to end");
  add_globals(multiply);
  multiply->add_option("--simulate-stragglers", g.stragglers,
                       "Comma-separated workers that never return, e.g. \"0,3\"");
  auto* verify = app.add_subcommand("verify", "Brute-force check of a recovery threshold");
  add_globals(verify);
  auto* cond = app.add_subcommand("cond", "Worst-case condition number of recovery systems");
  add_globals(cond);
  cond->add_flag("--presets", g.presets,
                 "Vandermonde presets: N=15 tau=13, N=15 tau=12, N=30 tau=28");
  auto* simulate = app.add_subcommand("simulate", "Discrete-event straggler simulation");
  add_globals(simulate);
  simulate->add_option("--simulate-stragglers", g.stragglers,
                       "Comma-separated workers that fail");
  auto* demo = app.add_subcommand("demo", "Polynomial-code example with two stragglers");
  add_globals(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("Usage", e.what()) << '\n';
    return kExitUsage;
  }

  try {
    if (multiply->parsed()) return run_multiply(resolve(g, true));
    if (verify->parsed()) return run_verify(resolve(g, true));
    if (cond->parsed())
      return g.presets ? run_cond_presets(resolve(g, false)) : run_cond(resolve(g, true));
    if (simulate->parsed()) {
      auto cfg = resolve(g, true);
      return run_simulate(cfg);
    }
    if (demo->parsed()) return run_demo(resolve(g, false));
  } catch (const ccm::Error& e) {
    std::cerr << error_json(e.name(), e.what()) << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << error_json("Internal", e.what()) << '\n';
    return kExitError;
  }
  return kExitUsage;
}
