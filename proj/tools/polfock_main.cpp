// Command-line driver for the cavity-molecule polariton simulator.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error,
// 1 unexpected internal failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "polfock/scenario.hpp"

namespace {

std::string resolve_outdir(const polfock::ScenarioConfig& config,
                           const std::string& cli_out,
                           const std::string& command) {
  if (!cli_out.empty()) return cli_out;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("POLFOCK_OUTDIR"))
    return std::string(env) + "/" + command;
  return "polfock_runs/" + command;
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polfock: quantum dynamics of a diatomic molecule coupled to a "
               "single cavity mode, in the polarized-Fock-state basis"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 0;
  bool plots = false;
  double chi_override = std::nan("");
  double omega_override = std::nan("");

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "JSON configuration file");
    cmd->add_option("-o,--out", out_dir,
                    "output directory (default: config, then $POLFOCK_OUTDIR)");
    cmd->add_option("-j,--jobs", jobs, "worker pool size for chi scans");
    cmd->add_flag("--emit-plots-data", plots,
                  "also write a tidy long-format plots_data.csv");
    cmd->add_option("--chi", chi_override, "override the light-matter coupling (a.u.)");
    cmd->add_option("--omega-ev", omega_override, "override the cavity quantum (eV)");
  };

  CLI::App* cmd_surfaces =
      app.add_subcommand("surfaces", "polariton surfaces and photon characters over R");
  CLI::App* cmd_splittings =
      app.add_subcommand("splittings", "avoided-crossing gaps vs chi and model variant");
  CLI::App* cmd_down =
      app.add_subcommand("downconversion", "photon generation from one excitation");
  CLI::App* cmd_diss =
      app.add_subcommand("dissociation", "cavity-controlled photodissociation");
  CLI::App* cmd_validate =
      app.add_subcommand("validate-config", "parse and echo the resolved configuration");
  for (CLI::App* cmd : {cmd_surfaces, cmd_splittings, cmd_down, cmd_diss, cmd_validate})
    add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    polfock::ScenarioConfig config =
        config_path.empty() ? polfock::parse_config(nlohmann::json::object())
                            : polfock::load_config_file(config_path);
    if (!std::isnan(chi_override)) {
      if (chi_override < 0.0)
        throw polfock::ConfigError("cli.chi", "must be non-negative");
      config.chi = chi_override;
      config.chi_scan.clear();
    }
    if (!std::isnan(omega_override)) {
      if (!(omega_override > 0.0))
        throw polfock::ConfigError("cli.omega-ev", "must be positive");
      config.omega_c_ev = omega_override;
    }
    if (jobs > 0) config.jobs = jobs;
    if (plots) config.emit_plots_data = true;

    if (cmd_validate->parsed()) {
      std::printf("%s\n", polfock::resolved_json(config).dump(2).c_str());
      return 0;
    }

    if (cmd_surfaces->parsed()) {
      const auto result = polfock::run_surfaces(config);
      print_files(polfock::write_surfaces_outputs(
          result, config, resolve_outdir(config, out_dir, "surfaces")));
    } else if (cmd_splittings->parsed()) {
      const auto result = polfock::run_splittings(config);
      print_files(polfock::write_splittings_outputs(
          result, config, resolve_outdir(config, out_dir, "splittings")));
    } else if (cmd_down->parsed()) {
      config.output_dir = resolve_outdir(config, out_dir, "downconversion");
      const auto result = polfock::run_downconversion(config);
      print_files(
          polfock::write_downconversion_outputs(result, config, config.output_dir));
    } else if (cmd_diss->parsed()) {
      config.output_dir = resolve_outdir(config, out_dir, "dissociation");
      const auto result = polfock::run_dissociation(config);
      print_files(
          polfock::write_dissociation_outputs(result, config, config.output_dir));
    }
    return 0;
  } catch (const polfock::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const polfock::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
