#include <iostream>

#include <CLI11.hpp>

#include "pe/commands.hpp"
#include "pe/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Ekman-spiral primitive-equation simulator and verification harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pe::code_version()));

  std::string config;
  std::string out;
  std::string out_dir;
  int samples = 101;
  pe::Overrides ov;

  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Configuration file (key = value)")->required();
  };
  auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", ov.seed, "Random seed override"); };

  CLI::App* check = app.add_subcommand("check", "Ekman coefficients and the smallness verdict");
  add_config(check);

  CLI::App* ekman = app.add_subcommand("ekman", "Sample the Ekman spiral to CSV");
  add_config(ekman);
  ekman->add_option("--samples", samples, "Number of depths, >= 2");
  ekman->add_option("--out", out, "Output CSV path (stdout if omitted)");

  CLI::App* simulate = app.add_subcommand("simulate", "Time-march and write diagnostics");
  add_config(simulate);
  simulate->add_option("--out-dir", out_dir, "Output directory")->required();
  add_seed(simulate);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Estimate the spectral bound of the linearization");
  add_config(spectrum);
  spectrum->add_option("--horizon", ov.horizon, "Propagator horizon (default 1/|f|)");
  spectrum->add_option("--krylov", ov.krylov, "Krylov dimension, >= 2");
  spectrum->add_option("--tol", ov.tol, "Ritz residual tolerance");
  add_seed(spectrum);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant checks");
  add_config(verify);
  add_seed(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pe::kExitOk : pe::kExitValidation;
  }

  try {
    const pe::RunConfig cfg = pe::apply_overrides(pe::load_config(config), ov);
    if (check->parsed()) return pe::cmd_check(cfg, std::cout);
    if (ekman->parsed()) return pe::cmd_ekman(cfg, samples, out, std::cout);
    if (simulate->parsed()) return pe::cmd_simulate(cfg, out_dir, std::cout);
    if (spectrum->parsed()) return pe::cmd_spectrum(cfg, std::cout);
    if (verify->parsed()) return pe::cmd_verify(cfg, std::cout);
  } catch (const pe::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pe::kExitValidation;
  } catch (const pe::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pe::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pe::kExitRuntime;
  }
  return pe::kExitRuntime;
}
