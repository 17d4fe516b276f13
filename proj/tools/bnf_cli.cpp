#include "bnf/errors.hpp"
#include "bnf/runner.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff normal forms: classical, semiclassical and quantum routes, trace invariants, oracle checks"};
  bnf::RunOptions opts;
  app.add_option("--config", opts.config_path, "problem config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", opts.threads, "worker threads for independent grid points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--tolerance-overrides", opts.tolerance_overrides, "JSON map of tolerance names to values")
      ->check(CLI::ExistingFile);
  app.fallthrough();
  app.require_subcommand(1, 1);
  for (const auto& name : bnf::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bnf::kExitValidation;
  }
  for (int i = 0; i < argc; ++i) opts.command_line += (i ? " " : "") + std::string(argv[i]);
  return bnf::run(app.get_subcommands().front()->get_name(), opts, std::cout, std::cerr);
}
