#include <CLI11.hpp>
#include <iostream>

#include "wkt/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wave kinetic theory experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "JSON config")->required();

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("suite", suite, "diagrams | cumulants")->required();

  std::string manifest_path, selector;
  auto* exp = app.add_subcommand("export", "list plot-ready data files from a manifest");
  exp->add_option("manifest", manifest_path)->required();
  exp->add_option("selector", selector)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      const wkt::ResultManifest man = wkt::run_experiment(config_path);
      for (const auto& [name, ok] : man.checks)
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
      std::cout << "manifest_hash=" << man.manifest_hash << "\n";
      return man.all_passed() ? 0 : 1;
    }
    if (verify->parsed()) {
      bool all = true;
      for (const auto& [name, ok] : wkt::verify_suite(suite)) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        all = all && ok;
      }
      return all ? 0 : 1;
    }
    if (exp->parsed()) {
      for (const auto& f : wkt::export_plot_data(manifest_path, selector)) std::cout << f << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
