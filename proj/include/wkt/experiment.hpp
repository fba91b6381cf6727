#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wkt {

// FNV-1a over the canonical serialized form; used to stamp outputs.
std::uint64_t fnv1a(const std::string& s);

struct ResultManifest {
  std::uint64_t config_hash = 0;
  std::string code_version;
  std::uint64_t master_seed = 0;
  std::vector<std::string> files;
  std::map<std::string, bool> checks;
  double wall_clock_s = 0;          // excluded from the manifest hash
  std::uint64_t manifest_hash = 0;  // over deterministic fields only

  bool all_passed() const;
  std::string to_json() const;
  void finalize();  // computes manifest_hash
};

// Parses the config, dispatches to the named pipeline, writes outputs and the
// manifest under the config's output directory. Unknown keys are a hard
// error listing them.
ResultManifest run_experiment(const std::string& config_path);
ResultManifest run_experiment_json(const std::string& config_text, const std::string& out_dir_override = "");

// Named verification suites (also reachable through configs): returns
// pass/fail per check.
std::map<std::string, bool> verify_suite(const std::string& name);

// Long-format CSV series from a manifest for external plotting.
std::vector<std::string> export_plot_data(const std::string& manifest_path,
                                          const std::string& selector);

}  // namespace wkt
