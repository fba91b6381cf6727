#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wkt/experiment.hpp"

using namespace wkt;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p.string();
}

}  // namespace

TEST_CASE("unknown keys are a hard error, listed by name") {
  const std::string cfg = R"({"experiment":"wke","bogus_key":1,"another":2})";
  try {
    run_experiment_json(cfg, tmp_dir("wkt_exp_err"));
    CHECK(false);
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus_key") != std::string::npos);
    CHECK(msg.find("another") != std::string::npos);
  }
}

TEST_CASE("wke pipeline writes outputs and a deterministic manifest") {
  const std::string cfg = R"({
    "experiment": "wke",
    "seeds": {"master": 7},
    "torus": {"beta": [1.1, 1.4]},
    "n_in": {"family": "gaussian_bump", "amplitude": 1.0, "sigma": 0.9},
    "delta": 0.05,
    "kinetic_grid": {"d": 2, "k_max": 2.5, "points_per_axis": 11},
    "quadrature": {"mode": "deterministic", "kernel": "triangular", "c_eps": 2.0},
    "wke": {"dt_kinetic": 0.00625, "snapshot_every": 4}
  })";
  const auto dir = tmp_dir("wkt_exp_wke");
  const auto man1 = run_experiment_json(cfg, dir);
  CHECK(man1.all_passed());
  CHECK(!man1.files.empty());
  for (const auto& f : man1.files) {
    CHECK(fs::exists(f));
    // the config hash is stamped in the header line
    std::ifstream in(f);
    std::string first;
    std::getline(in, first);
    CHECK(first.find(std::to_string(man1.config_hash)) != std::string::npos);
  }
  CHECK(fs::exists(fs::path(dir) / "manifest.json"));
  const auto man2 = run_experiment_json(cfg, tmp_dir("wkt_exp_wke2"));
  CHECK(man1.manifest_hash == man2.manifest_hash);  // bit-identical rerun
}

TEST_CASE("verify suites") {
  for (const auto& [name, ok] : verify_suite("diagrams")) CHECK(ok);
  for (const auto& [name, ok] : verify_suite("cumulants")) CHECK(ok);
  CHECK_THROWS(verify_suite("nonsense"));
}

TEST_CASE("density pipeline consistency checks") {
  const std::string cfg = R"({
    "experiment": "density",
    "seeds": {"master": 3},
    "torus": {"beta": [1.2, 1.5]},
    "law": {"kind": "gaussian"},
    "n_in": {"family": "gaussian_bump", "amplitude": 1.0, "sigma": 0.9},
    "delta": 0.12,
    "kinetic_grid": {"d": 2, "k_max": 2.5, "points_per_axis": 13},
    "quadrature": {"c_eps": 1.6},
    "density": {"cells": 256}
  })";
  const auto man = run_experiment_json(cfg, tmp_dir("wkt_exp_density"));
  CHECK(man.checks.at("density_mass_conserved_1e-6"));
  CHECK(man.checks.at("second_moment_tracks_n"));
}

TEST_CASE("hierarchy pipeline residual report") {
  const std::string cfg = R"({
    "experiment": "hierarchy",
    "seeds": {"master": 4},
    "torus": {"beta": [1.15, 1.35]},
    "delta": 0.05,
    "kinetic_grid": {"d": 2, "k_max": 2.5, "points_per_axis": 11},
    "quadrature": {"c_eps": 2.0},
    "hierarchy": {"weights": [0.5, 0.5], "sigmas": [0.8, 1.2], "order": 2}
  })";
  const auto man = run_experiment_json(cfg, tmp_dir("wkt_exp_hier"));
  CHECK(man.checks.at("admissible_along_flow"));
  bool found_resid = false;
  for (const auto& f : man.files)
    if (f.find("wkh_residual") != std::string::npos) found_resid = true;
  CHECK(found_resid);
}

TEST_CASE("export selector") {
  const std::string cfg = R"({
    "experiment": "wke",
    "torus": {"beta": [1.0, 1.0]},
    "kinetic_grid": {"d": 2, "k_max": 2.0, "points_per_axis": 9},
    "delta": 0.02,
    "wke": {"dt_kinetic": 0.005}
  })";
  const auto dir = tmp_dir("wkt_exp_export");
  run_experiment_json(cfg, dir);
  const auto files = export_plot_data((fs::path(dir) / "manifest.json").string(), "summary");
  CHECK(files.size() == 1);
  CHECK_THROWS(export_plot_data((fs::path(dir) / "manifest.json").string(), "no_such_series"));
}

TEST_CASE("fnv1a is stable") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") != fnv1a("b"));
}
