// Command-line front end: run, models, check, sweep.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mtqite/config.hpp"
#include "mtqite/error.hpp"
#include "mtqite/experiments.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

mtqite::ExperimentConfig load(const std::string& path, const std::optional<std::uint64_t>& seed) {
  auto cfg = mtqite::load_config(path);
  if (seed) {
    cfg.seed = *seed;
    cfg.source["seed"] = *seed;
  }
  return cfg;
}

void print_models() {
  std::cout << "tfim       n, h_over_j         -sum Z_i Z_i+1 + h/J sum X_i (open chain)\n"
               "xxz        n, j                sum X_i X_i+1 + Y_i Y_i+1 + J Z_i Z_i+1 (open chain)\n"
               "hubbard    sites, u            Jordan-Wigner Hubbard chain, unit hopping, 2*sites qubits\n"
               "molecule   fcidump             FCIDUMP integrals, Jordan-Wigner, UCCGSD pool by default\n"
               "pauli_sum  terms               explicit [[coeff, label], ...] list\n";
}

// Config problems found before any run starts exit 1, everything after exits 2.
template <class Prepare, class Run>
int guarded(Prepare&& prepare, Run&& run) {
  try {
    auto prepared = prepare();
    try {
      run(prepared);
    } catch (const mtqite::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QITE and MT-QITE statevector experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Override the config seed");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a config and write CSV + JSON summary");
  run->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "Do not print the summary");

  app.add_subcommand("models", "List model builders and their parameters");

  auto* check = app.add_subcommand("check", "Validate a config and print derived quantities");
  check->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);

  std::string param;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Repeat a config over values of one parameter");
  sweep->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Dotted config key, e.g. model.u")->required();
  sweep->add_option("--values", values, "Values to substitute")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (app.got_subcommand("models")) {
    print_models();
    return 0;
  }
  if (app.got_subcommand("check")) {
    return guarded([&] { return mtqite::prepare(load(config_path, seed)); },
                   [&](const mtqite::PreparedExperiment& p) { std::cout << mtqite::describe(p).dump(2) << '\n'; });
  }
  if (app.got_subcommand("run")) {
    return guarded([&] { return mtqite::prepare(load(config_path, seed)); },
                   [&](const mtqite::PreparedExperiment& p) {
                     const auto res = mtqite::run_prepared(p);
                     mtqite::write_outputs(p.config, res);
                     if (!quiet) std::cout << res.summary.dump(2) << '\n';
                     std::cerr << "wrote " << p.config.csv_path().string() << " and "
                               << p.config.json_path().string() << '\n';
                   });
  }
  if (app.got_subcommand("sweep")) {
    return guarded([&] { return load(config_path, seed); },
                   [&](const mtqite::ExperimentConfig& cfg) {
                     const auto sw = mtqite::sweep(cfg, param, values);
                     for (std::size_t i = 0; i < sw.values.size(); ++i) {
                       std::cout << param << '=' << sw.values[i] << ": "
                                 << sw.results[i].summary["algorithms"].dump() << '\n';
                     }
                   });
  }
  return 0;
}
