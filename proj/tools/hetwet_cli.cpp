// hetwet: command-line front end for the P2P energy-transfer simulator.
//
//   hetwet run      --config exp.cfg --protocol all --runs 50 --out results/
//   hetwet sweep    --config exp.cfg --out results/sweep
//   hetwet validate --config exp.cfg

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hetwet/hetwet.hpp"

namespace {

using namespace hetwet;

std::vector<ProtocolKind> resolve_protocols(const std::vector<std::string>& names) {
  std::vector<ProtocolKind> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.assign(std::begin(kAllProtocols), std::end(kAllProtocols));
      continue;
    }
    auto p = parse_protocol(n);
    if (!p) throw CLI::ValidationError("--protocol", "unknown protocol '" + n + "'");
    out.push_back(*p);
  }
  return out;
}

ExperimentConfig load_or_default(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_experiment_config(path);
}

void write_trace(const ExperimentConfig& ec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_placement_trace_header(out);
  const auto seed = repetition_seed(ec.sim.rng_seed, 0);
  for (std::size_t t = 1; t <= ec.sim.iterations; ++t)
    write_placement_trace(out, placement_for(ec.sim, seed, t));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Peer-to-peer wireless energy transfer simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> protocol_names{"all"};
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out_dir;
  bool parallel = false;
  std::string trace_path;

  auto* run_cmd = app.add_subcommand("run", "Run every selected protocol on one scenario");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the six heterogeneity scenarios");
  auto* validate_cmd = app.add_subcommand("validate", "Check a config file and exit");

  for (auto* cmd : {run_cmd, sweep_cmd}) {
    cmd->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--protocol", protocol_names, "hetwet, pgo, poa, mobiweb or all")
        ->delimiter(',');
    cmd->add_option("--seed", seed, "Base seed (overrides rng_seed)");
    cmd->add_option("--runs", runs, "Repetitions per protocol (overrides repetitions)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", out_dir, "Output directory")->required();
    cmd->add_flag("--parallel", parallel, "Spread repetitions over worker threads");
  }
  run_cmd->add_option("--placement-trace", trace_path,
                      "Also write the mobility trace of repetition 0 as CSV");
  validate_cmd->add_option("--config", config_path, "key = value config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      const auto ec = load_experiment_config(config_path);
      auto errs = validate_config(ec.sim);
      for (auto& e : validate_scenario(ec.scenario)) errs.push_back(e);
      if (ec.repetitions == 0) errs.emplace_back("repetitions must be >= 1");
      for (const auto& e : errs) std::cerr << "invalid: " << e << '\n';
      if (!errs.empty()) return 2;
      std::cout << "ok\n";
      return 0;
    }

    const auto protocols = resolve_protocols(protocol_names);
    const Execution exec = parallel ? Execution::Parallel : Execution::Sequential;
    const ExperimentOptions opt{seed, runs, exec};

    if (run_cmd->parsed()) {
      if (config_path.empty()) {
        write_experiment(apply_options(ExperimentConfig{}, opt), protocols, out_dir, exec);
      } else {
        if (int rc = run_experiment(config_path, protocols, out_dir, opt); rc != 0) return rc;
      }
      if (!trace_path.empty())
        write_trace(apply_options(load_or_default(config_path), opt), trace_path);
      return 0;
    }

    write_sweep(apply_options(load_or_default(config_path), opt), protocols, out_dir, exec);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const ConfigParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
