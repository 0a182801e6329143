#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetwet/config.hpp"
#include "hetwet/engine.hpp"
#include "hetwet/metrics.hpp"
#include "hetwet/protocols.hpp"
#include "json.hpp"

namespace hetwet {

inline constexpr std::string_view kVersion = "0.1.0";

/// Per-iteration mean and sample standard deviation across repetitions.
struct BatchSummary {
  std::vector<double> mean_total_energy, std_total_energy;
  std::vector<double> mean_variation_distance, std_variation_distance;
  std::vector<double> mean_meetings, std_meetings;
  std::vector<double> mean_balanced_count, std_balanced_count;
  std::vector<double> mean_cumulative_loss, std_cumulative_loss;
  double final_balanced_mean{0.0};
};

inline BatchSummary summarize(std::span<const RunResult> runs) {
  BatchSummary s;
  if (runs.empty()) return s;
  const std::size_t rows = runs.front().rows.size();
  for (const auto& r : runs)
    if (r.rows.size() != rows) throw std::invalid_argument("runs differ in length");

  auto column = [&](auto field, std::vector<double>& mean, std::vector<double>& sd) {
    mean.assign(rows, 0.0);
    sd.assign(rows, 0.0);
    const double n = static_cast<double>(runs.size());
    for (std::size_t t = 0; t < rows; ++t) {
      double sum = 0.0;
      for (const auto& r : runs) sum += static_cast<double>(field(r.rows[t]));
      const double m = sum / n;
      double ss = 0.0;
      for (const auto& r : runs) {
        const double d = static_cast<double>(field(r.rows[t])) - m;
        ss += d * d;
      }
      mean[t] = m;
      sd[t] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }
  };
  column([](const MetricsRow& r) { return r.total_energy; }, s.mean_total_energy,
         s.std_total_energy);
  column([](const MetricsRow& r) { return r.variation_distance; }, s.mean_variation_distance,
         s.std_variation_distance);
  column([](const MetricsRow& r) { return r.meetings; }, s.mean_meetings, s.std_meetings);
  column([](const MetricsRow& r) { return r.balanced_count; }, s.mean_balanced_count,
         s.std_balanced_count);
  column([](const MetricsRow& r) { return r.cumulative_loss; }, s.mean_cumulative_loss,
         s.std_cumulative_loss);
  s.final_balanced_mean = s.mean_balanced_count.back();
  return s;
}

inline nlohmann::json to_json(const BatchSummary& s) {
  return {{"mean_total_energy", s.mean_total_energy},
          {"std_total_energy", s.std_total_energy},
          {"mean_variation_distance", s.mean_variation_distance},
          {"std_variation_distance", s.std_variation_distance},
          {"mean_meetings", s.mean_meetings},
          {"std_meetings", s.std_meetings},
          {"mean_balanced_count", s.mean_balanced_count},
          {"std_balanced_count", s.std_balanced_count},
          {"mean_cumulative_loss", s.mean_cumulative_loss},
          {"std_cumulative_loss", s.std_cumulative_loss},
          {"final_balanced_mean", s.final_balanced_mean}};
}

inline void write_metrics_csv(std::ostream& os, std::span<const RunResult> runs) {
  os << kMetricsCsvHeader << '\n';
  for (const auto& r : runs)
    for (const auto& row : r.rows) write_metrics_row(os, r.run_id, to_string(r.protocol), row);
}

struct ExperimentOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> repetitions;
  Execution execution{Execution::Sequential};
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace detail

/// Runs every protocol on the same config and writes `<protocol>.csv`,
/// `summary.json` and `manifest.json` under `out_dir`. Throws on invalid
/// config or I/O failure.
inline void write_experiment(const ExperimentConfig& ec, std::span<const ProtocolKind> protocols,
                             const std::filesystem::path& out_dir,
                             Execution exec = Execution::Sequential) {
  if (auto errs = validate_config(ec.sim); !errs.empty()) throw ConfigError(errs);
  if (auto errs = validate_scenario(ec.scenario); !errs.empty()) throw ConfigError(errs);
  if (ec.repetitions == 0) throw ConfigError({"repetitions must be >= 1"});
  if (protocols.empty()) throw std::invalid_argument("no protocols selected");

  std::error_code fs_err;
  std::filesystem::create_directories(out_dir, fs_err);
  if (fs_err)
    throw std::runtime_error("cannot create '" + out_dir.string() + "': " + fs_err.message());

  nlohmann::json summary = nlohmann::json::object();
  for (ProtocolKind p : protocols) {
    const auto runs =
        run_batch(ec.sim, ec.scenario, p, ec.sim.rng_seed, ec.repetitions, exec);
    std::ostringstream csv;
    write_metrics_csv(csv, runs);
    detail::write_file(out_dir / (std::string(to_string(p)) + ".csv"), csv.str());
    summary[std::string(to_string(p))] = to_json(summarize(runs));
  }
  detail::write_file(out_dir / "summary.json", summary.dump(2) + "\n");

  std::ostringstream cfg_text;
  write_experiment_config(cfg_text, ec);
  std::istringstream cfg_in(cfg_text.str());
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = parse_key_values(cfg_in);
  manifest["scenario"] = ec.scenario.label();
  manifest["protocols"] = nlohmann::json::array();
  for (ProtocolKind p : protocols) manifest["protocols"].push_back(to_string(p));
  manifest["base_seed"] = ec.sim.rng_seed;
  manifest["repetitions"] = ec.repetitions;
  manifest["run_seeds"] = nlohmann::json::array();
  for (std::size_t k = 0; k < ec.repetitions; ++k)
    manifest["run_seeds"].push_back(repetition_seed(ec.sim.rng_seed, k));
  detail::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

inline ExperimentConfig apply_options(ExperimentConfig ec, const ExperimentOptions& opt) {
  if (opt.seed) ec.sim.rng_seed = *opt.seed;
  if (opt.repetitions) ec.repetitions = *opt.repetitions;
  return ec;
}

/// File-driven entry point. Returns a process exit status; failures are
/// reported on `err`.
inline int run_experiment(const std::string& config_path, std::span<const ProtocolKind> protocols,
                          const std::filesystem::path& out_dir,
                          const ExperimentOptions& opt = {}, std::ostream& err = std::cerr) {
  try {
    const auto ec = apply_options(load_experiment_config(config_path), opt);
    write_experiment(ec, protocols, out_dir, opt.execution);
    return 0;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const ConfigParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// The six heterogeneity scenarios, each into `out_dir/<scenario label>/`.
/// Every other setting comes from `base`.
inline void write_sweep(const ExperimentConfig& base, std::span<const ProtocolKind> protocols,
                        const std::filesystem::path& out_dir,
                        Execution exec = Execution::Sequential) {
  for (const auto& scenario : sweep_scenarios()) {
    ExperimentConfig ec = base;
    ec.scenario = scenario;
    ec.scenario.voltage_v = base.scenario.voltage_v;
    write_experiment(ec, protocols, out_dir / scenario.label(), exec);
  }
}

}  // namespace hetwet
