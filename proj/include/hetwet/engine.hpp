#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hetwet/charging.hpp"
#include "hetwet/metrics.hpp"
#include "hetwet/mobility.hpp"
#include "hetwet/model.hpp"
#include "hetwet/protocols.hpp"
#include "hetwet/rng.hpp"
#include "hetwet/scenario.hpp"

namespace hetwet {

struct RunResult {
  std::size_t run_id{0};
  ProtocolKind protocol{ProtocolKind::HetWET};
  std::uint64_t seed{0};
  std::vector<MetricsRow> rows;
  std::vector<double> final_energies;

  friend bool operator==(const RunResult& l, const RunResult& r) {
    auto same_rows = [](const MetricsRow& a, const MetricsRow& b) {
      return a.iteration == b.iteration && a.total_energy == b.total_energy &&
             a.variation_distance == b.variation_distance && a.meetings == b.meetings &&
             a.balanced_count == b.balanced_count && a.cumulative_loss == b.cumulative_loss;
    };
    return l.run_id == r.run_id && l.protocol == r.protocol && l.seed == r.seed &&
           l.final_energies == r.final_energies &&
           std::equal(l.rows.begin(), l.rows.end(), r.rows.begin(), r.rows.end(), same_rows);
  }
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::vector<std::string>& violations)
      : std::invalid_argument(join(violations)), violations_(violations) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : "; ") + e;
    return s;
  }
  std::vector<std::string> violations_;
};

/// Everything that happens in one iteration, handed to an optional observer.
struct IterationView {
  std::size_t iteration;
  const IterationPlacement& placement;
  std::span<const Contact> contacts;
  std::span<const NodeState> before;
  std::span<const NodeState> after;
  const MatchingOutcome& outcome;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Fresh network: profiles allocated by largest-remainder counts and then
/// shuffled across node ids, energies i.i.d. uniform over [0, kMaxEnergy].
inline std::vector<NodeState> initialize(const SimConfig& cfg, const ScenarioSpec& scenario,
                                         Rng& rng) {
  const auto classes = scenario_classes(scenario);
  std::vector<double> fractions;
  for (const auto& c : classes) fractions.push_back(c.fraction);
  const auto counts = apportion(fractions, cfg.num_nodes);

  std::vector<std::size_t> class_of;
  class_of.reserve(cfg.num_nodes);
  for (std::size_t k = 0; k < counts.size(); ++k) class_of.insert(class_of.end(), counts[k], k);
  std::shuffle(class_of.begin(), class_of.end(), rng);

  std::uniform_real_distribution<double> pick_energy(0.0, kMaxEnergy);
  std::vector<NodeState> nodes(cfg.num_nodes);
  for (NodeId id = 0; id < cfg.num_nodes; ++id) {
    nodes[id].id = id;
    nodes[id].profile = classes[class_of[id]].profile;
    nodes[id].energy = pick_energy(rng);
  }
  return nodes;
}

inline MetricsRow measure(std::span<const NodeState> nodes, std::size_t iteration,
                          std::size_t meetings, double cumulative_loss, double e_star,
                          double tolerance) {
  MetricsRow row;
  row.iteration = iteration;
  row.total_energy = total_energy(nodes);
  row.variation_distance = variation_distance(nodes).value_or(std::nan(""));
  row.meetings = meetings;
  row.balanced_count = balanced_count(nodes, e_star, tolerance);
  row.cumulative_loss = cumulative_loss;
  return row;
}

/// Placement of iteration `t` for a run seeded with `seed`. Depends on
/// (cfg, seed, t) only.
inline IterationPlacement placement_for(const SimConfig& cfg, std::uint64_t seed, std::size_t t) {
  Rng mobility_rng = make_stream(seed, stream::kMobility, t);
  return place_nodes(mobility_rng, cfg, t);
}

/// One seeded run. Row 0 is the untouched initial state; each later row is
/// taken after place -> contacts -> protocol step. The mobility stream is a
/// function of (seed, iteration) only, so every protocol sees the same
/// placements for a given seed.
inline RunResult run(const SimConfig& cfg, const ScenarioSpec& scenario, ProtocolKind protocol,
                     std::uint64_t seed, std::size_t run_id = 0,
                     const IterationObserver& observer = {}) {
  if (auto errs = validate_config(cfg); !errs.empty()) throw ConfigError(errs);
  if (auto errs = validate_scenario(scenario); !errs.empty()) throw ConfigError(errs);

  Rng init_rng = make_stream(seed, stream::kInit);
  auto nodes = initialize(cfg, scenario, init_rng);
  const double e_star = target_balance_level(cfg.beta, cfg.energy_scale);

  RunResult result;
  result.run_id = run_id;
  result.protocol = protocol;
  result.seed = seed;
  result.rows.reserve(cfg.iterations + 1);

  double cumulative_loss = 0.0;
  result.rows.push_back(measure(nodes, 0, 0, 0.0, e_star, cfg.completion_tolerance));

  std::vector<NodeState> before;
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    const auto placement = placement_for(cfg, seed, t);
    for (NodeId id = 0; id < nodes.size(); ++id) {
      nodes[id].location = placement.assignments[id].location;
      nodes[id].stay_remaining = placement.assignments[id].stay_minutes;
    }
    const auto contacts = derive_contacts(placement, cfg.t_min_minutes);

    if (observer) before = nodes;
    Rng protocol_rng = make_stream(seed, stream::kProtocol, t);
    const auto outcome = protocol_step(protocol, nodes, contacts, cfg, e_star, protocol_rng, t);
    for (const auto& x : outcome.exchanges) cumulative_loss += x.loss;

    result.rows.push_back(measure(nodes, t, outcome.meetings_count, cumulative_loss, e_star,
                                  cfg.completion_tolerance));
    if (observer) observer(IterationView{t, placement, contacts, before, nodes, outcome});
  }

  result.final_energies.reserve(nodes.size());
  for (const auto& n : nodes) result.final_energies.push_back(n.energy);
  return result;
}

inline std::uint64_t repetition_seed(std::uint64_t base_seed, std::size_t repetition) noexcept {
  return mix_seed(base_seed, repetition);
}

enum class Execution { Sequential, Parallel };

/// `repetitions` independent runs; repetition k uses repetition_seed(base, k)
/// and lands at index k regardless of execution order.
inline std::vector<RunResult> run_batch(const SimConfig& cfg, const ScenarioSpec& scenario,
                                        ProtocolKind protocol, std::uint64_t base_seed,
                                        std::size_t repetitions,
                                        Execution exec = Execution::Sequential,
                                        unsigned workers = 0) {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be >= 1");
  if (auto errs = validate_config(cfg); !errs.empty()) throw ConfigError(errs);

  std::vector<RunResult> results(repetitions);
  auto one = [&](std::size_t k) {
    results[k] = run(cfg, scenario, protocol, repetition_seed(base_seed, k), k);
  };

  if (exec == Execution::Sequential) {
    for (std::size_t k = 0; k < repetitions; ++k) one(k);
    return results;
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, repetitions));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < repetitions && !failed; k = next++) {
          try {
            one(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace hetwet
