#pragma once

// Transfer physics and peer scoring. Every function here is pure.

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "hetwet/model.hpp"

namespace hetwet {

/// Percent of the receiver's full charge delivered per minute when `sender`
/// charges `receiver`. The receiver's battery energy in Wh (C*V/1000) divided
/// by the sender's Qi output gives the hours for a full charge.
inline double charging_rate(const DeviceProfile& sender, const DeviceProfile& receiver) {
  if (!sender.valid() || !receiver.valid())
    throw std::domain_error("charging_rate: profile fields must be positive");
  const double hours_to_full =
      (receiver.capacity_mah * receiver.voltage_v) / (1000.0 * sender.qi_capacity_wh);
  return 100.0 / (60.0 * hours_to_full);
}

inline constexpr double max_transferable(double rate, double overlap_minutes) noexcept {
  return rate * overlap_minutes;
}

inline constexpr double energy_loss(double beta, double transferred) noexcept {
  return beta * transferred;
}

/// Change in energy variation distance if `sender` hands `transferred` units
/// to `receiver`. Literal mode keeps the signed bracket terms; Absolute mode
/// takes magnitudes so that overshooting the average is penalised.
inline double evd_change(double sender_energy, double receiver_energy, double avg_energy,
                         double beta, double transferred, EvdMode mode) noexcept {
  const double sender_term = (sender_energy - transferred) - avg_energy;
  const double receiver_term = avg_energy - (receiver_energy + (1.0 - beta) * transferred);
  if (mode == EvdMode::Absolute) return std::abs(sender_term) + std::abs(receiver_term);
  return sender_term + receiver_term;
}

struct PeerEvaluation {
  NodeId peer{0};
  double rate{0.0};
  double transferable{0.0};
  double loss{0.0};
  double evd_change{0.0};
  double selectivity{0.0};
};

/// Denominator sums at or below this are treated as degenerate.
inline constexpr double kSelectivityEpsilon = 1e-12;

namespace detail {

struct SelectivitySums {
  double loss{0.0};
  double evd{0.0};
};

inline SelectivitySums selectivity_sums(std::span<const PeerEvaluation> all) noexcept {
  SelectivitySums s;
  for (const auto& c : all) {
    s.loss += c.loss;
    s.evd += c.evd_change;
  }
  return s;
}

inline double selectivity_from_sums(const PeerEvaluation& c, const SelectivitySums& s,
                                    double w_el, double w_evd) noexcept {
  const double loss_term = s.loss > kSelectivityEpsilon ? c.loss / s.loss : 0.0;
  // Literal-mode EVD values can go negative; fall back to the raw value.
  const double evd_term = s.evd > kSelectivityEpsilon ? c.evd_change / s.evd : c.evd_change;
  return w_el * loss_term + w_evd * evd_term;
}

}  // namespace detail

/// Weighted, candidate-set-normalised score of one peer. Lower is better.
inline double selectivity_factor(const PeerEvaluation& candidate,
                                 std::span<const PeerEvaluation> all_candidates, double w_el,
                                 double w_evd) noexcept {
  return detail::selectivity_from_sums(candidate, detail::selectivity_sums(all_candidates),
                                       w_el, w_evd);
}

/// Fills in `selectivity` for every candidate in place.
inline void score_candidates(std::span<PeerEvaluation> candidates, double w_el,
                             double w_evd) noexcept {
  const auto sums = detail::selectivity_sums(candidates);
  for (auto& c : candidates) c.selectivity = detail::selectivity_from_sums(c, sums, w_el, w_evd);
}

/// Energy level every node should settle on once the network is balanced
/// under a per-transfer loss factor `beta`, scaled into energy units.
/// (-f + sqrt(f)) / beta with f = 1 - beta is evaluated as sqrt(f) / (1 + sqrt(f)),
/// which is the same value without the 0/0 at beta == 0 or the cancellation
/// near it; the beta -> 0 limit 1/2 falls out directly.
inline double target_balance_level(double beta, double energy_scale = 100.0) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::domain_error("target_balance_level: beta must lie in [0, 1)");
  const double root = std::sqrt(1.0 - beta);
  return energy_scale * root / (1.0 + root);
}

}  // namespace hetwet
