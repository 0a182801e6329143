#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetwet/charging.hpp"
#include "hetwet/metrics.hpp"
#include "hetwet/model.hpp"
#include "hetwet/rng.hpp"

namespace hetwet {

enum class ProtocolKind { HetWET, PGO, POA, MobiWEB };

inline constexpr ProtocolKind kAllProtocols[] = {ProtocolKind::HetWET, ProtocolKind::PGO,
                                                 ProtocolKind::POA, ProtocolKind::MobiWEB};

inline std::string_view to_string(ProtocolKind p) noexcept {
  switch (p) {
    case ProtocolKind::HetWET: return "hetwet";
    case ProtocolKind::PGO: return "pgo";
    case ProtocolKind::POA: return "poa";
    case ProtocolKind::MobiWEB: return "mobiweb";
  }
  return "unknown";
}

inline std::optional<ProtocolKind> parse_protocol(std::string_view name) noexcept {
  for (auto p : kAllProtocols)
    if (to_string(p) == name) return p;
  return std::nullopt;
}

struct MatchingOutcome {
  std::vector<ExchangeRecord> exchanges;
  std::vector<NodeId> newly_balanced;
  std::size_t meetings_count{0};
};

/// A peer that is reachable from the initiator this iteration and sits on the
/// other side of the reference level. Donor and receiver are already resolved.
struct Candidate {
  NodeId peer{0};
  NodeId donor{0};
  NodeId receiver{0};
  double overlap_minutes{0.0};
  double rate{0.0};

  double cap() const noexcept { return max_transferable(rate, overlap_minutes); }
};

namespace detail {

struct Neighbor {
  NodeId peer;
  double overlap_minutes;
};

inline void check_node_ids(std::span<const NodeState> nodes) {
  for (NodeId i = 0; i < nodes.size(); ++i)
    if (nodes[i].id != i) throw std::invalid_argument("node ids must equal their index");
}

// Neighbour lists come out sorted by peer id because contacts are sorted.
inline std::vector<std::vector<Neighbor>> adjacency(std::size_t n,
                                                    std::span<const Contact> contacts) {
  std::vector<std::vector<Neighbor>> adj(n);
  for (const auto& c : contacts) {
    if (c.a() >= n || c.b() >= n) throw std::out_of_range("contact references unknown node");
    adj[c.a()].push_back({c.b(), c.overlap_minutes()});
    adj[c.b()].push_back({c.a(), c.overlap_minutes()});
  }
  for (auto& list : adj)
    std::sort(list.begin(), list.end(),
              [](const Neighbor& l, const Neighbor& r) { return l.peer < r.peer; });
  return adj;
}

// Moves `amount` from donor to receiver, trimmed so that the donor never goes
// below zero and the receiver never exceeds kMaxEnergy.
inline ExchangeRecord transfer(std::span<NodeState> nodes, NodeId donor, NodeId receiver,
                               double amount, double beta, std::size_t iteration) {
  auto& d = nodes[donor];
  auto& r = nodes[receiver];
  amount = std::min({amount, d.energy, (kMaxEnergy - r.energy) / (1.0 - beta)});
  amount = std::max(amount, 0.0);

  ExchangeRecord rec;
  rec.sender = donor;
  rec.receiver = receiver;
  rec.sent = amount;
  rec.loss = energy_loss(beta, amount);
  rec.received = amount - rec.loss;
  rec.iteration = iteration;

  d.energy = std::clamp(d.energy - rec.sent, 0.0, kMaxEnergy);
  r.energy = std::clamp(r.energy + rec.received, 0.0, kMaxEnergy);
  return rec;
}

inline void mark_if_balanced(std::span<NodeState> nodes, NodeId id, double e_star,
                             double tolerance, MatchingOutcome& out) {
  auto& n = nodes[id];
  if (!n.complete() && std::abs(n.energy - e_star) <= tolerance) {
    n.status = Status::Complete;
    out.newly_balanced.push_back(id);
  }
}

// The node of the pair closer to the target lands on it unless the contact
// cap binds. An above-target node gives away its excess; a below-target node
// needs its deficit grossed up for the loss.
inline double balancing_amount(const Candidate& c, NodeId closest, double closest_energy,
                               double e_star, double beta) noexcept {
  const double needed = closest == c.donor ? closest_energy - e_star
                                           : (e_star - closest_energy) / (1.0 - beta);
  return std::min(c.cap(), needed);
}

}  // namespace detail

/// Shared driver for the protocols that steer the node closest to `e_star`
/// onto it. Initiators are visited once each, closest first (ties: lower id).
/// For every initiator still unmatched, the candidate set is built from its
/// unmatched, Incomplete contacts on the opposite side of `e_star`, and
/// `choose(initiator, candidates)` returns the index of the selected peer.
/// Complete nodes never take part.
template <class ChoosePeer>
MatchingOutcome closest_first_matching(std::span<NodeState> nodes,
                                       std::span<const Contact> contacts, const SimConfig& cfg,
                                       double e_star, std::size_t iteration, ChoosePeer&& choose) {
  detail::check_node_ids(nodes);
  MatchingOutcome out;
  if (contacts.empty()) return out;

  const auto adj = detail::adjacency(nodes.size(), contacts);
  std::vector<NodeId> order;
  for (const auto& n : nodes)
    if (!n.complete()) order.push_back(n.id);
  std::stable_sort(order.begin(), order.end(), [&](NodeId l, NodeId r) {
    return std::abs(e_star - nodes[l].energy) < std::abs(e_star - nodes[r].energy);
  });

  std::vector<bool> matched(nodes.size(), false);
  std::vector<Candidate> candidates;
  for (NodeId i : order) {
    if (matched[i]) continue;
    const double ei = nodes[i].energy;
    const bool above = ei > e_star;
    const bool below = ei < e_star;
    if (!above && !below) continue;

    candidates.clear();
    for (const auto& nb : adj[i]) {
      const auto& peer = nodes[nb.peer];
      if (matched[nb.peer] || peer.complete()) continue;
      if (above ? !(peer.energy < e_star) : !(peer.energy > e_star)) continue;
      Candidate c;
      c.peer = nb.peer;
      c.donor = above ? i : nb.peer;
      c.receiver = above ? nb.peer : i;
      c.overlap_minutes = nb.overlap_minutes;
      c.rate = charging_rate(nodes[c.donor].profile, nodes[c.receiver].profile);
      candidates.push_back(c);
    }
    if (candidates.empty()) continue;

    const std::size_t pick = choose(nodes[i], std::span<const Candidate>(candidates));
    const Candidate& c = candidates.at(pick);
    const double amount = detail::balancing_amount(c, i, ei, e_star, cfg.beta);
    out.exchanges.push_back(
        detail::transfer(nodes, c.donor, c.receiver, amount, cfg.beta, iteration));
    matched[i] = matched[c.peer] = true;
    detail::mark_if_balanced(nodes, c.donor, e_star, cfg.completion_tolerance, out);
    detail::mark_if_balanced(nodes, c.receiver, e_star, cfg.completion_tolerance, out);
  }
  out.meetings_count = out.exchanges.size();
  return out;
}

/// Loss, variation-distance change and selectivity for every candidate of
/// one initiator, evaluated with the full contact budget (rate * overlap) as
/// the projected transfer and the donor as the first argument.
inline std::vector<PeerEvaluation> evaluate_candidates(std::span<const NodeState> nodes,
                                                       std::span<const Candidate> candidates,
                                                       double avg_energy, const SimConfig& cfg) {
  std::vector<PeerEvaluation> evals;
  evals.reserve(candidates.size());
  for (const auto& c : candidates) {
    PeerEvaluation e;
    e.peer = c.peer;
    e.rate = c.rate;
    e.transferable = c.cap();
    e.loss = energy_loss(cfg.beta, e.transferable);
    e.evd_change = hetwet::evd_change(nodes[c.donor].energy, nodes[c.receiver].energy,
                                      avg_energy, cfg.beta, e.transferable, cfg.evd_mode);
    evals.push_back(e);
  }
  score_candidates(evals, cfg.w_el, cfg.w_evd);
  return evals;
}

/// Heterogeneity-aware peer selection: the peer with the lowest selectivity
/// factor wins. The network average used by the variation term is taken once
/// at the start of the step.
inline MatchingOutcome hetwet_step(std::span<NodeState> nodes, std::span<const Contact> contacts,
                                   const SimConfig& cfg, double e_star,
                                   std::size_t iteration = 0) {
  const double avg = average_energy(nodes).value_or(0.0);
  return closest_first_matching(
      nodes, contacts, cfg, e_star, iteration,
      [&](const NodeState&, std::span<const Candidate> cands) {
        const auto evals = evaluate_candidates(nodes, cands, avg, cfg);
        std::size_t best = 0;
        for (std::size_t k = 1; k < evals.size(); ++k)
          if (evals[k].selectivity < evals[best].selectivity) best = k;
        return best;
      });
}

/// Greedy-opposite benchmark: the peer whose own energy is closest to `e_star`.
inline MatchingOutcome pgo_step(std::span<NodeState> nodes, std::span<const Contact> contacts,
                                const SimConfig& cfg, double e_star, std::size_t iteration = 0) {
  return closest_first_matching(
      nodes, contacts, cfg, e_star, iteration,
      [&](const NodeState&, std::span<const Candidate> cands) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < cands.size(); ++k)
          if (std::abs(e_star - nodes[cands[k].peer].energy) <
              std::abs(e_star - nodes[cands[best].peer].energy))
            best = k;
        return best;
      });
}

/// Mobility-aware benchmark, simplified: the peer offering the largest
/// transferable budget over this iteration's known overlap.
inline MatchingOutcome mobiweb_step(std::span<NodeState> nodes, std::span<const Contact> contacts,
                                    const SimConfig& cfg, double e_star,
                                    std::size_t iteration = 0) {
  return closest_first_matching(nodes, contacts, cfg, e_star, iteration,
                                [](const NodeState&, std::span<const Candidate> cands) {
                                  std::size_t best = 0;
                                  for (std::size_t k = 1; k < cands.size(); ++k)
                                    if (cands[k].cap() > cands[best].cap()) best = k;
                                  return best;
                                });
}

/// Amount that leaves both endpoints equal: solves hi - x = lo + (1 - beta) x.
inline constexpr double equalizing_amount(double hi, double lo, double beta) noexcept {
  return (hi - lo) / (2.0 - beta);
}

/// Opportunistic-averaging benchmark. Contacts are visited in a shuffled
/// order; a pair on opposite sides of `avg_energy` with both endpoints free
/// equalises as far as the contact budget allows. Status does not gate
/// participation, but nodes landing within tolerance of `e_star` are still
/// marked Complete so the balanced count is comparable.
inline MatchingOutcome poa_step(std::span<NodeState> nodes, std::span<const Contact> contacts,
                                const SimConfig& cfg, double avg_energy, double e_star, Rng& rng,
                                std::size_t iteration = 0) {
  detail::check_node_ids(nodes);
  MatchingOutcome out;
  std::vector<std::size_t> order(contacts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<bool> matched(nodes.size(), false);
  for (std::size_t k : order) {
    const Contact& c = contacts[k];
    if (c.a() >= nodes.size() || c.b() >= nodes.size())
      throw std::out_of_range("contact references unknown node");
    if (matched[c.a()] || matched[c.b()]) continue;
    const double ea = nodes[c.a()].energy;
    const double eb = nodes[c.b()].energy;
    NodeId hi, lo;
    if (ea > avg_energy && eb < avg_energy) {
      hi = c.a();
      lo = c.b();
    } else if (eb > avg_energy && ea < avg_energy) {
      hi = c.b();
      lo = c.a();
    } else {
      continue;
    }
    const double cap =
        max_transferable(charging_rate(nodes[hi].profile, nodes[lo].profile), c.overlap_minutes());
    const double amount =
        std::min(cap, equalizing_amount(nodes[hi].energy, nodes[lo].energy, cfg.beta));
    out.exchanges.push_back(detail::transfer(nodes, hi, lo, amount, cfg.beta, iteration));
    matched[hi] = matched[lo] = true;
    detail::mark_if_balanced(nodes, hi, e_star, cfg.completion_tolerance, out);
    detail::mark_if_balanced(nodes, lo, e_star, cfg.completion_tolerance, out);
  }
  out.meetings_count = out.exchanges.size();
  return out;
}

/// Uniform entry point used by the engine. `protocol_rng` is only consumed by
/// protocols that need randomness (P_OA's visiting order).
inline MatchingOutcome protocol_step(ProtocolKind kind, std::span<NodeState> nodes,
                                     std::span<const Contact> contacts, const SimConfig& cfg,
                                     double e_star, Rng& protocol_rng, std::size_t iteration = 0) {
  switch (kind) {
    case ProtocolKind::HetWET: return hetwet_step(nodes, contacts, cfg, e_star, iteration);
    case ProtocolKind::PGO: return pgo_step(nodes, contacts, cfg, e_star, iteration);
    case ProtocolKind::MobiWEB: return mobiweb_step(nodes, contacts, cfg, e_star, iteration);
    case ProtocolKind::POA:
      return poa_step(nodes, contacts, cfg, average_energy(nodes).value_or(0.0), e_star,
                      protocol_rng, iteration);
  }
  throw std::invalid_argument("unknown protocol");
}

}  // namespace hetwet
