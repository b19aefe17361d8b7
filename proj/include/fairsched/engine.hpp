#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairsched/core_model.hpp"
#include "fairsched/criteria.hpp"
#include "fairsched/random.hpp"

namespace fairsched {

enum class ServerPolicy { rrr, best_fit, joint_min };
enum class TieBreak { lowest_index, seeded_random };

inline std::string_view to_string(ServerPolicy p) {
  switch (p) {
    case ServerPolicy::rrr: return "rrr";
    case ServerPolicy::best_fit: return "bestfit";
    case ServerPolicy::joint_min: return "jointmin";
  }
  return "?";
}

inline std::optional<ServerPolicy> parse_policy(std::string_view s) {
  if (s == "rrr") return ServerPolicy::rrr;
  if (s == "bestfit") return ServerPolicy::best_fit;
  if (s == "jointmin") return ServerPolicy::joint_min;
  return std::nullopt;
}

// RRR works with every criterion. Best fit needs a cluster-wide framework ranking and
// joint selection needs a per-server one.
constexpr bool is_valid_combination(CriterionKind c, ServerPolicy p) {
  switch (p) {
    case ServerPolicy::rrr: return true;
    case ServerPolicy::best_fit: return !is_per_server(c);
    case ServerPolicy::joint_min: return is_per_server(c);
  }
  return false;
}

struct SchedulerConfig {
  CriterionKind criterion = CriterionKind::drf;
  ServerPolicy policy = ServerPolicy::rrr;
  TieBreak tie_break = TieBreak::lowest_index;
  std::uint64_t seed = 0;

  void validate() const {
    if (!is_valid_combination(criterion, policy))
      throw config_error("scheduler " + std::string(to_string(criterion)) +
                         " cannot be combined with server policy " +
                         std::string(to_string(policy)));
  }
};

struct Placement {
  std::size_t framework = 0;
  std::size_t server = 0;
  Score value;  // criterion value of the framework when it was chosen
};

struct FillResult {
  AllocationMatrix alloc;
  std::vector<ResourceVector> unused;  // per server, at termination
  std::vector<Placement> steps;

  std::int64_t total_tasks() const { return alloc.total(); }
};

// Uniformly random ordering of the given servers.
inline std::vector<std::size_t> rrr_permutation(std::span<const std::size_t> active, Rng& rng) {
  std::vector<std::size_t> order(active.begin(), active.end());
  shuffle(order, rng);
  return order;
}

namespace detail {

// (d.r)^2 / |r|^2: cosine similarity squared, scaled by the constant |d|^2. Exact and
// order-preserving because both vectors are non-negative.
inline Rational fit_similarity(const ResourceVector& d, const ResourceVector& r) {
  Rational dot{0}, norm{0};
  for (std::size_t k = 0; k < d.size(); ++k) {
    dot += d[k] * r[k];
    norm += r[k] * r[k];
  }
  if (norm == 0) return Rational{0};
  return dot * dot / norm;
}

}  // namespace detail

// Server among `servers` whose residual points most nearly in the direction of the
// framework's demand (cosine similarity). Ties go to the lowest server index.
inline std::optional<std::size_t> best_fit_server(const ClusterState& state, std::size_t n,
                                                  std::span<const std::size_t> servers) {
  const auto& d = state.framework(n).demand;
  std::optional<std::size_t> best;
  Rational best_sim{0};
  for (std::size_t j : servers) {
    auto res = residual_capacity(state, j);
    if (!task_fits(d, res)) continue;
    Rational sim = detail::fit_similarity(d, res);
    if (!best || sim > best_sim || (sim == best_sim && j < *best)) {
      best = j;
      best_sim = sim;
    }
  }
  return best;
}

inline std::optional<std::size_t> best_fit_server(const ClusterState& state, std::size_t n) {
  std::vector<std::size_t> all(state.num_servers());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return best_fit_server(state, n, all);
}

// Picks one placement at a time under a scheduler configuration. The static fill and the
// online simulator both drive it; the caller owns the set of open servers, which only
// shrinks while residuals are non-increasing.
class PlacementSelector {
public:
  PlacementSelector(SchedulerConfig config, Rng& rng) : config_(config), rng_(rng) {
    config_.validate();
  }

  const SchedulerConfig& config() const { return config_; }

  // `candidates` are framework indices in ascending order. Servers found unable to host
  // any candidate are removed from `open`.
  std::optional<Placement> next(const ClusterState& state,
                                std::span<const std::size_t> candidates,
                                std::vector<std::size_t>& open) {
    if (candidates.empty()) return std::nullopt;
    switch (config_.policy) {
      case ServerPolicy::rrr: return next_rrr(state, candidates, open);
      case ServerPolicy::joint_min: return next_joint(state, candidates, open);
      case ServerPolicy::best_fit: return next_best_fit(state, candidates, open);
    }
    return std::nullopt;
  }

private:
  // Tracks the running minimum; random tie-breaking keeps each tied entry with
  // probability 1/ties so the winner is uniform among them.
  struct MinTracker {
    std::optional<Placement> best;
    std::size_t ties = 0;

    void offer(Placement p, TieBreak tb, Rng& rng) {
      if (!best || p.value < best->value) {
        best = p;
        ties = 1;
      } else if (p.value == best->value && tb == TieBreak::seeded_random) {
        ++ties;
        if (uniform_index(rng, ties) == 0) best = p;
      }
    }
  };

  static void erase_server(std::vector<std::size_t>& open, std::size_t j) {
    open.erase(std::remove(open.begin(), open.end(), j), open.end());
  }

  std::optional<Placement> best_on_server(const ClusterState& state,
                                          std::span<const std::size_t> candidates,
                                          std::size_t j) {
    MinTracker t;
    auto res = residual_capacity(state, j);
    for (std::size_t n : candidates) {
      if (!task_fits(state.framework(n).demand, res)) continue;
      Score s = score(config_.criterion, state, n, j);
      if (s.is_infinite()) continue;
      t.offer({n, j, s}, config_.tie_break, rng_);
    }
    return t.best;
  }

  // A fresh permutation is drawn for every placement; the first server in it that can
  // host some candidate receives one task.
  std::optional<Placement> next_rrr(const ClusterState& state,
                                    std::span<const std::size_t> candidates,
                                    std::vector<std::size_t>& open) {
    while (!open.empty()) {
      for (std::size_t j : rrr_permutation(open, rng_)) {
        if (auto p = best_on_server(state, candidates, j)) return p;
        erase_server(open, j);
      }
    }
    return std::nullopt;
  }

  std::optional<Placement> next_joint(const ClusterState& state,
                                      std::span<const std::size_t> candidates,
                                      std::vector<std::size_t>& open) {
    MinTracker t;
    std::vector<std::size_t> servers(open);
    std::sort(servers.begin(), servers.end());
    for (std::size_t n : candidates) {
      for (std::size_t j : servers) {
        if (!task_fits(state, n, j)) continue;
        Score s = score(config_.criterion, state, n, j);
        if (s.is_infinite()) continue;
        t.offer({n, j, s}, config_.tie_break, rng_);
      }
    }
    for (std::size_t j : servers) {
      bool any = std::any_of(candidates.begin(), candidates.end(),
                             [&](std::size_t n) { return task_fits(state, n, j); });
      if (!any) erase_server(open, j);
    }
    return t.best;
  }

  std::optional<Placement> next_best_fit(const ClusterState& state,
                                         std::span<const std::size_t> candidates,
                                         std::vector<std::size_t>& open) {
    std::vector<std::size_t> servers(open);
    std::sort(servers.begin(), servers.end());
    MinTracker t;
    for (std::size_t n : candidates) {
      bool fits_somewhere = std::any_of(servers.begin(), servers.end(),
                                        [&](std::size_t j) { return task_fits(state, n, j); });
      if (!fits_somewhere) continue;
      Score s = score(config_.criterion, state, n, 0);
      if (s.is_infinite()) continue;
      t.offer({n, 0, s}, config_.tie_break, rng_);
    }
    if (!t.best) {
      open.clear();
      return std::nullopt;
    }
    t.best->server = *best_fit_server(state, t.best->framework, servers);
    return t.best;
  }

  SchedulerConfig config_;
  Rng& rng_;
};

// Progressive filling with whole tasks: place one task at a time until no framework's
// task fits on any server.
inline FillResult progressive_fill(const Scenario& scenario, const SchedulerConfig& config) {
  config.validate();
  ClusterState state = make_state(scenario);
  Rng rng(config.seed);
  PlacementSelector selector(config, rng);

  std::vector<std::size_t> frameworks(state.num_frameworks());
  for (std::size_t n = 0; n < frameworks.size(); ++n) frameworks[n] = n;
  std::vector<std::size_t> open(state.num_servers());
  for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;

  FillResult out;
  while (auto p = selector.next(state, frameworks, open)) {
    state.apply_task(p->framework, p->server);
    out.steps.push_back(*p);
  }

  for (std::size_t n = 0; n < state.num_frameworks(); ++n)
    for (std::size_t i = 0; i < state.num_servers(); ++i)
      if (task_fits(state, n, i))
        throw std::logic_error("progressive fill stopped while a task still fits");

  out.alloc = state.alloc();
  for (std::size_t i = 0; i < state.num_servers(); ++i)
    out.unused.push_back(residual_capacity(state, i));
  return out;
}

inline void write_steps_csv(std::ostream& os, const FillResult& r) {
  os << "step,framework_id,server_id,criterion_value\n";
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    const auto& p = r.steps[k];
    os << k + 1 << ',' << p.framework + 1 << ',' << p.server + 1 << ',' << p.value.to_string()
       << '\n';
  }
}

}  // namespace fairsched
