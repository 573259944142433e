#pragma once

// Asynchronous best-response and noisy (log-linear) best-response dynamics.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cforge/centrality.hpp"
#include "cforge/game.hpp"
#include "cforge/graph.hpp"
#include "cforge/rng.hpp"

namespace cforge {

struct DynamicsState {
  Configuration cfg;
  std::uint64_t t = 0;
  Rng rng;
};

struct StepOutcome {
  Node player = 0;
  NodeSet old_action, new_action;
  bool unique_best = false;  // the player's best-response set was a singleton
};

// One asynchronous update in place: a uniform player moves to a uniform
// member of its best-response set (possibly its current action).
template <Scalar T>
StepOutcome advance_br(const GameSpec<T>& spec, DynamicsState& state);

template <Scalar T>
DynamicsState step_br(const GameSpec<T>& spec, DynamicsState state) {
  advance_br(spec, state);
  return state;
}

struct TraceEvent {
  std::uint64_t t = 0;  // step index at which the change happened
  Node player = 0;
  NodeSet old_action, new_action;
};

struct PotentialSample {
  std::uint64_t t = 0;
  double psi = 0.0;
};

struct Trace {
  std::uint64_t seed = 0;
  std::uint64_t steps_requested = 0;
  std::uint64_t steps_run = 0;
  Configuration initial;
  std::vector<TraceEvent> events;  // changes only
  Configuration final;
  bool absorbed = false;  // stopped at a strict Nash equilibrium
  std::vector<PotentialSample> potential_series;
};

struct RunOptions {
  bool early_stop = true;
  std::uint64_t potential_every = 0;  // 0 disables the potential series
};

template <Scalar T>
Trace run_br(const GameSpec<T>& spec, const Configuration& init, std::uint64_t steps,
             std::uint64_t seed, const RunOptions& opts = {});

// Replays the events of a trace on its initial configuration.
Configuration replay(const Trace& trace);

inline constexpr std::uint64_t kMaxNoisyActions = 100000;

// Probability of each action of player i under log-linear choice with noise
// gamma: proportional to utility^(1/gamma), over the full action set.
std::vector<std::pair<NodeSet, double>> noisy_choice_probabilities(const GameSpec<double>& spec,
                                                                   const Configuration& cfg, Node i,
                                                                   double gamma);

StepOutcome advance_noisy(const GameSpec<double>& spec, DynamicsState& state, double gamma);

inline DynamicsState step_noisy(const GameSpec<double>& spec, DynamicsState state, double gamma) {
  advance_noisy(spec, state, gamma);
  return state;
}

inline constexpr std::size_t kMaxExactChainStates = 10000;

struct ExactChain {
  std::vector<Configuration> states;  // canonical order
  std::vector<std::vector<std::pair<std::size_t, double>>> kernel;  // sparse rows
  std::vector<double> stationary;  // from the kernel
  std::vector<double> gibbs;       // Z^(-1/gamma), normalized
  double max_abs_error = 0.0;      // |stationary - gibbs|_inf
  double max_balance_violation = 0.0;
};

// Throws SpaceTooLarge beyond 10^4 configurations.
ExactChain exact_chain(const GameSpec<double>& spec, double gamma);

nlohmann::json trace_to_json(const Trace& trace, const nlohmann::json& spec_json);

}  // namespace cforge
