#include "cforge/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cforge/equilibrium.hpp"
#include "cforge/errors.hpp"
#include "cforge/io.hpp"

namespace cforge {

template <Scalar T>
StepOutcome advance_br(const GameSpec<T>& spec, DynamicsState& state) {
  const int n = state.cfg.size();
  StepOutcome out;
  out.player = static_cast<Node>(state.rng.uniform_index(static_cast<std::uint64_t>(n)));
  const BestResponseSet<T> br = best_response_set(spec, state.cfg, out.player);
  out.unique_best = br.is_singleton();
  out.old_action = state.cfg.out(out.player);
  out.new_action = br.sample([&](std::uint64_t bound) { return state.rng.uniform_index(bound); });
  if (out.new_action != out.old_action) state.cfg = state.cfg.with_action(out.player, out.new_action);
  ++state.t;
  return out;
}

template <Scalar T>
Trace run_br(const GameSpec<T>& spec, const Configuration& init, std::uint64_t steps,
             std::uint64_t seed, const RunOptions& opts) {
  spec.validate();
  check_compatible(spec, init);
  Trace trace;
  trace.seed = seed;
  trace.steps_requested = steps;
  trace.initial = init;
  DynamicsState state{init, 0, Rng(seed)};
  const int n = init.size();

  auto sample_potential = [&] {
    if (opts.potential_every > 0 && state.t % opts.potential_every == 0)
      trace.potential_series.push_back({state.t, -log_potential_z(spec, state.cfg)});
  };
  sample_potential();

  if (opts.early_stop && is_nash(spec, init).is_strict) {
    trace.absorbed = true;
    trace.final = init;
    return trace;
  }

  // stable[i]: i was drawn since the last change and had a unique best
  // response equal to its play. All stable means a strict equilibrium.
  std::vector<char> stable(static_cast<std::size_t>(n), 0);
  int stable_count = 0;
  while (state.t < steps) {
    const std::uint64_t t = state.t;
    StepOutcome s = advance_br(spec, state);
    if (s.new_action != s.old_action) {
      trace.events.push_back({t, s.player, std::move(s.old_action), std::move(s.new_action)});
      std::fill(stable.begin(), stable.end(), 0);
      stable_count = 0;
    }
    if (s.unique_best && !stable[s.player]) {
      stable[s.player] = 1;
      ++stable_count;
    } else if (!s.unique_best && stable[s.player]) {
      stable[s.player] = 0;
      --stable_count;
    }
    sample_potential();
    if (opts.early_stop && stable_count == n) {
      trace.absorbed = true;
      break;
    }
  }
  trace.steps_run = state.t;
  trace.final = state.cfg;
  return trace;
}

Configuration replay(const Trace& trace) {
  Configuration cfg = trace.initial;
  for (const auto& e : trace.events) {
    if (cfg.out(e.player) != e.old_action)
      throw Error(ErrorCode::InvalidArgument, "trace event does not match the replayed state");
    cfg = cfg.with_action(e.player, e.new_action);
  }
  return cfg;
}

std::vector<std::pair<NodeSet, double>> noisy_choice_probabilities(const GameSpec<double>& spec,
                                                                   const Configuration& cfg, Node i,
                                                                   double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise level must be positive");
  check_compatible(spec, cfg);
  const int n = cfg.size();
  const int d = spec.degrees[i];
  if (binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(d)) > kMaxNoisyActions)
    throw Error(ErrorCode::SpaceTooLarge, "player has too many actions for noisy updates");
  std::vector<NodeSet> actions = action_set(n, i, d);
  // The hitting times toward i do not depend on i's own links.
  const HittingTimeTable<double> table = hitting_times(spec, cfg, i, false);
  std::vector<double> logw(actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k) {
    double u = kac_utility_for_action(spec, table, actions[k]);
    if (!(u > 0.0) || !std::isfinite(u))
      throw Error(ErrorCode::NumericUnderflow, "utility is not a positive finite number");
    logw[k] = std::log(u) / gamma;
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error(ErrorCode::NumericUnderflow, "choice weights could not be normalized");
  std::vector<std::pair<NodeSet, double>> out;
  out.reserve(actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k) out.emplace_back(std::move(actions[k]), logw[k] / total);
  return out;
}

StepOutcome advance_noisy(const GameSpec<double>& spec, DynamicsState& state, double gamma) {
  StepOutcome out;
  const int n = state.cfg.size();
  out.player = static_cast<Node>(state.rng.uniform_index(static_cast<std::uint64_t>(n)));
  out.old_action = state.cfg.out(out.player);
  auto probs = noisy_choice_probabilities(spec, state.cfg, out.player, gamma);
  double u = state.rng.uniform01(), acc = 0.0;
  std::size_t pick = probs.size() - 1;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k].second;
    if (u < acc) {
      pick = k;
      break;
    }
  }
  out.new_action = probs[pick].first;
  if (out.new_action != out.old_action) state.cfg = state.cfg.with_action(out.player, out.new_action);
  ++state.t;
  return out;
}

ExactChain exact_chain(const GameSpec<double>& spec, double gamma) {
  spec.validate();
  if (spec.degrees.action_space_size() > kMaxExactChainStates)
    throw Error(ErrorCode::SpaceTooLarge, "exact chain limited to " +
                                              std::to_string(kMaxExactChainStates) + " configurations");
  ExactChain chain;
  for_each_configuration(spec.degrees, [&](const Configuration& c) { chain.states.push_back(c); });
  const std::size_t size = chain.states.size();
  std::unordered_map<Configuration, std::size_t> index;
  for (std::size_t k = 0; k < size; ++k) index.emplace(chain.states[k], k);

  const int n = spec.size();
  chain.kernel.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    const Configuration& x = chain.states[k];
    std::unordered_map<std::size_t, double> row;
    for (Node i = 0; i < n; ++i)
      for (auto& [action, p] : noisy_choice_probabilities(spec, x, i, gamma))
        row[index.at(x.with_action(i, action))] += p / n;
    chain.kernel[k].assign(row.begin(), row.end());
    std::sort(chain.kernel[k].begin(), chain.kernel[k].end());
  }

  // Stationary law: mu (K - I) = 0 with sum(mu) = 1.
  if (size <= 2000) {
    Matrix<double> a(static_cast<int>(size), static_cast<int>(size));
    for (std::size_t x = 0; x < size; ++x) {
      a(static_cast<int>(x), static_cast<int>(x)) -= 1.0;
      for (auto [y, p] : chain.kernel[x]) a(static_cast<int>(y), static_cast<int>(x)) += p;
    }
    std::vector<double> rhs(size, 0.0);
    for (std::size_t x = 0; x < size; ++x) a(static_cast<int>(size - 1), static_cast<int>(x)) = 1.0;
    rhs[size - 1] = 1.0;
    chain.stationary = solve_linear(std::move(a), std::move(rhs));
  } else {
    std::vector<double> mu(size, 1.0 / static_cast<double>(size)), next(size);
    bool converged = false;
    for (int it = 0; it < 1000000 && !converged; ++it) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t x = 0; x < size; ++x)
        for (auto [y, p] : chain.kernel[x]) next[y] += mu[x] * p;
      double change = 0.0;
      for (std::size_t x = 0; x < size; ++x) change = std::max(change, std::fabs(next[x] - mu[x]));
      mu.swap(next);
      converged = change < 1e-16;
    }
    if (!converged) throw Error(ErrorCode::SolveFailure, "stationary iteration did not converge");
    chain.stationary = std::move(mu);
  }

  std::vector<double> log_z(size);
  for (std::size_t k = 0; k < size; ++k) log_z[k] = potential(spec, chain.states[k]).log_z;
  const double low = *std::min_element(log_z.begin(), log_z.end());
  double total = 0.0;
  chain.gibbs.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    chain.gibbs[k] = std::exp(-(log_z[k] - low) / gamma);
    total += chain.gibbs[k];
  }
  for (double& g : chain.gibbs) g /= total;

  for (std::size_t k = 0; k < size; ++k)
    chain.max_abs_error = std::max(chain.max_abs_error, std::fabs(chain.stationary[k] - chain.gibbs[k]));
  for (std::size_t x = 0; x < size; ++x)
    for (auto [y, p] : chain.kernel[x]) {
      double back = 0.0;
      for (auto [z, q] : chain.kernel[y])
        if (z == x) back = q;
      chain.max_balance_violation = std::max(
          chain.max_balance_violation, std::fabs(chain.stationary[x] * p - chain.stationary[y] * back));
    }
  return chain;
}

nlohmann::json trace_to_json(const Trace& trace, const nlohmann::json& spec_json) {
  using nlohmann::json;
  json events = json::array();
  for (const auto& e : trace.events)
    events.push_back({{"t", e.t}, {"player", e.player}, {"old", e.old_action}, {"new", e.new_action}});
  json out{{"metadata",
            {{"spec", spec_json},
             {"seed", trace.seed},
             {"T", trace.steps_requested},
             {"rng", Rng::kAlgorithm},
             {"steps_run", trace.steps_run},
             {"absorbed", trace.absorbed}}},
           {"initial", configuration_to_json(trace.initial)},
           {"events", events},
           {"final", configuration_to_json(trace.final)}};
  if (!trace.potential_series.empty()) {
    json series = json::array();
    for (const auto& s : trace.potential_series) series.push_back({{"t", s.t}, {"psi", s.psi}});
    out["potential_series"] = series;
  }
  return out;
}

template StepOutcome advance_br(const GameSpec<double>&, DynamicsState&);
template StepOutcome advance_br(const GameSpec<Rational>&, DynamicsState&);
template Trace run_br(const GameSpec<double>&, const Configuration&, std::uint64_t, std::uint64_t,
                      const RunOptions&);
template Trace run_br(const GameSpec<Rational>&, const Configuration&, std::uint64_t, std::uint64_t,
                      const RunOptions&);

}  // namespace cforge
