#pragma once

// Seeded random model generators for property tests.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "enforcekit/engine.hpp"
#include "enforcekit/model.hpp"

namespace enforcekit::testing {

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(std::mt19937_64& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

struct GenSpace {
  std::vector<PrefixBinding> bindings;
  std::vector<std::string> methods;
  std::vector<std::string> state_names;
  std::size_t max_states = 4;
  std::size_t max_transitions_per_state = 4;
  std::size_t max_calls = 2;
};

inline GenSpace default_space() {
  return {{{"a", "gen.app.Screen", BindingKind::Component},
           {"c", "gen.hw.Camera", BindingKind::Api},
           {"mic", "gen.media.Recorder", BindingKind::Api},
           {"w_1", "gen.os.Lock", BindingKind::Api}},
          {"open", "release", "onPause", "onResume", "start", "stop_2"},
          {"S0", "S1", "Idle", "Held", "Revoked", "q_9"},
          4,
          4,
          2};
}

// A random action list for one transition; respects the Pass rules.
inline std::vector<Action> random_actions(std::mt19937_64& rng, Phase phase,
                                          const std::vector<PrefixBinding>& bindings,
                                          const std::vector<std::string>& methods,
                                          std::size_t max_calls) {
  std::vector<Action> actions;
  const std::size_t calls = pick(rng, max_calls + 1);
  for (std::size_t i = 0; i < calls; ++i) {
    actions.push_back(CallAction{bindings[pick(rng, bindings.size())].prefix,
                                 methods[pick(rng, methods.size())]});
  }
  if (phase == Phase::After) {
    actions.insert(actions.begin(), PassAction{});
  } else if (coin(rng, 0.75)) {
    actions.insert(actions.begin() + static_cast<std::ptrdiff_t>(
                                         pick(rng, actions.size() + 1)),
                   PassAction{});
  }
  return actions;
}

inline EnforcementModel random_model(std::mt19937_64& rng, const GenSpace& space) {
  EnforcementModel m;
  m.name = "Gen" + std::to_string(pick(rng, 100000));
  if (coin(rng, 0.3)) m.policy_text = "Release \"it\" on pause\\stop";

  m.bindings.push_back(space.bindings[0]);
  for (std::size_t i = 1; i < space.bindings.size(); ++i) {
    if (i == 1 || coin(rng)) m.bindings.push_back(space.bindings[i]);
  }
  std::shuffle(m.bindings.begin(), m.bindings.end(), rng);

  auto names = space.state_names;
  std::shuffle(names.begin(), names.end(), rng);
  const std::size_t n_states = 1 + pick(rng, std::min(space.max_states, names.size()));
  m.states.assign(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n_states));
  m.initial = m.states[pick(rng, m.states.size())];

  for (const auto& from : m.states) {
    const std::size_t n = pick(rng, space.max_transitions_per_state + 1);
    std::vector<EventPattern> used;
    for (std::size_t i = 0; i < n; ++i) {
      EventPattern on{m.bindings[pick(rng, m.bindings.size())].prefix,
                      space.methods[pick(rng, space.methods.size())],
                      coin(rng) ? Phase::Before : Phase::After};
      if (std::find(used.begin(), used.end(), on) != used.end()) continue;
      used.push_back(on);
      m.transitions.push_back(
          {from, on,
           random_actions(rng, on.phase, m.bindings, space.methods, space.max_calls),
           m.states[pick(rng, m.states.size())]});
    }
  }
  return m;
}

inline EnforcementModel random_valid_model(std::mt19937_64& rng) {
  return random_model(rng, default_space());
}

/// Every pattern a model could see: its bindings times the method pool in
/// both phases, plus events on a type the model does not bind.
inline std::vector<ResolvedPattern> event_universe(const EnforcementModel& m) {
  std::vector<ResolvedPattern> out;
  std::vector<std::string> methods = default_space().methods;
  for (const auto& t : m.transitions) methods.push_back(t.on.method);
  std::vector<std::string> types{"gen.unbound.Thing"};
  for (const auto& b : m.bindings) types.push_back(b.qualified);
  for (const auto& q : types) {
    for (const auto& method : methods) {
      for (Phase p : {Phase::Before, Phase::After}) out.push_back({q, method, p});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Small models over a fixed four-pattern alphabet, for exhaustive checks.

inline const std::vector<PrefixBinding>& small_bindings() {
  static const std::vector<PrefixBinding> b{
      {"a", "small.Activity", BindingKind::Component},
      {"c", "small.Camera", BindingKind::Api}};
  return b;
}

/// The operations a raw sequence is drawn from.
inline const std::vector<std::pair<std::string, std::string>>& small_ops() {
  static const std::vector<std::pair<std::string, std::string>> ops{
      {"c", "open"}, {"c", "release"}, {"a", "onPause"}};
  return ops;
}

inline const std::vector<EventPattern>& small_alphabet() {
  static const std::vector<EventPattern> alpha{
      {"c", "open", Phase::Before},
      {"c", "release", Phase::After},
      {"a", "onPause", Phase::After},
      {"c", "release", Phase::Before}};
  return alpha;
}

/// A model with at most 3 states whose transitions use at most the 4
/// patterns of small_alphabet(); calls target small_ops().
inline EnforcementModel random_small_model(std::mt19937_64& rng, int index) {
  EnforcementModel m;
  m.name = "Small" + std::to_string(index);
  m.bindings = small_bindings();
  const std::size_t n_states = 1 + pick(rng, 3);
  for (std::size_t i = 0; i < n_states; ++i) m.states.push_back("S" + std::to_string(i));
  m.initial = "S0";
  for (const auto& from : m.states) {
    for (const auto& on : small_alphabet()) {
      if (!coin(rng, 0.45)) continue;
      std::vector<Action> actions;
      const std::size_t calls = pick(rng, 3);
      for (std::size_t i = 0; i < calls; ++i) {
        const auto& [prefix, method] = small_ops()[pick(rng, small_ops().size())];
        actions.push_back(CallAction{prefix, method});
      }
      if (on.phase == Phase::After) {
        actions.insert(actions.begin(), PassAction{});
      } else if (coin(rng, 0.7)) {
        actions.insert(actions.begin() + static_cast<std::ptrdiff_t>(
                                             pick(rng, actions.size() + 1)),
                       PassAction{});
      }
      m.transitions.push_back({from, on, actions, m.states[pick(rng, n_states)]});
    }
  }
  return m;
}

/// Every sequence over small_ops() of length 0..max_len, resolved to
/// qualified operations.
inline std::vector<std::vector<Operation>> all_small_sequences(std::size_t max_len) {
  std::vector<Operation> universe;
  for (const auto& [prefix, method] : small_ops()) {
    for (const auto& b : small_bindings()) {
      if (b.prefix == prefix) universe.push_back({b.qualified, method});
    }
  }
  std::vector<std::vector<Operation>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& op : universe) {
        auto next = out[i];
        next.push_back(op);
        out.push_back(std::move(next));
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace enforcekit::testing
