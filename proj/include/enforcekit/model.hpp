#pragma once

// Edit-automaton data model and the single-step enforcement function.

#include <compare>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace enforcekit {

enum class Phase { Before, After };

std::string_view to_string(Phase phase);
// Accepts "before" / "after".
bool parse_phase(std::string_view text, Phase& out);

enum class BindingKind { Component, Api };

std::string_view to_string(BindingKind kind);

struct PrefixBinding {
  std::string prefix;
  std::string qualified;
  BindingKind kind = BindingKind::Api;

  bool operator==(const PrefixBinding&) const = default;
};

struct EventPattern {
  std::string prefix;
  std::string method;
  Phase phase = Phase::Before;

  bool operator==(const EventPattern&) const = default;
};

struct PassAction {
  bool operator==(const PassAction&) const = default;
};

struct CallAction {
  std::string prefix;
  std::string method;

  bool operator==(const CallAction&) const = default;
};

using Action = std::variant<PassAction, CallAction>;

inline bool is_pass(const Action& action) {
  return std::holds_alternative<PassAction>(action);
}

struct Transition {
  std::string from;
  EventPattern on;
  std::vector<Action> actions;
  std::string to;

  bool operator==(const Transition&) const = default;
};

/// An edit automaton together with its prefix bindings and the policy it
/// enforces. Parsed models are not guaranteed to be valid; run the validator
/// before handing a model to the engine.
struct EnforcementModel {
  std::string name;
  std::string policy_text;
  std::vector<PrefixBinding> bindings;
  std::vector<std::string> states;  // declaration order
  std::string initial;
  std::vector<Transition> transitions;

  const PrefixBinding* find_binding(std::string_view prefix) const;
  bool has_state(std::string_view id) const;
};

// Structural equality. Binding order is not significant; everything else is.
bool operator==(const EnforcementModel& lhs, const EnforcementModel& rhs);

struct AutomatonState {
  std::string current;

  bool operator==(const AutomatonState&) const = default;
};

/// An event pattern with its prefix resolved to a fully qualified type name.
struct ResolvedPattern {
  std::string qualified;
  std::string method;
  Phase phase = Phase::Before;

  auto operator<=>(const ResolvedPattern&) const = default;
  bool operator==(const ResolvedPattern&) const = default;
};

struct StepResult {
  AutomatonState state;
  std::vector<Action> actions;

  bool operator==(const StepResult&) const = default;
};

/// Applies one intercepted event (qualified type, method, phase) to the
/// automaton. Unmatched events leave the state as is and yield [Pass].
StepResult step(const EnforcementModel& model, const AutomatonState& state,
                std::string_view qualified, std::string_view method,
                Phase phase);

/// The set of resolved patterns appearing on transitions. Patterns whose
/// prefix is unbound are skipped (they cannot occur in a validated model).
std::set<ResolvedPattern> alphabet(const EnforcementModel& model);

}  // namespace enforcekit
