#include "enforcekit/model.hpp"

#include <algorithm>

namespace enforcekit {

std::string_view to_string(Phase phase) {
  return phase == Phase::Before ? "before" : "after";
}

bool parse_phase(std::string_view text, Phase& out) {
  if (text == "before") {
    out = Phase::Before;
    return true;
  }
  if (text == "after") {
    out = Phase::After;
    return true;
  }
  return false;
}

std::string_view to_string(BindingKind kind) {
  return kind == BindingKind::Component ? "component" : "api";
}

const PrefixBinding* EnforcementModel::find_binding(
    std::string_view prefix) const {
  for (const auto& binding : bindings) {
    if (binding.prefix == prefix) return &binding;
  }
  return nullptr;
}

bool EnforcementModel::has_state(std::string_view id) const {
  return std::find(states.begin(), states.end(), id) != states.end();
}

namespace {

std::vector<PrefixBinding> sorted_bindings(std::vector<PrefixBinding> b) {
  std::sort(b.begin(), b.end(), [](const auto& x, const auto& y) {
    return std::tie(x.prefix, x.qualified, x.kind) <
           std::tie(y.prefix, y.qualified, y.kind);
  });
  return b;
}

// Transitions grouped by source state in state declaration order, keeping
// declaration order within a state.
std::vector<Transition> grouped_transitions(const EnforcementModel& m) {
  std::vector<Transition> out = m.transitions;
  auto rank = [&](const Transition& t) {
    return std::find(m.states.begin(), m.states.end(), t.from) -
           m.states.begin();
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& x, const auto& y) { return rank(x) < rank(y); });
  return out;
}

}  // namespace

bool operator==(const EnforcementModel& lhs, const EnforcementModel& rhs) {
  return lhs.name == rhs.name && lhs.policy_text == rhs.policy_text &&
         lhs.states == rhs.states && lhs.initial == rhs.initial &&
         grouped_transitions(lhs) == grouped_transitions(rhs) &&
         sorted_bindings(lhs.bindings) == sorted_bindings(rhs.bindings);
}

StepResult step(const EnforcementModel& model, const AutomatonState& state,
                std::string_view qualified, std::string_view method,
                Phase phase) {
  for (const auto& t : model.transitions) {
    if (t.from != state.current || t.on.phase != phase ||
        t.on.method != method) {
      continue;
    }
    const PrefixBinding* binding = model.find_binding(t.on.prefix);
    if (binding == nullptr || binding->qualified != qualified) continue;
    return {AutomatonState{t.to}, t.actions};
  }
  return {state, {PassAction{}}};
}

std::set<ResolvedPattern> alphabet(const EnforcementModel& model) {
  std::set<ResolvedPattern> out;
  for (const auto& t : model.transitions) {
    if (const auto* binding = model.find_binding(t.on.prefix)) {
      out.insert({binding->qualified, t.on.method, t.on.phase});
    }
  }
  return out;
}

}  // namespace enforcekit
