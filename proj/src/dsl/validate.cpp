#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "enforcekit/dsl.hpp"

namespace enforcekit::dsl {

namespace {

SourceLocation at(const std::vector<SourceLocation>* locs, std::size_t i) {
  if (locs == nullptr || i >= locs->size()) return {};
  return (*locs)[i];
}

std::string label(const Transition& t) {
  return std::string(to_string(t.on.phase)) + " " + t.on.prefix + "." +
         t.on.method + "() in state " + t.from;
}

}  // namespace

std::vector<Diagnostic> validate(const EnforcementModel& model,
                                 const SourceMap* source_map) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string code, std::string message, SourceLocation loc) {
    out.push_back({std::move(code), Severity::Error, std::move(message), loc});
  };
  const auto* transition_locs = source_map ? &source_map->transitions : nullptr;
  const auto* state_locs = source_map ? &source_map->states : nullptr;

  const bool initial_ok = model.has_state(model.initial);
  if (!initial_ok) {
    error("V001", "initial state '" + model.initial + "' is not declared",
          source_map ? source_map->initial : SourceLocation{});
  }

  std::set<std::tuple<std::string, std::string, std::string, Phase>> seen;
  for (std::size_t i = 0; i < model.transitions.size(); ++i) {
    const Transition& t = model.transitions[i];
    const SourceLocation loc = at(transition_locs, i);

    if (!model.has_state(t.from)) {
      error("V002", "transition source state '" + t.from + "' is not declared", loc);
    }
    if (!model.has_state(t.to)) {
      error("V002", "transition target state '" + t.to + "' is not declared", loc);
    }
    if (!seen.emplace(t.from, t.on.prefix, t.on.method, t.on.phase).second) {
      error("V003", "nondeterministic: second transition on " + label(t), loc);
    }

    const auto passes =
        std::count_if(t.actions.begin(), t.actions.end(), is_pass);
    if (t.on.phase == Phase::After &&
        (t.actions.empty() || !is_pass(t.actions.front()))) {
      error("V004",
            "after-event transition must start with pass (a completed "
            "operation cannot be suppressed or preceded): " + label(t),
            loc);
    }
    if (passes > 1) {
      error("V005", "transition emits pass more than once: " + label(t), loc);
    }

    if (model.find_binding(t.on.prefix) == nullptr) {
      error("V006", "event references undeclared prefix '" + t.on.prefix + "'", loc);
    }
    for (const auto& action : t.actions) {
      if (const auto* call = std::get_if<CallAction>(&action);
          call != nullptr && model.find_binding(call->prefix) == nullptr) {
        error("V006", "call references undeclared prefix '" + call->prefix + "'", loc);
      }
    }
  }

  if (initial_ok) {
    std::set<std::string> reached{model.initial};
    std::deque<std::string> queue{model.initial};
    while (!queue.empty()) {
      std::string s = std::move(queue.front());
      queue.pop_front();
      for (const auto& t : model.transitions) {
        if (t.from == s && reached.insert(t.to).second) queue.push_back(t.to);
      }
    }
    for (std::size_t i = 0; i < model.states.size(); ++i) {
      if (!reached.contains(model.states[i])) {
        out.push_back({"W001", Severity::Warning,
                       "state '" + model.states[i] + "' is unreachable from '" +
                           model.initial + "'",
                       at(state_locs, i)});
      }
    }
  }

  const auto components = std::count_if(
      model.bindings.begin(), model.bindings.end(),
      [](const auto& b) { return b.kind == BindingKind::Component; });
  const auto apis =
      static_cast<std::ptrdiff_t>(model.bindings.size()) - components;
  if (components != 1 || apis < 1) {
    out.push_back({"W002", Severity::Warning,
                   "model should bind exactly one component and at least one "
                   "api (has " + std::to_string(components) + " component, " +
                       std::to_string(apis) + " api)",
                   source_map ? source_map->model : SourceLocation{}});
  }
  return out;
}

}  // namespace enforcekit::dsl
