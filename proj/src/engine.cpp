#include "enforcekit/engine.hpp"

#include <algorithm>
#include <functional>

#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"

namespace enforcekit {

std::string to_string(const Event& event) {
  std::string out(to_string(event.phase));
  out += '#';
  out += event.qualified;
  out += '.';
  out += event.method;
  if (!event.origin.is_app()) {
    out += " [by ";
    out += event.origin.inserted_by;
    out += ']';
  }
  return out;
}

namespace {

std::size_t hash_pattern(std::string_view qualified, std::string_view method,
                         Phase phase) {
  std::size_t h = std::hash<std::string_view>{}(qualified);
  h ^= std::hash<std::string_view>{}(method) + 0x9e3779b97f4a7c15ULL + (h << 6) +
       (h >> 2);
  return h ^ static_cast<std::size_t>(phase);
}

// Decrements the session depth counter however the scope is left.
class DepthGuard {
 public:
  explicit DepthGuard(int& depth) : depth_(depth) { ++depth_; }
  ~DepthGuard() { --depth_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  int& depth_;
};

}  // namespace

std::size_t EnforcerSession::PatternHash::operator()(
    const ResolvedPattern& p) const {
  return hash_pattern(p.qualified, p.method, p.phase);
}

std::size_t EnforcerSession::PatternHash::operator()(const PatternView& p) const {
  return hash_pattern(p.qualified, p.method, p.phase);
}

void EnforcerSession::register_module(std::string name, EnforcementModel model) {
  register_module(std::move(name),
                  std::make_shared<const EnforcementModel>(std::move(model)));
}

void EnforcerSession::register_module(
    std::string name, std::shared_ptr<const EnforcementModel> model) {
  if (name.empty()) throw Error("module name must not be empty");
  for (const auto& m : modules_) {
    if (m.name == name) throw DuplicateName("module '" + name + "' already registered");
  }
  auto diagnostics = dsl::validate(*model);
  if (dsl::has_errors(diagnostics)) {
    throw InvalidModel("model '" + model->name + "' for module '" + name +
                           "' failed validation",
                       std::move(diagnostics));
  }

  const std::size_t index = modules_.size();
  Module module;
  module.name = name;
  module.model = model;
  module.states = model->states;
  auto state_index = [&](const std::string& id) {
    return static_cast<std::int32_t>(
        std::find(module.states.begin(), module.states.end(), id) -
        module.states.begin());
  };
  module.initial = state_index(model->initial);
  module.current = module.initial;

  auto resolve = [&](const std::string& prefix) -> const std::string& {
    return model->find_binding(prefix)->qualified;
  };

  for (const auto& t : model->transitions) {
    ResolvedPattern key{resolve(t.on.prefix), t.on.method, t.on.phase};
    Subscription& sub = index_[key];
    if (sub.subscribers.empty() || sub.subscribers.back().module != index) {
      sub.subscribers.push_back(
          {index, std::vector<std::int32_t>(module.states.size(), -1)});
    }
    auto& row_slot = sub.subscribers.back().row_by_state[state_index(t.from)];
    if (row_slot != -1) continue;  // first match wins, as in step()

    CompiledRow row;
    row.to = state_index(t.to);
    auto pass = std::find_if(t.actions.begin(), t.actions.end(), is_pass);
    row.pass = pass != t.actions.end();
    for (auto it = t.actions.begin(); it != t.actions.end(); ++it) {
      const auto* call = std::get_if<CallAction>(&*it);
      if (call == nullptr) continue;
      PlannedCall planned{resolve(call->prefix), call->method, name};
      (it < pass ? row.pre_calls : row.post_calls).push_back(std::move(planned));
    }
    row_slot = static_cast<std::int32_t>(sub.rows.size());
    sub.rows.push_back(std::move(row));
  }
  modules_.push_back(std::move(module));
}

EnforcerSession::Module& EnforcerSession::find(std::string_view name) {
  for (auto& m : modules_) {
    if (m.name == name) return m;
  }
  throw UnknownModule("no module named '" + std::string(name) + "'");
}

const EnforcerSession::Module& EnforcerSession::find(std::string_view name) const {
  for (const auto& m : modules_) {
    if (m.name == name) return m;
  }
  throw UnknownModule("no module named '" + std::string(name) + "'");
}

void EnforcerSession::set_active(std::string_view name, bool active) {
  Module& m = find(name);
  if (active) m.current = m.initial;
  m.active = active;
}

ActionPlan EnforcerSession::on_event(const Event& event) {
  ActionPlan plan;
  auto it = index_.find(PatternView{event.qualified, event.method, event.phase});
  if (it == index_.end()) return plan;

  const Subscription& sub = it->second;
  for (const Subscriber& s : sub.subscribers) {
    Module& m = modules_[s.module];
    if (!m.active) continue;
    if (!event.origin.is_app() && event.origin.inserted_by == m.name) continue;
    const std::int32_t row_index = s.row_by_state[m.current];
    if (row_index < 0) continue;
    const CompiledRow& row = sub.rows[row_index];
    m.current = row.to;
    if (!row.pass) plan.proceed = false;
    plan.pre_calls.insert(plan.pre_calls.end(), row.pre_calls.begin(),
                          row.pre_calls.end());
    plan.post_calls.insert(plan.post_calls.end(), row.post_calls.begin(),
                           row.post_calls.end());
  }
  return plan;
}

void EnforcerSession::execute(const Operation& op, const Origin& origin,
                              int depth, Executor& executor,
                              std::vector<Event>& trace) {
  if (depth > kDepthCap) {
    throw DepthExceeded("insertion cascade exceeded depth " +
                        std::to_string(kDepthCap) + " at " + op.qualified +
                        "." + op.method + " inserted by " + origin.inserted_by);
  }
  DepthGuard guard(depth_);

  auto run_calls = [&](const std::vector<PlannedCall>& calls) {
    for (const auto& call : calls) {
      execute({call.qualified, call.method}, Origin::inserted(call.module),
              depth + 1, executor, trace);
    }
  };

  trace.push_back({op.qualified, op.method, Phase::Before, origin});
  const ActionPlan before = on_event(trace.back());
  run_calls(before.pre_calls);
  if (!before.proceed) {
    run_calls(before.post_calls);
    return;
  }
  executor.perform(op, origin);
  trace.push_back({op.qualified, op.method, Phase::After, origin});
  const std::size_t after_index = trace.size() - 1;
  const ActionPlan after = on_event(trace.back());
  run_calls(before.post_calls);
  run_calls(after.post_calls);
  executor.settled(trace, after_index);
}

void EnforcerSession::heal_one(const Operation& op, Executor& executor,
                               std::vector<Event>& trace) {
  execute(op, Origin::app(), 0, executor, trace);
}

std::vector<Event> EnforcerSession::heal(std::span<const Operation> ops,
                                         Executor& executor) {
  std::vector<Event> trace;
  trace.reserve(ops.size() * 2);
  for (const auto& op : ops) heal_one(op, executor, trace);
  return trace;
}

std::vector<ModuleInfo> EnforcerSession::modules() const {
  std::vector<ModuleInfo> out;
  out.reserve(modules_.size());
  for (const auto& m : modules_) {
    out.push_back({m.name, m.model, AutomatonState{m.states[m.current]}, m.active});
  }
  return out;
}

ModuleInfo EnforcerSession::module(std::string_view name) const {
  const Module& m = find(name);
  return {m.name, m.model, AutomatonState{m.states[m.current]}, m.active};
}

void replay_one(const Operation& op, Executor& executor,
                std::vector<Event>& trace) {
  trace.push_back({op.qualified, op.method, Phase::Before, Origin::app()});
  executor.perform(op, Origin::app());
  trace.push_back({op.qualified, op.method, Phase::After, Origin::app()});
  executor.settled(trace, trace.size() - 1);
}

std::vector<Event> replay(std::span<const Operation> ops, Executor& executor) {
  std::vector<Event> trace;
  trace.reserve(ops.size() * 2);
  for (const auto& op : ops) replay_one(op, executor, trace);
  return trace;
}

}  // namespace enforcekit
