#include <algorithm>
#include <chrono>

#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Simulator::Simulator(const Scenario& scenario, std::uint64_t seed,
                     bool record_checkpoints)
    : scenario_(scenario),
      component_(scenario.component_qualified()),
      lifecycle_(scenario.lifecycle_start),
      rng_state_(seed),
      record_checkpoints_(record_checkpoints) {
  for (const auto& [alias, b] : scenario.bindings) {
    if (b.kind == BindingKind::Api) {
      states_[b.qualified] = find_resource_model(b.qualified)->initial;
    }
  }
}

void Simulator::perform(const Operation& op, const Origin& origin) {
  const bool lifecycle = is_lifecycle_callback(op.method);
  const std::uint64_t draw = splitmix64(rng_state_);
  clock_us_ += static_cast<std::int64_t>(lifecycle ? 100 + draw % 400 : 20 + draw % 100);

  auto who = [&] {
    return origin.is_app() ? std::string("app") : "module " + origin.inserted_by;
  };
  if (op.qualified == component_) {
    if (lifecycle) {
      const auto before = lifecycle_.state();
      if (!lifecycle_.apply(op.method)) {
        fault(who() + " ran " + op.method + " in lifecycle state " +
              std::string(to_string(before)));
      }
    }
    return;
  }
  auto it = states_.find(op.qualified);
  if (it == states_.end()) {
    fault(who() + " called " + op.qualified + "." + op.method +
          " but no such resource is bound");
    return;
  }
  auto next = find_resource_model(op.qualified)->apply(it->second, op.method);
  if (!next) {
    fault(who() + " called " + op.qualified + "." + op.method + " in state " +
          it->second);
    return;
  }
  it->second = std::move(*next);
}

void Simulator::settled(const std::vector<Event>&, std::size_t index) {
  if (record_checkpoints_) checkpoints_.push_back({index, step_, states_});
}

void Simulator::fault(std::string message) {
  faults_.push_back({step_, std::move(message)});
}

namespace {

struct Pass {
  std::vector<Event> trace;
  std::vector<Violation> violations;
  std::vector<std::string> faults;
  ResourceStates states;
  std::int64_t sim_us = 0;
  double wall_us = 0;
};

Pass execute(const Scenario& scenario, EnforcerSession* session,
             std::uint64_t seed) {
  Simulator sim(scenario, seed);
  Pass pass;
  pass.trace.reserve(scenario.steps.size() * 2);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
    sim.begin_step(i);
    const Operation op = scenario.operation(scenario.steps[i]);
    if (session != nullptr) {
      session->heal_one(op, sim, pass.trace);
    } else {
      replay_one(op, sim, pass.trace);
    }
  }
  pass.wall_us = std::chrono::duration<double, std::micro>(
                     std::chrono::steady_clock::now() - start)
                     .count();

  for (const auto& rule : oracle_rules()) {
    auto found = check_oracle(rule, pass.trace, sim.checkpoints());
    pass.violations.insert(pass.violations.end(), found.begin(), found.end());
  }
  for (const auto& f : sim.faults()) {
    pass.violations.push_back({std::string(kFaultRule), f.step});
    pass.faults.push_back("step " + std::to_string(f.step) + ": " + f.message);
  }
  std::stable_sort(pass.violations.begin(), pass.violations.end(),
                   [](const auto& a, const auto& b) { return a.step < b.step; });
  pass.states = sim.states();
  pass.sim_us = sim.clock_us();
  return pass;
}

}  // namespace

ExecutionReport run(const Scenario& scenario, EnforcerSession* session,
                    const RunOptions& options) {
  ExecutionReport report;
  report.scenario = scenario.name;
  report.enforced = session != nullptr;
  report.seed = options.seed;

  Pass raw = execute(scenario, nullptr, options.seed);
  report.timing.raw_sim_us = raw.sim_us;
  if (options.measure_wall_clock) report.timing.raw_wall_us = raw.wall_us;

  Pass chosen;
  if (session != nullptr) {
    chosen = execute(scenario, session, options.seed);
    if (options.measure_wall_clock) report.timing.healed_wall_us = chosen.wall_us;
  } else {
    chosen = raw;
    if (options.measure_wall_clock) report.timing.healed_wall_us = raw.wall_us;
  }
  report.timing.healed_sim_us = chosen.sim_us;
  report.raw_trace = std::move(raw.trace);
  report.healed_trace = std::move(chosen.trace);
  report.violations = std::move(chosen.violations);
  report.faults = std::move(chosen.faults);
  for (const auto& [qualified, state] : chosen.states) {
    report.final_resource_states[*scenario.alias_of(qualified)] = state;
  }
  return report;
}

std::vector<std::string> lifecycle_sequence(const std::vector<Event>& trace,
                                            std::string_view component) {
  std::vector<std::string> out;
  for (const auto& e : trace) {
    if (e.phase == Phase::After && e.qualified == component &&
        is_lifecycle_callback(e.method)) {
      out.push_back(e.method);
    }
  }
  return out;
}

}  // namespace enforcekit::harness
