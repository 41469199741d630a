#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "enforcekit/cli.hpp"
#include "enforcekit/harness.hpp"

namespace enforcekit::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::size_t kChunk = 4096;

const harness::Scenario& bench_app() {
  static const harness::Scenario app = [] {
    harness::Scenario s;
    s.name = "bench-app";
    s.bindings = {
        {"a", {BindingKind::Component, std::string(harness::kActivity)}},
        {"c", {BindingKind::Api, std::string(harness::kCamera)}},
        {"r", {BindingKind::Api, std::string(harness::kAudioRecord)}},
        {"p", {BindingKind::Api, std::string(harness::kMediaPlayer)}},
        {"w", {BindingKind::Api, std::string(harness::kWakeLock)}},
    };
    return s;
  }();
  return app;
}

const std::vector<std::string>& lifecycle_callbacks() {
  static const std::vector<std::string> callbacks{
      "onCreate", "onStart", "onResume", "onPause",
      "onStop", "onRestart", "onDestroy"};
  return callbacks;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h ^ 0xff;  // field separator
}

std::uint64_t fold(std::uint64_t h, const Event& e) {
  h = fnv1a(h, e.qualified);
  h = fnv1a(h, e.method);
  h = fnv1a(h, to_string(e.phase));
  return fnv1a(h, e.origin.inserted_by);
}

constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

struct PassResult {
  double ms = 0;
  std::uint64_t fingerprint = kFnvBasis;
};

// Replays (session == nullptr) or heals the stream through a fresh simulator.
PassResult timed_pass(const std::vector<Operation>& ops, EnforcerSession* session) {
  harness::Simulator sim(bench_app(), 0, /*record_checkpoints=*/false);
  std::vector<Event> trace;
  trace.reserve(kChunk * 2 + 64);
  PassResult result;
  const auto start = Clock::now();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (session != nullptr) {
      session->heal_one(ops[i], sim, trace);
    } else {
      replay_one(ops[i], sim, trace);
    }
    if (trace.size() >= kChunk * 2 || i + 1 == ops.size()) {
      for (const auto& e : trace) result.fingerprint = fold(result.fingerprint, e);
      trace.clear();
    }
  }
  result.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

EnforcerSession bench_session(int modules) {
  EnforcerSession session;
  for (int i = 0; i < modules; ++i) {
    auto model = passthrough_model(i);
    const std::string name = model.name;
    session.register_module(name, std::move(model));
    session.set_active(name, true);
  }
  return session;
}

}  // namespace

std::vector<Operation> bench_stream(std::uint64_t events, std::uint64_t seed) {
  const auto& app = bench_app();
  std::mt19937_64 rng(seed);
  harness::Lifecycle lifecycle;
  harness::ResourceStates states;
  for (const auto& [alias, b] : app.bindings) {
    if (b.kind == BindingKind::Api) {
      states[b.qualified] = harness::find_resource_model(b.qualified)->initial;
    }
  }

  std::vector<Operation> ops;
  ops.reserve((events + 1) / 2);
  std::vector<Operation> legal;
  while (ops.size() < (events + 1) / 2) {
    legal.clear();
    for (const auto& cb : lifecycle_callbacks()) {
      // Keep the activity alive so the walk never runs out of callbacks.
      if (cb != "onDestroy" && lifecycle.can_apply(cb)) {
        legal.push_back({std::string(harness::kActivity), cb});
      }
    }
    for (const auto& [qualified, state] : states) {
      for (const auto& m : harness::find_resource_model(qualified)->methods) {
        if ((m.from.empty() || m.from == state) &&
            std::none_of(legal.begin(), legal.end(), [&](const Operation& op) {
              return op.qualified == qualified && op.method == m.method;
            })) {
          legal.push_back({qualified, m.method});
        }
      }
    }
    Operation op = legal[rng() % legal.size()];
    if (op.qualified == harness::kActivity) {
      lifecycle.apply(op.method);
    } else {
      auto& state = states[op.qualified];
      state = *harness::find_resource_model(op.qualified)->apply(state, op.method);
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

EnforcementModel passthrough_model(int index) {
  EnforcementModel model;
  model.name = "Passthrough" + std::to_string(index);
  model.policy_text = "Observes every event and changes nothing.";
  model.bindings = {
      {"a", std::string(harness::kActivity), BindingKind::Component},
      {"c", std::string(harness::kCamera), BindingKind::Api},
      {"r", std::string(harness::kAudioRecord), BindingKind::Api},
      {"p", std::string(harness::kMediaPlayer), BindingKind::Api},
      {"w", std::string(harness::kWakeLock), BindingKind::Api},
  };
  model.states = {"S0"};
  model.initial = "S0";
  auto add = [&](const std::string& prefix, const std::string& method) {
    for (Phase phase : {Phase::Before, Phase::After}) {
      model.transitions.push_back(
          {"S0", {prefix, method, phase}, {PassAction{}}, "S0"});
    }
  };
  for (const auto& cb : lifecycle_callbacks()) add("a", cb);
  for (const auto& b : model.bindings) {
    if (b.kind != BindingKind::Api) continue;
    std::vector<std::string> seen;
    for (const auto& m : harness::find_resource_model(b.qualified)->methods) {
      if (std::find(seen.begin(), seen.end(), m.method) != seen.end()) continue;
      seen.push_back(m.method);
      add(b.prefix, m.method);
    }
  }
  return model;
}

BenchResult run_bench(const BenchOptions& options) {
  if (options.modules < 0 || options.modules > 16) {
    throw std::invalid_argument("--modules must be in [0, 16]");
  }
  if (options.events < 1) throw std::invalid_argument("--events must be >= 1");

  const auto ops = bench_stream(options.events, options.seed);
  BenchResult result;
  result.active_modules = options.modules;
  result.seed = options.seed;
  result.events_executed = ops.size() * 2;
  result.stream_fingerprint = kFnvBasis;
  for (const auto& op : ops) {
    result.stream_fingerprint = fnv1a(result.stream_fingerprint, op.qualified);
    result.stream_fingerprint = fnv1a(result.stream_fingerprint, op.method);
  }

  // Best of N, alternating so both paths see the same machine conditions.
  double best_baseline = 0;
  double best_enforced = 0;
  for (int rep = 0; rep < std::max(1, options.repetitions); ++rep) {
    PassResult baseline = timed_pass(ops, nullptr);
    EnforcerSession session = bench_session(options.modules);
    PassResult enforced = timed_pass(ops, &session);
    if (rep == 0 || baseline.ms < best_baseline) best_baseline = baseline.ms;
    if (rep == 0 || enforced.ms < best_enforced) best_enforced = enforced.ms;
    result.baseline_trace_fingerprint = baseline.fingerprint;
    result.enforced_trace_fingerprint = enforced.fingerprint;
  }
  result.baseline_ms = best_baseline;
  result.enforced_ms = best_enforced;
  result.relative_overhead =
      best_baseline > 0 ? (best_enforced - best_baseline) / best_baseline : 0.0;
  result.traces_identical =
      result.baseline_trace_fingerprint == result.enforced_trace_fingerprint;

  // Per-event dispatch latency, each on_event call timed on its own.
  EnforcerSession session = bench_session(options.modules);
  std::vector<double> samples;
  samples.reserve(result.events_executed);
  Event event;
  for (const auto& op : ops) {
    event.qualified = op.qualified;
    event.method = op.method;
    for (Phase phase : {Phase::Before, Phase::After}) {
      event.phase = phase;
      const auto t0 = Clock::now();
      ActionPlan plan = session.on_event(event);
      const auto t1 = Clock::now();
      if (!plan.proceed) throw std::logic_error("pass-through module suppressed");
      samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    }
  }
  double total = 0;
  for (double s : samples) total += s;
  result.dispatch_mean_ns = total / static_cast<double>(samples.size());
  const auto p99 = samples.begin() + static_cast<std::ptrdiff_t>(
                                         (samples.size() - 1) * 99 / 100);
  std::nth_element(samples.begin(), p99, samples.end());
  result.dispatch_p99_ns = *p99;
  return result;
}

nlohmann::json to_json(const BenchResult& r) {
  return {
      {"events_executed", r.events_executed},
      {"active_modules", r.active_modules},
      {"seed", r.seed},
      {"enforced_ms", r.enforced_ms},
      {"baseline_ms", r.baseline_ms},
      {"relative_overhead", r.relative_overhead},
      {"dispatch_mean_ns", r.dispatch_mean_ns},
      {"dispatch_p99_ns", r.dispatch_p99_ns},
      {"stream_fingerprint", r.stream_fingerprint},
      {"baseline_trace_fingerprint", r.baseline_trace_fingerprint},
      {"enforced_trace_fingerprint", r.enforced_trace_fingerprint},
      {"traces_identical", r.traces_identical},
  };
}

}  // namespace enforcekit::cli
