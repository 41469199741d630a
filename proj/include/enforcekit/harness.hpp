#pragma once

// Discrete-event simulator of an Android-style activity and the resources it
// uses. Scripted scenarios are executed with or without an enforcer session
// and judged by resource-usage oracle rules.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enforcekit/engine.hpp"
#include "enforcekit/model.hpp"
#include "json.hpp"

namespace enforcekit::harness {

inline constexpr std::string_view kActivity = "android.app.Activity";
inline constexpr std::string_view kCamera = "android.hardware.Camera";
inline constexpr std::string_view kAudioRecord = "android.media.AudioRecord";
inline constexpr std::string_view kMediaPlayer = "android.media.MediaPlayer";
inline constexpr std::string_view kWakeLock = "android.os.PowerManager.WakeLock";

// ---------------------------------------------------------------------------
// Lifecycle

enum class LifecycleState {
  Initialized,
  Created,
  Started,
  Resumed,
  Paused,
  Stopped,
  Destroyed,
};

std::string_view to_string(LifecycleState state);
std::optional<LifecycleState> parse_lifecycle_state(std::string_view text);

bool is_lifecycle_callback(std::string_view method);

/// Tracks one activity along the lifecycle graph. onRestart keeps the activity
/// Stopped but obliges the next callback to be onStart.
class Lifecycle {
 public:
  explicit Lifecycle(LifecycleState start = LifecycleState::Initialized)
      : state_(start) {}

  bool can_apply(std::string_view callback) const;
  /// Returns false (and changes nothing) when the callback is illegal here.
  bool apply(std::string_view callback);

  LifecycleState state() const { return state_; }

 private:
  LifecycleState state_;
  bool restart_pending_ = false;
};

// ---------------------------------------------------------------------------
// Resources

struct ResourceMethod {
  std::string method;
  std::string from;  // empty: any state
  std::string to;
};

struct ResourceModel {
  std::string qualified;
  std::vector<std::string> states;
  std::string initial;
  std::vector<ResourceMethod> methods;
  std::vector<std::string> released_states;

  /// Next state for `method` in `state`, or nothing on misuse.
  std::optional<std::string> apply(std::string_view state,
                                   std::string_view method) const;
  bool is_released(std::string_view state) const;
};

/// Camera, AudioRecord, MediaPlayer and WakeLock.
const std::vector<ResourceModel>& resource_models();
const ResourceModel* find_resource_model(std::string_view qualified);

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioBinding {
  BindingKind kind = BindingKind::Api;
  std::string qualified;

  bool operator==(const ScenarioBinding&) const = default;
};

struct LifecycleStep {
  std::string callback;
  bool operator==(const LifecycleStep&) const = default;
};

struct ApiCallStep {
  std::string alias;
  std::string method;
  bool operator==(const ApiCallStep&) const = default;
};

using Step = std::variant<LifecycleStep, ApiCallStep>;

struct Scenario {
  std::string name;
  std::map<std::string, ScenarioBinding> bindings;
  LifecycleState lifecycle_start = LifecycleState::Initialized;
  std::vector<Step> steps;
  std::vector<std::string> expected_rules;

  const std::string& component_alias() const;
  const std::string& component_qualified() const;
  /// The operation a step performs, with aliases resolved.
  Operation operation(const Step& step) const;
  /// Alias bound to `qualified`, if any.
  const std::string* alias_of(std::string_view qualified) const;

  bool operator==(const Scenario&) const = default;
};

/// Validates a scenario document. Throws SchemaError or IllegalLifecycle.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Oracle

/// Resource states by qualified type name.
using ResourceStates = std::map<std::string, std::string, std::less<>>;

struct OracleRule {
  std::string id;
  std::string description;
  bool extrapolated = false;
  std::function<bool(const Event& completed, const ResourceStates& states)>
      violated;
};

/// R1-R4.
const std::vector<OracleRule>& oracle_rules();
const OracleRule* find_rule(std::string_view id);

/// Resource states captured once a completed operation (an After event) and
/// everything inserted in reaction to it have run.
struct Checkpoint {
  std::size_t trace_index = 0;
  std::size_t step = 0;
  ResourceStates states;
};

struct Violation {
  std::string rule;
  std::size_t step = 0;

  auto operator<=>(const Violation&) const = default;
};

inline constexpr std::string_view kFaultRule = "FAULT";

std::vector<Violation> check_oracle(const OracleRule& rule,
                                    const std::vector<Event>& trace,
                                    const std::vector<Checkpoint>& timeline);

// ---------------------------------------------------------------------------
// Runs

/// Executor that applies operations to a scenario's simulated activity and
/// resources. Misuse (an illegal lifecycle callback, a resource method in the
/// wrong state, a call on an unbound type) is recorded as a fault, never
/// thrown. Each operation advances a simulated clock by a seeded latency.
class Simulator final : public Executor {
 public:
  struct Fault {
    std::size_t step;
    std::string message;
  };

  Simulator(const Scenario& scenario, std::uint64_t seed,
            bool record_checkpoints = true);

  void begin_step(std::size_t step) { step_ = step; }

  void perform(const Operation& op, const Origin& origin) override;
  void settled(const std::vector<Event>& trace, std::size_t index) override;

  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  const std::vector<Fault>& faults() const { return faults_; }
  const ResourceStates& states() const { return states_; }
  LifecycleState lifecycle_state() const { return lifecycle_.state(); }
  std::int64_t clock_us() const { return clock_us_; }

 private:
  void fault(std::string message);

  const Scenario& scenario_;
  std::string component_;
  Lifecycle lifecycle_;
  ResourceStates states_;
  std::uint64_t rng_state_;
  std::int64_t clock_us_ = 0;
  std::size_t step_ = 0;
  bool record_checkpoints_;
  std::vector<Checkpoint> checkpoints_;
  std::vector<Fault> faults_;
};

struct Timing {
  std::int64_t raw_sim_us = 0;
  std::int64_t healed_sim_us = 0;
  std::optional<double> raw_wall_us;
  std::optional<double> healed_wall_us;
};

struct ExecutionReport {
  std::string scenario;
  bool enforced = false;
  std::uint64_t seed = 0;
  std::vector<Event> raw_trace;
  std::vector<Event> healed_trace;
  std::vector<Violation> violations;
  std::vector<std::string> faults;  // human-readable misuse descriptions
  std::map<std::string, std::string> final_resource_states;  // alias -> state
  Timing timing;
};

struct RunOptions {
  std::uint64_t seed = 0;
  bool measure_wall_clock = false;
};

/// Executes the scenario's steps, routing every operation through `session`
/// when one is given. Throws DepthExceeded when enforcement loops.
ExecutionReport run(const Scenario& scenario, EnforcerSession* session,
                    const RunOptions& options = {});

/// Lifecycle callbacks of `trace` in order, restricted to app or inserted
/// events on `component`.
std::vector<std::string> lifecycle_sequence(const std::vector<Event>& trace,
                                            std::string_view component);

nlohmann::json to_json(const Event& event);
nlohmann::json to_json(const ExecutionReport& report);
/// Stable-key JSON text of the report, 2-space indented, trailing newline.
std::string report_text(const ExecutionReport& report);

// ---------------------------------------------------------------------------
// Corpus

struct CorpusEntry {
  std::filesystem::path path;
  Scenario scenario;
  bool misuse = false;
  bool extrapolated = false;
  std::vector<std::filesystem::path> model_paths;
  std::vector<EnforcementModel> models;  // the scenario's matching modules
};

struct Corpus {
  std::filesystem::path root;
  std::vector<CorpusEntry> entries;
  std::vector<std::filesystem::path> all_model_paths;
  std::vector<EnforcementModel> all_models;
};

std::filesystem::path default_corpus_dir();

/// Loads the shipped corpus from `root/index.json`.
Corpus corpus(const std::filesystem::path& root = default_corpus_dir());

/// A session with `models` registered under their model names and activated.
EnforcerSession make_session(const std::vector<EnforcementModel>& models);

}  // namespace enforcekit::harness
