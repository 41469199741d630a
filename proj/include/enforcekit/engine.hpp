#pragma once

// The policy enforcer: a registry of proactive modules that receives
// intercepted events, advances the active modules' automata and composes
// their reactions into one action plan per event.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "enforcekit/model.hpp"

namespace enforcekit {

/// Who caused an operation: the app itself, or a module inserting a call.
struct Origin {
  std::string inserted_by;  // empty for App

  static Origin app() { return {}; }
  static Origin inserted(std::string module) { return {std::move(module)}; }
  bool is_app() const { return inserted_by.empty(); }

  bool operator==(const Origin&) const = default;
};

struct Operation {
  std::string qualified;
  std::string method;

  bool operator==(const Operation&) const = default;
};

struct Event {
  std::string qualified;
  std::string method;
  Phase phase = Phase::Before;
  Origin origin;

  bool operator==(const Event&) const = default;
};

/// `before#android.hardware.Camera.open`, with ` [by module]` appended for
/// inserted events.
std::string to_string(const Event& event);

struct PlannedCall {
  std::string qualified;
  std::string method;
  std::string module;  // the inserting module

  bool operator==(const PlannedCall&) const = default;
};

struct ActionPlan {
  bool proceed = true;
  std::vector<PlannedCall> pre_calls;
  std::vector<PlannedCall> post_calls;

  bool operator==(const ActionPlan&) const = default;
};

/// Performs operations on behalf of heal/replay. Events are produced by the
/// caller; the executor only applies side effects.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual void perform(const Operation& op, const Origin& origin) = 0;
  /// Called once the After event at trace[index] and every call inserted in
  /// reaction to it have run.
  virtual void settled(const std::vector<Event>& trace, std::size_t index) {
    (void)trace;
    (void)index;
  }
};

struct ModuleInfo {
  std::string name;
  std::shared_ptr<const EnforcementModel> model;
  AutomatonState state;
  bool active = false;
};

struct PatternView {
  std::string_view qualified;
  std::string_view method;
  Phase phase;
};

class EnforcerSession {
 public:
  static constexpr int kDepthCap = 16;

  EnforcerSession() = default;

  /// Appends an inactive module in its initial state. Throws DuplicateName, or
  /// InvalidModel when the model has validation errors.
  void register_module(std::string name, EnforcementModel model);
  void register_module(std::string name,
                       std::shared_ptr<const EnforcementModel> model);

  /// Activating resets the module to its initial state. Throws UnknownModule.
  void set_active(std::string_view name, bool active);

  /// Dispatches one event to the active modules in registration order and
  /// composes their plans. Events inserted by module m are not shown to m.
  ActionPlan on_event(const Event& event);

  /// Runs `ops` as app operations through the enforcer and returns the
  /// executed event sequence. Throws DepthExceeded on runaway insertion.
  std::vector<Event> heal(std::span<const Operation> ops, Executor& executor);

  /// heal() for a single app operation, appending to `trace`.
  void heal_one(const Operation& op, Executor& executor,
                std::vector<Event>& trace);

  std::vector<ModuleInfo> modules() const;
  ModuleInfo module(std::string_view name) const;
  std::size_t size() const { return modules_.size(); }
  int depth() const { return depth_; }

 private:
  struct CompiledRow {
    std::int32_t to = -1;
    bool pass = true;
    std::vector<PlannedCall> pre_calls;
    std::vector<PlannedCall> post_calls;
  };

  struct Module {
    std::string name;
    std::shared_ptr<const EnforcementModel> model;
    std::vector<std::string> states;
    std::int32_t initial = 0;
    std::int32_t current = 0;
    bool active = false;
  };

  // Per-pattern subscription: which modules react to it and, per state, the
  // row to apply (or -1 for pass-through).
  struct Subscriber {
    std::size_t module;
    std::vector<std::int32_t> row_by_state;
  };

  struct Subscription {
    std::vector<Subscriber> subscribers;
    std::vector<CompiledRow> rows;
  };

  struct PatternHash {
    using is_transparent = void;
    std::size_t operator()(const ResolvedPattern& p) const;
    std::size_t operator()(const PatternView& p) const;
  };
  struct PatternEq {
    using is_transparent = void;
    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      return a.phase == b.phase && a.method == b.method &&
             a.qualified == b.qualified;
    }
  };

  Module& find(std::string_view name);
  const Module& find(std::string_view name) const;
  void execute(const Operation& op, const Origin& origin, int depth,
               Executor& executor, std::vector<Event>& trace);

  std::vector<Module> modules_;
  std::unordered_map<ResolvedPattern, Subscription, PatternHash, PatternEq>
      index_;
  int depth_ = 0;
};

/// Runs `ops` with no enforcement: the raw Before/After expansion.
std::vector<Event> replay(std::span<const Operation> ops, Executor& executor);

/// replay() for a single operation, appending to `trace`.
void replay_one(const Operation& op, Executor& executor,
                std::vector<Event>& trace);

}  // namespace enforcekit
