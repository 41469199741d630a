#include <array>
#include <utility>

#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

namespace {

constexpr std::array<std::pair<LifecycleState, std::string_view>, 7> kNames{{
    {LifecycleState::Initialized, "Initialized"},
    {LifecycleState::Created, "Created"},
    {LifecycleState::Started, "Started"},
    {LifecycleState::Resumed, "Resumed"},
    {LifecycleState::Paused, "Paused"},
    {LifecycleState::Stopped, "Stopped"},
    {LifecycleState::Destroyed, "Destroyed"},
}};

struct Edge {
  std::string_view callback;
  LifecycleState from;
  LifecycleState to;
};

// onRestart is handled separately.
constexpr std::array<Edge, 7> kEdges{{
    {"onCreate", LifecycleState::Initialized, LifecycleState::Created},
    {"onStart", LifecycleState::Created, LifecycleState::Started},
    {"onResume", LifecycleState::Started, LifecycleState::Resumed},
    {"onPause", LifecycleState::Resumed, LifecycleState::Paused},
    {"onStop", LifecycleState::Paused, LifecycleState::Stopped},
    {"onResume", LifecycleState::Paused, LifecycleState::Resumed},
    {"onDestroy", LifecycleState::Stopped, LifecycleState::Destroyed},
}};

}  // namespace

std::string_view to_string(LifecycleState state) {
  for (const auto& [s, name] : kNames) {
    if (s == state) return name;
  }
  return "?";
}

std::optional<LifecycleState> parse_lifecycle_state(std::string_view text) {
  for (const auto& [s, name] : kNames) {
    if (name == text) return s;
  }
  return std::nullopt;
}

bool is_lifecycle_callback(std::string_view method) {
  if (method == "onRestart") return true;
  for (const auto& e : kEdges) {
    if (e.callback == method) return true;
  }
  return false;
}

bool Lifecycle::can_apply(std::string_view callback) const {
  if (restart_pending_) return callback == "onStart";
  if (callback == "onRestart") return state_ == LifecycleState::Stopped;
  for (const auto& e : kEdges) {
    if (e.callback == callback && e.from == state_) return true;
  }
  return false;
}

bool Lifecycle::apply(std::string_view callback) {
  if (!can_apply(callback)) return false;
  if (restart_pending_) {
    restart_pending_ = false;
    state_ = LifecycleState::Started;
    return true;
  }
  if (callback == "onRestart") {
    restart_pending_ = true;
    return true;
  }
  for (const auto& e : kEdges) {
    if (e.callback == callback && e.from == state_) {
      state_ = e.to;
      break;
    }
  }
  return true;
}

}  // namespace enforcekit::harness
