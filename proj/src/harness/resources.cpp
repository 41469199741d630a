#include <algorithm>

#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

std::optional<std::string> ResourceModel::apply(std::string_view state,
                                                std::string_view method) const {
  for (const auto& m : methods) {
    if (m.method == method && (m.from.empty() || m.from == state)) return m.to;
  }
  return std::nullopt;
}

bool ResourceModel::is_released(std::string_view state) const {
  return std::find(released_states.begin(), released_states.end(), state) !=
         released_states.end();
}

// Simplified state machines: only the states the shipped policies talk about.
// Every release is idempotent so that an enforcer-inserted release after the
// app's own release is harmless.
const std::vector<ResourceModel>& resource_models() {
  static const std::vector<ResourceModel> models{
      {std::string(kCamera),
       {"Released", "Acquired"},
       "Released",
       {{"open", "Released", "Acquired"},
        {"release", "Acquired", "Released"},
        {"release", "Released", "Released"}},
       {"Released"}},
      {std::string(kAudioRecord),
       {"Idle", "Recording", "Disposed"},
       "Idle",
       {{"startRecording", "Idle", "Recording"},
        {"stop", "Recording", "Idle"},
        {"release", "", "Disposed"}},
       {"Idle", "Disposed"}},
      {std::string(kMediaPlayer),
       {"Idle", "Started", "Disposed"},
       "Idle",
       {{"start", "Idle", "Started"},
        {"stop", "Started", "Idle"},
        {"release", "", "Disposed"}},
       {"Idle", "Disposed"}},
      {std::string(kWakeLock),
       {"NotHeld", "Held"},
       "NotHeld",
       {{"acquire", "NotHeld", "Held"},
        {"release", "Held", "NotHeld"},
        {"release", "NotHeld", "NotHeld"}},
       {"NotHeld"}},
  };
  return models;
}

const ResourceModel* find_resource_model(std::string_view qualified) {
  for (const auto& m : resource_models()) {
    if (m.qualified == qualified) return &m;
  }
  return nullptr;
}

}  // namespace enforcekit::harness
