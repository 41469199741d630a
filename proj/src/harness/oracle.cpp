#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

namespace {

bool completed(const Event& e, std::string_view callback) {
  return e.phase == Phase::After && e.method == callback;
}

bool state_is(const ResourceStates& states, std::string_view qualified,
              std::string_view state) {
  auto it = states.find(qualified);
  return it != states.end() && it->second == state;
}

}  // namespace

const std::vector<OracleRule>& oracle_rules() {
  static const std::vector<OracleRule> rules{
      {"R1", "camera still acquired when onPause completes", false,
       [](const Event& e, const ResourceStates& s) {
         return completed(e, "onPause") && state_is(s, kCamera, "Acquired");
       }},
      {"R2", "microphone still recording when onStop completes", false,
       [](const Event& e, const ResourceStates& s) {
         return completed(e, "onStop") && state_is(s, kAudioRecord, "Recording");
       }},
      {"R3", "media player not released when onDestroy completes", true,
       [](const Event& e, const ResourceStates& s) {
         auto it = s.find(kMediaPlayer);
         return completed(e, "onDestroy") && it != s.end() &&
                it->second != "Disposed";
       }},
      {"R4", "wake lock still held when onStop completes", true,
       [](const Event& e, const ResourceStates& s) {
         return completed(e, "onStop") && state_is(s, kWakeLock, "Held");
       }},
  };
  return rules;
}

const OracleRule* find_rule(std::string_view id) {
  for (const auto& r : oracle_rules()) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<Violation> check_oracle(const OracleRule& rule,
                                    const std::vector<Event>& trace,
                                    const std::vector<Checkpoint>& timeline) {
  std::vector<Violation> out;
  for (const auto& point : timeline) {
    if (point.trace_index >= trace.size()) continue;
    const Event& e = trace[point.trace_index];
    if (!is_lifecycle_callback(e.method)) continue;
    if (rule.violated(e, point.states)) out.push_back({rule.id, point.step});
  }
  return out;
}

}  // namespace enforcekit::harness
