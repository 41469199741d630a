#pragma once

#include <filesystem>
#include <string>

#include "enforcekit/model.hpp"

namespace enforcekit::testing {

inline const std::filesystem::path kCorpus = ENFORCEKIT_CORPUS_DIR;

inline constexpr const char* kActivityType = "android.app.Activity";
inline constexpr const char* kCameraType = "android.hardware.Camera";

// The camera release-on-pause policy, built by hand.
inline EnforcementModel fig2_model() {
  EnforcementModel m;
  m.name = "CameraReleaseOnPause";
  m.bindings = {{"a", kActivityType, BindingKind::Component},
                {"c", kCameraType, BindingKind::Api}};
  m.states = {"S0", "S1"};
  m.initial = "S0";
  m.transitions = {
      {"S0", {"c", "open", Phase::Before}, {PassAction{}}, "S1"},
      {"S1", {"c", "release", Phase::After}, {PassAction{}}, "S0"},
      {"S1",
       {"a", "onPause", Phase::After},
       {PassAction{}, CallAction{"c", "release"}},
       "S0"},
  };
  return m;
}

inline const char* const kFig2Text =
    "enforcer CameraReleaseOnPause {\n"
    "  component a: android.app.Activity\n"
    "  api c: android.hardware.Camera\n"
    "  initial S0\n"
    "  state S0 {\n"
    "    on before c.open() emit [pass] -> S1\n"
    "  }\n"
    "  state S1 {\n"
    "    on after c.release() emit [pass] -> S0\n"
    "    on after a.onPause() emit [pass, call c.release()] -> S0\n"
    "  }\n"
    "}\n";

}  // namespace enforcekit::testing
