#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

using nlohmann::json;

json to_json(const Event& event) {
  return {
      {"qualified", event.qualified},
      {"method", event.method},
      {"phase", std::string(to_string(event.phase))},
      {"origin", event.origin.is_app() ? std::string("app")
                                       : "inserted:" + event.origin.inserted_by},
  };
}

json to_json(const ExecutionReport& report) {
  auto trace = [](const std::vector<Event>& events) {
    json out = json::array();
    for (const auto& e : events) out.push_back(to_json(e));
    return out;
  };
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"rule", v.rule}, {"step", v.step}});
  }
  json timing = {{"raw_sim_us", report.timing.raw_sim_us},
                 {"healed_sim_us", report.timing.healed_sim_us}};
  if (report.timing.raw_wall_us) timing["raw_wall_us"] = *report.timing.raw_wall_us;
  if (report.timing.healed_wall_us) {
    timing["healed_wall_us"] = *report.timing.healed_wall_us;
  }
  return {
      {"scenario", report.scenario},
      {"enforced", report.enforced},
      {"seed", report.seed},
      {"raw_trace", trace(report.raw_trace)},
      {"healed_trace", trace(report.healed_trace)},
      {"violations", std::move(violations)},
      {"faults", report.faults},
      {"final_resource_states", report.final_resource_states},
      {"timing", std::move(timing)},
  };
}

std::string report_text(const ExecutionReport& report) {
  return to_json(report).dump(2) + "\n";
}

}  // namespace enforcekit::harness
