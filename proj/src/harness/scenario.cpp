#include <fstream>
#include <set>

#include "enforcekit/errors.hpp"
#include "enforcekit/harness.hpp"

namespace enforcekit::harness {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(where + ": missing \"" + key + "\"");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) {
    throw SchemaError(where + ": \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

Step parse_step(const json& doc, const std::string& where) {
  if (!doc.is_object() || doc.size() != 1) {
    throw SchemaError(where + ": step must be {\"lifecycle\": ...} or {\"call\": ...}");
  }
  if (doc.contains("lifecycle")) {
    return LifecycleStep{require_string(doc, "lifecycle", where)};
  }
  if (doc.contains("call")) {
    const json& call = doc["call"];
    if (!call.is_object()) throw SchemaError(where + ": \"call\" must be an object");
    return ApiCallStep{require_string(call, "alias", where),
                       require_string(call, "method", where)};
  }
  throw SchemaError(where + ": unknown step kind");
}

}  // namespace

const std::string& Scenario::component_alias() const {
  for (const auto& [alias, b] : bindings) {
    if (b.kind == BindingKind::Component) return alias;
  }
  throw SchemaError("scenario '" + name + "' has no component binding");
}

const std::string& Scenario::component_qualified() const {
  return bindings.at(component_alias()).qualified;
}

Operation Scenario::operation(const Step& step) const {
  if (const auto* lc = std::get_if<LifecycleStep>(&step)) {
    return {component_qualified(), lc->callback};
  }
  const auto& call = std::get<ApiCallStep>(step);
  return {bindings.at(call.alias).qualified, call.method};
}

const std::string* Scenario::alias_of(std::string_view qualified) const {
  for (const auto& [alias, b] : bindings) {
    if (b.qualified == qualified) return &alias;
  }
  return nullptr;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
  static const std::set<std::string> known{
      "name", "description", "bindings", "lifecycle_start", "steps",
      "expected_rules"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw SchemaError("unknown key \"" + key + "\"");
  }

  Scenario s;
  s.name = require_string(doc, "name", "scenario");
  const std::string where = "scenario '" + s.name + "'";

  const json& bindings = require(doc, "bindings", where);
  if (!bindings.is_object()) throw SchemaError(where + ": \"bindings\" must be an object");
  int components = 0;
  std::set<std::string> api_types;
  for (const auto& [alias, b] : bindings.items()) {
    const std::string bw = where + " binding '" + alias + "'";
    if (!b.is_object()) throw SchemaError(bw + " must be an object");
    ScenarioBinding binding;
    const std::string kind = require_string(b, "kind", bw);
    binding.qualified = require_string(b, "qualified", bw);
    if (kind == "component") {
      binding.kind = BindingKind::Component;
      ++components;
    } else if (kind == "api") {
      binding.kind = BindingKind::Api;
      if (find_resource_model(binding.qualified) == nullptr) {
        throw SchemaError(bw + ": no resource model for " + binding.qualified);
      }
      if (!api_types.insert(binding.qualified).second) {
        throw SchemaError(bw + ": " + binding.qualified + " bound twice");
      }
    } else {
      throw SchemaError(bw + ": kind must be \"component\" or \"api\"");
    }
    s.bindings.emplace(alias, std::move(binding));
  }
  if (components != 1) {
    throw SchemaError(where + ": exactly one component binding is required");
  }

  if (doc.contains("lifecycle_start")) {
    auto start = parse_lifecycle_state(require_string(doc, "lifecycle_start", where));
    if (!start) throw SchemaError(where + ": unknown lifecycle_start");
    s.lifecycle_start = *start;
  }

  const json& steps = require(doc, "steps", where);
  if (!steps.is_array()) throw SchemaError(where + ": \"steps\" must be an array");
  Lifecycle lifecycle(s.lifecycle_start);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string sw = where + " step " + std::to_string(i);
    Step step = parse_step(steps[i], sw);
    if (const auto* lc = std::get_if<LifecycleStep>(&step)) {
      if (!is_lifecycle_callback(lc->callback)) {
        throw SchemaError(sw + ": unknown lifecycle callback '" + lc->callback + "'");
      }
      const auto before = lifecycle.state();
      if (!lifecycle.apply(lc->callback)) {
        throw IllegalLifecycle(sw + ": " + lc->callback + " is illegal in state " +
                               std::string(to_string(before)));
      }
    } else {
      const auto& call = std::get<ApiCallStep>(step);
      auto it = s.bindings.find(call.alias);
      if (it == s.bindings.end() || it->second.kind != BindingKind::Api) {
        throw SchemaError(sw + ": '" + call.alias + "' is not a bound api alias");
      }
      const ResourceModel* model = find_resource_model(it->second.qualified);
      bool known_method = false;
      for (const auto& m : model->methods) known_method |= m.method == call.method;
      if (!known_method) {
        throw SchemaError(sw + ": " + it->second.qualified + " has no method '" +
                          call.method + "'");
      }
    }
    s.steps.push_back(std::move(step));
  }

  const json& rules = require(doc, "expected_rules", where);
  if (!rules.is_array()) throw SchemaError(where + ": \"expected_rules\" must be an array");
  for (const auto& r : rules) {
    if (!r.is_string()) throw SchemaError(where + ": rule ids must be strings");
    std::string id = r.get<std::string>();
    if (find_rule(id) == nullptr && id != kFaultRule) {
      throw SchemaError(where + ": unknown rule '" + id + "'");
    }
    s.expected_rules.push_back(std::move(id));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

json to_json(const Scenario& scenario) {
  json doc;
  doc["name"] = scenario.name;
  json bindings = json::object();
  for (const auto& [alias, b] : scenario.bindings) {
    bindings[alias] = {{"kind", std::string(to_string(b.kind))},
                       {"qualified", b.qualified}};
  }
  doc["bindings"] = std::move(bindings);
  if (scenario.lifecycle_start != LifecycleState::Initialized) {
    doc["lifecycle_start"] = std::string(to_string(scenario.lifecycle_start));
  }
  json steps = json::array();
  for (const auto& step : scenario.steps) {
    if (const auto* lc = std::get_if<LifecycleStep>(&step)) {
      steps.push_back({{"lifecycle", lc->callback}});
    } else {
      const auto& call = std::get<ApiCallStep>(step);
      steps.push_back({{"call", {{"alias", call.alias}, {"method", call.method}}}});
    }
  }
  doc["steps"] = std::move(steps);
  doc["expected_rules"] = scenario.expected_rules;
  return doc;
}

}  // namespace enforcekit::harness
