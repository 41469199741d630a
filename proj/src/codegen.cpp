#include "enforcekit/codegen.hpp"

#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"

namespace enforcekit::codegen {

using nlohmann::json;

namespace {

void require_valid(const EnforcementModel& model) {
  auto diagnostics = dsl::validate(model);
  if (dsl::has_errors(diagnostics)) {
    throw InvalidModel("model '" + model.name + "' failed validation",
                       std::move(diagnostics));
  }
}

std::string action_code(const Action& action) {
  if (is_pass(action)) return "pass";
  const auto& call = std::get<CallAction>(action);
  return "call:" + call.prefix + "." + call.method;
}

Action parse_action_code(std::string_view code) {
  if (code == "pass") return PassAction{};
  constexpr std::string_view kCall = "call:";
  if (code.starts_with(kCall)) {
    code.remove_prefix(kCall.size());
    auto dot = code.find('.');
    if (dot != std::string_view::npos && dot > 0 && dot + 1 < code.size() &&
        code.find('.', dot + 1) == std::string_view::npos) {
      return CallAction{std::string(code.substr(0, dot)),
                        std::string(code.substr(dot + 1))};
    }
  }
  throw CorruptTable("bad action code '" + std::string(code) + "'");
}

json pattern_json(const EventPattern& p) {
  return {{"prefix", p.prefix},
          {"method", p.method},
          {"phase", std::string(to_string(p.phase))}};
}

}  // namespace

HookManifest gen_manifest(const EnforcementModel& model) {
  require_valid(model);
  HookManifest manifest;
  manifest.model = model.name;
  const auto patterns = alphabet(model);
  manifest.hooks.assign(patterns.begin(), patterns.end());
  return manifest;
}

TransitionTable gen_table(const EnforcementModel& model) {
  require_valid(model);
  TransitionTable table;
  table.name = model.name;
  table.policy = model.policy_text;
  table.bindings = model.bindings;
  table.states = model.states;
  auto index_of = [&](const std::string& id) {
    return static_cast<std::size_t>(
        std::find(model.states.begin(), model.states.end(), id) -
        model.states.begin());
  };
  table.initial = index_of(model.initial);
  for (const auto& t : model.transitions) {
    TableRow row;
    row.from = index_of(t.from);
    row.on = t.on;
    for (const auto& a : t.actions) row.actions.push_back(action_code(a));
    row.to = index_of(t.to);
    table.rows.push_back(std::move(row));
  }
  return table;
}

json to_json(const HookManifest& manifest) {
  json hooks = json::array();
  for (const auto& h : manifest.hooks) {
    hooks.push_back({{"qualified", h.qualified},
                     {"method", h.method},
                     {"phase", std::string(to_string(h.phase))}});
  }
  return {{"format", "enforce-kit/hook-manifest"},
          {"generator_version", manifest.generator_version},
          {"model", manifest.model},
          {"hooks", std::move(hooks)}};
}

json to_json(const TransitionTable& table) {
  json bindings = json::array();
  for (const auto& b : table.bindings) {
    bindings.push_back({{"prefix", b.prefix},
                        {"qualified", b.qualified},
                        {"kind", std::string(to_string(b.kind))}});
  }
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"from", r.from},
                    {"on", pattern_json(r.on)},
                    {"actions", r.actions},
                    {"to", r.to}});
  }
  return {{"format", "enforce-kit/transition-table"},
          {"format_version", table.format_version},
          {"name", table.name},
          {"policy", table.policy},
          {"bindings", std::move(bindings)},
          {"states", table.states},
          {"initial", table.initial},
          {"rows", std::move(rows)}};
}

std::string manifest_text(const HookManifest& manifest) {
  return to_json(manifest).dump(2) + "\n";
}

std::string table_text(const TransitionTable& table) {
  return to_json(table).dump(2) + "\n";
}

EnforcementModel load_table(const json& doc) {
  if (!doc.is_object()) throw CorruptTable("table must be a JSON object");
  auto version = doc.find("format_version");
  if (version == doc.end() || !version->is_string()) {
    throw CorruptTable("missing format_version");
  }
  if (version->get<std::string>() != kTableFormatVersion) {
    throw VersionMismatch("unsupported table format_version '" +
                          version->get<std::string>() + "' (expected '" +
                          std::string(kTableFormatVersion) + "')");
  }

  EnforcementModel model;
  try {
    model.name = doc.at("name").get<std::string>();
    model.policy_text = doc.at("policy").get<std::string>();
    model.states = doc.at("states").get<std::vector<std::string>>();
    auto state_at = [&](const json& v) -> const std::string& {
      const auto i = v.get<std::size_t>();
      if (i >= model.states.size()) {
        throw CorruptTable("state index " + std::to_string(i) + " out of range");
      }
      return model.states[i];
    };
    model.initial = state_at(doc.at("initial"));
    for (const auto& b : doc.at("bindings")) {
      const auto kind = b.at("kind").get<std::string>();
      if (kind != "component" && kind != "api") {
        throw CorruptTable("bad binding kind '" + kind + "'");
      }
      model.bindings.push_back(
          {b.at("prefix").get<std::string>(), b.at("qualified").get<std::string>(),
           kind == "component" ? BindingKind::Component : BindingKind::Api});
    }
    for (const auto& r : doc.at("rows")) {
      Transition t;
      t.from = state_at(r.at("from"));
      t.to = state_at(r.at("to"));
      const json& on = r.at("on");
      t.on.prefix = on.at("prefix").get<std::string>();
      t.on.method = on.at("method").get<std::string>();
      if (!parse_phase(on.at("phase").get<std::string>(), t.on.phase)) {
        throw CorruptTable("bad phase in row");
      }
      for (const auto& a : r.at("actions")) {
        t.actions.push_back(parse_action_code(a.get<std::string>()));
      }
      model.transitions.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw CorruptTable(std::string("malformed table: ") + e.what());
  }

  auto diagnostics = dsl::validate(model);
  for (const auto& d : diagnostics) {
    if (d.severity == dsl::Severity::Error) {
      throw CorruptTable("table describes an invalid model: " + d.code + " " +
                         d.message);
    }
  }
  return model;
}

EnforcementModel load_table_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CorruptTable(std::string("table is not valid JSON: ") + e.what());
  }
  return load_table(doc);
}

}  // namespace enforcekit::codegen
