#pragma once

// Compiles enforcement models into deployable artifacts: the hook manifest
// (what a platform has to intercept) and the transition table (what the
// engine executes).

#include <string>
#include <string_view>
#include <vector>

#include "enforcekit/model.hpp"
#include "json.hpp"

namespace enforcekit::codegen {

inline constexpr std::string_view kGeneratorVersion = "1";
inline constexpr std::string_view kTableFormatVersion = "1";

struct HookManifest {
  std::string model;
  std::vector<ResolvedPattern> hooks;  // sorted, unique
  std::string generator_version{kGeneratorVersion};
};

struct TableRow {
  std::size_t from = 0;
  EventPattern on;
  std::vector<std::string> actions;  // "pass" or "call:<prefix>.<method>"
  std::size_t to = 0;
};

struct TransitionTable {
  std::string format_version{kTableFormatVersion};
  std::string name;
  std::string policy;
  std::vector<PrefixBinding> bindings;
  std::vector<std::string> states;
  std::size_t initial = 0;
  std::vector<TableRow> rows;
};

/// Both generators throw InvalidModel when validation reports errors.
HookManifest gen_manifest(const EnforcementModel& model);
TransitionTable gen_table(const EnforcementModel& model);

nlohmann::json to_json(const HookManifest& manifest);
nlohmann::json to_json(const TransitionTable& table);

/// Stable-key JSON text, 2-space indented, trailing newline.
std::string manifest_text(const HookManifest& manifest);
std::string table_text(const TransitionTable& table);

/// Rebuilds the model from a table document. Throws VersionMismatch for an
/// unsupported format_version and CorruptTable for anything malformed.
EnforcementModel load_table(const nlohmann::json& doc);
EnforcementModel load_table_text(std::string_view text);

}  // namespace enforcekit::codegen
