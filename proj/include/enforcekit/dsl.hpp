#pragma once

// Textual front-end for enforcement models (`.pel` files).
//
//   model      = "enforcer" IDENT "{" [policy] binding+ "initial" IDENT
//                stateBlock+ "}"
//   policy     = "policy" STRING
//   binding    = ("component" | "api") IDENT ":" QUALNAME
//   stateBlock = "state" IDENT "{" transition* "}"
//   transition = "on" ("before"|"after") IDENT "." IDENT "()"
//                "emit" "[" [action ("," action)*] "]" "->" IDENT
//   action     = "pass" | "call" IDENT "." IDENT "()"
//
// `//` starts a comment that runs to the end of the line.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enforcekit/model.hpp"

namespace enforcekit::dsl {

enum class Severity { Error, Warning };

struct SourceLocation {
  int line = 1;
  int column = 1;

  bool operator==(const SourceLocation&) const = default;
};

/// Stable diagnostic codes. Parser: E001-E003. Validator: V001-V006 (errors)
/// and W001-W002 (warnings).
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  SourceLocation location;

  bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Source positions of model elements, recorded by the parser so that
/// validator diagnostics can point back at the text.
struct SourceMap {
  SourceLocation model;
  SourceLocation initial;
  std::vector<SourceLocation> bindings;
  std::vector<SourceLocation> states;
  std::vector<SourceLocation> transitions;
};

struct ParseResult {
  std::optional<EnforcementModel> model;
  SourceMap source_map;
  std::vector<Diagnostic> diagnostics;  // nonempty iff model is empty

  bool ok() const { return model.has_value(); }
};

ParseResult parse(std::string_view text);

/// Canonical text: Component binding first then the rest by prefix, states and
/// transitions in declaration order, 2-space indentation, trailing newline.
std::string serialize(const EnforcementModel& model);

/// All rule violations of `model`. An empty result means the model is valid.
/// When `source_map` is given, diagnostics carry the offending element's
/// position; otherwise they point at 1:1.
std::vector<Diagnostic> validate(const EnforcementModel& model,
                                 const SourceMap* source_map = nullptr);

std::string read_file(const std::filesystem::path& path);

/// Reads, parses and validates a `.pel` file. Throws IoError when unreadable
/// and InvalidModel when parsing fails or validation reports an error.
EnforcementModel load_model(const std::filesystem::path& path);

}  // namespace enforcekit::dsl
