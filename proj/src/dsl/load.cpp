#include <fstream>
#include <sstream>

#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"

namespace enforcekit::dsl {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

EnforcementModel load_model(const std::filesystem::path& path) {
  ParseResult parsed = parse(read_file(path));
  if (!parsed.ok()) {
    throw InvalidModel(path.string() + ": parse failed",
                       std::move(parsed.diagnostics));
  }
  auto diagnostics = validate(*parsed.model, &parsed.source_map);
  if (has_errors(diagnostics)) {
    throw InvalidModel(path.string() + ": validation failed",
                       std::move(diagnostics));
  }
  return std::move(*parsed.model);
}

}  // namespace enforcekit::dsl
