#include <fstream>
#include <set>
#include <unistd.h>

#include "enforcekit/cli.hpp"
#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"

namespace enforcekit::cli {

using nlohmann::json;

RegistryEntry* Registry::find(std::string_view name) {
  for (auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::filesystem::path resolve_model_path(const std::filesystem::path& registry,
                                         const RegistryEntry& entry) {
  std::filesystem::path model(entry.model);
  if (model.is_absolute()) return model;
  return registry.parent_path() / model;
}

Registry load_registry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read registry " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }

  Registry registry;
  std::set<std::string> names;
  try {
    for (const auto& m : doc.at("modules")) {
      RegistryEntry entry{m.at("name").get<std::string>(),
                          m.at("model").get<std::string>(),
                          m.at("active").get<bool>()};
      if (!names.insert(entry.name).second) {
        throw SchemaError(path.string() + ": duplicate module name '" +
                          entry.name + "'");
      }
      if (!std::filesystem::exists(resolve_model_path(path, entry))) {
        throw IoError(path.string() + ": model of '" + entry.name +
                      "' not found: " + entry.model);
      }
      registry.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return registry;
}

json to_json(const Registry& registry) {
  json modules = json::array();
  for (const auto& e : registry.entries) {
    modules.push_back({{"name", e.name}, {"model", e.model}, {"active", e.active}});
  }
  return {{"modules", std::move(modules)}};
}

void save_registry(const std::filesystem::path& path, const Registry& registry) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << to_json(registry).dump(2) << '\n';
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

EnforcerSession session_from_registry(const std::filesystem::path& path) {
  const Registry registry = load_registry(path);
  EnforcerSession session;
  for (const auto& e : registry.entries) {
    session.register_module(e.name, dsl::load_model(resolve_model_path(path, e)));
    session.set_active(e.name, e.active);
  }
  return session;
}

}  // namespace enforcekit::cli
