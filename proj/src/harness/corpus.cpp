#include <fstream>

#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"
#include "enforcekit/harness.hpp"

#ifndef ENFORCEKIT_CORPUS_DIR
#define ENFORCEKIT_CORPUS_DIR "corpus"
#endif

namespace enforcekit::harness {

std::filesystem::path default_corpus_dir() {
  if (const char* env = std::getenv("ENFORCE_KIT_CORPUS")) return env;
  return ENFORCEKIT_CORPUS_DIR;
}

Corpus corpus(const std::filesystem::path& root) {
  const auto index_path = root / "index.json";
  std::ifstream in(index_path);
  if (!in) throw IoError("cannot read " + index_path.string());
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(index_path.string() + ": " + e.what());
  }

  Corpus out;
  out.root = root;
  for (const auto& m : index.at("models")) {
    out.all_model_paths.push_back(root / m.get<std::string>());
    out.all_models.push_back(dsl::load_model(out.all_model_paths.back()));
  }
  for (const auto& s : index.at("scenarios")) {
    CorpusEntry entry;
    entry.path = root / s.at("file").get<std::string>();
    entry.scenario = load_scenario(entry.path);
    const auto kind = s.at("kind").get<std::string>();
    if (kind != "misuse" && kind != "compliant") {
      throw SchemaError(index_path.string() + ": unknown kind '" + kind + "'");
    }
    entry.misuse = kind == "misuse";
    entry.extrapolated = s.value("extrapolated", false);
    for (const auto& m : s.at("modules")) {
      entry.model_paths.push_back(root / m.get<std::string>());
      entry.models.push_back(dsl::load_model(entry.model_paths.back()));
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

EnforcerSession make_session(const std::vector<EnforcementModel>& models) {
  EnforcerSession session;
  for (const auto& m : models) {
    session.register_module(m.name, m);
    session.set_active(m.name, true);
  }
  return session;
}

}  // namespace enforcekit::harness
