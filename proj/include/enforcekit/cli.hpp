#pragma once

// Operator surface: the `enforce-kit` subcommands, the module registry file
// and the dispatch-overhead benchmark.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "enforcekit/engine.hpp"
#include "json.hpp"

namespace enforcekit::cli {

inline constexpr const char* kRegistryEnv = "ENFORCE_KIT_REGISTRY";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // violations, invalid model, unknown module
inline constexpr int kExitIo = 2;       // unreadable/unloadable input, bad arguments
inline constexpr int kExitDepth = 3;    // enforcement cascade exceeded the depth cap

// ---------------------------------------------------------------------------
// Registry

struct RegistryEntry {
  std::string name;
  std::string model;  // as written in the file; relative to the registry
  bool active = false;

  bool operator==(const RegistryEntry&) const = default;
};

struct Registry {
  std::vector<RegistryEntry> entries;

  RegistryEntry* find(std::string_view name);
  bool operator==(const Registry&) const = default;
};

/// Throws IoError when the file or a model path is missing, SchemaError on a
/// malformed document or duplicate names.
Registry load_registry(const std::filesystem::path& path);
nlohmann::json to_json(const Registry& registry);
/// Writes to a temporary file next to `path` and renames it into place.
void save_registry(const std::filesystem::path& path, const Registry& registry);
std::filesystem::path resolve_model_path(const std::filesystem::path& registry,
                                         const RegistryEntry& entry);

/// A session with every registry entry registered under its name and the
/// recorded activation flag.
EnforcerSession session_from_registry(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchOptions {
  int modules = 0;
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  int repetitions = 3;
};

struct BenchResult {
  std::uint64_t events_executed = 0;
  int active_modules = 0;
  std::uint64_t seed = 0;
  double enforced_ms = 0;
  double baseline_ms = 0;
  double relative_overhead = 0;  // (enforced - baseline) / baseline
  double dispatch_mean_ns = 0;
  double dispatch_p99_ns = 0;
  std::uint64_t stream_fingerprint = 0;
  std::uint64_t baseline_trace_fingerprint = 0;
  std::uint64_t enforced_trace_fingerprint = 0;
  bool traces_identical = false;
};

/// The synthetic app: a seeded random walk over legal lifecycle callbacks and
/// resource calls producing `ceil(events / 2)` operations.
std::vector<Operation> bench_stream(std::uint64_t events, std::uint64_t seed);

/// Pass-through module number `index`: one state, a [pass] self-loop on every
/// event the synthetic app can produce.
EnforcementModel passthrough_model(int index);

/// Throws std::invalid_argument unless modules in [0, 16] and events >= 1.
BenchResult run_bench(const BenchOptions& options);
nlohmann::json to_json(const BenchResult& result);

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code.

int cmd_validate(const std::vector<std::string>& paths, std::ostream& out,
                 std::ostream& err);

struct SimulateOptions {
  std::string scenario;
  std::optional<std::string> registry;
  std::vector<std::string> models;
  bool no_enforce = false;
  std::uint64_t seed = 0;
  std::optional<std::string> report;
  bool wall_clock = false;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& out,
                 std::ostream& err);

int cmd_gen(const std::string& model, const std::string& format,
            const std::optional<std::string>& out_path, std::ostream& out,
            std::ostream& err);

/// action: "list", "enable" or "disable".
int cmd_registry(const std::string& action, const std::optional<std::string>& name,
                 const std::optional<std::string>& registry, std::ostream& out,
                 std::ostream& err);

int cmd_bench(const BenchOptions& options,
              const std::optional<std::string>& report, std::ostream& out,
              std::ostream& err);

/// Parses argv and dispatches to the commands above.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace enforcekit::cli
