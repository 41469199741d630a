#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "enforcekit/cli.hpp"
#include "enforcekit/codegen.hpp"
#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"
#include "enforcekit/harness.hpp"

namespace enforcekit::cli {

namespace {

void print_diagnostic(std::ostream& err, const std::string& path,
                      const dsl::Diagnostic& d) {
  err << d.code << ' ' << path << ':' << d.location.line << ':'
      << d.location.column << ' ' << d.message << '\n';
}

void print_diagnostics(std::ostream& err, const std::string& path,
                       const std::vector<dsl::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) print_diagnostic(err, path, d);
}

// Writes `text` to `path`, or to `out` when no path is given.
void emit(const std::optional<std::string>& path, const std::string& text,
          std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + *path);
  file << text;
  if (!file.flush()) throw IoError("cannot write " + *path);
}

std::optional<std::string> registry_from_env() {
  if (const char* env = std::getenv(kRegistryEnv); env != nullptr && *env != '\0') {
    return std::string(env);
  }
  return std::nullopt;
}

}  // namespace

int cmd_validate(const std::vector<std::string>& paths, std::ostream&,
                 std::ostream& err) {
  bool unreadable = false;
  bool errors = false;
  for (const auto& path : paths) {
    std::string text;
    try {
      text = dsl::read_file(path);
    } catch (const IoError& e) {
      err << "error: " << e.what() << '\n';
      unreadable = true;
      continue;
    }
    dsl::ParseResult parsed = dsl::parse(text);
    if (!parsed.ok()) {
      print_diagnostics(err, path, parsed.diagnostics);
      errors = true;
      continue;
    }
    auto diagnostics = dsl::validate(*parsed.model, &parsed.source_map);
    print_diagnostics(err, path, diagnostics);
    errors |= dsl::has_errors(diagnostics);
  }
  if (unreadable) return kExitIo;
  return errors ? kExitFailure : kExitOk;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out,
                 std::ostream& err) {
  harness::Scenario scenario;
  EnforcerSession session;
  try {
    scenario = harness::load_scenario(options.scenario);
    auto registry = options.registry;
    if (!registry && options.models.empty()) registry = registry_from_env();
    if (registry) session = session_from_registry(*registry);
    for (const auto& path : options.models) {
      EnforcementModel model = dsl::load_model(path);
      const std::string name = model.name;
      session.register_module(name, std::move(model));
      session.set_active(name, true);
    }
  } catch (const InvalidModel& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& d : e.diagnostics()) {
      err << "  " << d.code << ' ' << d.location.line << ':' << d.location.column
          << ' ' << d.message << '\n';
    }
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }

  harness::ExecutionReport report;
  try {
    report = harness::run(scenario, options.no_enforce ? nullptr : &session,
                          {options.seed, options.wall_clock});
  } catch (const DepthExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitDepth;
  }

  try {
    emit(options.report, harness::report_text(report), out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  std::size_t inserted = 0;
  for (const auto& e : report.healed_trace) inserted += e.origin.is_app() ? 0 : 1;
  err << report.scenario << ": " << report.violations.size() << " violation(s)";
  for (const auto& v : report.violations) err << ' ' << v.rule << '@' << v.step;
  err << ", " << inserted << " inserted event(s)\n";
  return report.violations.empty() ? kExitOk : kExitFailure;
}

int cmd_gen(const std::string& model_path, const std::string& format,
            const std::optional<std::string>& out_path, std::ostream& out,
            std::ostream& err) {
  if (format != "manifest" && format != "table") {
    err << "error: --format must be manifest or table\n";
    return kExitIo;
  }
  std::string text;
  try {
    dsl::ParseResult parsed = dsl::parse(dsl::read_file(model_path));
    if (!parsed.ok()) {
      print_diagnostics(err, model_path, parsed.diagnostics);
      return kExitFailure;
    }
    text = format == "manifest"
               ? codegen::manifest_text(codegen::gen_manifest(*parsed.model))
               : codegen::table_text(codegen::gen_table(*parsed.model));
  } catch (const InvalidModel& e) {
    print_diagnostics(err, model_path, e.diagnostics());
    return kExitFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  try {
    emit(out_path, text, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_registry(const std::string& action, const std::optional<std::string>& name,
                 const std::optional<std::string>& registry_flag,
                 std::ostream& out, std::ostream& err) {
  const auto path = registry_flag ? registry_flag : registry_from_env();
  if (!path) {
    err << "error: no registry given (use --registry or " << kRegistryEnv << ")\n";
    return kExitIo;
  }
  Registry registry;
  try {
    registry = load_registry(*path);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }

  if (action == "list") {
    for (const auto& e : registry.entries) {
      out << e.name << '\t' << (e.active ? "true" : "false") << '\t' << e.model
          << '\n';
    }
    return kExitOk;
  }
  if (action != "enable" && action != "disable") {
    err << "error: unknown registry action '" << action << "'\n";
    return kExitIo;
  }
  if (!name) {
    err << "error: " << action << " needs a module name\n";
    return kExitIo;
  }
  RegistryEntry* entry = registry.find(*name);
  if (entry == nullptr) {
    err << "error: unknown module '" << *name << "'\n";
    return kExitFailure;
  }
  entry->active = action == "enable";
  try {
    save_registry(*path, registry);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_bench(const BenchOptions& options, const std::optional<std::string>& report,
              std::ostream& out, std::ostream& err) {
  BenchResult result;
  try {
    result = run_bench(options);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  const auto doc = to_json(result);
  out << "events executed:     " << result.events_executed << '\n'
      << "active modules:      " << result.active_modules << '\n'
      << "baseline wall time:  " << result.baseline_ms << " ms\n"
      << "enforced wall time:  " << result.enforced_ms << " ms\n"
      << "relative overhead:   " << result.relative_overhead * 100.0 << " %\n"
      << "dispatch mean:       " << result.dispatch_mean_ns << " ns/event\n"
      << "dispatch p99:        " << result.dispatch_p99_ns << " ns/event\n"
      << "traces identical:    " << (result.traces_identical ? "yes" : "no") << '\n';
  if (report) {
    try {
      emit(report, doc.dump(2) + "\n", out);
    } catch (const IoError& e) {
      err << "error: " << e.what() << '\n';
      return kExitIo;
    }
  }
  return kExitOk;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runtime enforcement toolkit: validate, compile and run "
               "edit-automaton enforcement models"};
  app.name("enforce-kit");
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Validate .pel model files");
  validate->add_option("models", validate_paths, "Model files")->required();

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario");
  simulate->add_option("--scenario", sim.scenario, "Scenario file")->required();
  simulate->add_option("--registry", sim.registry, "Registry file");
  simulate->add_option("--model", sim.models, "Model file (repeatable)");
  simulate->add_flag("--no-enforce", sim.no_enforce, "Run without enforcement");
  simulate->add_option("--seed", sim.seed, "Seed for simulated latencies");
  simulate->add_option("--report", sim.report, "Report output file");
  simulate->add_flag("--wall-clock", sim.wall_clock,
                     "Include measured wall-clock times in the report");

  std::string gen_model;
  std::string gen_format;
  std::optional<std::string> gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a hook manifest or transition table");
  gen->add_option("--model", gen_model, "Model file")->required();
  gen->add_option("--format", gen_format, "manifest or table")
      ->required()
      ->check(CLI::IsMember({"manifest", "table"}));
  gen->add_option("--out", gen_out, "Output file");

  std::string reg_action;
  std::optional<std::string> reg_name;
  std::optional<std::string> reg_path;
  auto* reg = app.add_subcommand("registry", "List, enable or disable modules");
  reg->add_option("action", reg_action, "list | enable | disable")
      ->required()
      ->check(CLI::IsMember({"list", "enable", "disable"}));
  reg->add_option("name", reg_name, "Module name");
  reg->add_option("--registry", reg_path, "Registry file");

  BenchOptions bench_opts;
  bench_opts.events = 1000000;
  std::optional<std::string> bench_report;
  auto* bench = app.add_subcommand("bench", "Measure enforcement dispatch overhead");
  bench->add_option("--modules", bench_opts.modules, "Active pass-through modules")
      ->required();
  bench->add_option("--events", bench_opts.events, "Intercepted events");
  bench->add_option("--seed", bench_opts.seed, "Stream seed");
  bench->add_option("--repetitions", bench_opts.repetitions, "Timed repetitions");
  bench->add_option("--report", bench_report, "BenchResult output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitIo;
  }

  if (validate->parsed()) return cmd_validate(validate_paths, out, err);
  if (simulate->parsed()) return cmd_simulate(sim, out, err);
  if (gen->parsed()) return cmd_gen(gen_model, gen_format, gen_out, out, err);
  if (reg->parsed()) return cmd_registry(reg_action, reg_name, reg_path, out, err);
  if (bench->parsed()) return cmd_bench(bench_opts, bench_report, out, err);
  return kExitIo;
}

}  // namespace enforcekit::cli
