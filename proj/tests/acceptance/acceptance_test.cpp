// Acceptance suite: one test per criterion, one PASS/FAIL line each.
// Exits nonzero when any criterion fails.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sys/wait.h>
#include <unistd.h>

#include "enforcekit/cli.hpp"
#include "enforcekit/codegen.hpp"
#include "enforcekit/dsl.hpp"
#include "enforcekit/errors.hpp"
#include "enforcekit/harness.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "reference.hpp"

namespace enforcekit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::kCorpus;
using Clock = std::chrono::steady_clock;

std::map<std::string, std::string>& details() {
  static std::map<std::string, std::string> d;
  return d;
}

void detail(const std::string& text) {
  details()[::testing::UnitTest::GetInstance()->current_test_info()->name()] = text;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("enforcekit-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string trace_bytes(const std::vector<Event>& trace) {
  json doc = json::array();
  for (const auto& e : trace) doc.push_back(harness::to_json(e));
  return doc.dump();
}

TEST(Acceptance, HealingSuite) {
  const auto start = Clock::now();
  const harness::Corpus corpus = harness::corpus();
  int misuses = 0;
  int healed = 0;
  for (const auto& e : corpus.entries) {
    if (!e.misuse) continue;
    ++misuses;
    const fs::path report = scratch_dir() / (e.scenario.name + ".json");
    std::ostringstream out, err;

    cli::SimulateOptions raw;
    raw.scenario = e.path.string();
    raw.no_enforce = true;
    raw.report = report.string();
    ASSERT_EQ(cli::cmd_simulate(raw, out, err), cli::kExitFailure) << e.path << err.str();
    std::set<std::string> found;
    const json raw_doc = json::parse(std::ifstream(report));
    for (const auto& v : raw_doc["violations"]) {
      found.insert(v["rule"].get<std::string>());
    }
    for (const auto& rule : e.scenario.expected_rules) {
      EXPECT_TRUE(found.contains(rule)) << e.path << " missing " << rule;
    }

    cli::SimulateOptions enforced;
    enforced.scenario = e.path.string();
    enforced.report = report.string();
    for (const auto& p : e.model_paths) enforced.models.push_back(p.string());
    const int code = cli::cmd_simulate(enforced, out, err);
    EXPECT_EQ(code, cli::kExitOk) << e.path << err.str();
    const json doc = json::parse(std::ifstream(report));
    EXPECT_TRUE(doc["violations"].empty()) << e.path;
    bool released = true;
    for (const auto& [alias, state] : doc["final_resource_states"].items()) {
      const auto& qualified = e.scenario.bindings.at(alias).qualified;
      released &= harness::find_resource_model(qualified)->is_released(state.get<std::string>());
    }
    EXPECT_TRUE(released) << e.path;
    healed += code == cli::kExitOk && doc["violations"].empty() && released;
  }
  const double elapsed = seconds_since(start);
  EXPECT_GE(misuses, 10);
  EXPECT_EQ(healed, misuses);
  EXPECT_LT(elapsed, 5.0);
  detail(std::to_string(healed) + "/" + std::to_string(misuses) + " misuse scenarios healed in " +
         fmt("%.2f s", elapsed));
}

TEST(Acceptance, Transparency) {
  const harness::Corpus corpus = harness::corpus();
  int compliant = 0;
  for (const auto& e : corpus.entries) {
    if (e.misuse) continue;
    ++compliant;
    EnforcerSession all = harness::make_session(corpus.all_models);
    const auto report = harness::run(e.scenario, &all);
    EXPECT_EQ(trace_bytes(report.healed_trace), trace_bytes(report.raw_trace)) << e.path;
  }
  EXPECT_GE(compliant, 6);
  detail(std::to_string(compliant) + " compliant scenarios, " +
         std::to_string(corpus.all_models.size()) + " modules active, traces byte-identical");
}

TEST(Acceptance, OracleEquivalence) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  const auto sequences = testing::all_small_sequences(5);

  // Module sets: 48 single models and 24 pairs.
  std::vector<std::vector<EnforcementModel>> sets;
  for (int i = 0; i < 48; ++i) sets.push_back({testing::random_small_model(rng, i)});
  for (int i = 0; i < 24; ++i) {
    sets.push_back({testing::random_small_model(rng, 100 + i),
                    testing::random_small_model(rng, 200 + i)});
  }

  std::size_t cases = 0, mismatches = 0, looping = 0;
  for (const auto& models : sets) {
    for (const auto& m : models) {
      ASSERT_FALSE(dsl::has_errors(dsl::validate(m))) << dsl::serialize(m);
      ASSERT_LE(m.states.size(), 3u);
      ASSERT_LE(alphabet(m).size(), 4u);
    }
    for (const auto& ops : sequences) {
      ++cases;
      EnforcerSession session;
      testing::ReferenceEnforcer ref;
      for (std::size_t i = 0; i < models.size(); ++i) {
        const std::string name = "m" + std::to_string(i);
        session.register_module(name, models[i]);
        session.set_active(name, true);
        ref.add(name, models[i]);
      }
      const auto expected = ref.heal(ops);
      testing::NullExecutor exec;
      bool ok;
      try {
        const auto healed = session.heal(ops, exec);
        ok = expected && healed == *expected;
      } catch (const DepthExceeded&) {
        ok = !expected;
        ++looping;
      }
      if (!ok && ++mismatches <= 3) ADD_FAILURE() << "mismatch on model set " << dsl::serialize(models[0]);
    }
  }
  const double elapsed = seconds_since(start);
  EXPECT_GE(cases, 10000u);
  EXPECT_EQ(mismatches, 0u);
  EXPECT_LT(elapsed, 60.0);
  detail(std::to_string(cases) + " cases (" + std::to_string(looping) +
         " depth-capped), " + std::to_string(mismatches) + " mismatches, " +
         fmt("%.2f s", elapsed));
}

TEST(Acceptance, MultiModuleDeterminism) {
  std::set<std::size_t> sizes;
  for (const auto& e : harness::corpus().entries) {
    if (e.models.size() != 2 && e.models.size() != 6) continue;
    sizes.insert(e.models.size());
    std::optional<std::string> reference_report;
    std::optional<std::string> reference_trace;
    for (int run = 0; run < 20; ++run) {
      EnforcerSession session = harness::make_session(e.models);
      const auto report = harness::run(e.scenario, &session, {1234});
      const std::string text = harness::report_text(report);
      if (!reference_report) reference_report = text;
      EXPECT_EQ(text, *reference_report) << e.path << " run " << run;
      // Latency seeds must not change behavior either.
      EnforcerSession reseeded = harness::make_session(e.models);
      const auto other = harness::run(e.scenario, &reseeded, {static_cast<std::uint64_t>(run)});
      const std::string trace = trace_bytes(other.healed_trace);
      if (!reference_trace) reference_trace = trace;
      EXPECT_EQ(trace, *reference_trace) << e.path << " seed " << run;
      EXPECT_TRUE(other.violations.empty()) << e.path;
    }
  }
  EXPECT_EQ(sizes, (std::set<std::size_t>{2, 6}));
  detail("2- and 6-module scenarios: 20 seeded runs each, identical healed traces");
}

TEST(Acceptance, Overhead) {
  const cli::BenchResult r = cli::run_bench({6, 1000000, 1, 3});
  std::ofstream("acceptance_bench_result.json") << cli::to_json(r).dump(2) << '\n';
  EXPECT_EQ(r.events_executed, 1000000u);
  EXPECT_TRUE(r.traces_identical);
  EXPECT_LT(r.relative_overhead, 1.0);
  EXPECT_LT(r.dispatch_mean_ns, 10000.0);
  detail(fmt("overhead %.1f%%", r.relative_overhead * 100) +
         fmt(", dispatch mean %.0f ns", r.dispatch_mean_ns) +
         fmt(", p99 %.0f ns", r.dispatch_p99_ns) + " (k=6, m=1e6)");
}

TEST(Acceptance, RoundTrips) {
  std::mt19937_64 rng(77);
  int models = 0;
  while (models < 200) {
    EnforcementModel m = testing::random_valid_model(rng);
    if (dsl::has_errors(dsl::validate(m))) continue;
    ++models;
    const auto parsed = dsl::parse(dsl::serialize(m));
    ASSERT_TRUE(parsed.ok()) << dsl::serialize(m);
    EXPECT_EQ(*parsed.model, m);
    EXPECT_EQ(codegen::load_table_text(codegen::table_text(codegen::gen_table(m))), m);
  }
  int scenarios = 0;
  for (const auto& e : harness::corpus().entries) {
    ++scenarios;
    std::vector<EnforcementModel> loaded;
    for (const auto& m : e.models) {
      loaded.push_back(codegen::load_table_text(codegen::table_text(codegen::gen_table(m))));
      EXPECT_EQ(loaded.back(), m);
    }
    EnforcerSession a = harness::make_session(e.models);
    EnforcerSession b = harness::make_session(loaded);
    EXPECT_EQ(trace_bytes(harness::run(e.scenario, &a).healed_trace),
              trace_bytes(harness::run(e.scenario, &b).healed_trace))
        << e.path;
  }
  detail(std::to_string(models) + " generated models round-tripped, " +
         std::to_string(scenarios) + " corpus scenarios behaviorally equivalent");
}

TEST(Acceptance, ValidatorPrecision) {
  const std::vector<std::string> all{"E001", "E002", "E003", "V001", "V002", "V003",
                                     "V004", "V005", "V006", "W001", "W002"};
  int exact = 0;
  for (const auto& code : all) {
    const auto parsed = dsl::parse(dsl::read_file(kCorpus / "diagnostics" / (code + ".pel")));
    const auto diagnostics =
        parsed.ok() ? dsl::validate(*parsed.model, &parsed.source_map) : parsed.diagnostics;
    std::vector<std::string> codes;
    for (const auto& d : diagnostics) codes.push_back(d.code);
    EXPECT_EQ(codes, std::vector<std::string>{code});
    exact += codes == std::vector<std::string>{code};
  }
  detail(std::to_string(exact) + "/" + std::to_string(all.size()) +
         " seeded files trigger exactly their code");
}

TEST(Acceptance, DepthGuard) {
  const std::string cmd = std::string("timeout 10 ") + ENFORCEKIT_CLI_BINARY +
                          " simulate --scenario " +
                          (kCorpus / "scenarios" / "camera-open-loop.json").string() +
                          " --model " + (kCorpus / "adversarial" / "ping.pel").string() +
                          " --model " + (kCorpus / "adversarial" / "pong.pel").string() +
                          " >/dev/null 2>&1";
  const auto start = Clock::now();
  const int status = std::system(cmd.c_str());
  const double elapsed = seconds_since(start);
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), cli::kExitDepth);
  EXPECT_LT(elapsed, 1.0);
  detail("exit " + std::to_string(WEXITSTATUS(status)) + " after " + fmt("%.3f s", elapsed));
}

const std::vector<std::pair<std::string, std::string>>& criteria() {
  static const std::vector<std::pair<std::string, std::string>> c{
      {"HealingSuite", "healing suite"},
      {"Transparency", "transparency on compliant scenarios"},
      {"OracleEquivalence", "exhaustive equivalence with reference interpreter"},
      {"MultiModuleDeterminism", "multi-module determinism"},
      {"Overhead", "dispatch overhead"},
      {"RoundTrips", "round trips"},
      {"ValidatorPrecision", "validator precision"},
      {"DepthGuard", "depth guard"},
  };
  return c;
}

class CriterionPrinter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::string label = info.name();
    int number = 0;
    for (std::size_t i = 0; i < criteria().size(); ++i) {
      if (criteria()[i].first == info.name()) {
        label = criteria()[i].second;
        number = static_cast<int>(i) + 1;
      }
    }
    const bool passed = info.result()->Passed();
    std::printf("%s  criterion %d: %s", passed ? "PASS" : "FAIL", number, label.c_str());
    auto it = details().find(info.name());
    if (it != details().end()) std::printf(" (%s)", it->second.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
};

}  // namespace
}  // namespace enforcekit

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  listeners.Append(new enforcekit::CriterionPrinter);
  const int result = RUN_ALL_TESTS();
  std::error_code ignored;
  std::filesystem::remove_all(enforcekit::scratch_dir(), ignored);
  return result;
}
