// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ifflow/hypersem.hpp"
#include "ifflow/relalg.hpp"
#include "ifflow/speclang.hpp"
#include "ifflow/stateless.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace ifflow;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

SpecDocument load_document(const std::string& file) {
  const ParseResult result =
      parse_spec(read_file(std::string(TEST_DATA_DIR) + "/" + file));
  if (!result.ok()) throw std::runtime_error("parse failure in " + file);
  return *result.document;
}

template <typename T>
const T& decl(const SpecDocument& doc, const std::string& name) {
  const NamedDecl* found = doc.find(name);
  if (!found) throw std::runtime_error("missing declaration " + name);
  return std::get<T>(found->decl);
}

// Captured output of one toolkit invocation.
std::string run_tool(const std::string& args) {
  static int counter = 0;
  const std::filesystem::path out =
      std::filesystem::temp_directory_path() /
      ("iff_acceptance_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string("\"") + IFF_BINARY + "\" " + args +
                          " > \"" + out.string() + "\" 2>/dev/null";
  std::system(cmd.c_str());
  std::string text = read_file(out.string());
  std::filesystem::remove(out);
  return text;
}

bool criterion1(std::string& detail) {
  const auto start = Clock::now();
  const SpecDocument evi = load_document("evi.iff");
  const WellFormedVerdict verdict =
      is_well_formed(decl<StatelessInterface>(evi, "G_ill"));
  const double elapsed = seconds_since(start);
  if (verdict.holds) {
    detail = "G_ill reported well-formed";
    return false;
  }
  if (verdict.violations.size() != 1) {
    detail = "expected exactly one violated property pair";
    return false;
  }
  const WellFormedViolation& v = verdict.violations.front();
  if (v.pair != VarPair{"key", "can"}) {
    detail = "wrong violated pair " + v.pair.first + "," + v.pair.second;
    return false;
  }
  const std::vector<VarId> expected{"key", "deb", "ecu", "can"};
  if (v.path != expected) {
    detail = "wrong witness path";
    return false;
  }
  if (elapsed >= 1.0) {
    detail = "took " + std::to_string(elapsed) + "s";
    return false;
  }
  detail = "witness key -> deb -> ecu -> can";
  return true;
}

bool criterion2(std::string& detail) {
  const SpecDocument evi = load_document("evi.iff");
  const auto& f_imm = decl<StatelessInterface>(evi, "F_imm");
  const auto& f_can = decl<StatelessInterface>(evi, "F_can");
  const PairSet propagated = propagated_assumptions(f_imm, f_can).pairs();
  const PairSet expected_prop{{"key", "ecu"}, {"key", "imm"}, {"key", "deb"}};
  if (propagated != expected_prop) {
    detail = "propagated assumptions differ";
    return false;
  }
  const PairSet composite = composite_assumptions(f_imm, f_can).pairs();
  const PairSet expected_comp{{"key", "ecu"}};
  if (composite != expected_comp) {
    detail = "composite assumptions differ";
    return false;
  }
  detail = "propagated {key->ecu,imm,deb}, composite {key->ecu}";
  return true;
}

bool criterion3(std::string& detail) {
  const SpecDocument evi = load_document("evi.iff");
  const auto& f_imm = decl<StatelessInterface>(evi, "F_imm");
  const auto& f_can = decl<StatelessInterface>(evi, "F_can");
  const auto& f_ecu = decl<StatelessInterface>(evi, "F_ecu");
  const CompatibilityResult result =
      compatible(f_ecu, compose_interfaces(f_imm, f_can));
  if (!result.compatible) {
    detail = "F_ecu incompatible with F_imm (x) F_can";
    return false;
  }
  detail = "compatible(F_ecu, F_imm (x) F_can)";
  return true;
}

bool criterion4(std::string& detail) {
  const SpecDocument evi = load_document("evi.iff");
  const auto& f_team = decl<StatelessInterface>(evi, "F_team");
  const auto& f_team_p = decl<StatelessInterface>(evi, "F_team_p");
  const auto& f_key = decl<StatelessInterface>(evi, "F_key");
  const auto& f_imm = decl<StatelessInterface>(evi, "F_imm");
  const auto& f_ecu = decl<StatelessInterface>(evi, "F_ecu");
  const auto& f_can = decl<StatelessInterface>(evi, "F_can");
  const auto& top = decl<StatelessInterface>(evi, "F");

  if (compatible(f_team, f_can).compatible) {
    detail = "F_team unexpectedly compatible with F_can";
    return false;
  }
  if (!compatible(f_team_p, f_can).compatible) {
    detail = "strengthened F_team' incompatible with F_can";
    return false;
  }
  const StatelessInterface composite = compose_interfaces(
      compose_interfaces(compose_interfaces(f_key, f_imm), f_ecu), f_can);
  if (!composite.property.contains("key", "can") ||
      !composite.property.contains("key", "deb")) {
    detail = "four-way composite misses a global property";
    return false;
  }
  if (!refines(composite, top).holds) {
    detail = "composite does not refine the top-level interface";
    return false;
  }
  detail = "team compatibility split; composite properties and refinement";
  return true;
}

bool criterion5(std::string& detail) {
  struct Expect {
    const char* file;
    bool strong, aware, unstructured;
  };
  const Expect table[] = {{"traces_tu.json", false, false, true},
                          {"traces_ta.json", false, true, true}};
  for (const Expect& expect : table) {
    const TraceParseResult parsed =
        parse_traces(read_file(std::string(TEST_DATA_DIR) + "/" + expect.file));
    if (!parsed.ok()) {
      detail = std::string("cannot parse ") + expect.file;
      return false;
    }
    const TraceSet& T = *parsed.traces;
    struct Mode {
      const char* name;
      SemanticsVerdict (*check)(const TraceSet&, const VarId&, const VarId&,
                                const VarId&);
      bool expected;
    };
    const Mode modes[] = {{"strong", check_strong, expect.strong},
                          {"aware", check_aware, expect.aware},
                          {"unstructured", check_unstructured,
                           expect.unstructured}};
    for (const Mode& mode : modes) {
      const auto start = Clock::now();
      const SemanticsVerdict verdict = mode.check(T, "x", "y", "z");
      const double elapsed = seconds_since(start);
      if (verdict.member != mode.expected) {
        detail = std::string(expect.file) + " " + mode.name + " = " +
                 (verdict.member ? "member" : "non-member");
        return false;
      }
      if (elapsed >= 1.0) {
        detail = std::string(mode.name) + " took " + std::to_string(elapsed) +
                 "s";
        return false;
      }
    }
  }
  detail = "T_u (0,0,1) and T_a (0,1,1) separations";
  return true;
}

bool criterion6(std::string& detail) {
  const auto start = Clock::now();
  const int kCases = 1000;
  bool ok = true;
  std::ostringstream report;
  for (const props::Property& property : props::all_properties()) {
    std::mt19937 rng(123456789u);
    const props::SuiteStats stats =
        props::run_property(property, rng, kCases);
    if (stats.failures > 0) {
      ok = false;
      report << " [" << property.name << ": " << stats.failures
             << " counterexamples]";
    }
    if (stats.nonvacuous < property.min_nonvacuous_per_1000) {
      ok = false;
      report << " [" << property.name << ": only " << stats.nonvacuous
             << " non-vacuous cases]";
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    ok = false;
    report << " [suite took " << elapsed << "s]";
  }
  std::ostringstream summary;
  summary << props::all_properties().size() << " properties x " << kCases
          << " cases in " << elapsed << "s";
  detail = ok ? summary.str() : summary.str() + report.str();
  return ok;
}

bool criterion7(std::string& detail) {
  std::mt19937 rng(20260823u);
  for (int i = 0; i < 500; ++i) {
    const gen::Signature sig = gen::random_signature(rng);
    const Relation first = gen::random_relation(rng, sig.all(), sig.all(), 0.3);
    const Relation second =
        gen::random_relation(rng, sig.all(), sig.all(), 0.3);
    const VarSet head = gen::chance(rng, 0.5) ? sig.all() : VarSet{};
    const VarSet tail = gen::chance(rng, 0.5) ? sig.outputs : VarSet{};
    const Relation fast = alternating_paths(first, second, head, tail);
    const Relation slow =
        oracles::alternating_paths_literal(first, second, head, tail);
    if (!fast.same_pairs(slow)) {
      detail = "alternating_paths mismatch at case " + std::to_string(i);
      return false;
    }
  }
  for (int i = 0; i < 500; ++i) {
    const gen::SignaturePair sigs = gen::random_composable_signatures(rng);
    const StatelessInterface F = gen::random_interface(rng, sigs.first);
    const StatelessInterface G = gen::random_interface(rng, sigs.second);
    const Relation fast = composite_flows(F, G);
    const Relation slow = oracles::composite_flows_expanded(F, G);
    if (!fast.same_pairs(slow)) {
      detail = "composite_flows mismatch at case " + std::to_string(i);
      return false;
    }
  }
  detail = "500 alternating-path and 500 composite-flow instances";
  return true;
}

bool criterion8(std::string& detail) {
  std::mt19937 rng(20260824u);
  for (int i = 0; i < 500; ++i) {
    const SpecDocument doc = gen::random_document(rng);
    const ParseResult reparsed = parse_spec(serialize_spec(doc));
    if (!reparsed.ok() || !(*reparsed.document == doc)) {
      detail = "round trip failed at document " + std::to_string(i);
      return false;
    }
  }
  const std::string data = std::string("\"") + TEST_DATA_DIR + "/evi.iff\"";
  for (const std::string args :
       {"dot " + data + " G_ill", "check " + data + " G_ill",
        "--json check " + data + " G_ill"}) {
    if (run_tool(args) != run_tool(args)) {
      detail = "non-deterministic output for: " + args;
      return false;
    }
  }
  detail = "500 document round trips; deterministic DOT and reports";
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    const char* label;
    bool (*check)(std::string&);
  };
  const Criterion criteria[] = {
      {"1 example-1 regression", criterion1},
      {"2 propagated assumptions", criterion2},
      {"3 compatibility regression", criterion3},
      {"4 EVI corpus", criterion4},
      {"5 semantics separations", criterion5},
      {"6 property suite", criterion6},
      {"7 oracle equivalence", criterion7},
      {"8 round-trip and determinism", criterion8},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion.label
              << (detail.empty() ? "" : " (" + detail + ")") << "\n";
  }
  return failures == 0 ? 0 : 1;
}
