// iff: command-line frontend for the information-flow interface toolkit.
//
// Exit codes: 0 = check holds / result produced, 1 = check fails (witness
// printed), 2 = usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ifflow/dot.hpp"
#include "ifflow/errors.hpp"
#include "ifflow/speclang.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace ifflow;

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot open " + path};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

SpecDocument load_document(const std::string& path) {
  const std::string text = read_file(path);
  ParseResult result = parse_spec(text);
  if (!result.ok()) {
    std::ostringstream message;
    for (const auto& d : result.diagnostics)
      message << path << ":" << d.line << ":" << d.column << ": "
              << (d.severity == ParseDiagnostic::Severity::Error ? "error"
                                                                 : "warning")
              << ": " << d.message << "\n";
    throw UsageError{message.str()};
  }
  return *result.document;
}

const NamedDecl& resolve(const SpecDocument& doc, const std::string& name) {
  const NamedDecl* decl = doc.find(name);
  if (!decl) throw UsageError{"no declaration named '" + name + "'"};
  return *decl;
}

template <typename T>
const T& as(const NamedDecl& decl, const char* what) {
  const T* value = std::get_if<T>(&decl.decl);
  if (!value) throw UsageError{"'" + decl.name + "' is not " + what};
  return *value;
}

// Every report carries a human-readable block and a machine payload that
// mirror each other; --json prints only the payload.
struct Report {
  std::vector<std::string> human;
  json payload = json::object();

  void line(const std::string& text) { human.push_back(text); }

  void print(bool json_only) const {
    if (!json_only)
      for (const auto& text : human) std::cout << text << "\n";
    std::cout << payload.dump() << "\n";
  }
};

json pair_json(const VarPair& p) { return json::array({p.first, p.second}); }

json pairs_json(const PairSet& pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back(pair_json(p));
  return out;
}

std::string pair_text(const VarPair& p, const char* arrow) {
  return p.first + " " + arrow + " " + p.second;
}

std::string path_text(const std::vector<VarId>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += " -> ";
    out += path[i];
  }
  return out;
}

json violation_json(const WellFormedViolation& violation) {
  json steps = json::array();
  for (FlowStep step : violation.steps)
    steps.push_back(step == FlowStep::Env ? "ENV" : "IMPL");
  return json{{"pair", pair_json(violation.pair)},
              {"path", violation.path},
              {"steps", steps}};
}

json verdict_json(const WellFormedVerdict& verdict) {
  json reflexive = json::array();
  for (const auto& [relation, pair] : verdict.reflexive_violations)
    reflexive.push_back(json{{"relation", relation}, {"pair", pair_json(pair)}});
  json violations = json::array();
  for (const auto& violation : verdict.violations)
    violations.push_back(violation_json(violation));
  return json{{"holds", verdict.holds},
              {"reflexive", reflexive},
              {"violations", violations}};
}

void describe_verdict(Report& report, const std::string& name,
                      const WellFormedVerdict& verdict) {
  report.line(name + ": " + (verdict.holds ? "well-formed" : "ill-formed"));
  for (const auto& [relation, pair] : verdict.reflexive_violations)
    report.line("  reflexive pair in " + relation + ": " +
                pair_text(pair, "!->"));
  for (const auto& violation : verdict.violations)
    report.line("  property " + pair_text(violation.pair, "!->") +
                " violated via " + path_text(violation.path));
}

json simulation_json(const SimulationResult& result) {
  json pairs = json::array();
  for (const auto& [a, b] : result.witness.pairs)
    pairs.push_back(json::array({a, b}));
  return json{{"holds", result.holds}, {"witness", pairs}};
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError{"cannot write " + out_path};
  out << text;
}

int cmd_check(const std::string& file, const std::string& name,
              bool json_only) {
  const SpecDocument doc = load_document(file);
  const NamedDecl& decl = resolve(doc, name);
  Report report;
  report.payload["command"] = "check";
  report.payload["name"] = name;
  bool holds = false;
  if (const auto* iface = std::get_if<StatelessInterface>(&decl.decl)) {
    const WellFormedVerdict verdict = is_well_formed(*iface);
    holds = verdict.holds;
    describe_verdict(report, name, verdict);
    report.payload["verdict"] = verdict_json(verdict);
  } else if (const auto* machine = std::get_if<StatefulInterface>(&decl.decl)) {
    const StatefulWellFormedVerdict verdict = is_well_formed(*machine);
    holds = verdict.holds;
    report.line(name + ": " + (verdict.holds ? "well-formed" : "ill-formed"));
    json states = json::object();
    for (const auto& [q, state_verdict] : verdict.per_state) {
      if (!state_verdict.holds) describe_verdict(report, "  state " + q, state_verdict);
      states[q] = verdict_json(state_verdict);
    }
    for (const auto& q : verdict.skipped)
      report.line("  state " + q + ": unreachable, skipped");
    report.payload["verdict"] =
        json{{"holds", verdict.holds},
             {"states", states},
             {"skipped", std::vector<StateId>(verdict.skipped.begin(),
                                              verdict.skipped.end())}};
  } else {
    throw UsageError{"'" + name + "' is not an interface"};
  }
  report.payload["holds"] = holds;
  report.print(json_only);
  return holds ? kHolds : kFails;
}

int cmd_compose(const std::string& file, const std::vector<std::string>& names,
                const std::string& out_path, bool json_only) {
  const SpecDocument doc = load_document(file);
  if (names.size() < 2) throw UsageError{"compose needs at least two names"};
  std::vector<const NamedDecl*> decls;
  for (const auto& name : names) decls.push_back(&resolve(doc, name));

  std::vector<std::string> warnings;
  std::string composite_name = "composite";
  SpecDocument out_doc;
  try {
    if (std::holds_alternative<StatelessInterface>(decls.front()->decl)) {
      StatelessInterface acc =
          as<StatelessInterface>(*decls.front(), "a stateless interface");
      bool premise_held = true;
      for (std::size_t i = 1; i < decls.size(); ++i) {
        const StatelessInterface& next =
            as<StatelessInterface>(*decls[i], "a stateless interface");
        const CompatibilityResult comp = compatible(acc, next);
        if (!comp.compatible) {
          premise_held = false;
          warnings.push_back("operands up to '" + names[i] +
                             "' are not compatible; composite may be "
                             "ill-formed");
        }
        acc = compose_interfaces(acc, next);
      }
      if (!premise_held && decls.size() > 2)
        warnings.push_back(
            "chained-compatibility premise failed; the left-fold result may "
            "be order-dependent");
      out_doc.declarations.push_back(NamedDecl{composite_name, acc});
    } else if (std::holds_alternative<StatelessComponent>(decls.front()->decl)) {
      StatelessComponent acc =
          as<StatelessComponent>(*decls.front(), "a stateless component");
      for (std::size_t i = 1; i < decls.size(); ++i)
        acc = compose_components(
            acc, as<StatelessComponent>(*decls[i], "a stateless component"));
      out_doc.declarations.push_back(NamedDecl{composite_name, acc});
    } else if (std::holds_alternative<StatefulInterface>(decls.front()->decl)) {
      StatefulInterface acc =
          as<StatefulInterface>(*decls.front(), "a stateful interface");
      for (std::size_t i = 1; i < decls.size(); ++i)
        acc = compose(acc,
                      as<StatefulInterface>(*decls[i], "a stateful interface"));
      out_doc.declarations.push_back(NamedDecl{composite_name, acc});
    } else {
      StatefulComponent acc =
          as<StatefulComponent>(*decls.front(), "a stateful component");
      for (std::size_t i = 1; i < decls.size(); ++i)
        acc = compose(acc,
                      as<StatefulComponent>(*decls[i], "a stateful component"));
      out_doc.declarations.push_back(NamedDecl{composite_name, acc});
    }
  } catch (const OutputsOverlap& e) {
    throw UsageError{e.what()};
  } catch (const Incompatible& e) {
    throw UsageError{e.what()};
  }

  const std::string text = serialize_spec(out_doc);
  for (const auto& warning : warnings)
    std::cerr << "warning: " << warning << "\n";
  if (json_only) {
    json payload{{"command", "compose"},
                 {"names", names},
                 {"warnings", warnings},
                 {"spec", text}};
    std::cout << payload.dump() << "\n";
    if (!out_path.empty()) write_output(text, out_path);
  } else {
    write_output(text, out_path);
  }
  return kHolds;
}

int cmd_compatible(const std::string& file, const std::string& a,
                   const std::string& b, bool json_only) {
  const SpecDocument doc = load_document(file);
  const NamedDecl& left = resolve(doc, a);
  const NamedDecl& right = resolve(doc, b);
  Report report;
  report.payload["command"] = "compatible";
  bool holds = false;
  if (std::holds_alternative<StatelessInterface>(left.decl)) {
    const CompatibilityResult result =
        compatible(as<StatelessInterface>(left, "a stateless interface"),
                   as<StatelessInterface>(right, "a stateless interface"));
    holds = result.compatible;
    report.line(a + " and " + b + ": " +
                (holds ? "compatible" : "incompatible"));
    if (!result.composable)
      report.line("  outputs overlap (not composable)");
    for (const auto& pair : result.violating)
      report.line("  assumption " + pair_text(pair, "!->") +
                  " is not guaranteed by the composite");
    report.payload["composable"] = result.composable;
    report.payload["violating"] = pairs_json(result.violating);
  } else {
    holds = compatible(as<StatefulInterface>(left, "a stateful interface"),
                       as<StatefulInterface>(right, "a stateful interface"));
    report.line(a + " and " + b + ": " +
                (holds ? "compatible" : "incompatible"));
  }
  report.payload["holds"] = holds;
  report.print(json_only);
  return holds ? kHolds : kFails;
}

int cmd_refines(const std::string& file, const std::string& refined,
                const std::string& abstract, bool json_only) {
  const SpecDocument doc = load_document(file);
  const NamedDecl& left = resolve(doc, refined);
  const NamedDecl& right = resolve(doc, abstract);
  Report report;
  report.payload["command"] = "refines";
  bool holds = false;
  try {
    if (std::holds_alternative<StatelessInterface>(left.decl)) {
      const RefinesResult result =
          refines(as<StatelessInterface>(left, "a stateless interface"),
                  as<StatelessInterface>(right, "a stateless interface"));
      holds = result.holds;
      report.line(refined + " refines " + abstract + ": " +
                  (holds ? "yes" : "no"));
      for (const auto& relation : result.failing)
        report.line("  " + relation + " check fails");
      report.payload["failing"] = result.failing;
    } else {
      const SimulationResult result =
          refines(as<StatefulInterface>(left, "a stateful interface"),
                  as<StatefulInterface>(right, "a stateful interface"));
      holds = result.holds;
      report.line(refined + " refines " + abstract + ": " +
                  (holds ? "yes" : "no"));
      report.payload["simulation"] = simulation_json(result);
    }
  } catch (const SignatureMismatch& e) {
    throw UsageError{e.what()};
  }
  report.payload["holds"] = holds;
  report.print(json_only);
  return holds ? kHolds : kFails;
}

int cmd_implements(const std::string& file, const std::string& comp_name,
                   const std::string& iface_name, bool json_only,
                   bool env_direction) {
  const SpecDocument doc = load_document(file);
  const NamedDecl& comp = resolve(doc, comp_name);
  const NamedDecl& iface = resolve(doc, iface_name);
  Report report;
  report.payload["command"] = env_direction ? "env" : "implements";
  const char* verb = env_direction ? "is admissible for" : "implements";
  bool holds = false;
  try {
    if (std::holds_alternative<StatelessComponent>(comp.decl)) {
      const StatelessComponent& f =
          as<StatelessComponent>(comp, "a stateless component");
      const StatelessInterface& F =
          as<StatelessInterface>(iface, "a stateless interface");
      const CheckResult result =
          env_direction ? admissible_env(f, F) : implements(f, F);
      holds = result.holds;
      report.line(comp_name + " " + verb + " " + iface_name + ": " +
                  (holds ? "yes" : "no"));
      for (const auto& pair : result.offending)
        report.line("  offending flow " + pair_text(pair, "->"));
      report.payload["offending"] = pairs_json(result.offending);
    } else {
      const StatefulComponent& f =
          as<StatefulComponent>(comp, "a stateful component");
      const StatefulInterface& F =
          as<StatefulInterface>(iface, "a stateful interface");
      const SimulationResult result =
          env_direction ? admissible_env(f, F) : implements(f, F);
      holds = result.holds;
      report.line(comp_name + " " + verb + " " + iface_name + ": " +
                  (holds ? "yes" : "no"));
      report.payload["simulation"] = simulation_json(result);
    }
  } catch (const SignatureMismatch& e) {
    throw UsageError{e.what()};
  }
  report.payload["holds"] = holds;
  report.print(json_only);
  return holds ? kHolds : kFails;
}

int cmd_shared_refine(const std::string& file, const std::string& a,
                      const std::string& b, const std::string& out_path,
                      bool json_only) {
  const SpecDocument doc = load_document(file);
  const StatelessInterface& F =
      as<StatelessInterface>(resolve(doc, a), "a stateless interface");
  const StatelessInterface& G =
      as<StatelessInterface>(resolve(doc, b), "a stateless interface");
  SpecDocument out_doc;
  try {
    out_doc.declarations.push_back(
        NamedDecl{a + "_meet_" + b, shared_refinement(F, G)});
  } catch (const SignatureMismatch& e) {
    throw UsageError{e.what()};
  }
  const std::string text = serialize_spec(out_doc);
  if (json_only) {
    json payload{{"command", "shared-refine"}, {"spec", text}};
    std::cout << payload.dump() << "\n";
    if (!out_path.empty()) write_output(text, out_path);
  } else {
    write_output(text, out_path);
  }
  return kHolds;
}

int cmd_derived(const std::string& file, const std::string& name,
                bool json_only) {
  const SpecDocument doc = load_document(file);
  const StatelessInterface& F =
      as<StatelessInterface>(resolve(doc, name), "a stateless interface");
  const Relation derived =
      derived_properties(F.assumption, F.guarantee, F.all_vars());
  Report report;
  report.payload["command"] = "derived";
  report.payload["name"] = name;
  report.line("derived properties of " + name + ":");
  for (const auto& pair : derived.pairs())
    report.line("  " + pair_text(pair, "!->"));
  if (derived.is_empty()) report.line("  (none)");
  report.payload["derived"] = pairs_json(derived.pairs());
  report.print(json_only);
  return kHolds;
}

int cmd_repair(const std::string& file, const std::string& name,
               bool json_only) {
  const SpecDocument doc = load_document(file);
  const StatelessInterface& F =
      as<StatelessInterface>(resolve(doc, name), "a stateless interface");
  std::vector<RepairCandidate> candidates;
  try {
    candidates = suggest_repairs(F);
  } catch (const AlreadyWellFormed& e) {
    throw UsageError{e.what()};
  }
  Report report;
  report.payload["command"] = "repair";
  report.payload["name"] = name;
  report.line(std::to_string(candidates.size()) + " repair candidate(s) for " +
              name + ":");
  json payload_candidates = json::array();
  for (const auto& candidate : candidates) {
    const char* clause = candidate.kind == FlowStep::Env ? "assume" : "guarantee";
    report.line("  add " + pair_text(candidate.added, "!->") + " to " + clause);
    SpecDocument candidate_doc;
    candidate_doc.declarations.push_back(
        NamedDecl{name, candidate.candidate});
    payload_candidates.push_back(json{{"clause", clause},
                                      {"pair", pair_json(candidate.added)},
                                      {"spec", serialize_spec(candidate_doc)}});
  }
  report.payload["candidates"] = payload_candidates;
  report.print(json_only);
  return kHolds;
}

int cmd_semantics(const std::string& tracefile, const std::string& mode,
                  const std::string& x, const std::string& y,
                  const std::string& z, bool json_only) {
  const std::string text = read_file(tracefile);
  TraceParseResult parsed = parse_traces(text);
  if (!parsed.ok()) {
    std::ostringstream message;
    for (const auto& d : parsed.diagnostics)
      message << tracefile << ": " << d.message << "\n";
    throw UsageError{message.str()};
  }
  const TraceSet& T = *parsed.traces;
  for (const auto& v : {x, y, z})
    if (!T.variables.count(v))
      throw UsageError{"variable '" + v + "' is not declared in " + tracefile};
  SemanticsVerdict verdict;
  try {
    if (mode == "strong")
      verdict = check_strong(T, x, y, z);
    else if (mode == "aware")
      verdict = check_aware(T, x, y, z);
    else if (mode == "unstructured")
      verdict = check_unstructured(T, x, y, z);
    else
      throw UsageError{"mode must be strong, aware or unstructured"};
  } catch (const SameVariable& e) {
    throw UsageError{e.what()};
  }
  Report report;
  report.payload["command"] = "semantics";
  report.payload["mode"] = mode;
  report.payload["member"] = verdict.member;
  report.line(mode + " no-flow membership: " +
              (verdict.member ? "member" : "not a member"));
  json witnesses = json::object();
  if (verdict.member) {
    if (verdict.global_t) {
      witnesses["t"] = *verdict.global_t;
      report.line("  witness t = " + std::to_string(*verdict.global_t));
    }
    json per_p1 = json::array();
    for (const auto& [p1, t] : verdict.time_for)
      per_p1.push_back(json{{"p1", p1}, {"t", t}});
    if (!verdict.time_for.empty()) witnesses["time_for"] = per_p1;
    json choices = json::array();
    for (const auto& [key, value] : verdict.choices)
      choices.push_back(json{{"p1", key.first},
                             {"p2", key.second},
                             {"p3", value.first},
                             {"t", value.second}});
    witnesses["choices"] = choices;
  } else {
    if (verdict.cex_p1) {
      witnesses["cex_p1"] = *verdict.cex_p1;
      std::string text_line =
          "  counterexample p1 = trace " + std::to_string(*verdict.cex_p1);
      if (verdict.cex_p2) {
        witnesses["cex_p2"] = *verdict.cex_p2;
        text_line += ", p2 = trace " + std::to_string(*verdict.cex_p2);
      }
      report.line(text_line);
    }
  }
  report.payload["detail"] = witnesses;
  report.print(json_only);
  return verdict.member ? kHolds : kFails;
}

int cmd_dot(const std::string& file, const std::string& name,
            const std::string& out_path, bool json_only) {
  const SpecDocument doc = load_document(file);
  const NamedDecl& decl = resolve(doc, name);
  const std::string text = to_dot(decl);
  if (json_only) {
    json payload{{"command", "dot"}, {"name", name}, {"dot", text}};
    std::cout << payload.dump() << "\n";
    if (!out_path.empty()) write_output(text, out_path);
  } else {
    write_output(text, out_path);
  }
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-flow interface toolkit"};
  app.require_subcommand(1);
  bool json_only = false;
  app.add_flag("--json", json_only, "print only the machine-readable payload");

  std::string file, name, second, out_path, mode, x, y, z;
  std::vector<std::string> names;

  auto* check = app.add_subcommand("check", "well-formedness of an interface");
  check->add_option("file", file)->required();
  check->add_option("name", name)->required();

  auto* compose = app.add_subcommand("compose", "compose declarations");
  compose->add_option("file", file)->required();
  compose->add_option("names", names)->required()->expected(-2);
  compose->add_option("-o,--output", out_path);

  auto* compat = app.add_subcommand("compatible", "compatibility of two interfaces");
  compat->add_option("file", file)->required();
  compat->add_option("left", name)->required();
  compat->add_option("right", second)->required();

  auto* refine = app.add_subcommand("refines", "refinement between interfaces");
  refine->add_option("file", file)->required();
  refine->add_option("refined", name)->required();
  refine->add_option("abstract", second)->required();

  auto* impl = app.add_subcommand("implements", "does a component implement an interface");
  impl->add_option("file", file)->required();
  impl->add_option("component", name)->required();
  impl->add_option("interface", second)->required();

  auto* env = app.add_subcommand("env", "is a component an admissible environment");
  env->add_option("file", file)->required();
  env->add_option("component", name)->required();
  env->add_option("interface", second)->required();

  auto* meet = app.add_subcommand("shared-refine", "shared refinement of two interfaces");
  meet->add_option("file", file)->required();
  meet->add_option("left", name)->required();
  meet->add_option("right", second)->required();
  meet->add_option("-o,--output", out_path);

  auto* derived = app.add_subcommand("derived", "derived properties D(A,G)");
  derived->add_option("file", file)->required();
  derived->add_option("name", name)->required();

  auto* repair = app.add_subcommand("repair", "repair candidates for an ill-formed interface");
  repair->add_option("file", file)->required();
  repair->add_option("name", name)->required();

  auto* semantics = app.add_subcommand("semantics", "trace-set membership for the no-flow property");
  semantics->add_option("tracefile", file)->required();
  semantics->add_option("mode", mode)->required();
  semantics->add_option("x", x)->required();
  semantics->add_option("y", y)->required();
  semantics->add_option("z", z)->required();

  auto* dot = app.add_subcommand("dot", "Graphviz export");
  dot->add_option("file", file)->required();
  dot->add_option("name", name)->required();
  dot->add_option("-o,--output", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kInputError;
  }

  try {
    if (app.got_subcommand(check)) return cmd_check(file, name, json_only);
    if (app.got_subcommand(compose))
      return cmd_compose(file, names, out_path, json_only);
    if (app.got_subcommand(compat))
      return cmd_compatible(file, name, second, json_only);
    if (app.got_subcommand(refine))
      return cmd_refines(file, name, second, json_only);
    if (app.got_subcommand(impl))
      return cmd_implements(file, name, second, json_only, false);
    if (app.got_subcommand(env))
      return cmd_implements(file, name, second, json_only, true);
    if (app.got_subcommand(meet))
      return cmd_shared_refine(file, name, second, out_path, json_only);
    if (app.got_subcommand(derived)) return cmd_derived(file, name, json_only);
    if (app.got_subcommand(repair)) return cmd_repair(file, name, json_only);
    if (app.got_subcommand(semantics))
      return cmd_semantics(file, mode, x, y, z, json_only);
    if (app.got_subcommand(dot)) return cmd_dot(file, name, out_path, json_only);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << (e.message.ends_with("\n") ? "" : "\n");
    return kInputError;
  } catch (const IfflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
