#include "ifflow/speclang.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "ifflow/errors.hpp"
#include "json.hpp"

namespace ifflow {

const NamedDecl* SpecDocument::find(const std::string& name) const {
  for (const auto& decl : declarations)
    if (decl.name == name) return &decl;
  return nullptr;
}

namespace {

enum class Tok { Ident, Arrow, NoFlowArrow, LBrace, RBrace, Colon, Semi, Comma, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

struct ParseAbort {
  ParseDiagnostic diagnostic;
};

[[noreturn]] void fail(int line, int column, const std::string& message) {
  throw ParseAbort{ParseDiagnostic{ParseDiagnostic::Severity::Error, line,
                                   column, message}};
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token tok = current_;
    advance();
    return tok;
  }

 private:
  void advance() {
    skip_trivia();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_ = Token{Tok::End, "", line_, column_};
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ident.push_back(take());
      current_ = Token{Tok::Ident, ident, current_.line, current_.column};
      return;
    }
    switch (c) {
      case '{': take(); current_.type = Tok::LBrace; current_.text = "{"; return;
      case '}': take(); current_.type = Tok::RBrace; current_.text = "}"; return;
      case ':': take(); current_.type = Tok::Colon; current_.text = ":"; return;
      case ';': take(); current_.type = Tok::Semi; current_.text = ";"; return;
      case ',': take(); current_.type = Tok::Comma; current_.text = ","; return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          take(); take();
          current_.type = Tok::Arrow;
          current_.text = "->";
          return;
        }
        break;
      case '!':
        if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' &&
            text_[pos_ + 2] == '>') {
          take(); take(); take();
          current_.type = Tok::NoFlowArrow;
          current_.text = "!->";
          return;
        }
        break;
      default:
        break;
    }
    fail(line_, column_, std::string("unexpected character '") + c + "'");
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
        take();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else {
        break;
      }
    }
  }

  char take() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

const std::set<std::string> kKeywords = {
    "interface", "component", "stateful",  "inputs", "outputs",
    "assume",    "guarantee", "property",  "flows",  "strict",
    "initial",   "state",     "transitions"};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {}

  SpecDocument parse_document() {
    SpecDocument doc;
    std::set<std::string> names;
    while (lexer_.peek().type != Tok::End) {
      NamedDecl decl = parse_decl();
      if (!names.insert(decl.name).second)
        fail(decl_line_, decl_column_, "duplicate declaration name '" + decl.name + "'");
      doc.declarations.push_back(std::move(decl));
    }
    return doc;
  }

 private:
  Token expect(Tok type, const char* what) {
    if (lexer_.peek().type != type)
      fail(lexer_.peek().line, lexer_.peek().column,
           std::string("expected ") + what + ", found '" +
               (lexer_.peek().type == Tok::End ? "end of input"
                                               : lexer_.peek().text) +
               "'");
    return lexer_.next();
  }

  bool at_keyword(const char* kw) const {
    return lexer_.peek().type == Tok::Ident && lexer_.peek().text == kw;
  }

  Token expect_keyword(const char* kw) {
    if (!at_keyword(kw))
      fail(lexer_.peek().line, lexer_.peek().column,
           std::string("expected '") + kw + "'");
    return lexer_.next();
  }

  Token expect_name(const char* what) {
    Token tok = expect(Tok::Ident, what);
    if (kKeywords.count(tok.text))
      fail(tok.line, tok.column,
           "reserved word '" + tok.text + "' cannot be used as a name");
    return tok;
  }

  NamedDecl parse_decl() {
    decl_line_ = lexer_.peek().line;
    decl_column_ = lexer_.peek().column;
    if (at_keyword("interface")) {
      lexer_.next();
      return parse_interface();
    }
    if (at_keyword("component")) {
      lexer_.next();
      return parse_component();
    }
    if (at_keyword("stateful")) {
      lexer_.next();
      if (at_keyword("interface")) {
        lexer_.next();
        return parse_stateful_interface();
      }
      if (at_keyword("component")) {
        lexer_.next();
        return parse_stateful_component();
      }
      fail(lexer_.peek().line, lexer_.peek().column,
           "expected 'interface' or 'component' after 'stateful'");
    }
    fail(decl_line_, decl_column_,
         "expected 'interface', 'component' or 'stateful'");
  }

  struct Io {
    VarSet inputs;
    VarSet outputs;
    VarSet all;
  };

  Io parse_io() {
    Io io;
    expect_keyword("inputs");
    expect(Tok::Colon, "':'");
    io.inputs = parse_names();
    expect(Tok::Semi, "';'");
    expect_keyword("outputs");
    expect(Tok::Colon, "':'");
    io.outputs = parse_names();
    expect(Tok::Semi, "';'");
    for (const auto& v : io.outputs)
      if (io.inputs.count(v))
        fail(decl_line_, decl_column_,
             "variable '" + v + "' is declared both input and output");
    io.all = set_union(io.inputs, io.outputs);
    return io;
  }

  VarSet parse_names() {
    VarSet names;
    if (lexer_.peek().type == Tok::Semi) return names;  // empty list
    for (;;) {
      Token tok = expect_name("a variable name");
      if (!names.insert(tok.text).second)
        fail(tok.line, tok.column, "duplicate variable '" + tok.text + "'");
      if (lexer_.peek().type != Tok::Comma) break;
      lexer_.next();
    }
    return names;
  }

  // Parses `a ARROW b (, a ARROW b)*`, checking that sources lie in the
  // universe and targets in the expected set.
  PairSet parse_pairs(Tok arrow, const Io& io, const VarSet& targets,
                      const char* target_role) {
    PairSet pairs;
    if (lexer_.peek().type == Tok::Semi) return pairs;  // empty list
    for (;;) {
      Token from = expect_name("a variable name");
      expect(arrow, arrow == Tok::Arrow ? "'->'" : "'!->'");
      Token to = expect_name("a variable name");
      if (!io.all.count(from.text))
        fail(from.line, from.column, "unknown variable '" + from.text + "'");
      if (!io.all.count(to.text))
        fail(to.line, to.column, "unknown variable '" + to.text + "'");
      if (!targets.count(to.text))
        fail(to.line, to.column,
             "variable '" + to.text + "' is not " + target_role);
      pairs.emplace(from.text, to.text);
      if (lexer_.peek().type != Tok::Comma) break;
      lexer_.next();
    }
    return pairs;
  }

  struct Clauses {
    PairSet assume;
    PairSet guarantee;
    PairSet property;
  };

  Clauses parse_clauses(const Io& io) {
    Clauses clauses;
    if (at_keyword("assume")) {
      lexer_.next();
      expect(Tok::Colon, "':'");
      clauses.assume = parse_pairs(Tok::NoFlowArrow, io, io.inputs, "an input");
      expect(Tok::Semi, "';'");
    }
    if (at_keyword("guarantee")) {
      lexer_.next();
      expect(Tok::Colon, "':'");
      clauses.guarantee =
          parse_pairs(Tok::NoFlowArrow, io, io.outputs, "an output");
      expect(Tok::Semi, "';'");
    }
    if (at_keyword("property")) {
      lexer_.next();
      expect(Tok::Colon, "':'");
      clauses.property =
          parse_pairs(Tok::NoFlowArrow, io, io.outputs, "an output");
      expect(Tok::Semi, "';'");
    }
    return clauses;
  }

  NamedDecl parse_interface() {
    Token name = expect_name("an interface name");
    expect(Tok::LBrace, "'{'");
    Io io = parse_io();
    Clauses clauses = parse_clauses(io);
    expect(Tok::RBrace, "'}'");
    StatelessInterface iface = build([&] {
      return new_interface(io.inputs, io.outputs,
                           Relation(clauses.assume, io.all, io.inputs),
                           Relation(clauses.guarantee, io.all, io.outputs),
                           Relation(clauses.property, io.all, io.outputs));
    });
    return NamedDecl{name.text, std::move(iface)};
  }

  NamedDecl parse_component() {
    Token name = expect_name("a component name");
    expect(Tok::LBrace, "'{'");
    Io io = parse_io();
    bool strict = false;
    if (at_keyword("strict")) {
      lexer_.next();
      expect(Tok::Semi, "';'");
      strict = true;
    }
    PairSet flows;
    if (at_keyword("flows")) {
      lexer_.next();
      expect(Tok::Colon, "':'");
      flows = parse_pairs(Tok::Arrow, io, io.outputs, "an output");
      expect(Tok::Semi, "';'");
    }
    expect(Tok::RBrace, "'}'");
    StatelessComponent comp = build([&] {
      return new_component(io.inputs, io.outputs,
                           Relation(flows, io.all, io.outputs), !strict);
    });
    return NamedDecl{name.text, std::move(comp)};
  }

  struct MachineShape {
    StateSet states;
    StateId initial;
    TransitionMap transitions;
  };

  StateId parse_initial() {
    expect_keyword("initial");
    expect(Tok::Colon, "':'");
    Token state = expect_name("a state name");
    expect(Tok::Semi, "';'");
    return state.text;
  }

  void parse_transitions(MachineShape& shape) {
    expect_keyword("transitions");
    expect(Tok::Colon, "':'");
    while (lexer_.peek().type == Tok::Ident) {
      Token from = expect_name("a state name");
      expect(Tok::Arrow, "'->'");
      Token to = expect_name("a state name");
      expect(Tok::Semi, "';'");
      if (!shape.states.count(from.text))
        fail(from.line, from.column, "unknown state '" + from.text + "'");
      if (!shape.states.count(to.text))
        fail(to.line, to.column, "unknown state '" + to.text + "'");
      shape.transitions[from.text].insert(to.text);
    }
  }

  NamedDecl parse_stateful_interface() {
    Token name = expect_name("an interface name");
    expect(Tok::LBrace, "'{'");
    Io io = parse_io();
    MachineShape shape;
    Token initial_tok = lexer_.peek();
    shape.initial = parse_initial();
    std::map<StateId, InterfacePayload> labels;
    while (at_keyword("state")) {
      lexer_.next();
      Token state = expect_name("a state name");
      if (!shape.states.insert(state.text).second)
        fail(state.line, state.column,
             "duplicate state '" + state.text + "'");
      expect(Tok::LBrace, "'{'");
      Clauses clauses = parse_clauses(io);
      expect(Tok::RBrace, "'}'");
      labels[state.text] =
          InterfacePayload{Relation(clauses.assume, io.all, io.inputs),
                           Relation(clauses.guarantee, io.all, io.outputs),
                           Relation(clauses.property, io.all, io.outputs)};
    }
    if (shape.states.empty())
      fail(lexer_.peek().line, lexer_.peek().column,
           "a stateful interface needs at least one state");
    if (!shape.states.count(shape.initial))
      fail(initial_tok.line, initial_tok.column,
           "unknown initial state '" + shape.initial + "'");
    parse_transitions(shape);
    expect(Tok::RBrace, "'}'");
    StatefulInterface machine = build([&] {
      return new_stateful_interface(io.inputs, io.outputs, shape.states,
                                    shape.initial, shape.transitions, labels);
    });
    return NamedDecl{name.text, std::move(machine)};
  }

  NamedDecl parse_stateful_component() {
    Token name = expect_name("a component name");
    expect(Tok::LBrace, "'{'");
    Io io = parse_io();
    MachineShape shape;
    Token initial_tok = lexer_.peek();
    shape.initial = parse_initial();
    std::map<StateId, Relation> flows;
    std::map<StateId, bool> strict;
    while (at_keyword("state")) {
      lexer_.next();
      Token state = expect_name("a state name");
      if (!shape.states.insert(state.text).second)
        fail(state.line, state.column,
             "duplicate state '" + state.text + "'");
      expect(Tok::LBrace, "'{'");
      bool state_strict = false;
      if (at_keyword("strict")) {
        lexer_.next();
        expect(Tok::Semi, "';'");
        state_strict = true;
      }
      PairSet state_flows;
      if (at_keyword("flows")) {
        lexer_.next();
        expect(Tok::Colon, "':'");
        state_flows = parse_pairs(Tok::Arrow, io, io.outputs, "an output");
        expect(Tok::Semi, "';'");
      }
      expect(Tok::RBrace, "'}'");
      flows[state.text] = Relation(state_flows, io.all, io.outputs);
      strict[state.text] = state_strict;
    }
    if (shape.states.empty())
      fail(lexer_.peek().line, lexer_.peek().column,
           "a stateful component needs at least one state");
    if (!shape.states.count(shape.initial))
      fail(initial_tok.line, initial_tok.column,
           "unknown initial state '" + shape.initial + "'");
    parse_transitions(shape);
    expect(Tok::RBrace, "'}'");
    StatefulComponent machine = build([&] {
      // Normalize per state unless that state is strict; strict states are
      // validated by constructing the machine without normalization.
      std::map<StateId, Relation> prepared;
      for (const auto& [q, m] : flows) {
        if (strict.at(q)) {
          if (!is_flow_relation(m, io.all, io.outputs))
            throw NotAFlowRelation("state " + q +
                                   " flows are not a flow relation");
          prepared[q] = m;
        } else {
          prepared[q] = star(m, io.outputs).restricted(io.all, io.outputs);
        }
      }
      return new_stateful_component(io.inputs, io.outputs, shape.states,
                                    shape.initial, shape.transitions, prepared,
                                    false);
    });
    return NamedDecl{name.text, std::move(machine)};
  }

  // Runs a module constructor, converting domain errors into diagnostics at
  // the declaration header.
  template <typename Fn>
  auto build(Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const IfflowError& e) {
      fail(decl_line_, decl_column_, e.what());
    }
  }

  Lexer lexer_;
  int decl_line_ = 1;
  int decl_column_ = 1;
};

void write_names(std::ostringstream& out, const VarSet& names) {
  bool first = true;
  for (const auto& v : names) {
    if (!first) out << ", ";
    out << v;
    first = false;
  }
}

void write_pairs(std::ostringstream& out, const PairSet& pairs,
                 const char* arrow) {
  bool first = true;
  for (const auto& [a, b] : pairs) {
    if (!first) out << ", ";
    out << a << ' ' << arrow << ' ' << b;
    first = false;
  }
}

void write_io(std::ostringstream& out, const char* indent, const VarSet& x,
              const VarSet& y) {
  out << indent << "inputs: ";
  write_names(out, x);
  out << ";\n" << indent << "outputs: ";
  write_names(out, y);
  out << ";\n";
}

void write_clauses(std::ostringstream& out, const char* indent,
                   const Relation& a, const Relation& g, const Relation& p) {
  if (!a.is_empty()) {
    out << indent << "assume: ";
    write_pairs(out, a.pairs(), "!->");
    out << ";\n";
  }
  if (!g.is_empty()) {
    out << indent << "guarantee: ";
    write_pairs(out, g.pairs(), "!->");
    out << ";\n";
  }
  if (!p.is_empty()) {
    out << indent << "property: ";
    write_pairs(out, p.pairs(), "!->");
    out << ";\n";
  }
}

void write_transitions(std::ostringstream& out, const TransitionMap& map) {
  out << "  transitions:\n";
  for (const auto& [from, succs] : map)
    for (const auto& to : succs) out << "    " << from << " -> " << to << ";\n";
}

struct SerializeVisitor {
  std::ostringstream& out;
  const std::string& name;

  void operator()(const StatelessInterface& F) const {
    out << "interface " << name << " {\n";
    write_io(out, "  ", F.inputs, F.outputs);
    write_clauses(out, "  ", F.assumption, F.guarantee, F.property);
    out << "}\n";
  }

  void operator()(const StatelessComponent& f) const {
    out << "component " << name << " {\n";
    write_io(out, "  ", f.inputs, f.outputs);
    if (!f.flows.is_empty()) {
      out << "  flows: ";
      write_pairs(out, f.flows.pairs(), "->");
      out << ";\n";
    }
    out << "}\n";
  }

  void operator()(const StatefulInterface& F) const {
    out << "stateful interface " << name << " {\n";
    write_io(out, "  ", F.inputs, F.outputs);
    out << "  initial: " << F.initial << ";\n";
    for (const auto& q : F.states) {
      out << "  state " << q << " {\n";
      const InterfacePayload& payload = F.labels.at(q);
      write_clauses(out, "    ", payload.assumption, payload.guarantee,
                    payload.property);
      out << "  }\n";
    }
    write_transitions(out, F.transitions);
    out << "}\n";
  }

  void operator()(const StatefulComponent& f) const {
    out << "stateful component " << name << " {\n";
    write_io(out, "  ", f.inputs, f.outputs);
    out << "  initial: " << f.initial << ";\n";
    for (const auto& q : f.states) {
      out << "  state " << q << " {\n";
      const Relation& m = f.flows.at(q);
      if (!m.is_empty()) {
        out << "    flows: ";
        write_pairs(out, m.pairs(), "->");
        out << ";\n";
      }
      out << "  }\n";
    }
    write_transitions(out, f.transitions);
    out << "}\n";
  }
};

}  // namespace

ParseResult parse_spec(std::string_view text) {
  ParseResult result;
  try {
    Parser parser(text);
    result.document = parser.parse_document();
  } catch (const ParseAbort& abort) {
    result.diagnostics.push_back(abort.diagnostic);
  }
  return result;
}

std::string serialize_spec(const SpecDocument& doc) {
  std::ostringstream out;
  bool first = true;
  for (const auto& decl : doc.declarations) {
    if (!first) out << '\n';
    std::visit(SerializeVisitor{out, decl.name}, decl.decl);
    first = false;
  }
  return out.str();
}

TraceParseResult parse_traces(std::string_view text) {
  using nlohmann::json;
  TraceParseResult result;
  auto error = [&](const std::string& message) {
    result.diagnostics.push_back(
        ParseDiagnostic{ParseDiagnostic::Severity::Error, 1, 1, message});
  };
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    error("invalid JSON");
    return result;
  }
  if (!doc.is_object() || !doc.contains("variables") || !doc.contains("traces")) {
    error("expected an object with 'variables' and 'traces'");
    return result;
  }
  TraceSet set;
  if (!doc["variables"].is_array()) {
    error("'variables' must be an array of strings");
    return result;
  }
  for (const auto& v : doc["variables"]) {
    if (!v.is_string()) {
      error("'variables' must be an array of strings");
      return result;
    }
    if (!set.variables.insert(v.get<std::string>()).second) {
      error("duplicate variable '" + v.get<std::string>() + "'");
      return result;
    }
  }
  if (!doc["traces"].is_array()) {
    error("'traces' must be an array of traces");
    return result;
  }
  std::size_t index = 0;
  for (const auto& steps : doc["traces"]) {
    if (!steps.is_array() || steps.empty()) {
      error("trace " + std::to_string(index) +
            " must be a non-empty array of valuations");
      return result;
    }
    Trace trace;
    std::size_t step = 0;
    for (const auto& valuation : steps) {
      if (!valuation.is_object()) {
        error("trace " + std::to_string(index) + " step " +
              std::to_string(step) + " must be an object");
        return result;
      }
      std::map<VarId, bool> values;
      for (const auto& v : set.variables) {
        if (!valuation.contains(v)) {
          error("trace " + std::to_string(index) + " step " +
                std::to_string(step) + " is missing variable '" + v + "'");
          return result;
        }
        if (!valuation[v].is_boolean()) {
          error("trace " + std::to_string(index) + " step " +
                std::to_string(step) + " variable '" + v +
                "' must be a boolean");
          return result;
        }
        values[v] = valuation[v].get<bool>();
      }
      for (auto it = valuation.begin(); it != valuation.end(); ++it) {
        if (!set.variables.count(it.key())) {
          error("trace " + std::to_string(index) + " step " +
                std::to_string(step) + " uses undeclared variable '" +
                it.key() + "'");
          return result;
        }
      }
      trace.valuations.push_back(std::move(values));
      ++step;
    }
    set.traces.push_back(std::move(trace));
    ++index;
  }
  // Right-pad shorter traces with their final valuation.
  std::size_t max_len = 1;
  for (const auto& trace : set.traces)
    max_len = std::max(max_len, trace.length());
  for (auto& trace : set.traces)
    while (trace.length() < max_len)
      trace.valuations.push_back(trace.valuations.back());
  result.traces = std::move(set);
  return result;
}

std::string serialize_traces(const TraceSet& T) {
  using nlohmann::json;
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : T.variables) doc["variables"].push_back(v);
  doc["traces"] = json::array();
  for (const auto& trace : T.traces) {
    json steps = json::array();
    for (const auto& valuation : trace.valuations) {
      json step = json::object();
      for (const auto& [v, b] : valuation) step[v] = b;
      steps.push_back(std::move(step));
    }
    doc["traces"].push_back(std::move(steps));
  }
  return doc.dump(2) + "\n";
}

}  // namespace ifflow
