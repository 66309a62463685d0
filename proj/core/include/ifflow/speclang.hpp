#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ifflow/hypersem.hpp"
#include "ifflow/stateful.hpp"
#include "ifflow/stateless.hpp"

namespace ifflow {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 1;
  int column = 1;
  std::string message;
};

using Declaration = std::variant<StatelessInterface, StatelessComponent,
                                 StatefulInterface, StatefulComponent>;

struct NamedDecl {
  std::string name;
  Declaration decl;
  friend bool operator==(const NamedDecl&, const NamedDecl&) = default;
};

struct SpecDocument {
  std::vector<NamedDecl> declarations;

  const NamedDecl* find(const std::string& name) const;
  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

struct ParseResult {
  std::optional<SpecDocument> document;  // set only when no errors
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

ParseResult parse_spec(std::string_view text);

// Canonical form: sorted variable lists and pairs, fixed indentation;
// parse_spec(serialize_spec(d)) reproduces d exactly.
std::string serialize_spec(const SpecDocument& doc);

struct TraceParseResult {
  std::optional<TraceSet> traces;
  std::vector<ParseDiagnostic> diagnostics;
  bool ok() const { return traces.has_value(); }
};

// JSON schema: {"variables": ["x", ...], "traces": [[{"x": false, ...}, ...], ...]}
// Shorter traces are right-padded with their final valuation.
TraceParseResult parse_traces(std::string_view text);
std::string serialize_traces(const TraceSet& T);

}  // namespace ifflow
