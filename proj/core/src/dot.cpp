#include "ifflow/dot.hpp"

#include <functional>
#include <sstream>

namespace ifflow {

namespace {

void write_variable_nodes(std::ostringstream& out, const VarSet& inputs,
                          const VarSet& outputs) {
  for (const auto& v : inputs)
    out << "  \"" << v << "\" [shape=box];\n";
  for (const auto& v : outputs)
    out << "  \"" << v << "\" [shape=ellipse];\n";
}

void write_relation_edges(std::ostringstream& out, const Relation& r,
                          const char* style) {
  for (const auto& [a, b] : r.pairs())
    out << "  \"" << a << "\" -> \"" << b << "\" [style=" << style << "];\n";
}

std::string payload_summary(const InterfacePayload& payload) {
  std::ostringstream label;
  auto write = [&](const char* tag, const Relation& r) {
    label << tag << ": {";
    bool first = true;
    for (const auto& [a, b] : r.pairs()) {
      if (!first) label << ", ";
      label << a << "!->" << b;
      first = false;
    }
    label << "}";
  };
  write("A", payload.assumption);
  label << "\\n";
  write("G", payload.guarantee);
  label << "\\n";
  write("P", payload.property);
  return label.str();
}

std::string flow_summary(const Relation& m) {
  std::ostringstream label;
  label << "M: {";
  bool first = true;
  for (const auto& [a, b] : m.pairs()) {
    if (!first) label << ", ";
    label << a << "->" << b;
    first = false;
  }
  label << "}";
  return label.str();
}

void write_machine(std::ostringstream& out, const std::string& name,
                   const StateSet& states, const StateId& initial,
                   const TransitionMap& transitions,
                   const std::function<std::string(const StateId&)>& label) {
  out << "digraph \"" << name << "\" {\n";
  out << "  label=\"" << name << "\";\n";
  out << "  __init [shape=point];\n";
  for (const auto& q : states)
    out << "  \"" << q << "\" [shape=box, label=\"" << q << "\\n" << label(q)
        << "\"];\n";
  out << "  __init -> \"" << initial << "\";\n";
  for (const auto& [from, succs] : transitions)
    for (const auto& to : succs)
      out << "  \"" << from << "\" -> \"" << to << "\";\n";
  out << "}\n";
}

}  // namespace

std::string to_dot(const std::string& name, const StatelessInterface& F) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  out << "  label=\"" << name << "\";\n";
  write_variable_nodes(out, F.inputs, F.outputs);
  write_relation_edges(out, F.assumption, "dashed");
  write_relation_edges(out, F.guarantee, "solid");
  write_relation_edges(out, F.property, "dotted");
  out << "}\n";
  return out.str();
}

std::string to_dot(const std::string& name, const StatelessComponent& f) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n";
  out << "  label=\"" << name << "\";\n";
  write_variable_nodes(out, f.inputs, f.outputs);
  write_relation_edges(out, f.flows, "solid");
  out << "}\n";
  return out.str();
}

std::string to_dot(const std::string& name, const StatefulInterface& F) {
  std::ostringstream out;
  write_machine(out, name, F.states, F.initial, F.transitions,
                [&](const StateId& q) { return payload_summary(F.labels.at(q)); });
  return out.str();
}

std::string to_dot(const std::string& name, const StatefulComponent& f) {
  std::ostringstream out;
  write_machine(out, name, f.states, f.initial, f.transitions,
                [&](const StateId& q) { return flow_summary(f.flows.at(q)); });
  return out.str();
}

std::string to_dot(const NamedDecl& decl) {
  return std::visit(
      [&](const auto& value) { return to_dot(decl.name, value); }, decl.decl);
}

}  // namespace ifflow
