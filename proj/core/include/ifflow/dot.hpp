#pragma once

#include <string>

#include "ifflow/speclang.hpp"

namespace ifflow {

// Deterministic Graphviz rendering.  Stateless values become one cluster of
// variable nodes (boxes for inputs, ellipses for outputs) with dashed edges
// for assumptions, solid edges for guarantees/flows and dotted edges for
// properties.  Stateful machines become one node per state with a payload
// summary plus transition edges.
std::string to_dot(const std::string& name, const StatelessInterface& F);
std::string to_dot(const std::string& name, const StatelessComponent& f);
std::string to_dot(const std::string& name, const StatefulInterface& F);
std::string to_dot(const std::string& name, const StatefulComponent& f);
std::string to_dot(const NamedDecl& decl);

}  // namespace ifflow
