#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ifflow/stateless.hpp"

namespace ifflow {

using StateId = std::string;
using StateSet = std::set<StateId>;
using TransitionMap = std::map<StateId, StateSet>;

// Per-state payload of a stateful interface; all three relations are no-flow
// relations (irreflexive), enforced at construction.
struct InterfacePayload {
  Relation assumption;
  Relation guarantee;
  Relation property;
  friend bool operator==(const InterfacePayload&,
                         const InterfacePayload&) = default;
};

struct StatefulInterface {
  VarSet inputs;
  VarSet outputs;
  StateSet states;
  StateId initial;
  TransitionMap transitions;
  std::map<StateId, InterfacePayload> labels;

  VarSet all_vars() const { return set_union(inputs, outputs); }
  friend bool operator==(const StatefulInterface&,
                         const StatefulInterface&) = default;
};

struct StatefulComponent {
  VarSet inputs;
  VarSet outputs;
  StateSet states;
  StateId initial;
  TransitionMap transitions;
  std::map<StateId, Relation> flows;  // M(q), a flow relation per state

  VarSet all_vars() const { return set_union(inputs, outputs); }
  friend bool operator==(const StatefulComponent&,
                         const StatefulComponent&) = default;
};

StatefulInterface new_stateful_interface(VarSet x, VarSet y, StateSet states,
                                         StateId initial,
                                         TransitionMap transitions,
                                         std::map<StateId, InterfacePayload> labels);
StatefulComponent new_stateful_component(VarSet x, VarSet y, StateSet states,
                                         StateId initial,
                                         TransitionMap transitions,
                                         std::map<StateId, Relation> flows,
                                         bool normalize);

StatelessInterface stateless_at(const StatefulInterface& F, const StateId& q);
StatelessComponent stateless_at(const StatefulComponent& f, const StateId& q);

StateSet reachable(const StatefulInterface& F, const StateId& from);
StateSet reachable(const StatefulComponent& f, const StateId& from);

struct StatefulWellFormedVerdict {
  bool holds = false;
  std::map<StateId, WellFormedVerdict> per_state;  // reachable states only
  StateSet skipped;                                // unreachable states
};

StatefulWellFormedVerdict is_well_formed(const StatefulInterface& F);

struct SimulationWitness {
  std::set<std::pair<StateId, StateId>> pairs;
};

struct SimulationResult {
  bool holds = false;
  SimulationWitness witness;  // the greatest fixpoint H
};

SimulationResult implements(const StatefulComponent& f,
                            const StatefulInterface& F);
SimulationResult admissible_env(const StatefulComponent& e,
                                const StatefulInterface& F);

// Ordered product state id, rendered with the join symbol used in reports.
StateId product_state_id(const StateId& q, const StateId& r);

StatefulComponent compose(const StatefulComponent& f,
                          const StatefulComponent& g);
// Keeps only compatible state pairs; throws Incompatible when the initial
// payloads are not compatible.
StatefulInterface compose(const StatefulInterface& F,
                          const StatefulInterface& G);
bool compatible(const StatefulInterface& F, const StatefulInterface& G);

struct InputGroup {
  Relation assumption;  // shared A(q') of the group
  StateSet states;
};

struct OutputGroup {
  Relation guarantee;  // shared G(q') of the group
  Relation property;   // shared P(q') of the group
  StateSet states;
};

// Successor groups keyed by the successors' assumption (input) or
// guarantee/property pair (output); only labelings that actually occur
// among the successors yield groups.
std::vector<InputGroup> input_transitions(const StatefulInterface& F,
                                          const StateId& q);
std::vector<OutputGroup> output_transitions(const StatefulInterface& F,
                                            const StateId& q);

// Alternating refinement.  With literal_groups the group families are
// extended by the empty group (standing in for the labelings that do not
// occur among the successors), which follows the literal all-subsets
// reading of the definition.
SimulationResult refines(const StatefulInterface& Fr,
                         const StatefulInterface& Fa,
                         bool literal_groups = false);

}  // namespace ifflow
