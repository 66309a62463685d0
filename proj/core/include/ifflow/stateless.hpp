#pragma once

#include <string>
#include <vector>

#include "ifflow/relalg.hpp"

namespace ifflow {

// A stateless information-flow component (X, Y, M): M relates influences and
// must be a flow relation, i.e. reflexive on Y and transitively closed.
// Helper operations (restricted composition, inversion before
// normalization) may produce relaxed intermediate values; `new_component`
// is the validating entry point.
struct StatelessComponent {
  VarSet inputs;   // X
  VarSet outputs;  // Y
  Relation flows;  // M, inside Z x Y

  VarSet all_vars() const { return set_union(inputs, outputs); }
  friend bool operator==(const StatelessComponent&,
                         const StatelessComponent&) = default;
};

// A stateless information-flow interface (X, Y, A, G, P): the assumption A
// constrains the environment (targets inputs), the guarantee G constrains
// implementations (targets outputs), the property P is the closed-system
// obligation (targets outputs).
struct StatelessInterface {
  VarSet inputs;        // X
  VarSet outputs;       // Y
  Relation assumption;  // A, inside Z x X
  Relation guarantee;   // G, inside Z x Y
  Relation property;    // P, inside Z x Y

  VarSet all_vars() const { return set_union(inputs, outputs); }
  friend bool operator==(const StatelessInterface&,
                         const StatelessInterface&) = default;
};

StatelessComponent new_component(VarSet x, VarSet y, Relation m,
                                 bool normalize);
StatelessInterface new_interface(VarSet x, VarSet y, Relation a, Relation g,
                                 Relation p);

// Is m a flow relation w.r.t. outputs y over universe z, i.e. contained in
// z x y, reflexive on y, and transitively closed?
bool is_flow_relation(const Relation& m, const VarSet& z, const VarSet& y);

struct CheckResult {
  bool holds = false;
  PairSet offending;  // flow pairs that violate the guarantee/assumption
};

// f implements F iff M is contained in the complement of G.
CheckResult implements(const StatelessComponent& f, const StatelessInterface& F);
// e (reversed signature) is an admissible environment iff E avoids A.
CheckResult admissible_env(const StatelessComponent& e,
                           const StatelessInterface& F);

// The flows an arbitrary admissible environment and implementation can
// realize together: alternating env/impl paths ending with an impl step.
Relation reach_env_impl(const StatelessInterface& F);

enum class FlowStep { Env, Impl };

struct WellFormedViolation {
  VarPair pair;                 // violated property pair
  std::vector<VarId> path;      // witness path through Z
  std::vector<FlowStep> steps;  // edge kinds along the path
};

struct WellFormedVerdict {
  bool holds = false;
  // Reflexive pairs found in A/G/P ("assume"/"guarantee"/"property").
  std::vector<std::pair<std::string, VarPair>> reflexive_violations;
  std::vector<WellFormedViolation> violations;
};

WellFormedVerdict is_well_formed(const StatelessInterface& F);

// D(A, G): the guarantees that survive every admissible environment.
Relation derived_properties(const Relation& a, const Relation& g,
                            const VarSet& z);

struct SignatureUnion {
  VarSet inputs;   // (X u X') \ Y
  VarSet outputs;  // Y u Y'
  VarSet all;      // Z
};

SignatureUnion signature_union(const VarSet& x1, const VarSet& y1,
                               const VarSet& x2, const VarSet& y2);

bool composable_components(const StatelessComponent& f,
                           const StatelessComponent& g);
StatelessComponent compose_components(const StatelessComponent& f,
                                      const StatelessComponent& g);
// Appendix variant: flows restricted to pairs targeting v.  Note that for
// v != Y the result is not a flow relation; it is an analysis value.
StatelessComponent compose_components_restricted(const StatelessComponent& f,
                                                 const StatelessComponent& g,
                                                 const VarSet& v);
// Swap inputs and outputs; the flows must still be a flow relation for the
// swapped signature (throws NotAFlowRelation otherwise).
StatelessComponent invert_component(const StatelessComponent& f);

bool composable(const StatelessInterface& F, const StatelessInterface& G);

// not-G_{F,F'}: flows the composition cannot exclude.
Relation composite_flows(const StatelessInterface& F,
                         const StatelessInterface& G);
// G_{F,F'}: rectangle complement of the composite flows.
Relation composite_guarantees(const StatelessInterface& F,
                              const StatelessInterface& G);
// Assumptions on shared variables pushed back to their possible sources,
// in both directions.
Relation propagated_assumptions(const StatelessInterface& F,
                                const StatelessInterface& G);
Relation composite_assumptions(const StatelessInterface& F,
                               const StatelessInterface& G);
Relation composite_properties(const StatelessInterface& F,
                              const StatelessInterface& G);

struct CompatibilityResult {
  bool compatible = false;
  bool composable = false;
  PairSet violating;  // assumption pairs not covered by composite guarantees
};

CompatibilityResult compatible(const StatelessInterface& F,
                               const StatelessInterface& G);

StatelessInterface compose_interfaces(const StatelessInterface& F,
                                      const StatelessInterface& G);

struct RefinesResult {
  bool holds = false;
  // Names of the failing checks: "assumption", "guarantee", "property".
  std::vector<std::string> failing;
};

// Fr refines Fa: assumptions shrink, guarantees and properties grow.
RefinesResult refines(const StatelessInterface& Fr, const StatelessInterface& Fa);

// Guarantees propagated between shared-refinement operands, both directions.
Relation propagated_guarantees(const StatelessInterface& F,
                               const StatelessInterface& G);
StatelessInterface shared_refinement(const StatelessInterface& F,
                                     const StatelessInterface& G);

struct RepairCandidate {
  StatelessInterface candidate;
  FlowStep kind;  // which relation received the pair
  VarPair added;
};

// One candidate per edge of each violation witness path; each candidate
// blocks its own witness path (other violations may remain).
std::vector<RepairCandidate> suggest_repairs(const StatelessInterface& F);

}  // namespace ifflow
