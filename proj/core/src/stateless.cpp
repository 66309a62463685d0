#include "ifflow/stateless.hpp"

#include <algorithm>

#include "ifflow/errors.hpp"

namespace ifflow {

namespace {

void require_disjoint_signature(const VarSet& x, const VarSet& y) {
  if (!disjoint(x, y))
    throw SignatureError("inputs and outputs must be disjoint");
}

void require_same_signature(const VarSet& x1, const VarSet& y1,
                            const VarSet& x2, const VarSet& y2,
                            const char* what) {
  if (x1 != x2 || y1 != y2) throw SignatureMismatch(what);
}

}  // namespace

bool is_flow_relation(const Relation& m, const VarSet& z, const VarSet& y) {
  for (const auto& [a, b] : m.pairs())
    if (!z.count(a) || !y.count(b)) return false;
  for (const auto& v : y)
    if (!m.contains(v, v)) return false;
  for (const auto& [a, b] : m.pairs())
    for (const auto& [c, d] : m.pairs())
      if (b == c && !m.contains(a, d)) return false;
  return true;
}

StatelessComponent new_component(VarSet x, VarSet y, Relation m,
                                 bool normalize) {
  require_disjoint_signature(x, y);
  const VarSet z = set_union(x, y);
  Relation flows = m.with_rectangle(z, y);  // throws SignatureError if outside
  if (normalize) {
    flows = star(flows, y).restricted(z, y);
  } else if (!is_flow_relation(flows, z, y)) {
    throw NotAFlowRelation(
        "flows must be reflexive on outputs and transitively closed");
  }
  return StatelessComponent{std::move(x), std::move(y), std::move(flows)};
}

StatelessInterface new_interface(VarSet x, VarSet y, Relation a, Relation g,
                                 Relation p) {
  require_disjoint_signature(x, y);
  const VarSet z = set_union(x, y);
  // Canonicalize the rectangles so complements are always taken against
  // Z x X (assumption) and Z x Y (guarantee/property).
  Relation assumption = a.with_rectangle(z, x);
  Relation guarantee = g.with_rectangle(z, y);
  Relation property = p.with_rectangle(z, y);
  return StatelessInterface{std::move(x), std::move(y), std::move(assumption),
                            std::move(guarantee), std::move(property)};
}

CheckResult implements(const StatelessComponent& f,
                       const StatelessInterface& F) {
  require_same_signature(f.inputs, f.outputs, F.inputs, F.outputs,
                         "implements requires identical signatures");
  CheckResult result;
  result.offending = relation_intersect(f.flows, F.guarantee).pairs();
  result.holds = result.offending.empty();
  return result;
}

CheckResult admissible_env(const StatelessComponent& e,
                           const StatelessInterface& F) {
  require_same_signature(e.inputs, e.outputs, F.outputs, F.inputs,
                         "admissible_env requires the reversed signature");
  CheckResult result;
  result.offending = relation_intersect(e.flows, F.assumption).pairs();
  result.holds = result.offending.empty();
  return result;
}

Relation reach_env_impl(const StatelessInterface& F) {
  return alternating_paths(complement(F.assumption), complement(F.guarantee),
                           F.all_vars(), VarSet{});
}

WellFormedVerdict is_well_formed(const StatelessInterface& F) {
  WellFormedVerdict verdict;
  auto collect_reflexive = [&](const Relation& r, const char* name) {
    for (const auto& p : r.pairs())
      if (p.first == p.second) verdict.reflexive_violations.emplace_back(name, p);
  };
  collect_reflexive(F.assumption, "assume");
  collect_reflexive(F.guarantee, "guarantee");
  collect_reflexive(F.property, "property");

  const Relation not_a = complement(F.assumption);
  const Relation not_g = complement(F.guarantee);
  const VarSet z = F.all_vars();
  const Relation reach = alternating_paths(not_a, not_g, z, VarSet{});
  const Relation violated = relation_intersect(reach, F.property);
  for (const auto& p : violated.pairs()) {
    auto witness =
        alternating_witness(not_a, not_g, z, VarSet{}, p.first, p.second);
    WellFormedViolation violation;
    violation.pair = p;
    if (witness) {
      violation.path = witness->nodes;
      for (StepKind k : witness->steps)
        violation.steps.push_back(k == StepKind::First ? FlowStep::Env
                                                       : FlowStep::Impl);
    }
    verdict.violations.push_back(std::move(violation));
  }
  verdict.holds =
      verdict.reflexive_violations.empty() && verdict.violations.empty();
  return verdict;
}

Relation derived_properties(const Relation& a, const Relation& g,
                            const VarSet& z) {
  const Relation reach =
      alternating_paths(complement(a), complement(g), z, VarSet{});
  return relation_minus(g, reach);
}

SignatureUnion signature_union(const VarSet& x1, const VarSet& y1,
                               const VarSet& x2, const VarSet& y2) {
  SignatureUnion sig;
  sig.outputs = set_union(y1, y2);
  sig.inputs = set_minus(set_union(x1, x2), sig.outputs);
  sig.all = set_union(sig.inputs, sig.outputs);
  return sig;
}

bool composable_components(const StatelessComponent& f,
                           const StatelessComponent& g) {
  return disjoint(f.outputs, g.outputs);
}

StatelessComponent compose_components(const StatelessComponent& f,
                                      const StatelessComponent& g) {
  if (!composable_components(f, g))
    throw OutputsOverlap("components with overlapping outputs");
  const SignatureUnion sig =
      signature_union(f.inputs, f.outputs, g.inputs, g.outputs);
  Relation flows = star(relation_union(f.flows, g.flows), sig.outputs)
                       .restricted(sig.all, sig.outputs);
  return StatelessComponent{sig.inputs, sig.outputs, std::move(flows)};
}

StatelessComponent compose_components_restricted(const StatelessComponent& f,
                                                 const StatelessComponent& g,
                                                 const VarSet& v) {
  if (!composable_components(f, g))
    throw OutputsOverlap("components with overlapping outputs");
  const SignatureUnion sig =
      signature_union(f.inputs, f.outputs, g.inputs, g.outputs);
  Relation flows = star(relation_union(f.flows, g.flows), sig.outputs)
                       .restricted(sig.all, v);
  return StatelessComponent{sig.inputs, sig.outputs, std::move(flows)};
}

StatelessComponent invert_component(const StatelessComponent& f) {
  const VarSet z = f.all_vars();
  if (!is_flow_relation(f.flows, z, f.inputs))
    throw NotAFlowRelation(
        "flows are not a flow relation for the inverted signature");
  return StatelessComponent{f.outputs, f.inputs,
                            f.flows.with_rectangle(z, f.inputs)};
}

bool composable(const StatelessInterface& F, const StatelessInterface& G) {
  return disjoint(F.outputs, G.outputs);
}

namespace {

void require_composable(const StatelessInterface& F,
                        const StatelessInterface& G) {
  if (!composable(F, G))
    throw OutputsOverlap("interfaces with overlapping outputs");
}

}  // namespace

Relation composite_flows(const StatelessInterface& F,
                         const StatelessInterface& G) {
  require_composable(F, G);
  return alternating_paths(complement(F.guarantee), complement(G.guarantee),
                           G.all_vars(), F.outputs);
}

Relation composite_guarantees(const StatelessInterface& F,
                              const StatelessInterface& G) {
  require_composable(F, G);
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  const Relation flows = composite_flows(F, G);
  PairSet pairs;
  for (const auto& a : sig.all)
    for (const auto& b : sig.outputs)
      if (!flows.contains(a, b)) pairs.emplace(a, b);
  return Relation(std::move(pairs), sig.all, sig.outputs);
}

Relation propagated_assumptions(const StatelessInterface& F,
                                const StatelessInterface& G) {
  require_composable(F, G);
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  const Relation flows = composite_flows(F, G);  // symmetric in F, G
  PairSet pairs;
  auto one_direction = [&](const StatelessInterface& from,
                           const StatelessInterface& into) {
    // Assumptions of `from` about variables that are now produced by `into`
    // are pushed back to every variable that can flow into them.  The
    // trivial self-flow (s,s) is not a source and is skipped.
    for (const auto& s : set_intersect(from.inputs, into.outputs)) {
      for (const auto& [z, s1] : from.assumption.pairs()) {
        if (s1 != s) continue;
        for (const auto& [z2, s2] : flows.pairs())
          if (s2 == s && z2 != s) pairs.emplace(z, z2);
      }
    }
  };
  one_direction(F, G);
  one_direction(G, F);
  return Relation(std::move(pairs), sig.all, sig.all);
}

Relation composite_assumptions(const StatelessInterface& F,
                               const StatelessInterface& G) {
  require_composable(F, G);
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  Relation all = relation_union(relation_union(F.assumption, G.assumption),
                                propagated_assumptions(F, G));
  return all.restricted(sig.all, sig.inputs);
}

Relation composite_properties(const StatelessInterface& F,
                              const StatelessInterface& G) {
  require_composable(F, G);
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  const Relation derived = derived_properties(
      composite_assumptions(F, G), composite_guarantees(F, G), sig.all);
  Relation all =
      relation_union(relation_union(F.property, G.property), derived);
  return all.with_rectangle(sig.all, sig.outputs);
}

CompatibilityResult compatible(const StatelessInterface& F,
                               const StatelessInterface& G) {
  CompatibilityResult result;
  result.composable = composable(F, G);
  if (!result.composable) return result;
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  const Relation guarantees = composite_guarantees(F, G);
  const Relation assumptions =
      relation_union(F.assumption, G.assumption)
          .restricted(sig.all, sig.outputs);
  for (const auto& p : assumptions.pairs())
    if (!guarantees.contains(p.first, p.second)) result.violating.insert(p);
  result.compatible = result.violating.empty();
  return result;
}

StatelessInterface compose_interfaces(const StatelessInterface& F,
                                      const StatelessInterface& G) {
  require_composable(F, G);
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  return StatelessInterface{sig.inputs, sig.outputs,
                            composite_assumptions(F, G),
                            composite_guarantees(F, G),
                            composite_properties(F, G)};
}

RefinesResult refines(const StatelessInterface& Fr,
                      const StatelessInterface& Fa) {
  require_same_signature(Fr.inputs, Fr.outputs, Fa.inputs, Fa.outputs,
                         "refines requires identical signatures");
  RefinesResult result;
  if (!Fr.assumption.subset_of(Fa.assumption))
    result.failing.push_back("assumption");
  if (!Fa.guarantee.subset_of(Fr.guarantee))
    result.failing.push_back("guarantee");
  if (!Fa.property.subset_of(Fr.property)) result.failing.push_back("property");
  result.holds = result.failing.empty();
  return result;
}

Relation propagated_guarantees(const StatelessInterface& F,
                               const StatelessInterface& G) {
  if (F.inputs != G.inputs || F.outputs != G.outputs)
    throw SignatureMismatch(
        "propagated guarantees require identical signatures");
  PairSet pairs;
  auto one_direction = [&](const StatelessInterface& from,
                           const StatelessInterface& other) {
    // A property of `from` relying on an assumption the other operand does
    // not share must be protected by a new guarantee.
    for (const auto& [z, x] : from.assumption.pairs()) {
      if (other.assumption.contains(z, x)) continue;
      for (const auto& [z2, y] : from.property.pairs())
        if (z2 == z) pairs.emplace(x, y);
    }
  };
  one_direction(F, G);
  one_direction(G, F);
  return Relation(std::move(pairs), F.all_vars(), F.outputs);
}

StatelessInterface shared_refinement(const StatelessInterface& F,
                                     const StatelessInterface& G) {
  if (F.inputs != G.inputs || F.outputs != G.outputs)
    throw SignatureMismatch("shared refinement requires identical signatures");
  Relation guarantee = relation_union(
      relation_union(F.guarantee, G.guarantee), propagated_guarantees(F, G));
  return new_interface(F.inputs, F.outputs,
                       relation_intersect(F.assumption, G.assumption),
                       guarantee, relation_union(F.property, G.property));
}

std::vector<RepairCandidate> suggest_repairs(const StatelessInterface& F) {
  const WellFormedVerdict verdict = is_well_formed(F);
  if (verdict.holds)
    throw AlreadyWellFormed("interface is already well-formed");
  std::vector<RepairCandidate> candidates;
  std::set<std::pair<FlowStep, VarPair>> emitted;
  for (const auto& violation : verdict.violations) {
    for (std::size_t i = 0; i < violation.steps.size(); ++i) {
      const VarPair edge{violation.path[i], violation.path[i + 1]};
      const FlowStep kind = violation.steps[i];
      if (!emitted.insert({kind, edge}).second) continue;
      StatelessInterface candidate = F;
      if (kind == FlowStep::Env)
        candidate.assumption =
            candidate.assumption.inserted(edge.first, edge.second);
      else
        candidate.guarantee =
            candidate.guarantee.inserted(edge.first, edge.second);
      candidates.push_back(RepairCandidate{std::move(candidate), kind, edge});
    }
  }
  return candidates;
}

}  // namespace ifflow
