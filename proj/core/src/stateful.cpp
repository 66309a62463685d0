#include "ifflow/stateful.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "ifflow/errors.hpp"

namespace ifflow {

namespace {

void check_machine_shape(const VarSet& x, const VarSet& y,
                         const StateSet& states, const StateId& initial,
                         const TransitionMap& transitions) {
  if (!disjoint(x, y))
    throw SignatureError("inputs and outputs must be disjoint");
  if (!states.count(initial))
    throw UnknownState("initial state " + initial + " is not declared");
  for (const auto& [q, succs] : transitions) {
    if (!states.count(q)) throw UnknownState("transition from " + q);
    for (const auto& r : succs)
      if (!states.count(r)) throw UnknownState("transition into " + r);
  }
}

StateSet reachable_in(const TransitionMap& transitions, const StateId& from) {
  StateSet seen{from};
  std::deque<StateId> queue{from};
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    auto it = transitions.find(q);
    if (it == transitions.end()) continue;
    for (const auto& r : it->second)
      if (seen.insert(r).second) queue.push_back(r);
  }
  return seen;
}

const StateSet& successors_of(const TransitionMap& transitions,
                              const StateId& q) {
  static const StateSet kNone;
  auto it = transitions.find(q);
  return it == transitions.end() ? kNone : it->second;
}

// Greatest simulation-style fixpoint: start from the pairs satisfying the
// stateless base condition and repeatedly delete pairs whose step condition
// fails against the current set.  Pairs are processed in sorted order so
// witnesses are reproducible (the fixpoint itself is order-independent).
using PairRelation = std::set<std::pair<StateId, StateId>>;

PairRelation greatest_fixpoint(
    PairRelation h,
    const std::function<bool(const StateId&, const StateId&,
                             const PairRelation&)>& step_ok) {
  bool changed = true;
  while (changed) {
    changed = false;
    PairRelation kept;
    for (const auto& [a, b] : h) {
      if (step_ok(a, b, h))
        kept.emplace(a, b);
      else
        changed = true;
    }
    h = std::move(kept);
  }
  return h;
}

}  // namespace

StatefulInterface new_stateful_interface(
    VarSet x, VarSet y, StateSet states, StateId initial,
    TransitionMap transitions, std::map<StateId, InterfacePayload> labels) {
  check_machine_shape(x, y, states, initial, transitions);
  const VarSet z = set_union(x, y);
  std::map<StateId, InterfacePayload> canonical;
  for (const auto& q : states) {
    auto it = labels.find(q);
    if (it == labels.end())
      throw UnknownState("state " + q + " has no interface payload");
    InterfacePayload payload;
    payload.assumption = it->second.assumption.with_rectangle(z, x);
    payload.guarantee = it->second.guarantee.with_rectangle(z, y);
    payload.property = it->second.property.with_rectangle(z, y);
    if (!payload.assumption.irreflexive() || !payload.guarantee.irreflexive() ||
        !payload.property.irreflexive())
      throw SignatureError("state " + q +
                           " carries a reflexive (non-no-flow) relation");
    canonical[q] = std::move(payload);
  }
  TransitionMap total = std::move(transitions);
  for (const auto& q : states) total.try_emplace(q);
  return StatefulInterface{std::move(x),       std::move(y),
                           std::move(states),  std::move(initial),
                           std::move(total),   std::move(canonical)};
}

StatefulComponent new_stateful_component(VarSet x, VarSet y, StateSet states,
                                         StateId initial,
                                         TransitionMap transitions,
                                         std::map<StateId, Relation> flows,
                                         bool normalize) {
  check_machine_shape(x, y, states, initial, transitions);
  const VarSet z = set_union(x, y);
  std::map<StateId, Relation> canonical;
  for (const auto& q : states) {
    auto it = flows.find(q);
    if (it == flows.end())
      throw UnknownState("state " + q + " has no flow relation");
    Relation m = it->second.with_rectangle(z, y);
    if (normalize)
      m = star(m, y).restricted(z, y);
    else if (!is_flow_relation(m, z, y))
      throw NotAFlowRelation("state " + q + " flows are not a flow relation");
    canonical[q] = std::move(m);
  }
  TransitionMap total = std::move(transitions);
  for (const auto& q : states) total.try_emplace(q);
  return StatefulComponent{std::move(x),      std::move(y),
                           std::move(states), std::move(initial),
                           std::move(total),  std::move(canonical)};
}

StatelessInterface stateless_at(const StatefulInterface& F, const StateId& q) {
  auto it = F.labels.find(q);
  if (it == F.labels.end()) throw UnknownState("unknown state " + q);
  return StatelessInterface{F.inputs, F.outputs, it->second.assumption,
                            it->second.guarantee, it->second.property};
}

StatelessComponent stateless_at(const StatefulComponent& f, const StateId& q) {
  auto it = f.flows.find(q);
  if (it == f.flows.end()) throw UnknownState("unknown state " + q);
  return StatelessComponent{f.inputs, f.outputs, it->second};
}

StateSet reachable(const StatefulInterface& F, const StateId& from) {
  if (!F.states.count(from)) throw UnknownState("unknown state " + from);
  return reachable_in(F.transitions, from);
}

StateSet reachable(const StatefulComponent& f, const StateId& from) {
  if (!f.states.count(from)) throw UnknownState("unknown state " + from);
  return reachable_in(f.transitions, from);
}

StatefulWellFormedVerdict is_well_formed(const StatefulInterface& F) {
  StatefulWellFormedVerdict verdict;
  const StateSet live = reachable(F, F.initial);
  verdict.skipped = set_minus(F.states, live);
  verdict.holds = true;
  for (const auto& q : live) {
    WellFormedVerdict state_verdict = is_well_formed(stateless_at(F, q));
    verdict.holds = verdict.holds && state_verdict.holds;
    verdict.per_state.emplace(q, std::move(state_verdict));
  }
  return verdict;
}

SimulationResult implements(const StatefulComponent& f,
                            const StatefulInterface& F) {
  if (f.inputs != F.inputs || f.outputs != F.outputs)
    throw SignatureMismatch("implements requires identical signatures");
  PairRelation h0;
  for (const auto& qf : f.states)
    for (const auto& q : F.states)
      if (implements(stateless_at(f, qf), stateless_at(F, q)).holds)
        h0.emplace(qf, q);
  PairRelation h = greatest_fixpoint(
      std::move(h0),
      [&](const StateId& qf, const StateId& q, const PairRelation& cur) {
        // Every component move must be matched by some interface move.
        for (const auto& qf2 : successors_of(f.transitions, qf)) {
          bool matched = false;
          for (const auto& q2 : successors_of(F.transitions, q))
            if (cur.count({qf2, q2})) {
              matched = true;
              break;
            }
          if (!matched) return false;
        }
        return true;
      });
  SimulationResult result;
  result.holds = h.count({f.initial, F.initial}) != 0;
  result.witness.pairs = std::move(h);
  return result;
}

SimulationResult admissible_env(const StatefulComponent& e,
                                const StatefulInterface& F) {
  if (e.inputs != F.outputs || e.outputs != F.inputs)
    throw SignatureMismatch("admissible_env requires the reversed signature");
  PairRelation h0;  // pairs (q, q_E)
  for (const auto& q : F.states)
    for (const auto& qe : e.states)
      if (admissible_env(stateless_at(e, qe), stateless_at(F, q)).holds)
        h0.emplace(q, qe);
  PairRelation h = greatest_fixpoint(
      std::move(h0),
      [&](const StateId& q, const StateId& qe, const PairRelation& cur) {
        // The interface moves first; the environment must follow.
        for (const auto& q2 : successors_of(F.transitions, q)) {
          bool matched = false;
          for (const auto& qe2 : successors_of(e.transitions, qe))
            if (cur.count({q2, qe2})) {
              matched = true;
              break;
            }
          if (!matched) return false;
        }
        return true;
      });
  SimulationResult result;
  result.holds = h.count({F.initial, e.initial}) != 0;
  result.witness.pairs = std::move(h);
  return result;
}

StateId product_state_id(const StateId& q, const StateId& r) {
  return q + "⋈" + r;
}

StatefulComponent compose(const StatefulComponent& f,
                          const StatefulComponent& g) {
  if (!disjoint(f.outputs, g.outputs))
    throw OutputsOverlap("components with overlapping outputs");
  const SignatureUnion sig =
      signature_union(f.inputs, f.outputs, g.inputs, g.outputs);
  StatefulComponent out;
  out.inputs = sig.inputs;
  out.outputs = sig.outputs;
  out.initial = product_state_id(f.initial, g.initial);
  for (const auto& qf : f.states) {
    for (const auto& qg : g.states) {
      const StateId id = product_state_id(qf, qg);
      out.states.insert(id);
      out.flows[id] =
          compose_components(stateless_at(f, qf), stateless_at(g, qg)).flows;
      StateSet succs;
      for (const auto& rf : successors_of(f.transitions, qf))
        for (const auto& rg : successors_of(g.transitions, qg))
          succs.insert(product_state_id(rf, rg));
      out.transitions[id] = std::move(succs);
    }
  }
  return out;
}

bool compatible(const StatefulInterface& F, const StatefulInterface& G) {
  return compatible(stateless_at(F, F.initial), stateless_at(G, G.initial))
      .compatible;
}

StatefulInterface compose(const StatefulInterface& F,
                          const StatefulInterface& G) {
  if (!disjoint(F.outputs, G.outputs))
    throw OutputsOverlap("interfaces with overlapping outputs");
  if (!compatible(F, G))
    throw Incompatible("initial interface payloads are not compatible");
  const SignatureUnion sig =
      signature_union(F.inputs, F.outputs, G.inputs, G.outputs);
  // Keep exactly the compatible state pairs; transitions into dropped pairs
  // disappear with them.
  std::set<std::pair<StateId, StateId>> kept;
  for (const auto& qf : F.states)
    for (const auto& qg : G.states)
      if (compatible(stateless_at(F, qf), stateless_at(G, qg)).compatible)
        kept.emplace(qf, qg);
  StatefulInterface out;
  out.inputs = sig.inputs;
  out.outputs = sig.outputs;
  out.initial = product_state_id(F.initial, G.initial);
  for (const auto& [qf, qg] : kept) {
    const StateId id = product_state_id(qf, qg);
    out.states.insert(id);
    const StatelessInterface composed =
        compose_interfaces(stateless_at(F, qf), stateless_at(G, qg));
    out.labels[id] = InterfacePayload{composed.assumption, composed.guarantee,
                                      composed.property};
    StateSet succs;
    for (const auto& rf : successors_of(F.transitions, qf))
      for (const auto& rg : successors_of(G.transitions, qg))
        if (kept.count({rf, rg})) succs.insert(product_state_id(rf, rg));
    out.transitions[id] = std::move(succs);
  }
  return out;
}

std::vector<InputGroup> input_transitions(const StatefulInterface& F,
                                          const StateId& q) {
  if (!F.states.count(q)) throw UnknownState("unknown state " + q);
  std::map<PairSet, StateSet> by_label;
  for (const auto& r : successors_of(F.transitions, q))
    by_label[F.labels.at(r).assumption.pairs()].insert(r);
  std::vector<InputGroup> groups;
  const VarSet z = F.all_vars();
  for (auto& [pairs, states] : by_label)
    groups.push_back(InputGroup{Relation(pairs, z, F.inputs), std::move(states)});
  return groups;
}

std::vector<OutputGroup> output_transitions(const StatefulInterface& F,
                                            const StateId& q) {
  if (!F.states.count(q)) throw UnknownState("unknown state " + q);
  std::map<std::pair<PairSet, PairSet>, StateSet> by_label;
  for (const auto& r : successors_of(F.transitions, q)) {
    const InterfacePayload& payload = F.labels.at(r);
    by_label[{payload.guarantee.pairs(), payload.property.pairs()}].insert(r);
  }
  std::vector<OutputGroup> groups;
  const VarSet z = F.all_vars();
  for (auto& [label, states] : by_label)
    groups.push_back(OutputGroup{Relation(label.first, z, F.outputs),
                                 Relation(label.second, z, F.outputs),
                                 std::move(states)});
  return groups;
}

SimulationResult refines(const StatefulInterface& Fr,
                         const StatefulInterface& Fa, bool literal_groups) {
  if (Fr.inputs != Fa.inputs || Fr.outputs != Fa.outputs)
    throw SignatureMismatch("refines requires identical signatures");
  // Precompute the successor group families as plain state sets.
  auto families = [&](const StatefulInterface& F) {
    std::map<StateId, std::pair<std::vector<StateSet>, std::vector<StateSet>>>
        out;
    for (const auto& q : F.states) {
      auto& [inputs, outputs] = out[q];
      for (const auto& group : input_transitions(F, q))
        inputs.push_back(group.states);
      for (const auto& group : output_transitions(F, q))
        outputs.push_back(group.states);
      if (literal_groups) {
        // The all-subsets reading contributes one empty group per
        // non-occurring labeling; a single empty group is equivalent.
        inputs.push_back({});
        outputs.push_back({});
      }
    }
    return out;
  };
  const auto refined_groups = families(Fr);
  const auto abstract_groups = families(Fa);

  PairRelation h0;
  for (const auto& qr : Fr.states)
    for (const auto& qa : Fa.states)
      if (refines(stateless_at(Fr, qr), stateless_at(Fa, qa)).holds)
        h0.emplace(qr, qa);

  auto covered = [](const StateSet& left, const StateSet& right,
                    const PairRelation& h) {
    for (const auto& u : left)
      for (const auto& v : right)
        if (!h.count({u, v})) return false;
    return true;
  };

  PairRelation h = greatest_fixpoint(
      std::move(h0),
      [&](const StateId& qr, const StateId& qa, const PairRelation& cur) {
        const auto& [ir, our] = refined_groups.at(qr);
        const auto& [ia, oa] = abstract_groups.at(qa);
        for (const auto& o : our) {
          bool output_matched = false;
          for (const auto& o2 : oa) {
            bool all_inputs_ok = true;
            for (const auto& i2 : ia) {
              bool input_matched = false;
              for (const auto& i : ir) {
                StateSet oi = set_intersect(o, i);
                StateSet oi2 = set_intersect(o2, i2);
                if (covered(oi, oi2, cur)) {
                  input_matched = true;
                  break;
                }
              }
              if (!input_matched) {
                all_inputs_ok = false;
                break;
              }
            }
            if (all_inputs_ok) {
              output_matched = true;
              break;
            }
          }
          if (!output_matched) return false;
        }
        return true;
      });
  SimulationResult result;
  result.holds = h.count({Fr.initial, Fa.initial}) != 0;
  result.witness.pairs = std::move(h);
  return result;
}

}  // namespace ifflow
