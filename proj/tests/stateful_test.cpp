#include <doctest.h>

#include <random>

#include "ifflow/errors.hpp"
#include "ifflow/stateful.hpp"
#include "support/data.hpp"
#include "support/gen.hpp"

using namespace ifflow;

namespace {

Relation rel(PairSet pairs, VarSet dom, VarSet cod) {
  return Relation::checked(std::move(pairs), std::move(dom), std::move(cod));
}

InterfacePayload payload(Relation a, Relation g, Relation p) {
  return InterfacePayload{std::move(a), std::move(g), std::move(p)};
}

InterfacePayload empty_payload(const VarSet& z, const VarSet& x,
                               const VarSet& y) {
  return payload(Relation::empty(z, x), Relation::empty(z, y),
                 Relation::empty(z, y));
}

// Two-state interface over X={a}, Y={b}: permissive initially, then the
// guarantee forbids the only cross flow.
StatefulInterface make_tightening() {
  const VarSet x = {"a"}, y = {"b"}, z = {"a", "b"};
  return new_stateful_interface(
      x, y, {"s1", "s2"}, "s1", {{"s1", {"s2"}}, {"s2", {"s2"}}},
      {{"s1", empty_payload(z, x, y)},
       {"s2", payload(Relation::empty(z, x), rel({{"a", "b"}}, z, y),
                      Relation::empty(z, y))}});
}

}  // namespace

TEST_CASE("stateless projections and state lookup") {
  const StatefulInterface F = make_tightening();
  const StatelessInterface at = stateless_at(F, "s2");
  CHECK(at.inputs == VarSet{"a"});
  CHECK(at.guarantee.pairs() == PairSet{{"a", "b"}});
  CHECK_THROWS_AS(stateless_at(F, "missing"), UnknownState);

  const SpecDocument doc = testdata::load_document("evi.iff");
  const auto& top = testdata::decl<StatelessInterface>(doc, "F");
  const StatefulInterface wrapped = new_stateful_interface(
      top.inputs, top.outputs, {"operation"}, "operation",
      {{"operation", {"operation"}}},
      {{"operation",
        payload(top.assumption, top.guarantee, top.property)}});
  CHECK(stateless_at(wrapped, "operation") == top);
}

TEST_CASE("reachability over the transition graph") {
  const VarSet x = {"a"}, y = {"b"}, z = {"a", "b"};
  const InterfacePayload none = empty_payload(z, x, y);
  const StatefulInterface loop = new_stateful_interface(
      x, y, {"q0"}, "q0", {{"q0", {"q0"}}}, {{"q0", none}});
  CHECK(reachable(loop, "q0") == StateSet{"q0"});

  const StatefulInterface chain = new_stateful_interface(
      x, y, {"q0", "q1", "q2"}, "q0", {{"q0", {"q1"}}, {"q1", {"q2"}}},
      {{"q0", none}, {"q1", none}, {"q2", none}});
  CHECK(reachable(chain, "q0") == StateSet{"q0", "q1", "q2"});

  const StatefulInterface split = new_stateful_interface(
      x, y, {"q0", "q1", "island"}, "q0", {{"q0", {"q1"}}},
      {{"q0", none}, {"q1", none}, {"island", none}});
  CHECK_FALSE(reachable(split, "q0").contains("island"));
}

TEST_CASE("stateful well-formedness ranges over reachable states") {
  const SpecDocument doc = testdata::load_document("evi.iff");
  const auto& g_ill = testdata::decl<StatelessInterface>(doc, "G_ill");
  const InterfacePayload bad =
      payload(g_ill.assumption, g_ill.guarantee, g_ill.property);
  const InterfacePayload fine = empty_payload(
      g_ill.all_vars(), g_ill.inputs, g_ill.outputs);

  const StatefulInterface reachable_bad = new_stateful_interface(
      g_ill.inputs, g_ill.outputs, {"q0", "q1"}, "q0", {{"q0", {"q1"}}},
      {{"q0", fine}, {"q1", bad}});
  const StatefulWellFormedVerdict verdict = is_well_formed(reachable_bad);
  CHECK_FALSE(verdict.holds);
  CHECK_FALSE(verdict.per_state.at("q1").holds);

  const StatefulInterface all_quiet = new_stateful_interface(
      g_ill.inputs, g_ill.outputs, {"q0", "q1"}, "q0", {{"q0", {"q1"}}},
      {{"q0", fine}, {"q1", fine}});
  CHECK(is_well_formed(all_quiet).holds);

  const StatefulInterface unreachable_bad = new_stateful_interface(
      g_ill.inputs, g_ill.outputs, {"q0", "island"}, "q0", {},
      {{"q0", fine}, {"island", bad}});
  const StatefulWellFormedVerdict skipped = is_well_formed(unreachable_bad);
  CHECK(skipped.holds);
  CHECK(skipped.skipped == StateSet{"island"});
}

TEST_CASE("stateful implements is a forward simulation") {
  const StatefulInterface F = make_tightening();
  const VarSet z = {"a", "b"};

  const StatefulComponent quiet = new_stateful_component(
      {"a"}, {"b"}, {"s1", "s2"}, "s1", {{"s1", {"s2"}}, {"s2", {"s2"}}},
      {{"s1", identity({"b"})}, {"s2", identity({"b"})}}, false);
  const SimulationResult good = implements(quiet, F);
  CHECK(good.holds);
  CHECK(good.witness.pairs.contains({"s1", "s1"}));

  const StatefulComponent leaky = new_stateful_component(
      {"a"}, {"b"}, {"s1", "s2"}, "s1", {{"s1", {"s2"}}, {"s2", {"s2"}}},
      {{"s1", identity({"b"})},
       {"s2", relation_union(identity({"b"}), rel({{"a", "b"}}, z, {"b"}))}},
      false);
  CHECK_FALSE(implements(leaky, F).holds);
}

TEST_CASE("stateful admissibility lets the interface move first") {
  const VarSet x = {"a"}, y = {"b"}, z = {"a", "b"};
  const StatefulInterface F = new_stateful_interface(
      x, y, {"s1", "s2", "s3"}, "s1", {{"s1", {"s2", "s3"}}},
      {{"s1", empty_payload(z, x, y)},
       {"s2", empty_payload(z, x, y)},
       {"s3", payload(rel({{"b", "a"}}, z, x), Relation::empty(z, y),
                      Relation::empty(z, y))}});

  const StatefulComponent idle = new_stateful_component(
      y, x, {"e1"}, "e1", {{"e1", {"e1"}}}, {{"e1", identity(x)}}, false);
  CHECK(admissible_env(idle, F).holds);

  const StatefulComponent pushy = new_stateful_component(
      y, x, {"e1"}, "e1", {{"e1", {"e1"}}},
      {{"e1", relation_union(identity(x), rel({{"b", "a"}}, z, x))}}, false);
  // The interface can branch into s3, where (b, a) is assumed away.
  CHECK_FALSE(admissible_env(pushy, F).holds);
}

TEST_CASE("stateful component composition is the pointwise product") {
  std::mt19937 rng(20240824);
  const VarSet z = {"a", "b", "c"};
  const StatefulComponent f = new_stateful_component(
      {"a"}, {"b"}, {"u1", "u2"}, "u1", {{"u1", {"u2"}}, {"u2", {"u1"}}},
      {{"u1", identity({"b"})},
       {"u2", relation_union(identity({"b"}),
                             rel({{"a", "b"}}, {"a", "b"}, {"b"}))}},
      false);
  const StatefulComponent g = new_stateful_component(
      {"b"}, {"c"}, {"v1", "v2"}, "v1", {{"v1", {"v2"}}, {"v2", {"v1"}}},
      {{"v1", identity({"c"})},
       {"v2", relation_union(identity({"c"}),
                             rel({{"b", "c"}}, {"b", "c"}, {"c"}))}},
      false);
  const StatefulComponent fg = compose(f, g);
  CHECK(fg.initial == product_state_id("u1", "v1"));
  CHECK(fg.states.size() == 4);
  CHECK(fg.transitions.at(product_state_id("u1", "v1")) ==
        StateSet{product_state_id("u2", "v2")});
  for (const auto& qf : f.states)
    for (const auto& qg : g.states)
      CHECK(fg.flows.at(product_state_id(qf, qg)) ==
            compose_components(stateless_at(f, qf), stateless_at(g, qg))
                .flows);
  CHECK(fg.flows.at(product_state_id("u2", "v2")).contains("a", "c"));
  (void)rng;
  (void)z;
}

TEST_CASE("stateful interface composition prunes incompatible pairs") {
  const VarSet zf = {"b", "c"};
  const StatefulInterface F = new_stateful_interface(
      {"c"}, {"b"}, {"q1", "q2"}, "q1", {{"q1", {"q2"}}, {"q2", {"q2"}}},
      {{"q1", empty_payload(zf, {"c"}, {"b"})},
       {"q2", payload(rel({{"b", "c"}}, zf, {"c"}), Relation::empty(zf, {"b"}),
                      Relation::empty(zf, {"b"}))}});
  const StatefulInterface G = new_stateful_interface(
      {"b"}, {"c"}, {"r1", "r2"}, "r1", {{"r1", {"r2"}}, {"r2", {"r2"}}},
      {{"r1", empty_payload(zf, {"b"}, {"c"})},
       {"r2", empty_payload(zf, {"b"}, {"c"})}});

  const StatefulInterface FG = compose(F, G);
  CHECK(FG.states == StateSet{product_state_id("q1", "r1"),
                              product_state_id("q1", "r2")});
  // The only product move led into a dropped pair, so it disappears.
  CHECK(FG.transitions.at(product_state_id("q1", "r1")).empty());

  // Single compatible states compose to the stateless composite payload.
  const StatefulInterface oneF = new_stateful_interface(
      {"c"}, {"b"}, {"q"}, "q", {{"q", {"q"}}},
      {{"q", empty_payload(zf, {"c"}, {"b"})}});
  const StatefulInterface oneG = new_stateful_interface(
      {"b"}, {"c"}, {"r"}, "r", {{"r", {"r"}}},
      {{"r", empty_payload(zf, {"b"}, {"c"})}});
  const StatefulInterface one = compose(oneF, oneG);
  const StatelessInterface flat = compose_interfaces(
      stateless_at(oneF, "q"), stateless_at(oneG, "r"));
  CHECK(stateless_at(one, one.initial) == flat);

  // Fail-fast on incompatible initial payloads.
  const StatefulInterface badF = new_stateful_interface(
      {"c"}, {"b"}, {"q"}, "q", {{"q", {"q"}}},
      {{"q", payload(rel({{"b", "c"}}, zf, {"c"}), Relation::empty(zf, {"b"}),
                     Relation::empty(zf, {"b"}))}});
  CHECK_THROWS_AS(compose(badF, oneG), Incompatible);
}

TEST_CASE("stateful compatibility is decided at the initial states") {
  const VarSet zf = {"b", "c"};
  const StatefulInterface F = new_stateful_interface(
      {"c"}, {"b"}, {"q1", "q2"}, "q1", {{"q1", {"q2"}}},
      {{"q1", empty_payload(zf, {"c"}, {"b"})},
       {"q2", payload(rel({{"b", "c"}}, zf, {"c"}), Relation::empty(zf, {"b"}),
                      Relation::empty(zf, {"b"}))}});
  const StatefulInterface G = new_stateful_interface(
      {"b"}, {"c"}, {"r1"}, "r1", {{"r1", {"r1"}}},
      {{"r1", empty_payload(zf, {"b"}, {"c"})}});
  CHECK(compatible(F, G));  // q2's payload never enters the verdict
  CHECK(compatible(G, F));

  const StatefulInterface clash = new_stateful_interface(
      {"a"}, {"b"}, {"s"}, "s", {{"s", {"s"}}},
      {{"s", empty_payload({"a", "b"}, {"a"}, {"b"})}});
  const StatefulInterface clash2 = new_stateful_interface(
      {"c"}, {"b"}, {"t"}, "t", {{"t", {"t"}}},
      {{"t", empty_payload({"b", "c"}, {"c"}, {"b"})}});
  CHECK_FALSE(compatible(clash, clash2));
}

TEST_CASE("successor groups are keyed by their labels") {
  const SpecDocument doc = testdata::load_document("fig8.iff");
  const auto& split = testdata::decl<StatefulInterface>(doc, "SplitRefined");

  const std::vector<OutputGroup> outs = output_transitions(split, "q1");
  REQUIRE(outs.size() == 2);
  for (const OutputGroup& o : outs) {
    if (o.states == StateSet{"q2"}) {
      CHECK(o.guarantee.pairs() == PairSet{{"x", "y"}});
      CHECK(o.property.pairs() == PairSet{{"x", "y"}});
    } else {
      CHECK(o.states == StateSet{"q3"});
      CHECK(o.guarantee.pairs() == PairSet{{"x", "y"}, {"xp", "y"}});
    }
  }

  const std::vector<InputGroup> ins = input_transitions(split, "q1");
  REQUIRE(ins.size() == 2);

  CHECK(input_transitions(split, "q2").empty());
  CHECK(output_transitions(split, "q3").empty());

  const auto& prune = testdata::decl<StatefulInterface>(doc, "PruneAbstract");
  // q2 and q3 differ in guarantee, hence two output groups from q1.
  CHECK(output_transitions(prune, "q1").size() == 2);
}

TEST_CASE("alternating refinement on the pruning and splitting examples") {
  const SpecDocument doc = testdata::load_document("fig8.iff");
  const auto& pr = testdata::decl<StatefulInterface>(doc, "PruneRefined");
  const auto& pa = testdata::decl<StatefulInterface>(doc, "PruneAbstract");
  const auto& sr = testdata::decl<StatefulInterface>(doc, "SplitRefined");
  const auto& sa = testdata::decl<StatefulInterface>(doc, "SplitAbstract");

  CHECK(refines(pr, pr).holds);

  const SimulationResult prune = refines(pr, pa);
  CHECK(prune.holds);
  CHECK(prune.witness.pairs.contains({"q1", "q1"}));
  CHECK(prune.witness.pairs.contains({"q2", "q2"}));

  const SimulationResult splitres = refines(sr, sa);
  CHECK(splitres.holds);
  CHECK(splitres.witness.pairs.contains({"q1", "q1"}));
  CHECK(splitres.witness.pairs.contains({"q2", "q2"}));
  CHECK(splitres.witness.pairs.contains({"q3", "q2"}));

  // The abstract machine does not refine the one with the extra obligation.
  CHECK_FALSE(refines(sa, sr).holds);

  // The literal all-subsets group reading agrees on these examples.
  CHECK(refines(pr, pa, true).holds);
  CHECK(refines(sr, sa, true).holds);
}
