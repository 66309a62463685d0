#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ifflow/relalg.hpp"

namespace ifflow {

// A finite boolean trace with the constant-tail convention: reading past the
// last valuation repeats it forever.
struct Trace {
  std::vector<std::map<VarId, bool>> valuations;  // length L >= 1

  std::size_t length() const { return valuations.size(); }
  bool value(const VarId& x, std::size_t t) const;
  friend bool operator==(const Trace&, const Trace&) = default;
};

struct TraceSet {
  VarSet variables;
  std::vector<Trace> traces;  // all of equal length

  std::size_t length() const;  // L (1 for an empty set)
  friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

// x1[t] not-flows-to y2[t] through pi3.
bool noflow_at(const Trace& p1, const Trace& p2, const Trace& p3,
               std::size_t t, const VarId& x, const VarId& y);

// The until-shaped no-flow template: before t, x does not flow to y; from t
// on, x does not flow to z.  The unbounded tail quantifier is decided up to
// the trace length (constant tails make later positions equivalent).
bool phi_u(std::size_t t, const Trace& p1, const Trace& p2, const Trace& p3,
           const VarId& x, const VarId& y, const VarId& z);

struct SemanticsVerdict {
  bool member = false;
  // Witness data (members only; indices into TraceSet::traces):
  std::optional<std::size_t> global_t;          // strong: the single t
  std::map<std::size_t, std::size_t> time_for;  // aware: pi1 -> t
  // every mode: (pi1, pi2) -> (pi3, t) such that phi_u holds
  std::map<std::pair<std::size_t, std::size_t>,
           std::pair<std::size_t, std::size_t>>
      choices;
  // Counterexample data (non-members only): a failing pi1 (aware) or
  // failing (pi1, pi2) (strong at every t / unstructured).
  std::optional<std::size_t> cex_p1;
  std::optional<std::size_t> cex_p2;
};

// exists t, for all pi1, for all pi2, exists pi3.
SemanticsVerdict check_strong(const TraceSet& T, const VarId& x,
                              const VarId& y, const VarId& z);
// for all pi1, exists t, for all pi2, exists pi3.
SemanticsVerdict check_aware(const TraceSet& T, const VarId& x, const VarId& y,
                             const VarId& z);
// for all pi1, for all pi2, exists pi3, exists t.
SemanticsVerdict check_unstructured(const TraceSet& T, const VarId& x,
                                    const VarId& y, const VarId& z);

}  // namespace ifflow
