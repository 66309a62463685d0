#include "ifflow/hypersem.hpp"

#include <algorithm>

#include "ifflow/errors.hpp"

namespace ifflow {

bool Trace::value(const VarId& x, std::size_t t) const {
  const std::size_t clamped = std::min(t, valuations.size() - 1);
  return valuations.at(clamped).at(x);
}

std::size_t TraceSet::length() const {
  return traces.empty() ? 1 : traces.front().length();
}

bool noflow_at(const Trace& p1, const Trace& p2, const Trace& p3,
               std::size_t t, const VarId& x, const VarId& y) {
  if (x == y) throw SameVariable("noflow_at requires distinct variables");
  return p1.value(x, t) == p3.value(x, t) && p2.value(y, t) == p3.value(y, t);
}

bool phi_u(std::size_t t, const Trace& p1, const Trace& p2, const Trace& p3,
           const VarId& x, const VarId& y, const VarId& z) {
  if (x == y || x == z || y == z)
    throw SameVariable("phi_u requires pairwise distinct variables");
  if (t == 0) return false;
  for (std::size_t t1 = 0; t1 < t; ++t1)
    if (!noflow_at(p1, p2, p3, t1, x, y)) return false;
  // Constant tails stabilize after the last index of the longest trace.
  const std::size_t horizon =
      std::max({t, p1.length(), p2.length(), p3.length()});
  for (std::size_t t2 = t; t2 < horizon; ++t2)
    if (!noflow_at(p1, p2, p3, t2, x, z)) return false;
  return noflow_at(p1, p2, p3, horizon, x, z);
}

namespace {

void check_vars(const TraceSet& T, const VarId& x, const VarId& y,
                const VarId& z) {
  if (x == y || x == z || y == z)
    throw SameVariable("semantics checks require pairwise distinct variables");
  (void)T;
}

// Does some pi3 satisfy phi_u for the given pair and time?  Returns the
// first witness by sorted trace index.
std::optional<std::size_t> find_p3(const TraceSet& T, std::size_t i,
                                   std::size_t j, std::size_t t,
                                   const VarId& x, const VarId& y,
                                   const VarId& z) {
  for (std::size_t k = 0; k < T.traces.size(); ++k)
    if (phi_u(t, T.traces[i], T.traces[j], T.traces[k], x, y, z)) return k;
  return std::nullopt;
}

}  // namespace

SemanticsVerdict check_strong(const TraceSet& T, const VarId& x,
                              const VarId& y, const VarId& z) {
  check_vars(T, x, y, z);
  const std::size_t L = T.length();
  SemanticsVerdict verdict;
  for (std::size_t t = 1; t <= L; ++t) {
    SemanticsVerdict attempt;
    attempt.member = true;
    for (std::size_t i = 0; i < T.traces.size() && attempt.member; ++i) {
      for (std::size_t j = 0; j < T.traces.size(); ++j) {
        auto k = find_p3(T, i, j, t, x, y, z);
        if (!k) {
          attempt.member = false;
          attempt.cex_p1 = i;
          attempt.cex_p2 = j;
          break;
        }
        attempt.choices[{i, j}] = {*k, t};
        attempt.time_for[i] = t;
      }
    }
    if (attempt.member) {
      attempt.global_t = t;
      return attempt;
    }
    // Keep the failing pair of the largest candidate time as counterexample.
    verdict = attempt;
  }
  verdict.member = false;
  if (T.traces.empty()) {  // vacuous universals: member with any t
    verdict.member = true;
    verdict.global_t = 1;
  }
  return verdict;
}

SemanticsVerdict check_aware(const TraceSet& T, const VarId& x, const VarId& y,
                             const VarId& z) {
  check_vars(T, x, y, z);
  const std::size_t L = T.length();
  SemanticsVerdict verdict;
  verdict.member = true;
  for (std::size_t i = 0; i < T.traces.size(); ++i) {
    bool found_t = false;
    std::optional<std::size_t> last_failing_j;
    for (std::size_t t = 1; t <= L && !found_t; ++t) {
      bool all_j = true;
      std::map<std::pair<std::size_t, std::size_t>,
               std::pair<std::size_t, std::size_t>>
          local;
      for (std::size_t j = 0; j < T.traces.size(); ++j) {
        auto k = find_p3(T, i, j, t, x, y, z);
        if (!k) {
          all_j = false;
          last_failing_j = j;
          break;
        }
        local[{i, j}] = {*k, t};
      }
      if (all_j) {
        found_t = true;
        verdict.time_for[i] = t;
        verdict.choices.insert(local.begin(), local.end());
      }
    }
    if (!found_t) {
      verdict.member = false;
      verdict.cex_p1 = i;
      verdict.cex_p2 = last_failing_j;
      verdict.time_for.clear();
      verdict.choices.clear();
      return verdict;
    }
  }
  return verdict;
}

SemanticsVerdict check_unstructured(const TraceSet& T, const VarId& x,
                                    const VarId& y, const VarId& z) {
  check_vars(T, x, y, z);
  const std::size_t L = T.length();
  SemanticsVerdict verdict;
  verdict.member = true;
  for (std::size_t i = 0; i < T.traces.size(); ++i) {
    for (std::size_t j = 0; j < T.traces.size(); ++j) {
      bool found = false;
      for (std::size_t k = 0; k < T.traces.size() && !found; ++k) {
        for (std::size_t t = 1; t <= L; ++t) {
          if (phi_u(t, T.traces[i], T.traces[j], T.traces[k], x, y, z)) {
            verdict.choices[{i, j}] = {k, t};
            found = true;
            break;
          }
        }
      }
      if (!found) {
        verdict.member = false;
        verdict.cex_p1 = i;
        verdict.cex_p2 = j;
        verdict.choices.clear();
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace ifflow
