#include "ifflow/relalg.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "ifflow/errors.hpp"

namespace ifflow {

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VarSet set_intersect(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

VarSet set_minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

bool disjoint(const VarSet& a, const VarSet& b) {
  return set_intersect(a, b).empty();
}

Relation::Relation(PairSet pairs, VarSet domain, VarSet codomain)
    : pairs_(std::move(pairs)),
      domain_(std::move(domain)),
      codomain_(std::move(codomain)) {}

Relation Relation::checked(PairSet pairs, VarSet domain, VarSet codomain) {
  for (const auto& [a, b] : pairs) {
    if (!domain.count(a) || !codomain.count(b)) {
      throw SignatureError("pair (" + a + "," + b +
                           ") lies outside the declared rectangle");
    }
  }
  return Relation(std::move(pairs), std::move(domain), std::move(codomain));
}

Relation Relation::empty(VarSet domain, VarSet codomain) {
  return Relation({}, std::move(domain), std::move(codomain));
}

Relation Relation::full(const VarSet& domain, const VarSet& codomain) {
  PairSet pairs;
  for (const auto& a : domain)
    for (const auto& b : codomain) pairs.emplace(a, b);
  return Relation(std::move(pairs), domain, codomain);
}

bool Relation::contains(const VarId& a, const VarId& b) const {
  return pairs_.count({a, b}) != 0;
}

bool Relation::subset_of(const Relation& other) const {
  return std::includes(other.pairs_.begin(), other.pairs_.end(),
                       pairs_.begin(), pairs_.end());
}

bool Relation::same_pairs(const Relation& other) const {
  return pairs_ == other.pairs_;
}

bool Relation::irreflexive() const {
  for (const auto& [a, b] : pairs_)
    if (a == b) return false;
  return true;
}

Relation Relation::restricted(const VarSet& domain,
                              const VarSet& codomain) const {
  PairSet pairs;
  for (const auto& p : pairs_)
    if (domain.count(p.first) && codomain.count(p.second)) pairs.insert(p);
  return Relation(std::move(pairs), domain, codomain);
}

Relation Relation::with_rectangle(VarSet domain, VarSet codomain) const {
  return checked(pairs_, std::move(domain), std::move(codomain));
}

Relation Relation::inserted(const VarId& a, const VarId& b) const {
  Relation out = *this;
  if (!out.domain_.count(a) || !out.codomain_.count(b)) {
    throw SignatureError("pair (" + a + "," + b +
                         ") lies outside the declared rectangle");
  }
  out.pairs_.emplace(a, b);
  return out;
}

Relation compose(const Relation& r, const Relation& s) {
  // Index s by its left column for the join.
  std::map<VarId, std::vector<VarId>> succ;
  for (const auto& [c, b] : s.pairs()) succ[c].push_back(b);
  PairSet pairs;
  for (const auto& [a, c] : r.pairs()) {
    auto it = succ.find(c);
    if (it == succ.end()) continue;
    for (const auto& b : it->second) pairs.emplace(a, b);
  }
  return Relation(std::move(pairs), r.domain(), s.codomain());
}

Relation identity(const VarSet& v) {
  PairSet pairs;
  for (const auto& x : v) pairs.emplace(x, x);
  return Relation(std::move(pairs), v, v);
}

Relation complement(const Relation& r) {
  PairSet pairs;
  for (const auto& a : r.domain())
    for (const auto& b : r.codomain())
      if (!r.contains(a, b)) pairs.emplace(a, b);
  return Relation(std::move(pairs), r.domain(), r.codomain());
}

Relation star(const Relation& r, const VarSet& reflexive_over) {
  VarSet domain = set_union(r.domain(), reflexive_over);
  VarSet codomain = set_union(r.codomain(), reflexive_over);
  PairSet pairs = r.pairs();
  for (const auto& v : reflexive_over) pairs.emplace(v, v);
  // Saturate transitivity; the universe is finite, so this terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    PairSet added;
    std::map<VarId, std::vector<VarId>> succ;
    for (const auto& [a, b] : pairs) succ[a].push_back(b);
    for (const auto& [a, b] : pairs) {
      auto it = succ.find(b);
      if (it == succ.end()) continue;
      for (const auto& c : it->second)
        if (!pairs.count({a, c})) added.emplace(a, c);
    }
    if (!added.empty()) {
      changed = true;
      pairs.insert(added.begin(), added.end());
    }
  }
  return Relation(std::move(pairs), std::move(domain), std::move(codomain));
}

Relation relation_union(const Relation& r, const Relation& s) {
  PairSet pairs = r.pairs();
  pairs.insert(s.pairs().begin(), s.pairs().end());
  return Relation(std::move(pairs), set_union(r.domain(), s.domain()),
                  set_union(r.codomain(), s.codomain()));
}

Relation relation_intersect(const Relation& r, const Relation& s) {
  PairSet pairs;
  std::set_intersection(r.pairs().begin(), r.pairs().end(), s.pairs().begin(),
                        s.pairs().end(), std::inserter(pairs, pairs.end()));
  return Relation(std::move(pairs), r.domain(), r.codomain());
}

Relation relation_minus(const Relation& r, const Relation& s) {
  PairSet pairs;
  std::set_difference(r.pairs().begin(), r.pairs().end(), s.pairs().begin(),
                      s.pairs().end(), std::inserter(pairs, pairs.end()));
  return Relation(std::move(pairs), r.domain(), r.codomain());
}

namespace {

// A path position during the search: the current variable together with the
// kind of the last edge taken (kNone only at the start).
enum LastStep { kNone = 0, kFirst = 1, kSecond = 2 };

struct SearchState {
  VarId var;
  int last;
  bool operator<(const SearchState& o) const {
    return std::tie(var, last) < std::tie(o.var, o.last);
  }
};

using Adjacency = std::map<VarId, std::vector<VarId>>;

Adjacency adjacency_of(const Relation& r) {
  Adjacency adj;
  for (const auto& [a, b] : r.pairs()) adj[a].push_back(b);
  return adj;  // vectors are sorted because PairSet iterates in order
}

struct Discovered {
  SearchState parent;
  long order;
};

// BFS over alternating positions from a single start variable.  Edge kinds
// strictly alternate; a leading `second` edge is only allowed when the start
// lies in head_ids (the Id_head factor).  Neighbors are expanded in sorted
// variable order so that witnesses are deterministic.
std::map<SearchState, Discovered> explore(const VarId& start,
                                          const Adjacency& first,
                                          const Adjacency& second,
                                          const VarSet& head_ids) {
  std::map<SearchState, Discovered> seen;
  std::deque<SearchState> queue;
  long order = 0;
  auto visit = [&](const SearchState& state, const SearchState& parent) {
    if (seen.count(state)) return;
    seen[state] = Discovered{parent, order++};
    queue.push_back(state);
  };
  const SearchState root{start, kNone};
  seen[root] = Discovered{root, order++};
  if (auto it = first.find(start); it != first.end())
    for (const auto& w : it->second) visit({w, kFirst}, root);
  if (head_ids.count(start))
    if (auto it = second.find(start); it != second.end())
      for (const auto& w : it->second) visit({w, kSecond}, root);
  while (!queue.empty()) {
    SearchState cur = queue.front();
    queue.pop_front();
    const Adjacency& next = (cur.last == kFirst) ? second : first;
    const int kind = (cur.last == kFirst) ? kSecond : kFirst;
    if (auto it = next.find(cur.var); it != next.end())
      for (const auto& w : it->second) visit({w, kind}, cur);
  }
  return seen;
}

}  // namespace

Relation alternating_paths(const Relation& first, const Relation& second,
                           const VarSet& head_ids, const VarSet& tail_ids) {
  const VarSet domain = set_union(head_ids, first.domain());
  const VarSet codomain = set_union(tail_ids, second.codomain());
  const Adjacency first_adj = adjacency_of(first);
  const Adjacency second_adj = adjacency_of(second);
  PairSet pairs;
  for (const auto& start : domain) {
    if (head_ids.count(start) && tail_ids.count(start))
      pairs.emplace(start, start);  // Id_head o Id_tail contribution
    auto seen = explore(start, first_adj, second_adj, head_ids);
    for (const auto& [state, info] : seen) {
      if (state.last == kSecond ||
          (state.last == kFirst && tail_ids.count(state.var)))
        pairs.emplace(start, state.var);
    }
  }
  return Relation(std::move(pairs), domain, codomain);
}

std::optional<AltPath> alternating_witness(
    const Relation& first, const Relation& second, const VarSet& head_ids,
    const VarSet& tail_ids, const VarId& from, const VarId& to) {
  if (from == to && head_ids.count(from) && tail_ids.count(from))
    return AltPath{{from}, {}};
  const Adjacency first_adj = adjacency_of(first);
  const Adjacency second_adj = adjacency_of(second);
  auto seen = explore(from, first_adj, second_adj, head_ids);
  // Pick the accepting position discovered earliest (BFS order implies it is
  // on a shortest path; first-found resolves ties deterministically).
  std::optional<SearchState> best;
  long best_order = 0;
  for (int last : {kFirst, kSecond}) {
    if (last == kFirst && !tail_ids.count(to)) continue;
    auto it = seen.find(SearchState{to, last});
    if (it == seen.end()) continue;
    if (!best || it->second.order < best_order) {
      best = it->first;
      best_order = it->second.order;
    }
  }
  if (!best) return std::nullopt;
  AltPath path;
  SearchState cur = *best;
  while (cur.last != kNone) {
    path.nodes.push_back(cur.var);
    path.steps.push_back(cur.last == kFirst ? StepKind::First
                                            : StepKind::Second);
    cur = seen.at(cur).parent;
  }
  path.nodes.push_back(from);
  std::reverse(path.nodes.begin(), path.nodes.end());
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

bool is_alternating_path(const AltPath& path, const Relation& first,
                         const Relation& second, const VarSet& head_ids,
                         const VarSet& tail_ids) {
  if (path.nodes.size() != path.steps.size() + 1) return false;
  if (path.nodes.empty()) return false;
  if (path.steps.empty())
    return head_ids.count(path.nodes.front()) &&
           tail_ids.count(path.nodes.front()) != 0;
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    const Relation& rel = path.steps[i] == StepKind::First ? first : second;
    if (!rel.contains(path.nodes[i], path.nodes[i + 1])) return false;
    if (i > 0 && path.steps[i] == path.steps[i - 1]) return false;
  }
  if (path.steps.front() == StepKind::Second &&
      !head_ids.count(path.nodes.front()))
    return false;
  if (path.steps.back() == StepKind::First &&
      !tail_ids.count(path.nodes.back()))
    return false;
  return true;
}

}  // namespace ifflow
