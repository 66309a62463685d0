#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ifflow {

// Variables live in one global string namespace; signature membership, not
// naming, determines whether a variable acts as an input or an output.
using VarId = std::string;
using VarSet = std::set<VarId>;
using VarPair = std::pair<VarId, VarId>;
using PairSet = std::set<VarPair>;

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersect(const VarSet& a, const VarSet& b);
VarSet set_minus(const VarSet& a, const VarSet& b);
bool disjoint(const VarSet& a, const VarSet& b);

// A finite relation between named variables.  Every relation carries the
// rectangle (domain x codomain) it lives in; complements are always taken
// relative to that rectangle.
class Relation {
 public:
  Relation() = default;

  // Unchecked constructor for internal use; `checked` validates that every
  // pair lies inside the rectangle.
  Relation(PairSet pairs, VarSet domain, VarSet codomain);
  static Relation checked(PairSet pairs, VarSet domain, VarSet codomain);
  static Relation empty(VarSet domain, VarSet codomain);
  static Relation full(const VarSet& domain, const VarSet& codomain);

  const PairSet& pairs() const { return pairs_; }
  const VarSet& domain() const { return domain_; }
  const VarSet& codomain() const { return codomain_; }

  bool contains(const VarId& a, const VarId& b) const;
  bool is_empty() const { return pairs_.empty(); }
  std::size_t size() const { return pairs_.size(); }

  // Pair-level containment; rectangles are not compared.
  bool subset_of(const Relation& other) const;
  bool same_pairs(const Relation& other) const;
  bool irreflexive() const;

  // Intersect the pair set with domain x codomain and redeclare the
  // rectangle accordingly.
  Relation restricted(const VarSet& domain, const VarSet& codomain) const;
  // Keep the pairs, redeclare the rectangle (validated).
  Relation with_rectangle(VarSet domain, VarSet codomain) const;

  Relation inserted(const VarId& a, const VarId& b) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  PairSet pairs_;
  VarSet domain_;
  VarSet codomain_;
};

// Diagrammatic composition: (a,b) in compose(r,s) iff there is a c with
// (a,c) in r and (c,b) in s.  Result rectangle: r.domain x s.codomain.
Relation compose(const Relation& r, const Relation& s);

// Identity relation on v, rectangle v x v.
Relation identity(const VarSet& v);

// Complement relative to the relation's declared rectangle.
Relation complement(const Relation& r);

// Smallest relation containing r that is transitively closed and contains
// identity(reflexive_over); the rectangle widens to cover reflexive_over.
Relation star(const Relation& r, const VarSet& reflexive_over);

// Pairwise set operations; rectangles are unioned (for intersection and
// difference, the left rectangle is kept).
Relation relation_union(const Relation& r, const Relation& s);
Relation relation_intersect(const Relation& r, const Relation& s);
Relation relation_minus(const Relation& r, const Relation& s);

// Step kinds of an alternating path: edges drawn from the `first` relation
// and edges drawn from the `second` relation strictly alternate.
enum class StepKind { First, Second };

struct AltPath {
  std::vector<VarId> nodes;     // length = steps.size() + 1
  std::vector<StepKind> steps;  // may be empty (identity path)
};

// Union over n >= 0 of
//   (identity(head_ids) U first) o (second o first)^n o (identity(tail_ids) U second)
// computed as a monotone fixpoint over the finite pair universe.  With
// tail_ids empty the trailing `second` factor is mandatory; with head_ids
// empty the leading `first` factor is mandatory.
Relation alternating_paths(const Relation& first, const Relation& second,
                           const VarSet& head_ids, const VarSet& tail_ids);

// Witness recovery for a pair in alternating_paths: a shortest alternating
// path, deterministic (BFS over variables in sorted order, first-found
// predecessor; ties resolve to the lexicographically smallest intermediate).
std::optional<AltPath> alternating_witness(const Relation& first,
                                           const Relation& second,
                                           const VarSet& head_ids,
                                           const VarSet& tail_ids,
                                           const VarId& from, const VarId& to);

// Replays a candidate path against the defining shape; used to validate
// witnesses independently of the fixpoint.
bool is_alternating_path(const AltPath& path, const Relation& first,
                         const Relation& second, const VarSet& head_ids,
                         const VarSet& tail_ids);

}  // namespace ifflow
