#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <snapmem/literal.hpp>

namespace snapmem {

using Relation = std::pair<Literal, Literal>;

/** Nesting form of a proper pair (a, b), or crossing. */
enum class PairRelation { kLeq, kStarLeq, kLeqStar, kStarLeqStar, kCrossing };

const char* to_string(PairRelation r);

/**
 * Weak poc set over a sensorium: a preorder on literals closed under
 * contraposition with ZERO as minimum and ONE as maximum.
 *
 * Stored as full up/down reachability bit-matrices. Mutual reachability is
 * kept as an equivalence rather than rejected. Immutable once built.
 */
class WeakPocSet {
public:
  WeakPocSet() = default;

  /** Free poc set: only ZERO <= x <= ONE. */
  static WeakPocSet free(Sensorium sensorium);
  /** Smallest weak poc set containing the relations (a <= b). */
  static WeakPocSet from_generators(Sensorium sensorium, const std::vector<Relation>& relations);
  /**
   * Closure of a successor relation given as one bitset per literal.
   * Contrapositives, reflexivity and the ZERO/ONE bounds are added.
   */
  static WeakPocSet from_successors(Sensorium sensorium, std::vector<LiteralSet> successors);

  const Sensorium& sensorium() const { return sensorium_; }

  bool leq(Literal a, Literal b) const { return up_[a].test(b); }
  /** Principal up set {b : a <= b}. */
  const LiteralSet& up(Literal a) const { return up_[a]; }
  /** Principal down set {b : b <= a}. */
  const LiteralSet& down(Literal a) const { return down_[a]; }
  LiteralSet up_set(const LiteralSet& a) const;
  LiteralSet down_set(const LiteralSet& a) const;

  PairRelation classify_pair(Literal a, Literal b) const;

  bool is_coherent(const LiteralSet& a) const;
  /** coh(A) = up(A) \ down(A*). */
  LiteralSet coherent_projection(const LiteralSet& a) const;

  bool is_negligible(Literal a) const { return leq(a, star(a)); }
  bool is_ubiquitous(Literal a) const { return leq(star(a), a); }
  bool equivalent(Literal a, Literal b) const { return leq(a, b) && leq(b, a); }
  /** No negligible proper literal and no two distinct equivalent literals. */
  bool is_strict() const;

  /**
   * Every strict relation a < b between distinct proper literals, one
   * representative per contraposition orbit. Regenerates the order.
   */
  std::vector<Relation> relations() const;

  friend bool operator==(const WeakPocSet& a, const WeakPocSet& b) {
    return a.sensorium_ == b.sensorium_ && a.up_ == b.up_;
  }

private:
  Sensorium sensorium_;
  std::vector<LiteralSet> up_;
  std::vector<LiteralSet> down_;
};

/** Canonical quotient and the morphism onto it (indexed by source literal). */
struct Quotient {
  WeakPocSet pocset;
  std::vector<Literal> map;
};

/**
 * Negligible literals go to ZERO, ubiquitous ones to ONE, and equivalence
 * classes are merged. The result is a strict poc set.
 */
Quotient canonical_quotient(const WeakPocSet& p);

/** Disjoint union of the orders; every cross pair is transverse. */
WeakPocSet direct_sum(const WeakPocSet& p, const WeakPocSet& q);

/** Literal of q viewed inside direct_sum(p, q). */
Literal shift_literal(const WeakPocSet& p, const WeakPocSet& q, Literal b);

/** {"sensors": [...], "relations": [["a","b*"], ...]} */
std::string pocset_to_json(const WeakPocSet& p);
WeakPocSet pocset_from_json(std::string_view text);

} // namespace snapmem
