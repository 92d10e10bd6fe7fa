#pragma once

#include <optional>
#include <string>
#include <vector>

#include <snapmem/pocset.hpp>

namespace snapmem {

/**
 * Directed graph over the proper literals of a sensorium, closed under
 * contraposition: adding a->b also adds b*->a*.
 */
class PocGraph {
public:
  PocGraph() = default;
  explicit PocGraph(const Sensorium& sensorium);
  explicit PocGraph(std::size_t sensors);

  std::size_t sensor_count() const { return sensors_; }
  std::size_t literal_count() const { return 2 * sensors_ + 2; }

  /** Adds a->b and b*->a*; both literals must be proper. */
  void add_edge(Literal a, Literal b);
  bool has_edge(Literal a, Literal b) const { return children_[a].test(b); }
  const LiteralSet& children(Literal a) const { return children_[a]; }
  const std::vector<LiteralSet>& successors() const { return children_; }
  std::size_t edge_count() const;
  void clear();

  /** A directed cycle as a literal sequence, if one exists. */
  std::optional<std::vector<Literal>> find_cycle() const;
  bool is_acyclic() const { return !find_cycle(); }

  /**
   * First violation of the poc graph axioms. With allow_equivalences, a
   * pair of opposite edges ab, ba is accepted.
   */
  std::optional<std::string> poc_violation(bool allow_equivalences) const;

  friend bool operator==(const PocGraph& a, const PocGraph& b) = default;

private:
  std::size_t sensors_ = 0;
  std::vector<LiteralSet> children_;
};

/**
 * Transitive closure of g as a weak poc set. Unless allow_cycles is set, a
 * directed cycle raises ContractError naming it.
 */
WeakPocSet derived_poc_set(const PocGraph& g, const Sensorium& sensorium, bool allow_cycles = false);

} // namespace snapmem
