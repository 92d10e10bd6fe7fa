#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <snapmem/pocset.hpp>

namespace snapmem {

using VertexId = std::uint32_t;

struct CubingOptions {
  /** Refuse poc sets with more proper pairs than this. */
  std::size_t max_sensors = 16;
};

/**
 * Assignment of a footprint (subset of a finite point set) to every sensor.
 * Points may stand for states or for transitions. rho(a*) is the complement.
 */
class Realization {
public:
  Realization(Sensorium sensorium, std::size_t points);

  const Sensorium& sensorium() const { return sensorium_; }
  std::size_t point_count() const { return points_; }

  /** Points where the positive literal of the sensor holds. */
  void set_footprint(std::size_t sensor, Bitset points);
  Bitset footprint(Literal a) const;
  /** Complete selection of literals holding at one point. */
  LiteralSet selection_at(std::size_t point) const;
  /** First relation a <= b of p with rho(a) not inside rho(b), if any. */
  std::optional<Relation> morphism_violation(const WeakPocSet& p) const;

private:
  Sensorium sensorium_;
  std::size_t points_;
  std::vector<Bitset> positive_;
};

/**
 * Dual median graph of a strict poc set: vertices are the coherent complete
 * selections, edges join vertices differing in one pair.
 *
 * Exponential in the number of sensors; meant as a test oracle.
 */
class Cubing {
public:
  static Cubing build(const WeakPocSet& p, CubingOptions options = {});

  const WeakPocSet& pocset() const { return pocset_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const;
  const LiteralSet& vertex(VertexId v) const { return vertices_[v]; }
  const std::vector<LiteralSet>& vertices() const { return vertices_; }
  std::optional<VertexId> find(const LiteralSet& s) const;
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }

  /** |u \ v| */
  std::size_t delta(VertexId u, VertexId v) const;
  /** BFS hop distances from one vertex. */
  std::vector<std::size_t> hop_distances(VertexId from) const;

  /** Majority vote, looked up as a vertex. */
  VertexId median(VertexId u, VertexId v, VertexId w) const;
  /** V[B]: vertices containing B (ONE is implicit in every vertex). */
  std::vector<VertexId> halfspace(const LiteralSet& b) const;
  bool contains(VertexId v, const LiteralSet& b) const;

  LiteralSet min_set(VertexId u) const;
  /** Replace a by a* in u; a must be in min_set(u). */
  VertexId flip(VertexId u, Literal a) const;
  /** Transverse subsets of min_set(u), one per incident cube. */
  std::vector<LiteralSet> cubes_at(VertexId u) const;

  /** Shortest path from u into V[T] built by minimal flips. */
  std::vector<VertexId> geodesic_to_convex(VertexId u, const LiteralSet& t) const;
  /** (u \ down T*) u up T */
  VertexId project_point(VertexId u, const LiteralSet& t) const;
  /** V[(up S u up T) \ down T*] */
  std::vector<VertexId> project_convex(const LiteralSet& s, const LiteralSet& t) const;

  /** Unique vertex of k at minimum hop distance from u, by BFS. */
  VertexId nearest_in(VertexId u, const std::vector<VertexId>& k) const;
  /** Image of V[S] under nearest_in(., V[T]). */
  std::vector<VertexId> project_convex_pointwise(const LiteralSet& s, const LiteralSet& t) const;

  /** Literals shared by every vertex of k (ONE excluded). */
  LiteralSet common_literals(const std::vector<VertexId>& k) const;
  /** k equals the halfspace of its common literals. */
  bool is_convex(const std::vector<VertexId>& k) const;
  /** Literals a with k inside V[a] and l inside V[a*]. */
  LiteralSet separator(const std::vector<VertexId>& k, const std::vector<VertexId>& l) const;
  /** (u, v) with u = proj_K(v), v = proj_L(u). */
  std::pair<VertexId, VertexId> gate(const std::vector<VertexId>& k, const std::vector<VertexId>& l) const;

  /** Vertices witnessed by some point of r. */
  std::vector<VertexId> punctured_dual(const Realization& r) const;

  std::string to_dot() const;
  std::string to_json() const;

private:
  LiteralSet strip(const LiteralSet& s) const;
  VertexId lookup(const LiteralSet& s, const char* what) const;

  WeakPocSet pocset_;
  std::vector<LiteralSet> vertices_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::unordered_map<LiteralSet, VertexId, BitsetHash> index_;
};

/**
 * Pullback of a poc morphism f: P -> Q (indexed by literals of P) as a map
 * from vertices of dual(Q) to vertices of dual(P).
 */
std::vector<VertexId> dual_map(const std::vector<Literal>& f, const Cubing& source, const Cubing& target);

/** First failing condition of f being a poc morphism, or nullopt. */
std::optional<std::string> morphism_violation(const std::vector<Literal>& f, const WeakPocSet& p,
                                              const WeakPocSet& q);

} // namespace snapmem
