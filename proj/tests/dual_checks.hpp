#pragma once

// Median-graph checks of a Cubing against brute force over its vertex masks.
// Each returns an empty string on success, otherwise a description.

#include "oracles.hpp"

#include <snapmem/cubing.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace oracle {

struct Dual {
  std::size_t n = 0;
  std::vector<std::uint32_t> masks;
  std::vector<std::vector<int>> dist;
};

inline std::uint32_t mask_of(const snapmem::LiteralSet& v, std::size_t n) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (v.test(2 * i)) m |= 1u << i;
  return m;
}

inline Dual explore(const snapmem::Cubing& c) {
  Dual d;
  d.n = c.pocset().sensorium().size();
  for (const auto& v : c.vertices()) d.masks.push_back(mask_of(v, d.n));
  for (std::size_t u = 0; u < d.masks.size(); ++u) d.dist.push_back(bfs(d.masks, u));
  return d;
}

inline bool between(const Dual& d, std::size_t u, std::size_t w, std::size_t v) {
  return d.dist[u][w] + d.dist[w][v] == d.dist[u][v];
}

inline std::string check_vertices(const snapmem::Cubing& c, const Matrix& leq) {
  const std::size_t n = c.pocset().sensorium().size();
  auto brute = vertices(n, leq);
  std::vector<std::uint32_t> got;
  for (const auto& v : c.vertices()) got.push_back(mask_of(v, n));
  std::sort(brute.begin(), brute.end());
  std::sort(got.begin(), got.end());
  if (brute != got) return "vertex sets differ: brute " + std::to_string(brute.size()) + ", cubing " + std::to_string(got.size());
  std::size_t edges = 0;
  for (std::size_t u = 0; u < got.size(); ++u)
    for (std::size_t v = u + 1; v < got.size(); ++v) edges += __builtin_popcount(got[u] ^ got[v]) == 1;
  if (edges != c.edge_count()) return "edge count differs";
  return {};
}

inline std::string check_metric(const snapmem::Cubing& c, const Dual& d) {
  for (std::size_t u = 0; u < d.masks.size(); ++u)
    for (std::size_t v = 0; v < d.masks.size(); ++v) {
      if (d.dist[u][v] < 0) return "dual is disconnected";
      if (static_cast<int>(c.delta(static_cast<snapmem::VertexId>(u), static_cast<snapmem::VertexId>(v))) != d.dist[u][v])
        return "delta differs from hop distance at (" + std::to_string(u) + "," + std::to_string(v) + ")";
    }
  return {};
}

// Triples exhaustively up to exhaustive_up_to vertices, sampled beyond.
inline std::string check_medians(const snapmem::Cubing& c, const Dual& d, std::mt19937_64& rng, std::size_t samples = 4000,
                                 std::size_t exhaustive_up_to = 32) {
  const std::size_t m = d.masks.size();
  auto one = [&](std::size_t u, std::size_t v, std::size_t w) -> std::string {
    std::vector<std::size_t> meds;
    for (std::size_t x = 0; x < m; ++x)
      if (between(d, u, x, v) && between(d, v, x, w) && between(d, u, x, w)) meds.push_back(x);
    if (meds.size() != 1) return "triple without a unique median";
    if (c.median(static_cast<snapmem::VertexId>(u), static_cast<snapmem::VertexId>(v), static_cast<snapmem::VertexId>(w)) != meds[0])
      return "median formula disagrees with interval intersection";
    return {};
  };
  if (m <= exhaustive_up_to) {
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < m; ++v)
        for (std::size_t w = 0; w < m; ++w)
          if (auto e = one(u, v, w); !e.empty()) return e;
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (std::size_t k = 0; k < samples; ++k)
      if (auto e = one(pick(rng), pick(rng), pick(rng)); !e.empty()) return e;
  }
  return {};
}

// The sets W(u,v) = {w : d(w,u) < d(w,v)} over edges uv are exactly the V[a].
inline std::string check_halfspaces(const snapmem::Cubing& c, const Dual& d) {
  const std::size_t m = d.masks.size();
  std::set<std::vector<bool>> cuts, lits;
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v) {
      if (d.dist[u][v] != 1) continue;
      std::vector<bool> w(m);
      for (std::size_t x = 0; x < m; ++x) w[x] = d.dist[x][u] < d.dist[x][v];
      cuts.insert(w);
    }
  const auto& sen = c.pocset().sensorium();
  for (Literal a = 0; a < sen.proper_count(); ++a) {
    std::vector<bool> w(m, false);
    for (auto x : c.halfspace(sen.make_set({a}))) w[x] = true;
    for (std::size_t x = 0; x < m; ++x)
      if (w[x] != holds(d.masks[x], a)) return "halfspace V[" + sen.name(a) + "] has the wrong members";
    if (m > 1) lits.insert(w);
  }
  if (cuts != lits) return "edge cuts differ from the literal halfspaces";
  return {};
}

inline std::vector<std::size_t> brute_halfspace(const Dual& d, const snapmem::LiteralSet& t) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < d.masks.size(); ++x) {
    bool ok = true;
    t.for_each([&](std::size_t a) {
      if (a < 2 * d.n && !holds(d.masks[x], static_cast<Literal>(a))) ok = false;
      if (a == 2 * d.n) ok = false;
    });
    if (ok) out.push_back(x);
  }
  return out;
}

// project_point and geodesics against BFS for every vertex and a coherent target.
inline std::string check_projection(const snapmem::Cubing& c, const Dual& d, const snapmem::LiteralSet& t) {
  const auto target = brute_halfspace(d, t);
  if (target.empty()) return {};
  const auto& p = c.pocset();
  for (std::size_t u = 0; u < d.masks.size(); ++u) {
    std::size_t best = target[0];
    int ties = 0;
    for (auto x : target) {
      if (d.dist[u][x] < d.dist[u][best]) {
        best = x;
        ties = 0;
      } else if (d.dist[u][x] == d.dist[u][best] && x != best) {
        ++ties;
      }
    }
    if (ties) return "BFS argmin is not unique";
    const auto uid = static_cast<snapmem::VertexId>(u);
    if (c.project_point(uid, t) != best) return "project_point differs from BFS argmin";
    const auto path = c.geodesic_to_convex(uid, t);
    if (static_cast<int>(path.size()) - 1 != d.dist[u][best]) return "geodesic length differs from BFS distance";
    if ((c.vertex(uid) & p.down_set(snapmem::star_set(t))).count() != path.size() - 1)
      return "geodesic length differs from |u & down(T*)|";
    for (std::size_t k = 1; k < path.size(); ++k)
      if (d.dist[path[k - 1]][path[k]] != 1) return "geodesic has a non-edge step";
  }
  return {};
}

} // namespace oracle
