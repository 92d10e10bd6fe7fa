#include <snapmem/cubing.hpp>
#include <snapmem/errors.hpp>

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace snapmem {

Realization::Realization(Sensorium sensorium, std::size_t points)
    : sensorium_(std::move(sensorium)), points_(points), positive_(sensorium_.size(), Bitset(points)) {}

void Realization::set_footprint(std::size_t sensor, Bitset points) {
  if (sensor >= sensorium_.size()) throw InputError("realization: sensor index out of range");
  if (points.width() != points_) throw InputError("realization: footprint width differs from point count");
  positive_[sensor] = std::move(points);
}

Bitset Realization::footprint(Literal a) const {
  if (a == sensorium_.zero()) return Bitset(points_);
  Bitset all(points_);
  for (std::size_t x = 0; x < points_; ++x) all.set(x);
  if (a == sensorium_.one()) return all;
  const Bitset& pos = positive_.at(sensor_of(a));
  return is_starred(a) ? all - pos : pos;
}

LiteralSet Realization::selection_at(std::size_t point) const {
  LiteralSet s = sensorium_.empty_set();
  for (std::size_t i = 0; i < sensorium_.size(); ++i)
    s.set(positive_[i].test(point) ? positive_literal(i) : negative_literal(i));
  return s;
}

std::optional<Relation> Realization::morphism_violation(const WeakPocSet& p) const {
  if (!(p.sensorium() == sensorium_)) throw InputError("realization and poc set use different sensoria");
  const std::size_t n = sensorium_.literal_count();
  std::vector<Bitset> fp;
  fp.reserve(n);
  for (Literal a = 0; a < n; ++a) fp.push_back(footprint(a));
  for (Literal a = 0; a < n; ++a) {
    std::optional<Relation> bad;
    p.up(a).for_each([&](std::size_t b) {
      if (!bad && !fp[a].is_subset_of(fp[b])) bad = Relation{a, static_cast<Literal>(b)};
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

Cubing Cubing::build(const WeakPocSet& p, CubingOptions options) {
  const Sensorium& s = p.sensorium();
  if (s.size() > options.max_sensors)
    throw CapExceeded("dual oracle refuses " + std::to_string(s.size()) + " sensors (cap " +
                      std::to_string(options.max_sensors) + ")");
  if (!p.is_strict()) throw ContractError("dual oracle needs a strict poc set; apply canonical_quotient first");

  Cubing c;
  c.pocset_ = p;
  LiteralSet cur = s.empty_set();
  LiteralSet forbidden = s.empty_set(); // literals x with x <= y* for some chosen y
  std::vector<LiteralSet> saved;
  // depth-first enumeration with coherence pruning
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == s.size()) {
      c.index_.emplace(cur, static_cast<VertexId>(c.vertices_.size()));
      c.vertices_.push_back(cur);
      return;
    }
    for (Literal x : {positive_literal(i), negative_literal(i)}) {
      if (forbidden.test(x)) continue;
      const LiteralSet keep = forbidden;
      cur.set(x);
      forbidden |= p.down(star(x));
      self(self, i + 1);
      cur.reset(x);
      forbidden = keep;
    }
  };
  rec(rec, 0);

  c.adjacency_.assign(c.vertices_.size(), {});
  for (VertexId v = 0; v < c.vertices_.size(); ++v) {
    c.vertices_[v].for_each([&](std::size_t a) {
      LiteralSet w = c.vertices_[v];
      w.reset(a);
      w.set(star(static_cast<Literal>(a)));
      auto it = c.index_.find(w);
      if (it != c.index_.end()) c.adjacency_[v].push_back(it->second);
    });
    std::sort(c.adjacency_[v].begin(), c.adjacency_[v].end());
  }
  return c;
}

std::size_t Cubing::edge_count() const {
  std::size_t e = 0;
  for (const auto& a : adjacency_) e += a.size();
  return e / 2;
}

std::optional<VertexId> Cubing::find(const LiteralSet& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId Cubing::lookup(const LiteralSet& s, const char* what) const {
  auto v = find(strip(s));
  if (!v) throw ContractError(std::string(what) + ": result " + pocset_.sensorium().format(s) + " is not a vertex");
  return *v;
}

LiteralSet Cubing::strip(const LiteralSet& s) const {
  LiteralSet r = s;
  r.reset(pocset_.sensorium().one());
  return r;
}

std::size_t Cubing::delta(VertexId u, VertexId v) const { return (vertices_[u] - vertices_[v]).count(); }

std::vector<std::size_t> Cubing::hop_distances(VertexId from) const {
  std::vector<std::size_t> d(vertices_.size(), std::numeric_limits<std::size_t>::max());
  std::deque<VertexId> q{from};
  d[from] = 0;
  while (!q.empty()) {
    const VertexId v = q.front();
    q.pop_front();
    for (VertexId w : adjacency_[v])
      if (d[w] == std::numeric_limits<std::size_t>::max()) {
        d[w] = d[v] + 1;
        q.push_back(w);
      }
  }
  return d;
}

VertexId Cubing::median(VertexId u, VertexId v, VertexId w) const {
  const auto& a = vertices_[u];
  const auto& b = vertices_[v];
  const auto& c = vertices_[w];
  return lookup((a & b) | (a & c) | (b & c), "median");
}

bool Cubing::contains(VertexId v, const LiteralSet& b) const {
  if (b.test(pocset_.sensorium().zero())) return false;
  return strip(b).is_subset_of(vertices_[v]);
}

std::vector<VertexId> Cubing::halfspace(const LiteralSet& b) const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertices_.size(); ++v)
    if (contains(v, b)) out.push_back(v);
  return out;
}

LiteralSet Cubing::min_set(VertexId u) const {
  const auto& vu = vertices_[u];
  LiteralSet m = pocset_.sensorium().empty_set();
  vu.for_each([&](std::size_t a) {
    if ((pocset_.down(static_cast<Literal>(a)) & vu).count() == 1) m.set(a);
  });
  return m;
}

VertexId Cubing::flip(VertexId u, Literal a) const {
  if (!min_set(u).test(a))
    throw ContractError("invalid flip: " + pocset_.sensorium().name(a) + " is not minimal in the vertex");
  LiteralSet w = vertices_[u];
  w.reset(a);
  w.set(star(a));
  return lookup(w, "flip");
}

std::vector<LiteralSet> Cubing::cubes_at(VertexId u) const {
  const std::vector<std::size_t> m = min_set(u).to_vector();
  std::vector<LiteralSet> out;
  LiteralSet cur = pocset_.sensorium().empty_set();
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m.size()) {
      out.push_back(cur);
      return;
    }
    self(self, i + 1);
    const auto a = static_cast<Literal>(m[i]);
    bool transverse = true;
    cur.for_each([&](std::size_t b) {
      if (pocset_.classify_pair(a, static_cast<Literal>(b)) != PairRelation::kCrossing) transverse = false;
    });
    if (transverse) {
      cur.set(a);
      self(self, i + 1);
      cur.reset(a);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<VertexId> Cubing::geodesic_to_convex(VertexId u, const LiteralSet& t) const {
  if (halfspace(t).empty()) throw InputError("geodesic_to_convex: target halfspace is empty");
  const LiteralSet below = pocset_.down_set(star_set(t));
  std::vector<VertexId> path{u};
  VertexId cur = u;
  while ((vertices_[cur] & below).any()) {
    Literal b = 0;
    bool found = false;
    (strip(t) - vertices_[cur]).for_each([&](std::size_t x) {
      if (!found) {
        b = static_cast<Literal>(x);
        found = true;
      }
    });
    if (!found) throw ContractError("geodesic_to_convex: target not coherent");
    const LiteralSet cand = min_set(cur) & pocset_.down(star(b));
    const auto c = static_cast<Literal>(cand.to_vector().front());
    cur = flip(cur, c);
    path.push_back(cur);
  }
  return path;
}

VertexId Cubing::project_point(VertexId u, const LiteralSet& t) const {
  if (halfspace(t).empty()) throw InputError("project_point: target halfspace is empty");
  return lookup((vertices_[u] - pocset_.down_set(star_set(t))) | pocset_.up_set(t), "project_point");
}

std::vector<VertexId> Cubing::project_convex(const LiteralSet& s, const LiteralSet& t) const {
  if (halfspace(s).empty() || halfspace(t).empty()) throw InputError("project_convex: empty input");
  return halfspace((pocset_.up_set(s) | pocset_.up_set(t)) - pocset_.down_set(star_set(t)));
}

VertexId Cubing::nearest_in(VertexId u, const std::vector<VertexId>& k) const {
  if (k.empty()) throw InputError("nearest_in: empty target");
  const auto d = hop_distances(u);
  VertexId best = k.front();
  std::size_t ties = 0;
  for (VertexId v : k) {
    if (d[v] < d[best]) {
      best = v;
      ties = 1;
    } else if (d[v] == d[best]) {
      ++ties;
    }
  }
  if (ties != 1) throw ContractError("nearest_in: closest point is not unique");
  return best;
}

std::vector<VertexId> Cubing::project_convex_pointwise(const LiteralSet& s, const LiteralSet& t) const {
  const auto vs = halfspace(s);
  const auto vt = halfspace(t);
  if (vs.empty() || vt.empty()) throw InputError("project_convex_pointwise: empty input");
  std::vector<VertexId> out;
  for (VertexId u : vs) out.push_back(nearest_in(u, vt));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LiteralSet Cubing::common_literals(const std::vector<VertexId>& k) const {
  LiteralSet r = pocset_.sensorium().proper_mask();
  for (VertexId v : k) r &= vertices_[v];
  return r;
}

bool Cubing::is_convex(const std::vector<VertexId>& k) const {
  if (k.empty()) return true;
  std::vector<VertexId> sorted = k;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return halfspace(common_literals(k)) == sorted;
}

LiteralSet Cubing::separator(const std::vector<VertexId>& k, const std::vector<VertexId>& l) const {
  if (k.empty() || l.empty()) throw InputError("separator: empty input");
  if (!is_convex(k) || !is_convex(l)) throw ContractError("separator: inputs must be convex");
  return common_literals(k) & star_set(common_literals(l));
}

std::pair<VertexId, VertexId> Cubing::gate(const std::vector<VertexId>& k, const std::vector<VertexId>& l) const {
  if (k.empty() || l.empty()) throw InputError("gate: empty input");
  if (!is_convex(k) || !is_convex(l)) throw ContractError("gate: inputs must be convex");
  const LiteralSet ck = common_literals(k);
  const LiteralSet cl = common_literals(l);
  const VertexId v0 = project_point(k.front(), cl);
  const VertexId u = project_point(v0, ck);
  const VertexId v = project_point(u, cl);
  return {u, v};
}

std::vector<VertexId> Cubing::punctured_dual(const Realization& r) const {
  if (auto bad = r.morphism_violation(pocset_)) {
    const auto& s = pocset_.sensorium();
    throw ContractError("realization is not a poc morphism: " + s.name(bad->first) + " <= " + s.name(bad->second) +
                        " but its footprint is not contained");
  }
  std::vector<VertexId> out;
  for (std::size_t x = 0; x < r.point_count(); ++x) out.push_back(lookup(r.selection_at(x), "punctured_dual"));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Cubing::to_dot() const {
  const auto& s = pocset_.sensorium();
  std::ostringstream os;
  os << "graph dual {\n";
  for (VertexId v = 0; v < vertices_.size(); ++v) os << "  v" << v << " [label=\"" << s.format(vertices_[v]) << "\"];\n";
  for (VertexId v = 0; v < vertices_.size(); ++v)
    for (VertexId w : adjacency_[v])
      if (v < w) os << "  v" << v << " -- v" << w << ";\n";
  os << "}\n";
  return os.str();
}

std::string Cubing::to_json() const {
  const auto& s = pocset_.sensorium();
  nlohmann::json j;
  auto verts = nlohmann::json::array();
  for (const auto& v : vertices_) {
    auto lits = nlohmann::json::array();
    v.for_each([&](std::size_t a) { lits.push_back(s.name(static_cast<Literal>(a))); });
    verts.push_back(lits);
  }
  auto edges = nlohmann::json::array();
  for (VertexId v = 0; v < vertices_.size(); ++v)
    for (VertexId w : adjacency_[v])
      if (v < w) edges.push_back({v, w});
  j["sensors"] = s.names();
  j["vertices"] = verts;
  j["edges"] = edges;
  return j.dump(2);
}

std::optional<std::string> morphism_violation(const std::vector<Literal>& f, const WeakPocSet& p,
                                              const WeakPocSet& q) {
  const auto& sp = p.sensorium();
  const auto& sq = q.sensorium();
  if (f.size() != sp.literal_count()) return "map size differs from source literal count";
  for (Literal a = 0; a < sp.literal_count(); ++a) {
    if (!sq.contains(f[a])) return "image of " + sp.name(a) + " out of range";
    if (f[star(a)] != star(f[a])) return "map does not commute with star at " + sp.name(a);
  }
  if (f[sp.zero()] != sq.zero()) return "ZERO not mapped to ZERO";
  for (Literal a = 0; a < sp.literal_count(); ++a) {
    std::optional<std::string> bad;
    p.up(a).for_each([&](std::size_t b) {
      if (!bad && !q.leq(f[a], f[b])) bad = "order not preserved: " + sp.name(a) + " <= " + sp.name(static_cast<Literal>(b));
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

std::vector<VertexId> dual_map(const std::vector<Literal>& f, const Cubing& source, const Cubing& target) {
  if (auto bad = morphism_violation(f, source.pocset(), target.pocset())) throw ContractError("dual_map: " + *bad);
  const auto& sp = source.pocset().sensorium();
  const Literal one_q = target.pocset().sensorium().one();
  std::vector<VertexId> out;
  out.reserve(target.vertex_count());
  for (VertexId v = 0; v < target.vertex_count(); ++v) {
    const auto& a = target.vertex(v);
    LiteralSet pre = sp.empty_set();
    for (Literal x = 0; x < sp.proper_count(); ++x)
      if (f[x] == one_q || a.test(f[x])) pre.set(x);
    auto w = source.find(pre);
    if (!w) throw ContractError("dual_map: pullback " + sp.format(pre) + " is not a vertex");
    out.push_back(*w);
  }
  return out;
}

} // namespace snapmem
