#include <snapmem/errors.hpp>
#include <snapmem/pocset.hpp>

#include <nlohmann/json.hpp>

namespace snapmem {

const char* to_string(PairRelation r) {
  switch (r) {
  case PairRelation::kLeq: return "a<=b";
  case PairRelation::kStarLeq: return "a*<=b";
  case PairRelation::kLeqStar: return "a<=b*";
  case PairRelation::kStarLeqStar: return "a*<=b*";
  case PairRelation::kCrossing: return "crossing";
  }
  return "?";
}

WeakPocSet WeakPocSet::free(Sensorium sensorium) {
  const std::size_t n = sensorium.literal_count();
  return from_successors(std::move(sensorium), std::vector<LiteralSet>(n, LiteralSet(n)));
}

WeakPocSet WeakPocSet::from_generators(Sensorium sensorium, const std::vector<Relation>& relations) {
  const std::size_t n = sensorium.literal_count();
  std::vector<LiteralSet> succ(n, LiteralSet(n));
  for (const auto& [a, b] : relations) {
    if (!sensorium.contains(a) || !sensorium.contains(b))
      throw InputError("relation endpoint out of range: (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    succ[a].set(b);
  }
  return from_successors(std::move(sensorium), std::move(succ));
}

WeakPocSet WeakPocSet::from_successors(Sensorium sensorium, std::vector<LiteralSet> succ) {
  const std::size_t n = sensorium.literal_count();
  if (succ.size() != n) throw InputError("successor table size differs from literal count");
  const Literal zero = sensorium.zero();
  const Literal one = sensorium.one();
  for (std::size_t a = 0; a < n; ++a) {
    if (succ[a].width() != n) throw InputError("successor set width differs from literal count");
    succ[a].set(a);
    succ[a].set(one);
    succ[zero].set(a);
  }
  for (std::size_t a = 0; a < n; ++a)
    succ[a].for_each([&](std::size_t b) { succ[star(static_cast<Literal>(b))].set(star(static_cast<Literal>(a))); });
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (succ[i].test(k)) succ[i] |= succ[k];

  WeakPocSet p;
  p.sensorium_ = std::move(sensorium);
  p.down_.assign(n, LiteralSet(n));
  for (std::size_t a = 0; a < n; ++a) succ[a].for_each([&](std::size_t b) { p.down_[b].set(a); });
  p.up_ = std::move(succ);
  return p;
}

LiteralSet WeakPocSet::up_set(const LiteralSet& a) const {
  LiteralSet r = sensorium_.empty_set();
  a.for_each([&](std::size_t x) { r |= up_[x]; });
  return r;
}

LiteralSet WeakPocSet::down_set(const LiteralSet& a) const {
  LiteralSet r = sensorium_.empty_set();
  a.for_each([&](std::size_t x) { r |= down_[x]; });
  return r;
}

PairRelation WeakPocSet::classify_pair(Literal a, Literal b) const {
  if (!sensorium_.is_proper(a) || !sensorium_.is_proper(b) || sensor_of(a) == sensor_of(b))
    throw InputError("classify_pair needs two proper literals of distinct sensors");
  if (leq(a, b)) return PairRelation::kLeq;
  if (leq(star(a), b)) return PairRelation::kStarLeq;
  if (leq(a, star(b))) return PairRelation::kLeqStar;
  if (leq(star(a), star(b))) return PairRelation::kStarLeqStar;
  return PairRelation::kCrossing;
}

bool WeakPocSet::is_coherent(const LiteralSet& a) const { return !a.intersects(down_set(star_set(a))); }

LiteralSet WeakPocSet::coherent_projection(const LiteralSet& a) const {
  return up_set(a) - down_set(star_set(a));
}

bool WeakPocSet::is_strict() const {
  const std::size_t n = sensorium_.literal_count();
  for (Literal a = 0; a < n; ++a) {
    if (a != sensorium_.zero() && is_negligible(a)) return false;
    if ((up_[a] & down_[a]).count() != 1) return false;
  }
  return true;
}

std::vector<Relation> WeakPocSet::relations() const {
  std::vector<Relation> out;
  const std::size_t m = sensorium_.proper_count();
  for (Literal a = 0; a < m; ++a)
    up_[a].for_each([&](std::size_t bi) {
      const auto b = static_cast<Literal>(bi);
      if (b >= m || b == a) return;
      const Literal ca = star(b), cb = star(a);
      // keep the lexicographically smaller member of {(a,b), (b*,a*)}
      if (std::make_pair(a, b) <= std::make_pair(ca, cb)) out.emplace_back(a, b);
    });
  return out;
}

Quotient canonical_quotient(const WeakPocSet& p) {
  const Sensorium& s = p.sensorium();
  const std::size_t n = s.literal_count();
  constexpr Literal kUnset = ~Literal{0};
  std::vector<Literal> map(n, kUnset);
  std::vector<std::string> names;
  std::vector<Degree> degrees;
  std::vector<std::pair<Literal, bool>> pending; // (literal, positive side) per new sensor

  for (Literal a = 0; a < s.proper_count(); ++a) {
    if (map[a] != kUnset || p.is_negligible(a) || p.is_ubiquitous(a)) continue;
    const std::size_t j = names.size();
    names.push_back(s.sensor_name(sensor_of(a)));
    degrees.push_back(s.degree(sensor_of(a)));
    const LiteralSet cls = p.up(a) & p.down(a);
    cls.for_each([&](std::size_t b) {
      map[b] = positive_literal(j);
      map[star(static_cast<Literal>(b))] = negative_literal(j);
    });
  }
  Sensorium qs(std::move(names), std::move(degrees));
  for (Literal a = 0; a < n; ++a) {
    if (map[a] != kUnset) continue;
    if (map[star(a)] != kUnset) map[a] = star(map[star(a)]); // a == a* collapses: keep the map star-equivariant
    else if (a == s.zero() || (a != s.one() && p.is_negligible(a))) map[a] = qs.zero();
    else map[a] = qs.one();
  }
  std::vector<Relation> rel;
  for (Literal a = 0; a < s.proper_count(); ++a)
    p.up(a).for_each([&](std::size_t b) {
      if (qs.is_proper(map[a]) && qs.is_proper(map[b]) && map[a] != map[b]) rel.emplace_back(map[a], map[b]);
    });
  Quotient q{WeakPocSet::from_generators(std::move(qs), rel), std::move(map)};
  return q;
}

Literal shift_literal(const WeakPocSet& p, const WeakPocSet& q, Literal b) {
  const std::size_t np = p.sensorium().size();
  if (b == q.sensorium().zero()) return static_cast<Literal>(2 * (np + q.sensorium().size()));
  if (b == q.sensorium().one()) return static_cast<Literal>(2 * (np + q.sensorium().size()) + 1);
  return static_cast<Literal>(b + 2 * np);
}

WeakPocSet direct_sum(const WeakPocSet& p, const WeakPocSet& q) {
  Sensorium s = Sensorium::concat(p.sensorium(), q.sensorium());
  std::vector<Relation> rel = p.relations();
  for (auto [a, b] : q.relations()) rel.emplace_back(shift_literal(p, q, a), shift_literal(p, q, b));
  return WeakPocSet::from_generators(std::move(s), rel);
}

std::string pocset_to_json(const WeakPocSet& p) {
  const Sensorium& s = p.sensorium();
  nlohmann::json j;
  j["sensors"] = s.names();
  auto rel = nlohmann::json::array();
  for (auto [a, b] : p.relations()) rel.push_back({s.name(a), s.name(b)});
  j["relations"] = rel;
  return j.dump(2);
}

WeakPocSet pocset_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("poc set JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("sensors") || !j["sensors"].is_array())
    throw InputError("poc set JSON: missing \"sensors\" array");
  Sensorium s(j["sensors"].get<std::vector<std::string>>());
  std::vector<Relation> rel;
  if (j.contains("relations")) {
    for (const auto& r : j["relations"]) {
      if (!r.is_array() || r.size() != 2) throw InputError("poc set JSON: relation must be a pair");
      rel.emplace_back(s.parse(r[0].get<std::string>()), s.parse(r[1].get<std::string>()));
    }
  }
  return WeakPocSet::from_generators(std::move(s), rel);
}

} // namespace snapmem
