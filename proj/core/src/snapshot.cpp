#include <snapmem/errors.hpp>
#include <snapmem/propagation.hpp>
#include <snapmem/snapshot.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace snapmem {

const char* to_string(SnapshotKind k) { return k == SnapshotKind::kEmpirical ? "empirical" : "discounted"; }

Snapshot Snapshot::trivial(Sensorium sensorium, double tau, SnapshotKind kind, double q, DeriveOptions options) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("decay parameter q must lie in [0, 1]");
  Snapshot s;
  const std::size_t n = sensorium.size();
  const std::size_t m = sensorium.proper_count();
  s.kind_ = kind;
  s.q_ = q;
  s.options_ = options;
  if (kind == SnapshotKind::kEmpirical) s.counts_.assign(m * m, 0);
  else s.reals_.assign(m * m, 0.0);
  s.tau_.assign(n * n, 0.0);
  s.state_ = sensorium.empty_set();
  s.graph_ = PocGraph(sensorium);
  s.sensorium_ = std::move(sensorium);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s.set_threshold(i, j, tau);
  return s;
}

void Snapshot::check_pair(Literal a, Literal b) const {
  if (!sensorium_.is_proper(a) || !sensorium_.is_proper(b) || sensor_of(a) == sensor_of(b))
    throw InputError("snapshot weights are defined on proper literals of distinct sensors");
}

double Snapshot::weight(Literal a, Literal b) const {
  check_pair(a, b);
  return kind_ == SnapshotKind::kEmpirical ? static_cast<double>(counts_[idx(a, b)]) : reals_[idx(a, b)];
}

std::int64_t Snapshot::count(Literal a, Literal b) const {
  check_pair(a, b);
  if (kind_ != SnapshotKind::kEmpirical) throw ContractError("count() on a discounted snapshot");
  return counts_[idx(a, b)];
}

void Snapshot::set_weight(Literal a, Literal b, double w) {
  check_pair(a, b);
  if (!(w >= 0.0)) throw InputError("snapshot weights must be non-negative");
  if (kind_ == SnapshotKind::kEmpirical) {
    if (w != std::floor(w)) throw InputError("empirical weights must be integers");
    counts_[idx(a, b)] = counts_[idx(b, a)] = static_cast<std::int64_t>(w);
  } else {
    reals_[idx(a, b)] = reals_[idx(b, a)] = w;
  }
}

double Snapshot::row_weight(Literal a) const {
  if (sensorium_.size() < 2) return 0.0;
  const std::size_t other = sensor_of(a) == 0 ? 1 : 0;
  return weight(a, positive_literal(other)) + weight(a, negative_literal(other));
}

void Snapshot::set_threshold(std::size_t i, std::size_t j, double tau) {
  const std::size_t n = sensorium_.size();
  if (i >= n || j >= n || i == j) throw InputError("threshold orbit needs two distinct sensors");
  if (!(tau >= 0.0 && tau <= 0.25)) throw InputError("learning threshold must lie in [0, 1/4]");
  tau_[i * n + j] = tau_[j * n + i] = tau;
}

void Snapshot::set_state(LiteralSet s) {
  if (s.width() != sensorium_.literal_count()) throw InputError("state width differs from literal count");
  state_ = std::move(s);
}

void Snapshot::refresh_graph(OpCounter* ops) { graph_ = derive_poc_graph(*this, options_, ops); }

void Snapshot::update(const LiteralSet& o, OpCounter* ops) {
  if (!is_complete_selection(sensorium_, o)) throw InputError("snapshot update needs a complete selection");
  const std::size_t m = sensorium_.proper_count();
  if (kind_ == SnapshotKind::kEmpirical) {
    const std::vector<std::size_t> on = o.to_vector();
    for (std::size_t x = 0; x < on.size(); ++x)
      for (std::size_t y = x + 1; y < on.size(); ++y) {
        ++counts_[on[x] * m + on[y]];
        ++counts_[on[y] * m + on[x]];
      }
    if (ops) ops->weight_updates += on.size() * (on.size() - 1);
    clock_ += 1;
  } else {
    const double fresh = 1.0 - q_;
    for (std::size_t a = 0; a < m; ++a) {
      const bool ia = o.test(a);
      double* row = &reals_[a * m];
      for (std::size_t b = 0; b < m; ++b) row[b] = q_ * row[b] + ((ia && o.test(b)) ? fresh : 0.0);
      row[a & ~std::size_t{1}] = 0.0;
      row[a | 1] = 0.0;
    }
    if (ops) ops->weight_updates += m * m;
    clock_ = q_ * clock_ + fresh;
    truncate_in_place();
  }
  refresh_graph(ops);
  state_ = propagate(graph_, sensorium_.empty_set(), o, ops);
}

namespace {

struct Square {
  // quadrant weights indexed [sa][sb]: sa, sb = 0 for positive literal, 1 for starred
  double w[2][2];
};

// Bitmask of quadrants (bit 2*sa+sb) holding a minimum below the threshold.
// Strict comparison leaves at most one bit set.
unsigned implication_quadrants(const Square& q, double limit, bool strict) {
  unsigned mask = 0;
  for (int k = 0; k < 4; ++k) {
    const double v = q.w[k >> 1][k & 1];
    bool ok = strict ? v < limit : v <= limit;
    for (int l = 0; l < 4 && ok; ++l)
      if (l != k) ok = strict ? v < q.w[l >> 1][l & 1] : v <= q.w[l >> 1][l & 1];
    if (ok) mask |= 1u << k;
  }
  return mask;
}

int virtual_implication(const Square& q, double limit) {
  const unsigned mask = implication_quadrants(q, limit, true);
  return mask ? std::countr_zero(mask) : -1;
}

} // namespace

void Snapshot::truncate_in_place() {
  if (kind_ == SnapshotKind::kEmpirical) throw ContractError("truncation applies to probabilistic snapshots");
  const std::size_t n = sensorium_.size();
  const std::size_t m = sensorium_.proper_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Square sq;
      for (int sa = 0; sa < 2; ++sa)
        for (int sb = 0; sb < 2; ++sb) sq.w[sa][sb] = reals_[(2 * i + sa) * m + 2 * j + sb];
      const int k = virtual_implication(sq, tau_[i * n + j]);
      if (k < 0) continue;
      const int sa = k >> 1, sb = k & 1;
      const double mass = sq.w[sa][sb];
      sq.w[sa][sb] = 0.0;
      sq.w[sa][1 - sb] += mass;
      sq.w[1 - sa][sb] += mass;
      sq.w[1 - sa][1 - sb] -= mass;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          reals_[(2 * i + x) * m + 2 * j + y] = reals_[(2 * j + y) * m + 2 * i + x] = sq.w[x][y];
    }
}

PocGraph derive_poc_graph(const Snapshot& s, DeriveOptions options, OpCounter* ops) {
  const Sensorium& sen = s.sensorium();
  const std::size_t n = sen.size();
  const std::size_t m = sen.proper_count();
  const bool empirical = s.kind() == SnapshotKind::kEmpirical;
  const double scale = empirical ? s.clock() : 1.0;
  PocGraph g(sen);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Square sq;
      for (int sa = 0; sa < 2; ++sa)
        for (int sb = 0; sb < 2; ++sb) {
          const std::size_t k = (2 * i + sa) * m + 2 * j + sb;
          sq.w[sa][sb] = empirical ? static_cast<double>(s.counts_[k]) : s.reals_[k];
        }
      if (ops) ++ops->pair_checks;
      const unsigned mask = implication_quadrants(sq, s.tau_[i * n + j] * scale, options.strict);
      for (int k = 0; k < 4; ++k)
        if (mask >> k & 1) {
          // the empty quadrant (x, y) records x -> y*
          const Literal x = static_cast<Literal>(2 * i + (k >> 1));
          const Literal y = static_cast<Literal>(2 * j + (k & 1));
          g.add_edge(x, star(y));
        }
    }
  if (options.equivalences) return extend_with_equivalences(s, std::move(g), options.check_triangle);
  return g;
}

PocGraph extend_with_equivalences(const Snapshot& s, PocGraph g, bool verify_triangle) {
  if (verify_triangle) {
    const auto t = check_triangle(s);
    if (!t) {
      const auto& sen = s.sensorium();
      throw ContractError("triangle inequality fails on (" + sen.name(t.a) + ", " + sen.name(t.b) + ", " +
                          sen.name(t.c) + ")");
    }
  }
  const std::size_t n = s.sensorium().size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double w[2][2];
      double total = 0;
      for (int sa = 0; sa < 2; ++sa)
        for (int sb = 0; sb < 2; ++sb) {
          w[sa][sb] = s.weight(static_cast<Literal>(2 * i + sa), static_cast<Literal>(2 * j + sb));
          total += w[sa][sb];
        }
      if (total < kEquivalenceEpsilon) continue;
      const auto a = positive_literal(i), b = positive_literal(j);
      if (w[0][1] < kEquivalenceEpsilon && w[1][0] < kEquivalenceEpsilon) {
        g.add_edge(a, b);
        g.add_edge(b, a);
      }
      if (w[0][0] < kEquivalenceEpsilon && w[1][1] < kEquivalenceEpsilon) {
        g.add_edge(a, star(b));
        g.add_edge(star(b), a);
      }
    }
  return g;
}

Snapshot trivial(Sensorium sensorium, double tau, SnapshotKind kind, double q) {
  return Snapshot::trivial(std::move(sensorium), tau, kind, q);
}

Snapshot empirical_update(Snapshot s, const LiteralSet& observation) {
  if (s.kind() != SnapshotKind::kEmpirical) throw ContractError("empirical_update on a discounted snapshot");
  s.update(observation);
  return s;
}

Snapshot discounted_update(Snapshot s, const LiteralSet& observation, double q) {
  if (s.kind() != SnapshotKind::kDiscounted) throw ContractError("discounted_update on an empirical snapshot");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("decay parameter q must lie in [0, 1]");
  Snapshot r = Snapshot::trivial(s.sensorium(), 0.0, SnapshotKind::kDiscounted, q, s.options());
  const auto& sen = s.sensorium();
  for (Literal a = 0; a < sen.proper_count(); ++a)
    for (Literal b = a + 1; b < sen.proper_count(); ++b)
      if (sensor_of(a) != sensor_of(b)) r.set_weight(a, b, s.weight(a, b));
  for (std::size_t i = 0; i < sen.size(); ++i)
    for (std::size_t j = i + 1; j < sen.size(); ++j)
      r.set_threshold(i, j, s.threshold(positive_literal(i), positive_literal(j)));
  r.set_clock(s.clock());
  r.set_state(s.state());
  r.update(observation);
  return r;
}

Snapshot truncate(Snapshot s) {
  s.truncate_in_place();
  return s;
}

Snapshot snapshot_from_measure(const Sensorium& sensorium, const std::vector<LiteralSet>& points,
                               const std::vector<double>& mass, double tau) {
  if (points.size() != mass.size()) throw InputError("snapshot_from_measure: point and mass counts differ");
  Snapshot r = Snapshot::trivial(sensorium, tau, SnapshotKind::kDiscounted, 1.0);
  const Literal m = static_cast<Literal>(sensorium.proper_count());
  std::vector<double> w(static_cast<std::size_t>(m) * m, 0.0);
  double total = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!is_complete_selection(sensorium, points[k])) throw InputError("snapshot_from_measure: incomplete point");
    if (!(mass[k] >= 0)) throw InputError("snapshot_from_measure: negative mass");
    total += mass[k];
    const auto on = points[k].to_vector();
    for (auto a : on)
      for (auto b : on) w[a * m + b] += mass[k];
  }
  for (Literal a = 0; a < m; ++a)
    for (Literal b = a + 1; b < m; ++b)
      if (sensor_of(a) != sensor_of(b)) r.set_weight(a, b, w[a * m + b]);
  r.set_clock(total);
  r.refresh_graph();
  r.set_state(r.sensorium().empty_set());
  return r;
}

Snapshot normalized(const Snapshot& s) {
  if (s.clock() <= 0) throw ContractError("cannot normalize a snapshot with zero clock");
  const auto& sen = s.sensorium();
  Snapshot r = Snapshot::trivial(sen, 0.0, SnapshotKind::kDiscounted, 1.0, s.options());
  for (Literal a = 0; a < sen.proper_count(); ++a)
    for (Literal b = a + 1; b < sen.proper_count(); ++b)
      if (sensor_of(a) != sensor_of(b)) r.set_weight(a, b, s.weight(a, b) / s.clock());
  for (std::size_t i = 0; i < sen.size(); ++i)
    for (std::size_t j = i + 1; j < sen.size(); ++j)
      r.set_threshold(i, j, s.threshold(positive_literal(i), positive_literal(j)));
  r.set_clock(1.0);
  r.set_state(s.state());
  r.refresh_graph();
  return r;
}

namespace {

double extended_weight(const Snapshot& s, Literal a, Literal b) {
  if (a == b) return s.row_weight(a);
  if (a == star(b)) return 0.0;
  return s.weight(a, b);
}

} // namespace

double orientation_cocycle(const Snapshot& s, Literal a, Literal b) {
  return extended_weight(s, star(a), b) - extended_weight(s, a, star(b));
}

CheckReport is_probabilistic(const Snapshot& s, double eps) {
  const auto& sen = s.sensorium();
  const Literal m = static_cast<Literal>(sen.proper_count());
  auto fail = [&](std::string what) { return CheckReport{false, std::move(what)}; };
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b) {
      if (sensor_of(a) == sensor_of(b)) continue;
      if (s.weight(a, b) < -eps) return fail("nonnegativity at " + sen.name(a) + sen.name(b));
      if (std::abs(s.weight(a, b) + s.weight(a, star(b)) - s.row_weight(a)) > eps)
        return fail("consistency at " + sen.name(a) + "," + sen.name(b));
      if (a < b && !is_starred(a) && !is_starred(b)) {
        const double total =
            s.weight(a, b) + s.weight(a, star(b)) + s.weight(star(a), b) + s.weight(star(a), star(b));
        if (std::abs(total - 1.0) > eps) return fail("normalization at " + sen.name(a) + "," + sen.name(b));
      }
    }
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b)
      for (Literal c = 0; c < m; ++c)
        if (std::abs(orientation_cocycle(s, a, b) + orientation_cocycle(s, b, c) - orientation_cocycle(s, a, c)) >
            eps)
          return fail("orientation at " + sen.name(a) + "," + sen.name(b) + "," + sen.name(c));
  if (!is_star_selection(s.state())) return fail("state is not a selection");
  const PocGraph g = derive_poc_graph(s, s.options());
  if (!derived_poc_set(g, sen, true).is_coherent(s.state())) return fail("state is not coherent");
  return {};
}

TriangleReport check_triangle(const Snapshot& s, double eps) {
  const Literal m = static_cast<Literal>(s.sensorium().proper_count());
  std::vector<double> delta(static_cast<std::size_t>(m) * m);
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b)
      delta[a * m + b] = extended_weight(s, star(a), b) + extended_weight(s, a, star(b));
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b)
      for (Literal c = 0; c < m; ++c)
        if (delta[a * m + c] > delta[a * m + b] + delta[b * m + c] + eps) return {false, a, b, c};
  return {};
}

CheckReport is_empirical(const Snapshot& s) {
  const auto& sen = s.sensorium();
  const Literal m = static_cast<Literal>(sen.proper_count());
  auto fail = [&](std::string what) { return CheckReport{false, std::move(what)}; };
  std::optional<double> clock;
  for (Literal a = 0; a < m; ++a) {
    std::optional<double> wa;
    for (Literal b = 0; b < m; ++b) {
      if (sensor_of(a) == sensor_of(b)) continue;
      const double w = s.weight(a, b);
      if (w < 0 || w != std::floor(w)) return fail("non-integral weight at " + sen.name(a) + sen.name(b));
      const double row = w + s.weight(a, star(b));
      if (wa && *wa != row) return fail("row sum of " + sen.name(a) + " depends on the partner");
      wa = row;
    }
    if (wa && *wa == 0 && s.state().test(a)) return fail("state holds " + sen.name(a) + " with zero weight");
    if (wa && is_starred(a)) {
      const double c = *wa + s.row_weight(star(a));
      if (clock && *clock != c) return fail("clock differs at sensor " + sen.sensor_name(sensor_of(a)));
      clock = c;
    }
  }
  if (clock && *clock != s.clock()) return fail("stored clock disagrees with the weights");
  return {};
}

namespace {

struct WeightsHash {
  std::size_t operator()(const std::vector<std::int64_t>& w) const {
    std::size_t h = w.size();
    for (auto x : w) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct Decomposer {
  std::size_t budget;
  std::size_t n;
  std::size_t m;
  std::size_t nodes = 0;
  std::unordered_set<std::vector<std::int64_t>, WeightsHash> dead;

  // Complete selections through the forced literals whose pairs all carry weight.
  void candidates(const std::vector<std::int64_t>& w, const std::vector<Literal>& forced, std::vector<Literal>& cur,
                  std::vector<std::vector<Literal>>& out) {
    if (++nodes > budget) throw ContractError("decompose_evolution: search budget exhausted");
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    const std::size_t i = cur.size();
    for (Literal x : {positive_literal(i), negative_literal(i)}) {
      if (forced[i] != kNoLiteral && forced[i] != x) continue;
      bool ok = true;
      for (Literal y : cur)
        if (w[x * m + y] < 1) ok = false;
      if (!ok) continue;
      cur.push_back(x);
      candidates(w, forced, cur, out);
      cur.pop_back();
    }
  }

  void apply(std::vector<std::int64_t>& w, const std::vector<Literal>& o, int sign) {
    for (Literal x : o)
      for (Literal y : o)
        if (x != y) w[x * m + y] += sign;
  }

  // Counts do not depend on order: some remaining observation covers the
  // lightest pair, so branching on that pair alone is complete.
  bool solve(std::vector<std::int64_t>& w, std::int64_t clock, std::vector<std::vector<Literal>>& seq) {
    if (clock == 0) return std::all_of(w.begin(), w.end(), [](std::int64_t v) { return v == 0; });
    std::vector<Literal> forced(n, kNoLiteral);
    if (n >= 2) {
      if (dead.count(w)) return false;
      std::int64_t best = 0;
      for (Literal x = 0; x < m; ++x)
        for (Literal y = x + 1; y < m; ++y)
          if (sensor_of(x) != sensor_of(y) && w[x * m + y] > 0 && (best == 0 || w[x * m + y] < best)) {
            best = w[x * m + y];
            forced.assign(n, kNoLiteral);
            forced[sensor_of(x)] = x;
            forced[sensor_of(y)] = y;
          }
      if (best == 0) return false;
    }
    std::vector<std::vector<Literal>> cands;
    std::vector<Literal> cur;
    candidates(w, forced, cur, cands);
    for (const auto& o : cands) {
      apply(w, o, -1);
      seq.push_back(o);
      if (solve(w, clock - 1, seq)) return true;
      seq.pop_back();
      apply(w, o, +1);
    }
    dead.insert(w);
    return false;
  }
};

} // namespace

std::optional<std::pair<Snapshot, LiteralSet>> decompose_evolution(const Snapshot& s, std::size_t node_budget) {
  if (s.kind() != SnapshotKind::kEmpirical) throw ContractError("decompose_evolution needs an empirical snapshot");
  if (auto r = is_empirical(s); !r) throw ContractError("decompose_evolution: " + r.violation);
  if (s.clock() == 0) return std::nullopt;
  const auto& sen = s.sensorium();
  const std::size_t m = sen.proper_count();
  std::vector<std::int64_t> w(m * m, 0);
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b)
      if (sensor_of(a) != sensor_of(b)) w[a * m + b] = s.count(a, b);

  Decomposer d{node_budget, sen.size(), m, 0, {}};
  const auto clock = static_cast<std::int64_t>(s.clock());
  // the last observation contains the state, its coherent projection
  std::vector<Literal> forced(sen.size(), kNoLiteral);
  (s.state() & sen.proper_mask()).for_each([&](std::size_t x) { forced[sensor_of(static_cast<Literal>(x))] = static_cast<Literal>(x); });
  std::vector<std::vector<Literal>> lasts, seq;
  std::vector<Literal> cur;
  d.candidates(w, forced, cur, lasts);
  bool solved = false;
  for (const auto& o : lasts) {
    d.apply(w, o, -1);
    seq = {o};
    if (d.solve(w, clock - 1, seq)) {
      solved = true;
      break;
    }
    d.apply(w, o, +1);
  }
  if (!solved) throw ContractError("decompose_evolution: snapshot is not an evolution");

  Snapshot pred = Snapshot::trivial(sen, 0.0, SnapshotKind::kEmpirical, 1.0, s.options());
  for (std::size_t i = 0; i < sen.size(); ++i)
    for (std::size_t j = i + 1; j < sen.size(); ++j)
      pred.set_threshold(i, j, s.threshold(positive_literal(i), positive_literal(j)));
  std::vector<bool> in_last(m, false);
  for (Literal x : seq.front()) in_last[x] = true;
  for (Literal a = 0; a < m; ++a)
    for (Literal b = a + 1; b < m; ++b)
      if (sensor_of(a) != sensor_of(b))
        pred.set_weight(a, b, static_cast<double>(s.count(a, b) - ((in_last[a] && in_last[b]) ? 1 : 0)));
  pred.set_clock(s.clock() - 1);
  pred.refresh_graph();
  if (seq.size() > 1) pred.set_state(propagate(pred.graph(), sen.empty_set(), sen.make_set(seq[1])));
  return std::make_pair(std::move(pred), sen.make_set(seq.front()));
}

std::string snapshot_to_json(const Snapshot& s) {
  const auto& sen = s.sensorium();
  const std::size_t m = sen.proper_count();
  const std::size_t n = sen.size();
  nlohmann::json j;
  j["kind"] = to_string(s.kind());
  j["q"] = s.q();
  j["sensors"] = sen.names();
  std::vector<int> degrees;
  for (auto d : sen.degrees()) degrees.push_back(static_cast<int>(d));
  j["degrees"] = degrees;
  j["clock"] = s.clock();
  j["equivalences"] = s.options().equivalences;
  std::vector<double> w(m * m, 0.0);
  for (Literal a = 0; a < m; ++a)
    for (Literal b = 0; b < m; ++b)
      if (sensor_of(a) != sensor_of(b)) w[a * m + b] = s.weight(a, b);
  j["weights"] = w;
  std::vector<double> tau(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (i != k) tau[i * n + k] = s.threshold(positive_literal(i), positive_literal(k));
  j["thresholds"] = tau;
  std::vector<std::string> st;
  s.state().for_each([&](std::size_t a) { st.push_back(sen.name(static_cast<Literal>(a))); });
  j["state"] = st;
  return j.dump();
}

Snapshot snapshot_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    std::vector<Degree> degrees;
    for (int d : j.at("degrees").get<std::vector<int>>()) degrees.push_back(static_cast<Degree>(d));
    Sensorium sen(j.at("sensors").get<std::vector<std::string>>(), degrees);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "empirical" && kind != "discounted") throw InputError("snapshot JSON: unknown kind '" + kind + "'");
    DeriveOptions opt;
    opt.equivalences = j.value("equivalences", true);
    Snapshot s = Snapshot::trivial(sen, 0.0, kind == "empirical" ? SnapshotKind::kEmpirical : SnapshotKind::kDiscounted,
                                   j.at("q").get<double>(), opt);
    const std::size_t m = sen.proper_count();
    const std::size_t n = sen.size();
    const auto w = j.at("weights").get<std::vector<double>>();
    const auto tau = j.at("thresholds").get<std::vector<double>>();
    if (w.size() != m * m || tau.size() != n * n) throw InputError("snapshot JSON: matrix size mismatch");
    for (Literal a = 0; a < m; ++a)
      for (Literal b = a + 1; b < m; ++b)
        if (sensor_of(a) != sensor_of(b)) s.set_weight(a, b, w[a * m + b]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i + 1; k < n; ++k) s.set_threshold(i, k, tau[i * n + k]);
    s.set_clock(j.at("clock").get<double>());
    LiteralSet st = sen.empty_set();
    for (const auto& name : j.at("state").get<std::vector<std::string>>()) st.set(sen.parse(name));
    s.set_state(st);
    s.refresh_graph();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("snapshot JSON: ") + e.what());
  }
}

} // namespace snapmem
