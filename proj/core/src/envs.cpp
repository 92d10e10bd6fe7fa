#include <snapmem/envs.hpp>
#include <snapmem/errors.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace snapmem {

Environment::Environment(std::string kind, std::vector<std::string> position_labels, std::vector<std::string> actions,
                         std::vector<std::vector<std::size_t>> transitions, std::vector<std::string> field_names,
                         std::vector<Bitset> fields)
    : kind_(std::move(kind)), labels_(std::move(position_labels)), actions_(std::move(actions)),
      transitions_(std::move(transitions)), field_names_(std::move(field_names)), fields_(std::move(fields)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw InputError("environment needs at least one position");
  if (transitions_.size() != n) throw InputError("environment: transition table size differs from position count");
  for (const auto& row : transitions_) {
    if (row.size() != actions_.size()) throw InputError("environment: every action must be total");
    for (auto y : row)
      if (y >= n) throw InputError("environment: transition leaves the position set");
  }
  if (field_names_.size() != fields_.size()) throw InputError("environment: field names and fields differ in count");
  for (const auto& f : fields_)
    if (f.width() != n) throw InputError("environment: field width differs from position count");

  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x)
    for (auto y : transitions_[x])
      if (y != x) {
        adj[x].push_back(y);
        adj[y].push_back(x);
      }
  dist_.assign(n * n, std::numeric_limits<std::size_t>::max());
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> q{s};
    dist_[s * n + s] = 0;
    while (!q.empty()) {
      const auto x = q.front();
      q.pop_front();
      for (auto y : adj[x])
        if (dist_[s * n + y] == std::numeric_limits<std::size_t>::max()) {
          dist_[s * n + y] = dist_[s * n + x] + 1;
          q.push_back(y);
        }
    }
  }
}

void Environment::set_target(std::size_t x) {
  if (x >= position_count()) throw InputError("target position out of range");
  target_ = x;
}

std::size_t Environment::distance_to_target(std::size_t x) const {
  if (!target_) throw ContractError("environment has no target");
  return distance(x, *target_);
}

void Environment::set_position(std::size_t x) {
  if (x >= position_count()) throw InputError("position out of range");
  position_ = x;
}

std::size_t Environment::act(std::size_t action) {
  if (action >= actions_.size()) throw InputError("action index out of range");
  position_ = transitions_[position_][action];
  return position_;
}

bool Environment::is_reversible() const {
  for (std::size_t x = 0; x < position_count(); ++x)
    for (auto y : transitions_[x]) {
      const auto& back = transitions_[y];
      if (std::find(back.begin(), back.end(), x) == back.end()) return false;
    }
  return true;
}

bool Environment::is_connected() const {
  const std::size_t n = position_count();
  for (std::size_t y = 0; y < n; ++y)
    if (distance(0, y) == std::numeric_limits<std::size_t>::max()) return false;
  return true;
}

namespace {

std::vector<std::string> with_wait(std::vector<std::string> actions, const EnvOptions& o) {
  if (o.with_wait) actions.push_back("wait");
  return actions;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t from, std::size_t to) {
  std::vector<std::string> out;
  for (std::size_t i = from; i <= to; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Line of positions 0..edges with clamped fwd/back.
std::vector<std::vector<std::size_t>> line_moves(std::size_t edges, const EnvOptions& o) {
  std::vector<std::vector<std::size_t>> t;
  for (std::size_t x = 0; x <= edges; ++x) {
    std::vector<std::size_t> row{std::min(edges, x + 1), x == 0 ? 0 : x - 1};
    if (o.with_wait) row.push_back(x);
    t.push_back(row);
  }
  return t;
}

Environment ring(const std::string& kind, std::size_t n, const EnvOptions& o) {
  std::vector<std::vector<std::size_t>> t;
  std::vector<Bitset> fields(n, Bitset(n));
  for (std::size_t x = 0; x < n; ++x) {
    std::vector<std::size_t> row{(x + 1) % n, (x + n - 1) % n};
    if (o.with_wait) row.push_back(x);
    t.push_back(row);
    fields[x].set((x + n - 1) % n);
    fields[x].set(x);
    fields[x].set((x + 1) % n);
  }
  return Environment(kind, numbered("", 0, n - 1), with_wait({"fwd", "back"}, o), std::move(t),
                     numbered("u", 0, n - 1), std::move(fields));
}

} // namespace

Environment make_path(std::size_t edges, EnvOptions options) {
  if (edges < 1) throw InputError("path needs at least one edge");
  std::vector<Bitset> fields;
  for (std::size_t k = 1; k <= edges; ++k) {
    Bitset f(edges + 1);
    for (std::size_t x = 0; x < k; ++x) f.set(x);
    fields.push_back(f);
  }
  return Environment("path", numbered("", 0, edges), with_wait({"fwd", "back"}, options), line_moves(edges, options),
                     numbered("a", 1, edges), std::move(fields));
}

Environment make_cycle(std::size_t n, EnvOptions options) {
  if (n < 3) throw InputError("cycle needs at least 3 positions");
  return ring("cycle", n, options);
}

Environment make_circular_rail(std::size_t n, EnvOptions options) {
  if (n < 4) throw InputError("circular rail needs N >= 4");
  return ring("rail", n, options);
}

namespace {

Environment grid_like(const std::string& kind, std::size_t w, std::size_t h,
                      std::optional<std::pair<std::size_t, std::size_t>> removed, const EnvOptions& o) {
  // (xi, eta) with 0 <= xi <= w, 0 <= eta <= h
  std::vector<long> index((w + 1) * (h + 1), -1);
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  std::vector<std::string> labels;
  for (std::size_t eta = 0; eta <= h; ++eta)
    for (std::size_t xi = 0; xi <= w; ++xi) {
      if (removed && removed->first == xi && removed->second == eta) continue;
      index[eta * (w + 1) + xi] = static_cast<long>(coords.size());
      coords.emplace_back(xi, eta);
      labels.push_back("(" + std::to_string(xi) + "," + std::to_string(eta) + ")");
    }
  auto at = [&](long xi, long eta, std::size_t self) -> std::size_t {
    if (xi < 0 || eta < 0 || xi > static_cast<long>(w) || eta > static_cast<long>(h)) return self;
    const long k = index[static_cast<std::size_t>(eta) * (w + 1) + static_cast<std::size_t>(xi)];
    return k < 0 ? self : static_cast<std::size_t>(k);
  };
  std::vector<std::vector<std::size_t>> t;
  for (std::size_t p = 0; p < coords.size(); ++p) {
    const auto xi = static_cast<long>(coords[p].first);
    const auto eta = static_cast<long>(coords[p].second);
    std::vector<std::size_t> row{at(xi, eta + 1, p), at(xi, eta - 1, p), at(xi - 1, eta, p), at(xi + 1, eta, p)};
    if (o.with_wait) row.push_back(p);
    t.push_back(row);
  }
  std::vector<std::string> names = numbered("x", 1, w);
  for (auto& s : numbered("y", 1, h)) names.push_back(s);
  std::vector<Bitset> fields;
  for (std::size_t i = 1; i <= w; ++i) {
    Bitset f(coords.size());
    for (std::size_t p = 0; p < coords.size(); ++p)
      if (coords[p].first < i) f.set(p);
    fields.push_back(f);
  }
  for (std::size_t j = 1; j <= h; ++j) {
    Bitset f(coords.size());
    for (std::size_t p = 0; p < coords.size(); ++p)
      if (coords[p].second < j) f.set(p);
    fields.push_back(f);
  }
  return Environment(kind, std::move(labels), with_wait({"up", "down", "left", "right"}, o), std::move(t),
                     std::move(names), std::move(fields));
}

} // namespace

Environment make_grid(std::size_t width, std::size_t height, EnvOptions options) {
  if (width < 1 || height < 1) throw InputError("grid needs positive width and height");
  return grid_like("grid", width, height, std::nullopt, options);
}

Environment make_punctured_grid(std::size_t n, std::pair<std::size_t, std::size_t> removed, EnvOptions options) {
  if (n < 4) throw InputError("punctured grid needs N >= 4");
  if (removed.first < 1 || removed.second < 1 || removed.first > n - 2 || removed.second > n - 2)
    throw InputError("removed vertex must be interior");
  return grid_like("punctured-grid", n - 1, n - 1, removed, options);
}

Environment make_random_fields(std::size_t edges, std::mt19937_64& rng, EnvOptions options) {
  if (edges < 1) throw InputError("path needs at least one edge");
  std::vector<Bitset> fields;
  for (std::size_t k = 0; k < edges; ++k) {
    Bitset f(edges + 1);
    for (std::size_t x = 0; x <= edges; ++x)
      if (rng() >> 63) f.set(x);
    fields.push_back(f);
  }
  return Environment("random", numbered("", 0, edges), with_wait({"fwd", "back"}, options), line_moves(edges, options),
                     numbered("r", 1, edges), std::move(fields));
}

std::size_t default_target(const Environment& env) {
  std::size_t best = 0, best_sum = std::numeric_limits<std::size_t>::max();
  for (std::size_t x = 0; x < env.position_count(); ++x) {
    std::size_t sum = 0;
    for (std::size_t y = 0; y < env.position_count(); ++y) sum += env.distance(x, y);
    if (sum < best_sum) {
      best_sum = sum;
      best = x;
    }
  }
  return best;
}

Environment make_environment(const EnvSpec& spec, std::mt19937_64& rng) {
  const EnvOptions o{spec.with_wait};
  Environment env = [&] {
    if (spec.kind == "path") return make_path(spec.size, o);
    if (spec.kind == "cycle") return make_cycle(spec.size, o);
    if (spec.kind == "grid") return make_grid(spec.width, spec.height, o);
    if (spec.kind == "random") return make_random_fields(spec.size, rng, o);
    if (spec.kind == "punctured-grid") return make_punctured_grid(spec.size, spec.removed, o);
    if (spec.kind == "rail") return make_circular_rail(spec.size, o);
    throw InputError("unknown environment kind '" + spec.kind + "'");
  }();
  env.set_target(spec.target ? *spec.target : default_target(env));
  return env;
}

EnvSpec env_spec_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    EnvSpec s;
    s.kind = j.value("kind", s.kind);
    s.size = j.value("size", s.size);
    s.width = j.value("width", s.width);
    s.height = j.value("height", s.height);
    s.with_wait = j.value("with_wait", s.with_wait);
    if (j.contains("target")) s.target = j["target"].get<std::size_t>();
    if (j.contains("removed")) s.removed = {j["removed"].at(0).get<std::size_t>(), j["removed"].at(1).get<std::size_t>()};
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("environment JSON: ") + e.what());
  }
}

std::string env_spec_to_json(const EnvSpec& s) {
  nlohmann::json j{{"kind", s.kind},           {"size", s.size},
                   {"width", s.width},         {"height", s.height},
                   {"with_wait", s.with_wait}, {"removed", {s.removed.first, s.removed.second}}};
  if (s.target) j["target"] = *s.target;
  return j.dump();
}

std::vector<double> transition_matrix(const Environment& env) {
  const std::size_t n = env.position_count();
  std::vector<double> p(n * n, 0.0);
  const double share = 1.0 / static_cast<double>(env.action_count());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t a = 0; a < env.action_count(); ++a) p[x * n + env.transition(x, a)] += share;
  return p;
}

bool is_doubly_stochastic(const Environment& env, double eps) {
  const std::size_t n = env.position_count();
  const auto p = transition_matrix(env);
  for (std::size_t y = 0; y < n; ++y) {
    double col = 0;
    for (std::size_t x = 0; x < n; ++x) col += p[x * n + y];
    if (std::abs(col - 1.0) > eps) return false;
  }
  return true;
}

std::vector<double> stationary_distribution(const Environment& env) {
  if (!env.is_connected()) throw InputError("stationary distribution needs a connected environment");
  const std::size_t n = env.position_count();
  const auto p = transition_matrix(env);
  std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n);
  auto step = [&](const std::vector<double>& v, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) out[y] += v[x] * p[x * n + y];
  };
  for (int it = 0; it < 1'000'000; ++it) {
    step(pi, next);
    double change = 0;
    for (std::size_t x = 0; x < n; ++x) {
      next[x] = 0.5 * (next[x] + pi[x]);
      change += std::abs(next[x] - pi[x]);
    }
    pi.swap(next);
    if (change < 1e-15) break;
  }
  step(pi, next);
  double residual = 0;
  for (std::size_t x = 0; x < n; ++x) residual += std::abs(next[x] - pi[x]);
  if (residual >= 1e-12) throw ContractError("stationary distribution did not converge");
  return pi;
}

std::size_t ImplicationMatrix::count() const {
  return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), std::uint8_t{1}));
}

std::size_t err(const ImplicationMatrix& learned, const ImplicationMatrix& reference) {
  if (learned.sensors() != reference.sensors()) throw InputError("err: matrices differ in shape");
  std::size_t e = 0;
  for (std::size_t a = 0; a < learned.literals(); ++a)
    for (std::size_t b = 0; b < learned.literals(); ++b) e += learned.at(a, b) != reference.at(a, b);
  return e;
}

GroundTruth ground_truth_from_footprints(const std::vector<Bitset>& footprints, const std::vector<double>& mass,
                                         double tau) {
  const std::size_t k = footprints.size();
  GroundTruth g{ImplicationMatrix(k), ImplicationMatrix(k), tau};
  Bitset support(mass.size());
  for (std::size_t x = 0; x < mass.size(); ++x)
    if (mass[x] > 0) support.set(x);
  std::vector<Bitset> lit;
  for (const auto& f : footprints) {
    if (f.width() != mass.size()) throw InputError("ground truth: footprint width differs from point count");
    lit.push_back(f & support);
    lit.push_back(support - f);
  }
  auto measure = [&](const Bitset& s) {
    double m = 0;
    s.for_each([&](std::size_t x) { m += mass[x]; });
    return m;
  };
  for (std::size_t a = 0; a < 2 * k; ++a)
    for (std::size_t b = 0; b < 2 * k; ++b) {
      if (a / 2 == b / 2) continue;
      g.dir_true.set(a, b, lit[a].is_subset_of(lit[b]));
      const double ab_ = measure(lit[a] & lit[b ^ 1]);
      const double lim = std::min({tau, measure(lit[a] & lit[b]), measure(lit[a ^ 1] & lit[b]),
                                   measure(lit[a ^ 1] & lit[b ^ 1])});
      g.dir_thresholded.set(a, b, ab_ < lim);
    }
  return g;
}

GroundTruth ground_truth(const Environment& env, const std::vector<std::size_t>& sensor_subset, double tau) {
  const auto pi = stationary_distribution(env);
  std::vector<Bitset> fp;
  for (auto i : sensor_subset) {
    if (i >= env.field_count()) throw InputError("ground truth: sensor index out of range");
    fp.push_back(env.field(i));
  }
  return ground_truth_from_footprints(fp, pi, tau);
}

std::string implication_csv(const ImplicationMatrix& m, const std::vector<std::string>& names) {
  if (names.size() != m.sensors()) throw InputError("implication_csv: name count differs from sensor count");
  std::ostringstream os;
  os << "a,b,value\n";
  auto lit = [&](std::size_t a) { return names[a / 2] + (a % 2 ? "*" : ""); };
  for (std::size_t a = 0; a < m.literals(); ++a)
    for (std::size_t b = 0; b < m.literals(); ++b) os << lit(a) << ',' << lit(b) << ',' << (m.at(a, b) ? 1 : 0) << '\n';
  return os.str();
}

} // namespace snapmem
