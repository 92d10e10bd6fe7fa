#include <snapmem/cubing.hpp>
#include <snapmem/errors.hpp>
#include <snapmem/harness.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace snapmem {

std::vector<double> default_tau_sweep() {
  std::vector<double> out;
  const double lo = 1.0 / 8000.0, hi = 0.25;
  for (int k = 0; k < 10; ++k) out.push_back(lo + (hi - lo) * k / 9.0);
  return out;
}

std::vector<double> default_q_sweep() {
  std::vector<double> out;
  for (int k = 0; k < 10; ++k) out.push_back(1.0 - std::ldexp(1.0, -(k + 2)));
  return out;
}

namespace {

EnvSpec env_for_setting(const std::string& setting, bool with_wait) {
  EnvSpec e;
  static const std::set<std::string> known{"path", "cycle", "grid", "random", "punctured-grid", "rail"};
  if (!known.count(setting)) throw InputError("unknown setting '" + setting + "'");
  e.kind = setting;
  e.with_wait = with_wait;
  if (setting == "punctured-grid") e.size = 11;
  return e;
}

} // namespace

ExperimentSpec learning_spec(const std::string& setting) {
  ExperimentSpec s;
  s.setting = setting;
  s.env = env_for_setting(setting, false);
  return s;
}

ExperimentSpec navigation_spec(const std::string& setting) {
  ExperimentSpec s;
  s.setting = setting;
  s.env = env_for_setting(setting, true);
  s.agent = "both";
  s.steps = 2000;
  s.with_context = true;
  return s;
}

void ExperimentSpec::validate() const {
  if (!seed) throw InputError("experiment needs an explicit seed");
  if (runs < 1) throw InputError("runs must be at least 1");
  if (steps < 1) throw InputError("steps must be at least 1");
  if (sample_interval < 1) throw InputError("sample_interval must be at least 1");
  if (agent != "empirical" && agent != "discounted" && agent != "preloaded" && agent != "both")
    throw InputError("unknown agent kind '" + agent + "'");
  if (err_reference != "true" && err_reference != "thresholded")
    throw InputError("err_reference must be 'true' or 'thresholded'");
  if (err_scope != "position" && err_scope != "all") throw InputError("err_scope must be 'position' or 'all'");
  if (!(tau >= 0 && tau <= 0.25)) throw InputError("tau must lie in [0, 1/4]");
  if (!(q >= 0 && q <= 1)) throw InputError("q must lie in [0, 1]");
  for (const auto& v : variants()) {
    if (!(v.tau >= 0 && v.tau <= 0.25)) throw InputError("swept tau must lie in [0, 1/4]");
    if (!(v.q >= 0 && v.q <= 1)) throw InputError("swept q must lie in [0, 1]");
  }
  if (variants().empty()) throw InputError("parameter sweep is empty");
}

std::vector<AgentVariant> ExperimentSpec::variants() const {
  std::vector<AgentVariant> out;
  auto add_empirical = [&](const std::vector<double>& taus) {
    for (double t : taus) out.push_back({"empirical", SnapshotKind::kEmpirical, false, t, 1.0, t});
  };
  auto add_discounted = [&](const std::vector<double>& qs) {
    for (double v : qs) out.push_back({"discounted", SnapshotKind::kDiscounted, false, tau, v, v});
  };
  if (agent == "empirical") add_empirical(sweep.empty() ? std::vector<double>{tau} : sweep);
  else if (agent == "discounted") add_discounted(sweep.empty() ? std::vector<double>{q} : sweep);
  else if (agent == "both") {
    add_empirical({tau});
    add_discounted({q});
  } else if (agent == "preloaded") {
    out.push_back({"preloaded", SnapshotKind::kEmpirical, true, tau, 1.0, 0.0});
  }
  return out;
}

ExperimentSpec experiment_spec_from_json(std::string_view text, ExperimentSpec s) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("setting")) {
      const bool wait = s.env.with_wait;
      s.setting = j["setting"].get<std::string>();
      s.env = env_for_setting(s.setting, wait);
    }
    if (j.contains("env")) s.env = env_spec_from_json(j["env"].dump());
    s.agent = j.value("agent", s.agent);
    if (j.contains("sweep")) s.sweep = j["sweep"].get<std::vector<double>>();
    s.tau = j.value("tau", s.tau);
    s.q = j.value("q", s.q);
    s.runs = j.value("runs", s.runs);
    s.steps = j.value("steps", s.steps);
    s.sample_interval = j.value("sample_interval", s.sample_interval);
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    s.err_reference = j.value("err_reference", s.err_reference);
    s.err_scope = j.value("err_scope", s.err_scope);
    s.with_context = j.value("with_context", s.with_context);
    s.exploration_period = j.value("exploration_period", s.exploration_period);
    s.jobs = j.value("jobs", s.jobs);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("experiment JSON: ") + e.what());
  }
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Runs cells in parallel and hands finished buffers to write() in cell order.
void run_cells(std::size_t cells, std::size_t jobs, const std::function<std::string(std::size_t)>& work,
               const std::function<void(const std::string&)>& write) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells);
  if (jobs <= 1) {
    for (std::size_t c = 0; c < cells; ++c) write(work(c));
    return;
  }
  std::vector<std::optional<std::string>> done(cells);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < jobs; ++k)
    pool.emplace_back([&] {
      for (std::size_t c; (c = next.fetch_add(1)) < cells;) {
        std::string out;
        try {
          out = work(c);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
        std::lock_guard lock(mu);
        done[c] = std::move(out);
        cv.notify_all();
      }
    });
  for (std::size_t c = 0; c < cells; ++c) {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return done[c].has_value(); });
    std::string buf = std::move(*done[c]);
    done[c].reset();
    lock.unlock();
    if (!failure) write(buf);
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void row(std::ostream& os, const ExperimentSpec& spec, const AgentVariant& v, std::size_t p, std::size_t run,
         std::size_t t, const char* metric, std::size_t value) {
  os << spec.setting << ',' << v.label << ',' << p << ',' << fmt_double(v.param_value) << ',' << run << ',' << t << ','
     << metric << ',' << value << '\n';
}

void write_all(std::ostream& csv, const std::string& buf) {
  csv << buf;
  if (!csv) throw InputError("failed writing experiment CSV");
}

} // namespace

std::uint64_t run_seed(std::uint64_t seed, std::size_t param_index, std::size_t run_id) {
  return splitmix(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(param_index))) ^ static_cast<std::uint64_t>(run_id));
}

void run_learning(const ExperimentSpec& spec, std::ostream& csv) {
  spec.validate();
  const auto variants = spec.variants();
  for (const auto& v : variants)
    if (v.preloaded) throw InputError("learning runs need a learning agent");
  csv << kCsvHeader << '\n';
  auto work = [&](std::size_t cell) {
    const std::size_t p = cell / spec.runs, run = cell % spec.runs;
    const AgentVariant& v = variants[p];
    std::mt19937_64 rng(run_seed(*spec.seed, p, run));
    Environment env = make_environment(spec.env, rng);
    env.set_position(std::uniform_int_distribution<std::size_t>(0, env.position_count() - 1)(rng));
    AgentConfig cfg;
    cfg.kind = v.kind;
    cfg.tau = v.tau;
    cfg.q = v.q;
    cfg.controller = ControllerKind::kRandom;
    cfg.with_context = spec.with_context;
    cfg.seed = rng();
    Agent agent(env, cfg);
    const SensorLayout& l = agent.layout();
    std::vector<std::size_t> sensors;
    ImplicationMatrix ref;
    if (spec.err_scope == "position") {
      sensors = l.loc;
      std::vector<std::size_t> fields(env.field_count());
      for (std::size_t i = 0; i < fields.size(); ++i) fields[i] = i;
      const GroundTruth g = ground_truth(env, fields, v.tau);
      ref = spec.err_reference == "true" ? g.dir_true : g.dir_thresholded;
    } else {
      for (std::size_t i = 0; i < l.sensorium.size(); ++i) sensors.push_back(i);
      const EventModel m = event_model(env, l);
      const GroundTruth g = ground_truth_from_footprints(m.footprints, m.mass, v.tau);
      ref = spec.err_reference == "true" ? g.dir_true : g.dir_thresholded;
    }
    std::ostringstream os;
    for (std::size_t t = 1; t <= spec.steps; ++t) {
      agent.step(env);
      if (t % spec.sample_interval == 0) row(os, spec, v, p, run, t, "err", err(learned_matrix(agent.graph(), sensors), ref));
    }
    return os.str();
  };
  run_cells(variants.size() * spec.runs, spec.jobs, work, [&](const std::string& b) { write_all(csv, b); });
}

void run_navigation(const ExperimentSpec& spec, std::ostream& csv) {
  spec.validate();
  const auto variants = spec.variants();
  csv << kCsvHeader << '\n';
  auto work = [&](std::size_t cell) {
    const std::size_t p = cell / spec.runs, run = cell % spec.runs;
    const AgentVariant& v = variants[p];
    std::mt19937_64 rng(run_seed(*spec.seed, p, run));
    Environment env = make_environment(spec.env, rng);
    if (!env.target()) throw InputError("navigation needs a target");
    env.set_position(std::uniform_int_distribution<std::size_t>(0, env.position_count() - 1)(rng));
    AgentConfig cfg;
    cfg.kind = v.kind;
    cfg.tau = v.tau;
    cfg.q = v.q;
    cfg.controller = ControllerKind::kExcitation;
    cfg.with_context = true;
    cfg.with_gradient = true;
    cfg.exploration_period = v.preloaded ? 0 : spec.exploration_period;
    cfg.seed = rng();
    std::optional<PocGraph> graph;
    if (v.preloaded) graph = ground_truth_graph(env, build_sensorium(env, true, true));
    Agent agent(env, cfg, std::move(graph));
    std::ostringstream os;
    row(os, spec, v, p, run, 0, "deviation", env.distance_to_target(env.position()));
    for (std::size_t t = 1; t <= spec.steps; ++t) {
      agent.step(env);
      if (t % spec.sample_interval == 0) row(os, spec, v, p, run, t, "deviation", env.distance_to_target(env.position()));
    }
    return os.str();
  };
  run_cells(variants.size() * spec.runs, spec.jobs, work, [&](const std::string& b) { write_all(csv, b); });
}

namespace {

// A handful of random edges; dense graphs collapse to tiny quotients.
PocGraph random_graph(std::size_t n, std::mt19937_64& rng) {
  PocGraph g(n);
  if (n < 2) return g;
  std::uniform_int_distribution<Literal> lit(0, static_cast<Literal>(2 * n - 1));
  for (std::size_t e = 0, k = rng() % (n + 2); e < k;) {
    const Literal a = lit(rng), b = lit(rng);
    if (sensor_of(a) == sensor_of(b)) continue;
    g.add_edge(a, b);
    ++e;
  }
  return g;
}

LiteralSet random_subset(const Sensorium& s, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  LiteralSet r = s.empty_set();
  for (Literal a = 0; a < s.proper_count(); ++a)
    if (u(rng) < p) r.set(a);
  return r;
}

LiteralSet push_forward(const Quotient& q, const LiteralSet& a) {
  LiteralSet r = q.pocset.sensorium().empty_set();
  a.for_each([&](std::size_t x) { r.set(q.map[x]); });
  return r;
}

Snapshot random_measure_snapshot(std::size_t n, std::mt19937_64& rng) {
  const Sensorium s = Sensorium::anonymous(n);
  std::uniform_int_distribution<std::size_t> atoms(1, 2 * n + 2);
  std::uniform_real_distribution<double> u(0, 1);
  // some sensors copy or negate an earlier one, so ties and equivalences show up
  std::vector<int> tie(n, 0);
  for (std::size_t j = 1; j < n; ++j) tie[j] = u(rng) < 0.2 ? (u(rng) < 0.5 ? 1 : 2) : 0;
  std::vector<LiteralSet> pts;
  std::vector<double> mass;
  const std::size_t k = atoms(rng);
  double total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    LiteralSet p = s.empty_set();
    bool prev = false;
    for (std::size_t j = 0; j < n; ++j) {
      const bool v = tie[j] == 1 ? prev : tie[j] == 2 ? !prev : u(rng) < 0.5;
      p.set(v ? positive_literal(j) : negative_literal(j));
      prev = v;
    }
    pts.push_back(p);
    mass.push_back(u(rng) + 1e-3);
    total += mass.back();
  }
  for (auto& m : mass) m /= total;
  return snapshot_from_measure(s, pts, mass, 0.25 * (u(rng) + 1e-6));
}

} // namespace

std::vector<SuiteResult> selftest(const SelftestOptions& o, std::ostream& log) {
  std::mt19937_64 rng(o.seed);
  std::vector<SuiteResult> out;
  std::uniform_int_distribution<std::size_t> sensors(1, 8);
  std::uniform_real_distribution<double> u(0, 1);
  DeriveOptions derive;
  derive.equivalences = false;
  derive.strict = !o.inject_nonstrict;

  SuiteResult prop{"propagation-vs-dual"}, coh{"propagation-vs-coherent-projection"}, geo{"formulas-vs-bfs"};
  for (std::size_t i = 0; i < o.instances; ++i) {
    const std::size_t n = sensors(rng);
    const PocGraph g = random_graph(n, rng);
    const Sensorium sen = Sensorium::anonymous(n);
    const WeakPocSet p = derived_poc_set(g, sen, true);
    const Quotient q = canonical_quotient(p);
    const Cubing c = Cubing::build(q.pocset);
    const LiteralSet proper = sen.proper_mask();
    bool ok_prop = true, ok_coh = true, ok_geo = true;
    for (int trial = 0; trial < 8; ++trial) {
      const LiteralSet o_raw = random_subset(sen, u(rng), rng);
      ok_coh &= (propagate(g, sen.empty_set(), o_raw) & proper) == (p.coherent_projection(o_raw) & proper);

      const LiteralSet s = p.coherent_projection(random_subset(sen, 0.3 * u(rng), rng));
      const LiteralSet t = p.coherent_projection(random_subset(sen, 0.3 * u(rng), rng));
      const LiteralSet r = propagate(g, p.up_set(s), t);
      const auto lhs = c.halfspace(push_forward(q, r));
      ok_prop &= lhs == c.project_convex(push_forward(q, s), push_forward(q, t));
      ok_prop &= lhs == c.project_convex_pointwise(push_forward(q, s), push_forward(q, t));

      const VertexId v = static_cast<VertexId>(rng() % c.vertex_count());
      const LiteralSet tq = push_forward(q, t);
      const auto target = c.halfspace(tq);
      ok_geo &= c.project_point(v, tq) == c.nearest_in(v, target);
      const auto path = c.geodesic_to_convex(v, tq);
      const auto d = c.hop_distances(v);
      ok_geo &= path.size() - 1 == d[c.project_point(v, tq)];
      ok_geo &= path.size() - 1 == (c.vertex(v) & q.pocset.down_set(star_set(tq))).count();
    }
    (ok_prop ? prop.passed : prop.failed)++;
    (ok_coh ? coh.passed : coh.failed)++;
    (ok_geo ? geo.passed : geo.failed)++;
  }
  out.push_back(prop);
  out.push_back(coh);
  out.push_back(geo);

  SuiteResult acyc{"acyclicity"}, trunc{"truncation-preserves-graph"};
  std::uniform_int_distribution<std::size_t> snap_sensors(2, 8);
  for (std::size_t i = 0; i < o.instances; ++i) {
    const Snapshot s = random_measure_snapshot(snap_sensors(rng), rng);
    const PocGraph g = derive_poc_graph(s, derive);
    (g.is_acyclic() ? acyc.passed : acyc.failed)++;
    (derive_poc_graph(truncate(s), derive) == g ? trunc.passed : trunc.failed)++;
  }
  out.push_back(acyc);
  out.push_back(trunc);

  for (const auto& r : out)
    log << (r.failed ? "FAIL " : "PASS ") << r.name << ": " << r.passed << " passed, " << r.failed << " failed\n";
  return out;
}

} // namespace snapmem
