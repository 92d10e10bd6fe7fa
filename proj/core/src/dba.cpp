#include <snapmem/dba.hpp>
#include <snapmem/errors.hpp>

#include <nlohmann/json.hpp>

namespace snapmem {

SensorLayout build_sensorium(const Environment& env, bool with_context, bool with_gradient) {
  std::vector<std::string> names;
  std::vector<Degree> degrees;
  auto add = [&](std::string name, Degree d) {
    names.push_back(std::move(name));
    degrees.push_back(d);
    return names.size() - 1;
  };
  SensorLayout l;
  for (const auto& f : env.field_names()) l.loc.push_back(add(f, Degree::kState));
  for (const auto& a : env.action_names()) l.action.push_back(add(a, Degree::kTransition));
  if (with_gradient) {
    l.better = add("better", Degree::kTransition);
    l.worse = add("worse", Degree::kTransition);
  }
  if (with_context) {
    l.context.resize(env.action_count());
    for (std::size_t a = 0; a < env.action_count(); ++a)
      for (std::size_t u = 0; u < env.field_count(); ++u) {
        const auto& an = env.action_names()[a];
        const auto& un = env.field_names()[u];
        const std::size_t on = add(an + "&" + un, Degree::kTransition);
        const std::size_t off = add(an + "&!" + un, Degree::kTransition);
        l.context[a].push_back({on, off});
      }
  }
  l.sensorium = Sensorium(std::move(names), std::move(degrees));
  const auto& s = l.sensorium;

  for (auto i : l.action) l.table.actions.push_back(positive_literal(i));
  l.table.standing = s.degree_mask(Degree::kState);
  if (with_context) {
    l.table.table.assign(l.action.size(), std::vector<Literal>(s.literal_count(), kNoLiteral));
    for (std::size_t a = 0; a < l.action.size(); ++a)
      for (std::size_t u = 0; u < l.loc.size(); ++u) {
        l.table.table[a][positive_literal(l.loc[u])] = positive_literal(l.context[a][u][0]);
        l.table.table[a][negative_literal(l.loc[u])] = positive_literal(l.context[a][u][1]);
      }
  }
  for (std::size_t a = 0; a < l.action.size(); ++a) {
    GeneralizedAction g{s.empty_set(), a, env.action_names()[a]};
    for (std::size_t b = 0; b < l.action.size(); ++b)
      g.literals.set(a == b ? positive_literal(l.action[b]) : negative_literal(l.action[b]));
    l.pure_actions.push_back(std::move(g));
  }
  l.no_action = GeneralizedAction{s.empty_set(), std::nullopt, "no-action"};
  for (auto i : l.action) l.no_action.literals.set(negative_literal(i));
  return l;
}

std::vector<GeneralizedAction> admissible_actions(const SensorLayout& layout, bool include_no_action) {
  std::vector<GeneralizedAction> out = layout.pure_actions;
  if (include_no_action) out.push_back(layout.no_action);
  return out;
}

LiteralSet observe(const SensorLayout& l, const Environment& env, const LiteralSet& prev,
                   const std::optional<LastTransition>& last) {
  LiteralSet o = l.sensorium.empty_set();
  auto put = [&](std::size_t sensor, bool on) { o.set(on ? positive_literal(sensor) : negative_literal(sensor)); };
  const std::size_t x = env.position();
  for (std::size_t u = 0; u < l.loc.size(); ++u) put(l.loc[u], env.field(u).test(x));
  for (std::size_t a = 0; a < l.action.size(); ++a) put(l.action[a], last && last->action == a);
  if (l.better) {
    const bool moved = last && env.target();
    const std::size_t before = moved ? env.distance_to_target(last->from) : 0;
    const std::size_t now = moved ? env.distance_to_target(x) : 0;
    put(*l.better, moved && now < before);
    put(*l.worse, moved && now > before);
  }
  for (std::size_t a = 0; a < l.context.size(); ++a)
    for (std::size_t u = 0; u < l.context[a].size(); ++u) {
      const bool acted = last && last->action == a;
      put(l.context[a][u][0], acted && prev.test(positive_literal(l.loc[u])));
      put(l.context[a][u][1], acted && prev.test(negative_literal(l.loc[u])));
    }
  return o;
}

Agent::Agent(const Environment& env, AgentConfig config, std::optional<PocGraph> preloaded)
    : config_(config), layout_(build_sensorium(env, config.with_context, config.with_gradient)),
      preloaded_(std::move(preloaded)), rng_(config.seed) {
  DeriveOptions opt;
  opt.equivalences = config.equivalences;
  snapshot_ = Snapshot::trivial(layout_.sensorium, config.tau, config.kind, config.q, opt);
  state_ = layout_.sensorium.empty_set();
  if (preloaded_ && preloaded_->sensor_count() != layout_.sensorium.size())
    throw InputError("preloaded graph does not match the agent sensorium");
  if (config.controller == ControllerKind::kExcitation && !layout_.better)
    throw InputError("excitation-driven agents need better/worse sensors");
}

PlanDecision Agent::excitation_policy(OpCounter* ops) {
  const auto& s = layout_.sensorium;
  const TraceHook* hook = trace_ ? &trace_ : nullptr;
  last_exploratory_ = false;
  PlanDecision d = grp_decide(graph(), state_, s.make_set({positive_literal(*layout_.better)}), layout_.pure_actions,
                              layout_.table, rng_, hook, ops);
  // failure means no action is predicted to produce better
  if (d.reaches_target) {
    consecutive_fallbacks_ = 0;
    return d;
  }
  ++consecutive_fallbacks_;
  if (config_.exploration_period > 0 && consecutive_fallbacks_ % config_.exploration_period == 0) {
    std::uniform_int_distribution<std::size_t> pick(0, layout_.pure_actions.size() - 1);
    d.chosen = pick(rng_);
    last_exploratory_ = true;
    return d;
  }
  return grp_decide(graph(), state_, s.make_set({negative_literal(*layout_.worse)}), layout_.pure_actions,
                    layout_.table, rng_, hook, ops);
}

CycleRecord Agent::step(Environment& env, OpCounter* ops) {
  CycleRecord r;
  r.t = ++t_;
  r.observation = observe(layout_, env, state_, last_);
  if (preloaded_) {
    state_ = propagate(*preloaded_, layout_.sensorium.empty_set(), r.observation, ops);
  } else {
    snapshot_.update(r.observation, ops);
    state_ = snapshot_.state();
  }
  r.state = state_;
  r.clock = snapshot_.clock();
  if (config_.controller == ControllerKind::kRandom) {
    std::uniform_int_distribution<std::size_t> pick(0, layout_.pure_actions.size() - 1);
    r.decision = pick(rng_);
  } else {
    const PlanDecision d = excitation_policy(ops);
    r.decision = d.chosen;
    r.fallback = consecutive_fallbacks_ > 0;
    r.exploratory = last_exploratory_;
  }
  const std::size_t from = env.position();
  env.act(*layout_.pure_actions[r.decision].atomic);
  last_ = LastTransition{*layout_.pure_actions[r.decision].atomic, from};
  r.position = env.position();
  return r;
}

EventModel event_model(const Environment& env, const SensorLayout& l) {
  const auto pi = stationary_distribution(env);
  const std::size_t na = env.action_count();
  const std::size_t events = env.position_count() * na;
  EventModel m{std::vector<Bitset>(l.sensorium.size(), Bitset(events)), std::vector<double>(events, 0.0)};
  for (std::size_t x = 0; x < env.position_count(); ++x)
    for (std::size_t a = 0; a < na; ++a) {
      const std::size_t e = x * na + a;
      const std::size_t y = env.transition(x, a);
      m.mass[e] = pi[x] / static_cast<double>(na);
      for (std::size_t u = 0; u < l.loc.size(); ++u)
        if (env.field(u).test(y)) m.footprints[l.loc[u]].set(e);
      m.footprints[l.action[a]].set(e);
      if (l.better && env.target()) {
        if (env.distance_to_target(y) < env.distance_to_target(x)) m.footprints[*l.better].set(e);
        if (env.distance_to_target(y) > env.distance_to_target(x)) m.footprints[*l.worse].set(e);
      }
      if (!l.context.empty())
        for (std::size_t u = 0; u < l.loc.size(); ++u)
          m.footprints[l.context[a][u][env.field(u).test(x) ? 0 : 1]].set(e);
    }
  return m;
}

PocGraph ground_truth_graph(const Environment& env, const SensorLayout& l) {
  const EventModel m = event_model(env, l);
  Bitset support(m.mass.size());
  for (std::size_t e = 0; e < m.mass.size(); ++e)
    if (m.mass[e] > 0) support.set(e);
  std::vector<Bitset> lit;
  for (const auto& f : m.footprints) {
    lit.push_back(f & support);
    lit.push_back(support - f);
  }
  PocGraph g(l.sensorium);
  const auto n = static_cast<Literal>(lit.size());
  for (Literal a = 0; a < n; ++a) {
    if (lit[a].none() || lit[a] == support) continue;
    for (Literal b = 0; b < n; ++b) {
      if (sensor_of(a) == sensor_of(b) || lit[b].none() || lit[b] == support) continue;
      if (lit[a].is_subset_of(lit[b])) g.add_edge(a, b);
    }
  }
  return g;
}

ImplicationMatrix learned_matrix(const PocGraph& g, const std::vector<std::size_t>& sensors) {
  ImplicationMatrix m(sensors.size());
  for (std::size_t i = 0; i < sensors.size(); ++i)
    for (std::size_t j = 0; j < sensors.size(); ++j) {
      if (i == j) continue;
      for (int si = 0; si < 2; ++si)
        for (int sj = 0; sj < 2; ++sj)
          m.set(2 * i + si, 2 * j + sj,
                g.has_edge(static_cast<Literal>(2 * sensors[i] + si), static_cast<Literal>(2 * sensors[j] + sj)));
    }
  return m;
}

std::string agent_config_to_json(const AgentConfig& c) {
  nlohmann::json j{{"kind", to_string(c.kind)},
                   {"tau", c.tau},
                   {"q", c.q},
                   {"controller", c.controller == ControllerKind::kRandom ? "random" : "excitation"},
                   {"with_context", c.with_context},
                   {"with_gradient", c.with_gradient},
                   {"equivalences", c.equivalences},
                   {"exploration_period", c.exploration_period},
                   {"seed", c.seed}};
  return j.dump();
}

AgentConfig agent_config_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    AgentConfig c;
    const std::string kind = j.value("kind", std::string("empirical"));
    if (kind == "empirical") c.kind = SnapshotKind::kEmpirical;
    else if (kind == "discounted") c.kind = SnapshotKind::kDiscounted;
    else throw InputError("agent JSON: unknown snapshot kind '" + kind + "'");
    c.tau = j.value("tau", c.tau);
    c.q = j.value("q", c.q);
    const std::string ctl = j.value("controller", std::string("random"));
    if (ctl == "random") c.controller = ControllerKind::kRandom;
    else if (ctl == "excitation") c.controller = ControllerKind::kExcitation;
    else throw InputError("agent JSON: unknown controller '" + ctl + "'");
    c.with_context = j.value("with_context", c.with_context);
    c.with_gradient = j.value("with_gradient", c.with_gradient);
    c.equivalences = j.value("equivalences", c.equivalences);
    c.exploration_period = j.value("exploration_period", c.exploration_period);
    if (!j.contains("seed")) throw InputError("agent JSON: an explicit seed is required");
    c.seed = j["seed"].get<std::uint64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("agent JSON: ") + e.what());
  }
}

std::string cycle_record_jsonl(const SensorLayout& l, const CycleRecord& r) {
  auto names = [&](const LiteralSet& s) {
    std::vector<std::string> out;
    s.for_each([&](std::size_t a) { out.push_back(l.sensorium.name(static_cast<Literal>(a))); });
    return out;
  };
  nlohmann::json j{{"t", r.t},
                   {"position", r.position},
                   {"decision", l.pure_actions.at(r.decision).name},
                   {"fallback", r.fallback},
                   {"exploratory", r.exploratory},
                   {"clock", r.clock},
                   {"observation", names(r.observation)},
                   {"state", names(r.state)}};
  return j.dump();
}

} // namespace snapmem
