#include <snapmem/cubing.hpp>
#include <snapmem/dba.hpp>
#include <snapmem/errors.hpp>

#include <gtest/gtest.h>

using namespace snapmem;

namespace {

// Poc set generated by the edges of g among a subset of sensors.
WeakPocSet restrict_to(const PocGraph& g, const Sensorium& s, const std::vector<std::size_t>& keep) {
  std::vector<std::string> names;
  for (auto i : keep) names.push_back(s.sensor_name(i));
  std::vector<Relation> rel;
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      for (int si = 0; si < 2; ++si)
        for (int sj = 0; sj < 2; ++sj)
          if (g.has_edge(static_cast<Literal>(2 * keep[i] + si), static_cast<Literal>(2 * keep[j] + sj)))
            rel.emplace_back(static_cast<Literal>(2 * i + si), static_cast<Literal>(2 * j + sj));
  return WeakPocSet::from_generators(Sensorium(names), rel);
}

} // namespace

TEST(Dba, SensoriumLayout) {
  const Environment env = make_path(20);
  const SensorLayout l = build_sensorium(env, true);
  EXPECT_EQ(l.sensorium.size(), 20u + 2u + 80u);
  EXPECT_EQ(l.loc.size(), 20u);
  EXPECT_EQ(l.action.size(), 2u);
  EXPECT_FALSE(l.better);
  EXPECT_EQ(l.sensorium.sensor_name(l.context[0][0][1]), "fwd&!a1");
  EXPECT_EQ(build_sensorium(env, false, true).sensorium.size(), 24u);
  EXPECT_EQ(admissible_actions(l, true).size(), 3u);
  EXPECT_EQ(l.table.standing.count(), 40u);
  EXPECT_TRUE(is_complete_selection(Sensorium({"fwd", "back"}), [&] {
    LiteralSet s(6);
    s.set(1);
    s.set(3);
    return s;
  }()));
  EXPECT_EQ(l.no_action.literals.count(), 2u);
}

TEST(Dba, FirstObservationHasNoTransition) {
  Environment env = make_grid(3, 3);
  env.set_target(0);
  const SensorLayout l = build_sensorium(env, true, true);
  env.set_position(5);
  const LiteralSet o = observe(l, env, l.sensorium.empty_set(), std::nullopt);
  EXPECT_TRUE(is_complete_selection(l.sensorium, o));
  for (std::size_t i = 0; i < l.sensorium.size(); ++i)
    if (l.sensorium.degree(i) == Degree::kTransition) EXPECT_TRUE(o.test(negative_literal(i))) << l.sensorium.sensor_name(i);
  env.set_position(4);
  const LiteralSet moved = observe(l, env, o, LastTransition{0, 5});
  EXPECT_TRUE(moved.test(positive_literal(*l.better)) || moved.test(positive_literal(*l.worse)));
  EXPECT_EQ((moved & l.sensorium.degree_mask(Degree::kTransition)).count(),
            (moved & l.sensorium.degree_mask(Degree::kTransition) & l.sensorium.proper_mask()).count());
}

TEST(Dba, AgentInvariants) {
  for (auto kind : {SnapshotKind::kEmpirical, SnapshotKind::kDiscounted}) {
    Environment env = make_path(6);
    AgentConfig c;
    c.kind = kind;
    c.tau = 0.05;
    c.seed = 7;
    Agent a(env, c);
    for (std::size_t t = 1; t <= 300; ++t) {
      const CycleRecord r = a.step(env);
      ASSERT_EQ(r.t, t);
      ASSERT_TRUE(is_complete_selection(a.layout().sensorium, r.observation));
      const WeakPocSet p = derived_poc_set(a.graph(), a.layout().sensorium, true);
      ASSERT_TRUE(p.is_coherent(r.state));
      if (kind == SnapshotKind::kEmpirical) ASSERT_EQ(r.clock, static_cast<double>(t));
      ASSERT_EQ(r.position, env.position());
    }
    if (kind == SnapshotKind::kEmpirical) EXPECT_TRUE(is_empirical(a.snapshot()));
    EXPECT_TRUE(a.graph().is_acyclic() || c.equivalences);
  }
}

TEST(Dba, SameSeedSameRun) {
  auto run = [](std::uint64_t seed) {
    Environment env = make_grid(4, 4);
    env.set_target(default_target(env));
    AgentConfig c;
    c.controller = ControllerKind::kExcitation;
    c.with_gradient = true;
    c.seed = seed;
    Agent a(env, c);
    std::string out;
    for (int t = 0; t < 200; ++t) out += cycle_record_jsonl(a.layout(), a.step(env));
    return out;
  };
  EXPECT_EQ(run(3), run(3));
  EXPECT_NE(run(3), run(4));
}

TEST(Dba, PreloadedAgentWalksStraightToTheTarget) {
  for (const char* kind : {"path", "grid", "cycle"}) {
    Environment env = std::string(kind) == "path" ? make_path(12, {.with_wait = true})
                      : std::string(kind) == "grid" ? make_grid(5, 5, {.with_wait = true})
                                                    : make_cycle(12, {.with_wait = true});
    env.set_target(default_target(env));
    const SensorLayout l = build_sensorium(env, true, true);
    AgentConfig c;
    c.controller = ControllerKind::kExcitation;
    c.with_gradient = true;
    c.exploration_period = 0;
    c.seed = 11;
    for (std::size_t start = 0; start < env.position_count(); start += 3) {
      env.set_position(start);
      Agent a(env, c, ground_truth_graph(env, l));
      for (int t = 0; t < 40; ++t) {
        const std::size_t before = env.distance_to_target(env.position());
        const CycleRecord r = a.step(env);
        if (before > 0) ASSERT_LT(env.distance_to_target(r.position), before) << kind << " " << start;
        else ASSERT_EQ(env.distance_to_target(r.position), 0u) << kind << " " << start;
      }
    }
  }
}

TEST(Dba, UntrainedAgentChoosesUniformly) {
  Environment env = make_path(8, {.with_wait = true});
  env.set_target(4);
  AgentConfig c;
  c.controller = ControllerKind::kExcitation;
  c.with_gradient = true;
  c.tau = 0; // nothing is ever learned
  c.seed = 12;
  Agent a(env, c);
  std::vector<double> hits(env.action_count(), 0);
  const int steps = 6000;
  for (int t = 0; t < steps; ++t) hits[a.step(env).decision] += 1;
  EXPECT_EQ(a.graph().edge_count(), 0u);
  double chi2 = 0;
  const double e = static_cast<double>(steps) / hits.size();
  for (double h : hits) chi2 += (h - e) * (h - e) / e;
  EXPECT_LT(chi2, 13.8); // 2 degrees of freedom, p = 0.001
}

TEST(Dba, ExcitationNeedsGradientSensors) {
  const Environment env = make_path(4);
  AgentConfig c;
  c.controller = ControllerKind::kExcitation;
  EXPECT_THROW(Agent(env, c), InputError);
  c.with_gradient = true;
  EXPECT_THROW(Agent(env, c, PocGraph(3)), InputError);
}

TEST(Dba, ExclusiveActionsFormAStarfish) {
  for (bool wait : {false, true}) {
    Environment env = make_grid(2, 2, {.with_wait = wait});
    env.set_target(0);
    const SensorLayout l = build_sensorium(env, true, true);
    const PocGraph truth = ground_truth_graph(env, l);
    const Cubing c = Cubing::build(canonical_quotient(restrict_to(truth, l.sensorium, l.action)).pocset);
    EXPECT_EQ(c.vertex_count(), env.action_count() + 1);
    EXPECT_EQ(c.edge_count(), env.action_count());
  }
}

TEST(Dba, ActionObservationSplitPreservesMedians) {
  for (bool wait : {false, true}) {
    Environment env = make_path(3, {.with_wait = wait});
    const SensorLayout l = build_sensorium(env, false);
    const PocGraph truth = ground_truth_graph(env, l);
    const Quotient q = canonical_quotient(derived_poc_set(truth, l.sensorium, true));
    const Cubing c = Cubing::build(q.pocset);
    LiteralSet act = q.pocset.sensorium().empty_set();
    for (auto i : l.action) {
      act.set(q.map[positive_literal(i)]);
      act.set(q.map[negative_literal(i)]);
    }
    const LiteralSet obs = q.pocset.sensorium().proper_mask() - act;
    for (VertexId u = 0; u < c.vertex_count(); ++u)
      for (VertexId v = 0; v < c.vertex_count(); ++v) {
        if (u != v) {
          EXPECT_FALSE((c.vertex(u) & act) == (c.vertex(v) & act) && (c.vertex(u) & obs) == (c.vertex(v) & obs));
        }
        for (VertexId w = 0; w < c.vertex_count(); ++w) {
          const LiteralSet m = c.vertex(c.median(u, v, w));
          for (const LiteralSet& part : {act, obs}) {
            const LiteralSet a = c.vertex(u) & part, b = c.vertex(v) & part, d = c.vertex(w) & part;
            EXPECT_EQ(m & part, (a & b) | (b & d) | (a & d));
          }
        }
      }
  }
}

TEST(Dba, ConfigJson) {
  AgentConfig c;
  c.kind = SnapshotKind::kDiscounted;
  c.q = 0.75;
  c.controller = ControllerKind::kExcitation;
  c.exploration_period = 3;
  c.seed = 99;
  const AgentConfig r = agent_config_from_json(agent_config_to_json(c));
  EXPECT_EQ(r.kind, c.kind);
  EXPECT_EQ(r.q, c.q);
  EXPECT_EQ(r.controller, c.controller);
  EXPECT_EQ(r.exploration_period, 3u);
  EXPECT_EQ(r.seed, 99u);
  EXPECT_THROW(agent_config_from_json(R"({"kind": "bogus"})"), InputError);
}
