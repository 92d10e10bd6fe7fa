#include <snapmem/errors.hpp>
#include <snapmem/propagation.hpp>

#include <algorithm>

namespace snapmem {

LiteralSet closure(const PocGraph& g, const LiteralSet& t, OpCounter* ops) {
  LiteralSet visited = t;
  std::vector<std::size_t> stack = t.to_vector();
  while (!stack.empty()) {
    const auto v = static_cast<Literal>(stack.back());
    stack.pop_back();
    const LiteralSet& ch = g.children(v);
    if (ops) {
      ++ops->vertex_expansions;
      ops->edge_inspections += ch.count();
    }
    (ch - visited).for_each([&](std::size_t w) {
      visited.set(w);
      stack.push_back(w);
    });
  }
  return visited;
}

LiteralSet propagate(const PocGraph& g, const LiteralSet& b, const LiteralSet& t, OpCounter* ops) {
  const LiteralSet u = closure(g, t, ops);
  return (b | u) - star_set(u);
}

LiteralSet project_to_target(const PocGraph& g, const LiteralSet& current, const LiteralSet& t, OpCounter* ops) {
  return propagate(g, current, t, ops);
}

LiteralSet predict_action(const PocGraph& g, const LiteralSet& current, const GeneralizedAction& action,
                          const ContextTable& context, OpCounter* ops) {
  const LiteralSet load = closure(g, current & context.standing, ops);
  LiteralSet signal = action.literals;
  for (std::size_t k = 0; k < context.actions.size(); ++k) {
    if (!action.literals.test(context.actions[k])) continue;
    (current & context.standing).for_each([&](std::size_t l) {
      const Literal c = context.context(k, static_cast<Literal>(l));
      if (c != kNoLiteral) signal.set(c);
    });
  }
  return propagate(g, load, signal, ops);
}

PlanDecision grp_decide(const PocGraph& g, const LiteralSet& current, const LiteralSet& t,
                        const std::vector<GeneralizedAction>& actions, const ContextTable& context,
                        std::mt19937_64& rng, const TraceHook* hook, OpCounter* ops) {
  if (actions.empty()) throw InputError("grp_decide: empty action list");
  PlanDecision d;
  const LiteralSet u = closure(g, t, ops);
  d.target_projection = (current | u) - star_set(u);
  // transition literals in current are stale; they count as subgoals only when the target asks for them
  const LiteralSet subgoals = (d.target_projection - current) | ((d.target_projection & u) - context.standing);
  d.scores.reserve(actions.size());
  d.target_scores.reserve(actions.size());
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (const auto& a : actions) {
    const LiteralSet p = predict_action(g, current, a, context, ops);
    d.scores.push_back((p & subgoals).count());
    d.target_scores.push_back((p & t).count());
    best = std::max(best, {d.target_scores.back(), d.scores.back()});
  }
  std::vector<std::size_t> winners;
  for (std::size_t k = 0; k < actions.size(); ++k)
    if (std::pair{d.target_scores[k], d.scores[k]} == best) winners.push_back(k);
  std::uniform_int_distribution<std::size_t> pick(0, winners.size() - 1);
  d.chosen = winners[pick(rng)];
  d.achieved_targets = best.first;
  d.achieved_subgoals = best.second;
  d.reaches_target = best.first == t.count();
  d.fallback = best.second == 0;
  if (hook && *hook) (*hook)(d);
  return d;
}

} // namespace snapmem
