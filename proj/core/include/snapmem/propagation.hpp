#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <snapmem/ops.hpp>
#include <snapmem/poc_graph.hpp>

namespace snapmem {

/** Forward closure of t: every literal reachable from t, t included. */
LiteralSet closure(const PocGraph& g, const LiteralSet& t, OpCounter* ops = nullptr);

/** (B u U) \ U* with U = closure(T). B should be coherent and up-closed. */
LiteralSet propagate(const PocGraph& g, const LiteralSet& b, const LiteralSet& t, OpCounter* ops = nullptr);

/** Literal description of the projection of V[current] onto V[coh T]. */
LiteralSet project_to_target(const PocGraph& g, const LiteralSet& current, const LiteralSet& t,
                             OpCounter* ops = nullptr);

inline constexpr Literal kNoLiteral = std::numeric_limits<Literal>::max();

/**
 * Contextualized action sensors: for action k and a state literal l, the
 * literal "action k while l held" (kNoLiteral when absent).
 */
struct ContextTable {
  std::vector<Literal> actions;
  std::vector<std::vector<Literal>> table;
  /** Degree-0 literals: they describe the current state, not the last transition. */
  LiteralSet standing;

  Literal context(std::size_t action, Literal l) const {
    return table.empty() ? kNoLiteral : table[action][l];
  }
};

/** Complete selection on the action literals; atomic names the single action switched on. */
struct GeneralizedAction {
  LiteralSet literals;
  std::optional<std::size_t> atomic;
  std::string name;
};

/**
 * Hallucinated post-state: the action literals and the context signals of its
 * positive literals, propagated over the standing part of current.
 */
LiteralSet predict_action(const PocGraph& g, const LiteralSet& current, const GeneralizedAction& action,
                          const ContextTable& context, OpCounter* ops = nullptr);

struct PlanDecision {
  std::size_t chosen = 0;
  std::size_t achieved_subgoals = 0;
  /** Target literals the chosen action is predicted to produce. */
  std::size_t achieved_targets = 0;
  /** The chosen action is predicted to produce all of T. */
  bool reaches_target = false;
  bool fallback = false;
  LiteralSet target_projection;
  std::vector<std::size_t> scores;
  std::vector<std::size_t> target_scores;
};

using TraceHook = std::function<void(const PlanDecision&)>;

/**
 * Greedy reactive planner: project current onto T, treat projected literals
 * not already standing as subgoals, and pick the action whose prediction hits
 * the most target literals, then the most subgoals. Ties and all-zero scores
 * resolve uniformly with rng.
 */
PlanDecision grp_decide(const PocGraph& g, const LiteralSet& current, const LiteralSet& t,
                        const std::vector<GeneralizedAction>& actions, const ContextTable& context,
                        std::mt19937_64& rng, const TraceHook* hook = nullptr, OpCounter* ops = nullptr);

} // namespace snapmem
