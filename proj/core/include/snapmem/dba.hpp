#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <snapmem/envs.hpp>
#include <snapmem/propagation.hpp>
#include <snapmem/snapshot.hpp>

namespace snapmem {

/**
 * Agent sensorium over an environment: position sensors (degree 0), one
 * sensor per atomic action, optional better/worse gradient sensors and
 * optional contextualized action sensors "act&U" / "act&!U" (degree 1).
 */
struct SensorLayout {
  Sensorium sensorium;
  std::vector<std::size_t> loc;
  std::vector<std::size_t> action;
  std::optional<std::size_t> better;
  std::optional<std::size_t> worse;
  /** context[action][field][0 for U, 1 for not U] -> sensor */
  std::vector<std::vector<std::array<std::size_t, 2>>> context;
  ContextTable table;
  /** One generalized action per atomic action. */
  std::vector<GeneralizedAction> pure_actions;
  /** All action literals starred. */
  GeneralizedAction no_action;
};

SensorLayout build_sensorium(const Environment& env, bool with_context, bool with_gradient = false);

/** Generalized actions an agent may choose: pure actions, plus no-action on request. */
std::vector<GeneralizedAction> admissible_actions(const SensorLayout& layout, bool include_no_action);

/** The transition that produced the current position. */
struct LastTransition {
  std::size_t action;
  std::size_t from;
};

/**
 * Complete observation at the env's current position. Context literals read
 * the previous snapshot state; without a previous transition every action,
 * gradient and context sensor reads off.
 */
LiteralSet observe(const SensorLayout& layout, const Environment& env, const LiteralSet& previous_state,
                   const std::optional<LastTransition>& last);

enum class ControllerKind { kRandom, kExcitation };

struct AgentConfig {
  SnapshotKind kind = SnapshotKind::kEmpirical;
  double tau = 1.0 / 8000.0;
  double q = 1.0 - 1.0 / 64.0;
  ControllerKind controller = ControllerKind::kRandom;
  bool with_context = true;
  bool with_gradient = false;
  bool equivalences = true;
  /** Every k-th consecutive planning failure takes a random action; 0 disables. */
  std::size_t exploration_period = 5;
  std::uint64_t seed = 0;
};

struct CycleRecord {
  std::size_t t = 0;
  LiteralSet observation;
  LiteralSet state;
  std::size_t decision = 0;
  /** No action was predicted to produce the primary target. */
  bool fallback = false;
  bool exploratory = false;
  double clock = 0;
  std::size_t position = 0;
};

class Agent {
public:
  /** A preloaded graph freezes learning: states come from propagation over it. */
  Agent(const Environment& env, AgentConfig config, std::optional<PocGraph> preloaded = std::nullopt);

  /** Observe, update, decide, act. */
  CycleRecord step(Environment& env, OpCounter* ops = nullptr);

  const AgentConfig& config() const { return config_; }
  const SensorLayout& layout() const { return layout_; }
  const Snapshot& snapshot() const { return snapshot_; }
  const PocGraph& graph() const { return preloaded_ ? *preloaded_ : snapshot_.graph(); }
  const LiteralSet& state() const { return state_; }
  std::size_t time() const { return t_; }
  std::mt19937_64& rng() { return rng_; }
  void set_trace(TraceHook hook) { trace_ = std::move(hook); }

  /** Excitation-driven decision from the current state. */
  PlanDecision excitation_policy(OpCounter* ops = nullptr);

private:
  AgentConfig config_;
  SensorLayout layout_;
  Snapshot snapshot_;
  std::optional<PocGraph> preloaded_;
  LiteralSet state_;
  std::optional<LastTransition> last_;
  std::mt19937_64 rng_;
  std::size_t t_ = 0;
  std::size_t consecutive_fallbacks_ = 0;
  bool last_exploratory_ = false;
  TraceHook trace_;
};

/**
 * Footprints of every sensor over events (x, action) with mass pi(x)/|A|,
 * assuming a complete previous state at x.
 */
struct EventModel {
  std::vector<Bitset> footprints;
  std::vector<double> mass;
};
EventModel event_model(const Environment& env, const SensorLayout& layout);

/** Exact containment graph of the event model, skipping empty and full footprints. */
PocGraph ground_truth_graph(const Environment& env, const SensorLayout& layout);

/** Learned edges of g restricted to a sensor subset, in ImplicationMatrix indexing. */
ImplicationMatrix learned_matrix(const PocGraph& g, const std::vector<std::size_t>& sensors);

std::string agent_config_to_json(const AgentConfig& c);
AgentConfig agent_config_from_json(std::string_view text);
/** One JSON object per line describing a cycle. */
std::string cycle_record_jsonl(const SensorLayout& layout, const CycleRecord& r);

} // namespace snapmem
