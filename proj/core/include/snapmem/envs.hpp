#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <snapmem/bitset.hpp>
#include <snapmem/literal.hpp>

namespace snapmem {

/**
 * Finite deterministic world: positions, total transitions per atomic
 * action, and place fields (position subsets) for the position sensors.
 */
class Environment {
public:
  Environment(std::string kind, std::vector<std::string> position_labels, std::vector<std::string> actions,
              std::vector<std::vector<std::size_t>> transitions, std::vector<std::string> field_names,
              std::vector<Bitset> fields);

  const std::string& kind() const { return kind_; }
  std::size_t position_count() const { return labels_.size(); }
  const std::string& position_label(std::size_t x) const { return labels_.at(x); }
  std::size_t action_count() const { return actions_.size(); }
  const std::vector<std::string>& action_names() const { return actions_; }
  std::size_t transition(std::size_t x, std::size_t action) const { return transitions_[x][action]; }

  std::size_t field_count() const { return fields_.size(); }
  const std::vector<std::string>& field_names() const { return field_names_; }
  const Bitset& field(std::size_t i) const { return fields_[i]; }

  /** Hop distance in the undirected move graph. */
  std::size_t distance(std::size_t x, std::size_t y) const { return dist_[x * labels_.size() + y]; }

  const std::optional<std::size_t>& target() const { return target_; }
  void set_target(std::size_t x);
  std::size_t distance_to_target(std::size_t x) const;

  std::size_t position() const { return position_; }
  void set_position(std::size_t x);
  /** Applies an atomic action to the current position. */
  std::size_t act(std::size_t action);

  /** Every edge x->y under some action has a reverse edge y->x. */
  bool is_reversible() const;
  bool is_connected() const;

private:
  std::string kind_;
  std::vector<std::string> labels_;
  std::vector<std::string> actions_;
  std::vector<std::vector<std::size_t>> transitions_;
  std::vector<std::string> field_names_;
  std::vector<Bitset> fields_;
  std::vector<std::size_t> dist_;
  std::optional<std::size_t> target_;
  std::size_t position_ = 0;
};

struct EnvOptions {
  /** Adds an atomic "wait" action that keeps the position. */
  bool with_wait = false;
};

/** Positions 0..L, actions fwd/back clamped, sensors a_k on iff pos < k. */
Environment make_path(std::size_t edges = 20, EnvOptions options = {});
/** Positions Z_N, fwd/back modulo N, beacon fields U_i = {i-1, i, i+1}. */
Environment make_cycle(std::size_t n = 20, EnvOptions options = {});
/** Positions {0..w} x {0..h}, moves clamped, sensors x_i: xi < i and y_j: eta < j. */
Environment make_grid(std::size_t width = 10, std::size_t height = 10, EnvOptions options = {});
/** Path with L edges and L sensors whose fields are uniform random position subsets. */
Environment make_random_fields(std::size_t edges, std::mt19937_64& rng, EnvOptions options = {});
/** N x N grid minus one interior vertex; moves into it leave the agent in place. */
Environment make_punctured_grid(std::size_t n, std::pair<std::size_t, std::size_t> removed, EnvOptions options = {});
/** Circular rail: the cycle environment, meant for navigation (N >= 4). */
Environment make_circular_rail(std::size_t n = 20, EnvOptions options = {});

struct EnvSpec {
  std::string kind = "path";
  std::size_t size = 20;
  std::size_t width = 10;
  std::size_t height = 10;
  bool with_wait = false;
  std::optional<std::size_t> target;
  std::pair<std::size_t, std::size_t> removed{2, 2};
};

/** Default navigation target for a setting: the middle of the space. */
std::size_t default_target(const Environment& env);
/** Builds the environment named by spec.kind; rng draws random fields. */
Environment make_environment(const EnvSpec& spec, std::mt19937_64& rng);
EnvSpec env_spec_from_json(std::string_view text);
std::string env_spec_to_json(const EnvSpec& spec);

/** Transition matrix of the uniform-action random walk, row-major. */
std::vector<double> transition_matrix(const Environment& env);
bool is_doubly_stochastic(const Environment& env, double eps = 1e-12);
/** Stationary vector by lazy power iteration; residual below 1e-12. */
std::vector<double> stationary_distribution(const Environment& env);

/**
 * Square 0/1 matrix over the literals of a sensor list (two literals per
 * sensor, positive first). Entries within one sensor are always 0.
 */
class ImplicationMatrix {
public:
  ImplicationMatrix() = default;
  explicit ImplicationMatrix(std::size_t sensors) : sensors_(sensors), entries_(4 * sensors * sensors, 0) {}

  std::size_t sensors() const { return sensors_; }
  std::size_t literals() const { return 2 * sensors_; }
  bool at(std::size_t a, std::size_t b) const { return entries_[a * literals() + b]; }
  void set(std::size_t a, std::size_t b, bool v) { entries_[a * literals() + b] = v; }
  std::size_t count() const;

  friend bool operator==(const ImplicationMatrix&, const ImplicationMatrix&) = default;

private:
  std::size_t sensors_ = 0;
  std::vector<std::uint8_t> entries_;
};

/** L1 distance; throws InputError on a shape mismatch. */
std::size_t err(const ImplicationMatrix& learned, const ImplicationMatrix& reference);

struct GroundTruth {
  ImplicationMatrix dir_true;
  ImplicationMatrix dir_thresholded;
  double tau = 0;
};

/**
 * Containment matrices from footprints over weighted points. Points of zero
 * mass are ignored. The thresholded matrix uses
 * pi(ab*) < min(tau, pi(ab), pi(a*b), pi(a*b*)).
 */
GroundTruth ground_truth_from_footprints(const std::vector<Bitset>& footprints, const std::vector<double>& mass,
                                         double tau);

/** Ground truth for a subset of the environment's place fields under the stationary measure. */
GroundTruth ground_truth(const Environment& env, const std::vector<std::size_t>& sensor_subset, double tau = 0.0);

/** "a,b,value" rows for every ordered literal pair. */
std::string implication_csv(const ImplicationMatrix& m, const std::vector<std::string>& sensor_names);

} // namespace snapmem
