#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <snapmem/ops.hpp>
#include <snapmem/poc_graph.hpp>

namespace snapmem {

enum class SnapshotKind { kEmpirical, kDiscounted };

const char* to_string(SnapshotKind k);

struct DeriveOptions {
  /** Add both directions for every pair with w_ab* = w_a*b = 0. */
  bool equivalences = true;
  /** Verify the triangle inequality before adding equivalences (cubic). */
  bool check_triangle = false;
  /** Strict comparison in the virtual implication test. */
  bool strict = true;
};

/** Weights below this are treated as zero when detecting equivalences. */
inline constexpr double kEquivalenceEpsilon = 1e-12;

/**
 * Pairwise co-occurrence record over the proper literals of a sensorium,
 * with per-orbit learning thresholds and a coherent state.
 *
 * Weights are symmetric and defined for literals of distinct sensors.
 * Empirical snapshots keep integer counts; discounted ones keep reals.
 */
class Snapshot {
public:
  static Snapshot trivial(Sensorium sensorium, double tau, SnapshotKind kind = SnapshotKind::kEmpirical,
                          double q = 1.0, DeriveOptions options = {});

  const Sensorium& sensorium() const { return sensorium_; }
  SnapshotKind kind() const { return kind_; }
  double q() const { return q_; }
  const DeriveOptions& options() const { return options_; }
  void set_options(DeriveOptions o) { options_ = o; }

  double weight(Literal a, Literal b) const;
  /** Integer weight of an empirical snapshot. */
  std::int64_t count(Literal a, Literal b) const;
  /** Sets w_ab = w_ba; empirical snapshots require a non-negative integer. */
  void set_weight(Literal a, Literal b, double w);
  /** w_a = w_ab + w_ab* for some b of another sensor, or 0 without one. */
  double row_weight(Literal a) const;

  double threshold(Literal a, Literal b) const { return tau_[sensor_of(a) * sensorium_.size() + sensor_of(b)]; }
  /** Sets the threshold of the orbit of sensors i, j; must lie in [0, 1/4]. */
  void set_threshold(std::size_t i, std::size_t j, double tau);

  /** Number of updates (empirical) or accumulated mass (discounted). */
  double clock() const { return clock_; }
  void set_clock(double c) { clock_ = c; }

  const LiteralSet& state() const { return state_; }
  void set_state(LiteralSet s);
  /** Derived graph at the last update (with equivalences per options). */
  const PocGraph& graph() const { return graph_; }
  void refresh_graph(OpCounter* ops = nullptr);

  /** Empirical or discounted update by a complete selection, in place. */
  void update(const LiteralSet& observation, OpCounter* ops = nullptr);
  void truncate_in_place();

  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.sensorium_ == b.sensorium_ && a.kind_ == b.kind_ && a.q_ == b.q_ && a.counts_ == b.counts_ &&
           a.reals_ == b.reals_ && a.tau_ == b.tau_ && a.clock_ == b.clock_ && a.state_ == b.state_;
  }

private:
  std::size_t idx(Literal a, Literal b) const { return a * sensorium_.proper_count() + b; }
  void check_pair(Literal a, Literal b) const;

  Sensorium sensorium_;
  SnapshotKind kind_ = SnapshotKind::kEmpirical;
  double q_ = 1.0;
  DeriveOptions options_;
  std::vector<std::int64_t> counts_;
  std::vector<double> reals_;
  std::vector<double> tau_;
  double clock_ = 0;
  LiteralSet state_;
  PocGraph graph_;

  friend PocGraph derive_poc_graph(const Snapshot&, DeriveOptions, OpCounter*);
};

Snapshot trivial(Sensorium sensorium, double tau, SnapshotKind kind = SnapshotKind::kEmpirical, double q = 1.0);
Snapshot empirical_update(Snapshot s, const LiteralSet& observation);
Snapshot discounted_update(Snapshot s, const LiteralSet& observation, double q);
Snapshot truncate(Snapshot s);
/**
 * Probabilistic snapshot of a measure on complete selections: w_ab is the
 * mass of the points holding both a and b. Masses should sum to 1.
 */
Snapshot snapshot_from_measure(const Sensorium& sensorium, const std::vector<LiteralSet>& points,
                               const std::vector<double>& mass, double tau);
/** Empirical weights divided by the clock, as a discounted-kind snapshot. */
Snapshot normalized(const Snapshot& s);

struct CheckReport {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
};

/** Consistency, normalization, orientation and state coherence, within eps. */
CheckReport is_probabilistic(const Snapshot& s, double eps = 1e-9);
/** ori_ab = w_a*b - w_ab*, with w_aa = w_a and w_aa* = 0. */
double orientation_cocycle(const Snapshot& s, Literal a, Literal b);

/**
 * Virtual implication graph: ab iff w_ab* < min(tau (times clock when
 * empirical), w_ab, w_a*b, w_a*b*). Equivalences only when requested.
 */
PocGraph derive_poc_graph(const Snapshot& s, DeriveOptions options = {.equivalences = false},
                          OpCounter* ops = nullptr);

struct TriangleReport {
  bool ok = true;
  Literal a = 0, b = 0, c = 0;
  explicit operator bool() const { return ok; }
};

/** Delta_ac <= Delta_ab + Delta_bc for all proper triples, Delta_ab = w_a*b + w_ab*. */
TriangleReport check_triangle(const Snapshot& s, double eps = 1e-9);

/** Adds ab, ba (and contrapositives) for every zero pair; refuses on a triangle violation. */
PocGraph extend_with_equivalences(const Snapshot& s, PocGraph g, bool verify_triangle = true);

CheckReport is_empirical(const Snapshot& s);

/**
 * One step back along an evolution from the trivial snapshot: a predecessor
 * and the observation O with s = O * predecessor. nullopt for the trivial
 * snapshot. Throws ContractError when s is not an evolution or the search
 * budget runs out.
 */
std::optional<std::pair<Snapshot, LiteralSet>> decompose_evolution(const Snapshot& s,
                                                                  std::size_t node_budget = 1'000'000);

std::string snapshot_to_json(const Snapshot& s);
Snapshot snapshot_from_json(std::string_view text);

} // namespace snapmem
