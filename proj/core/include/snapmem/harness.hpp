#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <snapmem/dba.hpp>

namespace snapmem {

inline constexpr const char* kCsvHeader = "setting,agent,param_index,param_value,run_id,t,metric,value";

/** One agent configuration inside a sweep. */
struct AgentVariant {
  std::string label;
  SnapshotKind kind = SnapshotKind::kEmpirical;
  bool preloaded = false;
  double tau = 0;
  double q = 1;
  double param_value = 0;
};

struct ExperimentSpec {
  std::string setting = "path";
  EnvSpec env;
  /** empirical | discounted | preloaded | both (empirical and discounted) */
  std::string agent = "empirical";
  /** tau values for empirical agents, q values for discounted ones; empty means one default value. */
  std::vector<double> sweep;
  double tau = 1.0 / 8000.0;
  double q = 1.0 - 1.0 / 64.0;
  std::size_t runs = 50;
  std::size_t steps = 8000;
  std::size_t sample_interval = 10;
  std::optional<std::uint64_t> seed;
  /** true | thresholded */
  std::string err_reference = "true";
  /** position | all */
  std::string err_scope = "position";
  bool with_context = false;
  std::size_t exploration_period = 5;
  /** Worker threads; 0 picks the hardware concurrency. */
  std::size_t jobs = 0;

  /** Throws InputError naming the first invalid field. */
  void validate() const;
  std::vector<AgentVariant> variants() const;
};

/** Ten thresholds spread linearly over [1/8000, 1/4]. */
std::vector<double> default_tau_sweep();
/** q = 1 - 2^-(k+2) for k = 0..9. */
std::vector<double> default_q_sweep();

/** Defaults for a learning run in the named setting. */
ExperimentSpec learning_spec(const std::string& setting);
/** Defaults for a navigation run: wait action, target, excitation agents. */
ExperimentSpec navigation_spec(const std::string& setting);
/** Overlays JSON fields onto base. */
ExperimentSpec experiment_spec_from_json(std::string_view text, ExperimentSpec base);

/** Independent rng stream for one (param, run) cell. */
std::uint64_t run_seed(std::uint64_t seed, std::size_t param_index, std::size_t run_id);

/** Random-walk learning runs; writes the CSV header and one row per sample. */
void run_learning(const ExperimentSpec& spec, std::ostream& csv);
/** Excitation-driven navigation runs; deviation rows start at t = 0. */
void run_navigation(const ExperimentSpec& spec, std::ostream& csv);

struct SelftestOptions {
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  /** Mutation check: derive graphs with a non-strict comparison. */
  bool inject_nonstrict = false;
};

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
};

/** Oracle suites; prints one line per suite to log. */
std::vector<SuiteResult> selftest(const SelftestOptions& options, std::ostream& log);

} // namespace snapmem
