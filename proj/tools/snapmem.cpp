#include <snapmem/cubing.hpp>
#include <snapmem/errors.hpp>
#include <snapmem/harness.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace snapmem;

namespace {

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> runs, steps, sample_interval, jobs;
  std::string setting = "path";
  std::string agent;
  std::vector<double> sweep;
  std::string err_reference, err_scope;
  bool default_sweep = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool learning) {
  cmd->add_option("--config", f.config, "JSON experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Master seed (required here or in the config)");
  cmd->add_option("--out", f.out, "Output directory; CSV goes to stdout when omitted");
  cmd->add_option("--runs", f.runs, "Runs per parameter value");
  cmd->add_option("--steps", f.steps, "Cycles per run");
  cmd->add_option("--sample-interval", f.sample_interval, "Emit a row every k cycles");
  cmd->add_option("--jobs", f.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("--setting", f.setting, "path|cycle|grid|random|punctured-grid|rail")
      ->check(CLI::IsMember({"path", "cycle", "grid", "random", "punctured-grid", "rail"}));
  cmd->add_option("--agent", f.agent, "empirical|discounted|preloaded|both")
      ->check(CLI::IsMember({"empirical", "discounted", "preloaded", "both"}));
  if (learning) {
    cmd->add_option("--sweep", f.sweep, "tau values (empirical) or q values (discounted)")->delimiter(',');
    cmd->add_flag("--default-sweep", f.default_sweep, "Use the ten-value tau or q sweep");
    cmd->add_option("--err-reference", f.err_reference, "true|thresholded")->check(CLI::IsMember({"true", "thresholded"}));
    cmd->add_option("--err-scope", f.err_scope, "position|all")->check(CLI::IsMember({"position", "all"}));
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentSpec resolve(const RunFlags& f, bool learning) {
  ExperimentSpec s = learning ? learning_spec(f.setting) : navigation_spec(f.setting);
  if (!f.config.empty()) s = experiment_spec_from_json(slurp(f.config), s);
  if (f.seed) s.seed = f.seed;
  if (f.runs) s.runs = *f.runs;
  if (f.steps) s.steps = *f.steps;
  if (f.sample_interval) s.sample_interval = *f.sample_interval;
  if (f.jobs) s.jobs = *f.jobs;
  if (!f.agent.empty()) s.agent = f.agent;
  if (!f.sweep.empty()) s.sweep = f.sweep;
  if (f.default_sweep) s.sweep = s.agent == "discounted" ? default_q_sweep() : default_tau_sweep();
  if (!f.err_reference.empty()) s.err_reference = f.err_reference;
  if (!f.err_scope.empty()) s.err_scope = f.err_scope;
  return s;
}

template <class Run>
void emit(const RunFlags& f, const ExperimentSpec& s, const std::string& stem, Run run) {
  s.validate();
  if (f.out.empty()) {
    run(s, std::cout);
    return;
  }
  fs::create_directories(f.out);
  const fs::path path = fs::path(f.out) / (stem + "-" + s.setting + ".csv");
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path.string());
  try {
    run(s, os);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  std::cerr << "wrote " << path.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"snapshot memory agents: learning, navigation and dual cubings"};
  app.require_subcommand(1);

  RunFlags learn_flags, nav_flags;
  auto* learn = app.add_subcommand("learn", "Random-walk learning runs, Err(t) rows");
  add_run_flags(learn, learn_flags, true);
  auto* nav = app.add_subcommand("navigate", "Excitation-driven navigation runs, deviation rows");
  add_run_flags(nav, nav_flags, false);

  std::string pocset_path, format = "dot";
  std::size_t max_sensors = CubingOptions{}.max_sensors;
  auto* dual = app.add_subcommand("dual", "Print the dual cubing of a poc set");
  dual->add_option("--pocset", pocset_path, "JSON poc set {sensors, relations}")->required()->check(CLI::ExistingFile);
  dual->add_option("--format", format, "dot|json")->check(CLI::IsMember({"dot", "json"}));
  dual->add_option("--max-sensors", max_sensors, "Refuse quotients with more sensors");

  SelftestOptions st;
  auto* self = app.add_subcommand("selftest", "Oracle equivalence suites");
  self->add_option("--instances", st.instances, "Instances per suite");
  self->add_option("--seed", st.seed, "Seed");
  self->add_flag("--inject-nonstrict", st.inject_nonstrict, "Mutation check: non-strict thresholds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*learn) emit(learn_flags, resolve(learn_flags, true), "learn", run_learning);
    if (*nav) emit(nav_flags, resolve(nav_flags, false), "navigate", run_navigation);
    if (*dual) {
      const WeakPocSet p = pocset_from_json(slurp(pocset_path));
      const Quotient q = canonical_quotient(p);
      const Cubing c = Cubing::build(q.pocset, {max_sensors});
      std::cout << (format == "dot" ? c.to_dot() : c.to_json()) << "\n";
    }
    if (*self) {
      std::size_t failed = 0;
      for (const auto& r : selftest(st, std::cout)) failed += r.failed;
      return failed ? 1 : 0;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
