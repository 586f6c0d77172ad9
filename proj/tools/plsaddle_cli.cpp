// Command-line driver: runs experiment grids from a JSON config, evaluates
// the closed-form iteration bounds for a named problem, and checks declared
// constants against sampled evidence.
//
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 solver abort.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "plsaddle/plsaddle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverAbort = 3;

int run_command(const std::string& config_path, const std::string& format_override,
                const std::string& out_override, bool with_savings) {
  plsaddle::ExperimentConfig cfg = plsaddle::load_config_file(config_path);

  plsaddle::OutputSpec out;
  if (cfg.output) out = *cfg.output;
  if (!format_override.empty()) out.format = plsaddle::table_format_from_string(format_override);
  if (!out_override.empty()) out.path = out_override;

  const std::vector<plsaddle::ExperimentRow> rows = plsaddle::run_experiment(cfg);
  std::string rendered = plsaddle::emit_table(rows, out.format);
  if (with_savings && out.format == plsaddle::TableFormat::text)
    rendered += "\n" + plsaddle::render_savings(plsaddle::compare_savings(rows));

  if (out.path.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << out.path << "'\n";
      return kExitConfigError;
    }
    f << rendered;
  }

  for (const plsaddle::ExperimentRow& r : rows) {
    if (r.failed) {
      std::cerr << "error: row gamma=" << r.gamma << " strategy="
                << plsaddle::strategy_name(r.strategy) << " seed=" << r.seed
                << " aborted: " << r.error << "\n";
      return kExitSolverAbort;
    }
  }
  return kExitOk;
}

int bounds_command(const std::string& problem_name, double gamma, double C1, double C2,
                   const std::string& format) {
  const plsaddle::SaddleProblem problem = plsaddle::make_problem_by_name(problem_name);
  const plsaddle::BoundSet b = plsaddle::evaluate_bounds(problem.constants, gamma, C1, C2);

  if (format == "json") {
    nlohmann::json j{{"problem", problem.name},
                     {"gamma", b.gamma},
                     {"C1", b.C1},
                     {"C2", b.C2},
                     {"L", b.L},
                     {"thm1_inner", b.thm1_inner},
                     {"thm2_outer", b.thm2_outer},
                     {"thm3_outer", b.thm3_outer},
                     {"thm3_outer_table_variant", b.thm3_outer_table_variant},
                     {"epsilon", b.epsilon},
                     {"classical_k", b.classical_k},
                     {"classical_p", b.classical_p},
                     {"classical_total", b.classical_total},
                     {"classical_clamped", b.classical_clamped},
                     {"gap_guarantee", b.gap_guarantee},
                     {"arg_guarantee", b.arg_guarantee}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }

  std::printf("problem:                   %s\n", problem.name.c_str());
  std::printf("gamma:                     %.6g\n", b.gamma);
  std::printf("C1, C2:                    %.6g, %.6g\n", b.C1, b.C2);
  std::printf("L (outer smoothness):      %.6g\n", b.L);
  std::printf("inner cap p:               %lld\n", static_cast<long long>(b.thm1_inner));
  std::printf("outer cap (log-free):      %lld\n", static_cast<long long>(b.thm2_outer));
  std::printf("outer cap N*:              %lld\n", static_cast<long long>(b.thm3_outer));
  std::printf("outer cap N* (table form): %lld\n", static_cast<long long>(b.thm3_outer_table_variant));
  std::printf("epsilon (classical):       %.6g\n", b.epsilon);
  std::printf("classical k:               %lld%s\n", static_cast<long long>(b.classical_k),
              b.classical_clamped ? "  [clamped]" : "");
  std::printf("classical p:               %lld\n", static_cast<long long>(b.classical_p));
  std::printf("classical total k*p:       %lld\n", static_cast<long long>(b.classical_total));
  std::printf("gap guarantee:             %.6g\n", b.gap_guarantee);
  std::printf("argument guarantee:        %.6g\n", b.arg_guarantee);
  return kExitOk;
}

int validate_command(const std::string& problem_name, long long samples, double radius,
                     std::uint64_t seed) {
  const plsaddle::SaddleProblem problem = plsaddle::make_problem_by_name(problem_name);
  const std::vector<plsaddle::CheckReport> reports =
      plsaddle::run_all_checks(problem, samples, radius, seed);

  bool all_passed = true;
  for (const plsaddle::CheckReport& r : reports) {
    all_passed = all_passed && r.passed;
    const bool is_pl = r.check_name.rfind("pl_", 0) == 0;
    std::printf("[%s] %-15s worst_ratio=%-12.6g threshold=%-12.6g samples=%lld%s\n",
                r.passed ? "PASS" : "FAIL", r.check_name.c_str(), r.worst_ratio, r.threshold,
                static_cast<long long>(r.samples),
                r.passed && is_pl ? "  (not falsified)" : "");
    if (!r.passed) std::printf("       worst point: %s\n", r.worst_point.c_str());
  }
  return all_passed ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saddle-point solver with gradient-dominance early stopping"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment grid from a JSON config");
  std::string config_path;
  std::string format_override;
  std::string out_override;
  bool with_savings = false;
  run->add_option("--config", config_path, "Path to the experiment config")->required();
  run->add_option("--format", format_override, "Override the output format")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  run->add_option("--out", out_override, "Override the output path (default stdout)");
  run->add_flag("--savings", with_savings, "Append the savings report (text format only)");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form iteration bounds");
  std::string bounds_problem;
  double bounds_gamma = 0.0;
  double bounds_C1 = 100.0;
  double bounds_C2 = 100.0;
  std::string bounds_format = "text";
  bounds->add_option("--problem", bounds_problem, "Problem name")->required();
  bounds->add_option("--gamma", bounds_gamma, "Inner accuracy target")->required();
  bounds->add_option("--C1", bounds_C1, "Outer initial-gap bound");
  bounds->add_option("--C2", bounds_C2, "Inner initial-gap bound");
  bounds->add_option("--format", bounds_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* validate = app.add_subcommand("validate", "Check declared constants against samples");
  std::string validate_problem;
  long long validate_samples = 100;
  double validate_radius = 5.0;
  std::uint64_t validate_seed = 12345;
  validate->add_option("--problem", validate_problem, "Problem name")->required();
  validate->add_option("--samples", validate_samples, "Gradient check samples (pairs scale 10x)");
  validate->add_option("--radius", validate_radius, "Sampling box half-width");
  validate->add_option("--seed", validate_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(config_path, format_override, out_override, with_savings);
    if (bounds->parsed())
      return bounds_command(bounds_problem, bounds_gamma, bounds_C1, bounds_C2, bounds_format);
    if (validate->parsed())
      return validate_command(validate_problem, validate_samples, validate_radius, validate_seed);
  } catch (const plsaddle::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const plsaddle::SolverError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kExitSolverAbort;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
