#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "plsaddle/outer_solver.hpp"
#include "plsaddle/validation.hpp"

namespace plsaddle {

/// Raised on malformed experiment configs; the message carries the location
/// (byte offset or key path) of the offending piece.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Problem registry
// ---------------------------------------------------------------------------

namespace detail {

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw ConfigError(where + ": expected {rows, cols, data} with data row-major");
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1 || !data.is_array() ||
      data.size() != static_cast<std::size_t>(rows * cols))
    throw ConfigError(where + ": data must hold rows*cols numbers");
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(idx++).get<double>();
  return m;
}

inline Vector vector_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

}  // namespace detail

// Fault-injection fixtures: deliberately wrong declarations used to verify
// that the validation checks actually catch them.
inline SaddleProblem make_fault_scaled_gradient() {
  SaddleProblem p = make_experiment_6d();
  p.name = "fault_scaled_gradient";
  auto base = p.grad_x;
  p.grad_x = [base](const Vector& x, const Vector& y) { return Vector(1.01 * base(x, y)); };
  return p;
}

inline SaddleProblem make_fault_inflated_mu2() {
  SaddleProblem p = make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
  p.name = "fault_inflated_mu2";
  p.constants.mu2 *= 100.0;
  return p;
}

inline SaddleProblem make_fault_understated_l22() {
  SaddleProblem p = make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
  p.name = "fault_understated_l22";
  p.constants.L22 *= 0.5;
  return p;
}

inline std::vector<std::string> builtin_problem_names() {
  return {"sin_quadratic_2d", "experiment_6d", "composed_quadratic_identity", "rls_small"};
}

/// Builds a problem from a config fragment {"name": ..., <params>}.
/// Parameterless registry names cover the built-ins and fault fixtures;
/// "composed_quadratic" and "rls" take explicit matrices (row-major).
inline SaddleProblem make_problem_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name") || !j.at("name").is_string())
    throw ConfigError("problem: expected an object with a string 'name'");
  const std::string name = j.at("name").get<std::string>();
  try {
    if (name == "sin_quadratic_2d")
      return make_sin_quadratic_2d(j.value("cross_lipschitz", 28.0));
    if (name == "experiment_6d")
      return make_experiment_6d(j.value("cross_lipschitz", 28.0));
    if (name == "composed_quadratic_identity")
      return make_composed_quadratic(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
    if (name == "rls_small") {
      Matrix A(3, 2);
      A << 1, 0, 0, 1, 1, 1;
      Vector diag(3);
      diag << 1.0, 0.5, 2.0;
      Vector y0(3);
      y0 << 1.0, -1.0, 0.5;
      return make_rls(A, Matrix(diag.asDiagonal()), y0, 2.0);
    }
    if (name == "composed_quadratic") {
      return make_composed_quadratic(detail::matrix_from_json(j.at("A"), "problem.A"),
                                     detail::matrix_from_json(j.at("B"), "problem.B"),
                                     j.at("strong_convexity").get<double>(),
                                     j.at("strong_concavity").get<double>());
    }
    if (name == "rls") {
      return make_rls(detail::matrix_from_json(j.at("A"), "problem.A"),
                      detail::matrix_from_json(j.at("M"), "problem.M"),
                      detail::vector_from_json(j.at("y0"), "problem.y0"),
                      j.at("lambda").get<double>());
    }
    if (name == "fault_scaled_gradient") return make_fault_scaled_gradient();
    if (name == "fault_inflated_mu2") return make_fault_inflated_mu2();
    if (name == "fault_understated_l22") return make_fault_understated_l22();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("problem '" + name + "': " + e.what());
  }
  throw ConfigError("problem: unknown name '" + name + "'");
}

inline SaddleProblem make_problem_by_name(const std::string& name) {
  return make_problem_from_json(nlohmann::json{{"name", name}});
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

enum class TableFormat { csv, json, text };

inline TableFormat table_format_from_string(const std::string& s) {
  if (s == "csv") return TableFormat::csv;
  if (s == "json") return TableFormat::json;
  if (s == "text") return TableFormat::text;
  throw ConfigError("format: expected one of csv|json|text, got '" + s + "'");
}

struct OutputSpec {
  std::string path;  // empty means stdout
  TableFormat format = TableFormat::csv;
};

struct ExperimentConfig {
  SaddleProblem problem;
  std::vector<double> gammas;
  std::vector<InitStrategy> strategies;
  std::vector<std::int64_t> seeds;
  double C1 = 100.0;
  double C2 = 100.0;
  double x0_box_radius = 5.0;
  double init_box_radius = 5.0;
  bool record_wall_time = false;
  std::optional<OutputSpec> output;
};

inline InitStrategy strategy_from_string(const std::string& s, const std::string& where) {
  if (s == "random") return InitStrategy::RandomY0;
  if (s == "warm") return InitStrategy::WarmStart;
  throw ConfigError(where + ": expected 'random' or 'warm', got '" + s + "'");
}

inline const char* strategy_name(InitStrategy s) {
  return s == InitStrategy::RandomY0 ? "random" : "warm";
}

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  static const std::vector<std::string> known = {
      "problem", "gammas",         "strategies",      "seeds",  "C1", "C2",
      "x0_box_radius", "init_box_radius", "record_wall_time", "output"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config: unknown key '" + key + "'");
  }
  for (const char* key : {"problem", "gammas", "strategies", "seeds"}) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing key '") + key + "'");
  }

  ExperimentConfig cfg;
  cfg.problem = make_problem_from_json(j.at("problem"));

  const auto& gammas = j.at("gammas");
  if (!gammas.is_array()) throw ConfigError("gammas: expected an array");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    double g;
    try {
      g = gammas.at(i).get<double>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("gammas[" + std::to_string(i) + "]: expected a number");
    }
    if (!(g > 0.0)) throw ConfigError("gammas[" + std::to_string(i) + "]: must be positive");
    cfg.gammas.push_back(g);
  }

  const auto& strategies = j.at("strategies");
  if (!strategies.is_array()) throw ConfigError("strategies: expected an array");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (!strategies.at(i).is_string())
      throw ConfigError("strategies[" + std::to_string(i) + "]: expected a string");
    cfg.strategies.push_back(strategy_from_string(strategies.at(i).get<std::string>(),
                                                  "strategies[" + std::to_string(i) + "]"));
  }

  const auto& seeds = j.at("seeds");
  if (!seeds.is_array()) throw ConfigError("seeds: expected an array");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds.at(i).is_number_integer())
      throw ConfigError("seeds[" + std::to_string(i) + "]: expected an integer");
    cfg.seeds.push_back(seeds.at(i).get<std::int64_t>());
  }

  cfg.C1 = j.value("C1", 100.0);
  cfg.C2 = j.value("C2", 100.0);
  cfg.x0_box_radius = j.value("x0_box_radius", 5.0);
  cfg.init_box_radius = j.value("init_box_radius", 5.0);
  cfg.record_wall_time = j.value("record_wall_time", false);
  if (!(cfg.C1 > 0.0 && cfg.C2 > 0.0)) throw ConfigError("C1/C2: must be positive");
  if (!(cfg.x0_box_radius > 0.0)) throw ConfigError("x0_box_radius: must be positive");
  if (!(cfg.init_box_radius > 0.0)) throw ConfigError("init_box_radius: must be positive");

  if (j.contains("output")) {
    const auto& out = j.at("output");
    if (!out.is_object()) throw ConfigError("output: expected an object");
    OutputSpec spec;
    spec.path = out.value("path", std::string());
    spec.format = table_format_from_string(out.value("format", std::string("csv")));
    cfg.output = std::move(spec);
  }
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Experiment rows
// ---------------------------------------------------------------------------

struct ExperimentRow {
  double gamma = 0.0;
  InitStrategy strategy = InitStrategy::RandomY0;
  std::int64_t seed = 0;
  double gap = std::numeric_limits<double>::quiet_NaN();
  Count N = 0;
  Count sum_p = 0;
  double avg_p = std::numeric_limits<double>::quiet_NaN();
  Count Nstar_thm3 = 0;
  Count Nstar_table_variant = 0;
  Count p_bound = 0;
  Count grad_evals = 0;
  std::int64_t wall_ms = 0;
  // Bookkeeping outside the emitted columns.
  bool failed = false;
  std::string error;
  double raw_value = std::numeric_limits<double>::quiet_NaN();
  OuterStop stop_reason = OuterStop::Rule1Met;
};

/// Per-row RNG seed derived from the grid coordinates, so rows are
/// reproducible independently of execution order.
inline std::uint64_t row_seed(double gamma, InitStrategy strategy, std::int64_t seed) {
  std::uint64_t h = 0x8BADF00DDEADBEEFULL;
  for (std::uint64_t v : {std::bit_cast<std::uint64_t>(gamma),
                          static_cast<std::uint64_t>(strategy),
                          static_cast<std::uint64_t>(seed)}) {
    h ^= v;
    h = splitmix64(h), h = splitmix64(h);
  }
  return h;
}

/// Runs the configured (gamma, strategy, seed) grid in grid order: gamma
/// outermost, then strategy, then seed. Each row draws x0 and y0 from its
/// own seeded boxes and solves with the early-stopping scheme; a solver
/// abort marks the row failed and the run continues. When the problem has no
/// known saddle value, gaps are reported relative to the best value seen.
inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<ExperimentRow> rows;
  const PLConstants& c = cfg.problem.constants;
  for (double gamma : cfg.gammas) {
    for (InitStrategy strategy : cfg.strategies) {
      for (std::int64_t seed : cfg.seeds) {
        ExperimentRow row;
        row.gamma = gamma;
        row.strategy = strategy;
        row.seed = seed;
        row.Nstar_thm3 = thm3_outer_bound(c, gamma, cfg.C1);
        row.Nstar_table_variant = thm3_outer_bound_table_variant(c, gamma, cfg.C1);
        row.p_bound = thm1_inner_bound(c, gamma, cfg.C2);

        std::mt19937_64 rng(row_seed(gamma, strategy, seed));
        const Vector x0 = sample_uniform(cfg.problem.dim_x, cfg.x0_box_radius, rng);
        const Vector y0 = sample_uniform(cfg.problem.dim_y, cfg.init_box_radius, rng);

        SolverConfig sc;
        sc.gamma = gamma;
        sc.C1 = cfg.C1;
        sc.C2 = cfg.C2;
        sc.init_strategy = strategy;
        sc.init_box_radius = cfg.init_box_radius;
        sc.seed = rng();
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const SaddleReport report = solve_saddle(cfg.problem, x0, y0, sc);
          const auto t1 = std::chrono::steady_clock::now();
          row.N = report.outer_iterations;
          row.sum_p = report.inner_iterations_total;
          row.avg_p = report.inner_iterations_mean;
          row.grad_evals = report.grad_evals_total;
          row.raw_value = report.final_value;
          if (report.final_gap) row.gap = *report.final_gap;
          row.stop_reason = report.stop_reason;
          if (cfg.record_wall_time)
            row.wall_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        } catch (const SolverError& e) {
          row.failed = true;
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }

  if (!cfg.problem.known_saddle) {
    double best = std::numeric_limits<double>::infinity();
    for (const ExperimentRow& r : rows)
      if (!r.failed && std::isfinite(r.raw_value)) best = std::min(best, r.raw_value);
    if (std::isfinite(best))
      for (ExperimentRow& r : rows)
        if (!r.failed) r.gap = r.raw_value - best;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Table emission
// ---------------------------------------------------------------------------

namespace detail {

// Canonical 6-significant-digit form used by the csv and text outputs.
inline std::string fmt_g(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "gamma,strategy,seed,gap,N,sum_p,avg_p,Nstar_thm3,Nstar_table_variant,p_bound,grad_evals,wall_ms";

inline nlohmann::json row_to_json(const ExperimentRow& r) {
  return nlohmann::json{{"gamma", r.gamma},
                        {"strategy", strategy_name(r.strategy)},
                        {"seed", r.seed},
                        {"gap", r.gap},
                        {"N", r.N},
                        {"sum_p", r.sum_p},
                        {"avg_p", r.avg_p},
                        {"Nstar_thm3", r.Nstar_thm3},
                        {"Nstar_table_variant", r.Nstar_table_variant},
                        {"p_bound", r.p_bound},
                        {"grad_evals", r.grad_evals},
                        {"wall_ms", r.wall_ms}};
}

inline std::vector<ExperimentRow> rows_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("rows: ") + e.what());
  }
  if (!j.is_array()) throw ConfigError("rows: expected a JSON array");
  std::vector<ExperimentRow> rows;
  for (const auto& item : j) {
    ExperimentRow r;
    r.gamma = item.at("gamma").get<double>();
    r.strategy = strategy_from_string(item.at("strategy").get<std::string>(), "rows.strategy");
    r.seed = item.at("seed").get<std::int64_t>();
    r.gap = item.at("gap").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                     : item.at("gap").get<double>();
    r.N = item.at("N").get<Count>();
    r.sum_p = item.at("sum_p").get<Count>();
    r.avg_p = item.at("avg_p").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                         : item.at("avg_p").get<double>();
    r.Nstar_thm3 = item.at("Nstar_thm3").get<Count>();
    r.Nstar_table_variant = item.at("Nstar_table_variant").get<Count>();
    r.p_bound = item.at("p_bound").get<Count>();
    r.grad_evals = item.at("grad_evals").get<Count>();
    r.wall_ms = item.at("wall_ms").get<std::int64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Renders rows as csv (pinned header, 6-significant-digit floats), as a
/// JSON array of objects with the same keys, or as an aligned text table.
inline std::string emit_table(const std::vector<ExperimentRow>& rows, TableFormat format) {
  if (format == TableFormat::csv) {
    std::string out = kCsvHeader;
    out += "\n";
    for (const ExperimentRow& r : rows) {
      out += detail::fmt_g(r.gamma);
      out += ",";
      out += strategy_name(r.strategy);
      out += ",";
      out += std::to_string(r.seed);
      out += ",";
      out += detail::fmt_g(r.gap);
      out += ",";
      out += std::to_string(r.N);
      out += ",";
      out += std::to_string(r.sum_p);
      out += ",";
      out += detail::fmt_g(r.avg_p);
      out += ",";
      out += std::to_string(r.Nstar_thm3);
      out += ",";
      out += std::to_string(r.Nstar_table_variant);
      out += ",";
      out += std::to_string(r.p_bound);
      out += ",";
      out += std::to_string(r.grad_evals);
      out += ",";
      out += std::to_string(r.wall_ms);
      out += "\n";
    }
    return out;
  }
  if (format == TableFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExperimentRow& r : rows) arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
  }

  // text: aligned columns plus a status column for failed rows
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"gamma", "strategy", "seed", "gap", "N", "sum_p", "avg_p", "Nstar_thm3",
                   "Nstar_table_variant", "p_bound", "grad_evals", "wall_ms", "status"});
  for (const ExperimentRow& r : rows) {
    cells.push_back({detail::fmt_g(r.gamma), strategy_name(r.strategy), std::to_string(r.seed),
                     detail::fmt_g(r.gap), std::to_string(r.N), std::to_string(r.sum_p),
                     detail::fmt_g(r.avg_p), std::to_string(r.Nstar_thm3),
                     std::to_string(r.Nstar_table_variant), std::to_string(r.p_bound),
                     std::to_string(r.grad_evals), std::to_string(r.wall_ms),
                     r.failed ? "FAILED: " + r.error : "ok"});
  }
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Savings report
// ---------------------------------------------------------------------------

/// Gradient-evaluation cost of running the full theoretical budget
/// (N* outer iterations, each paying p+1 evaluations) against what the
/// early-stopped run actually spent (N + sum p_k).
struct SavingsRow {
  double gamma = 0.0;
  InitStrategy strategy = InitStrategy::RandomY0;
  std::int64_t seed = 0;
  double practical_evals = 0.0;       // N + sum_p
  double ratio_table_variant = 0.0;   // Nstar_table_variant (p+1) / practical
  double ratio_thm3 = 0.0;            // Nstar_thm3 (p+1) / practical
};

struct SavingsReport {
  std::vector<SavingsRow> rows;
};

inline SavingsReport compare_savings(const std::vector<ExperimentRow>& rows) {
  SavingsReport report;
  for (const ExperimentRow& r : rows) {
    if (r.failed) continue;
    SavingsRow s;
    s.gamma = r.gamma;
    s.strategy = r.strategy;
    s.seed = r.seed;
    s.practical_evals = static_cast<double>(r.N) + static_cast<double>(r.sum_p);
    const double per_outer = static_cast<double>(r.p_bound) + 1.0;
    if (s.practical_evals == 0.0) {
      s.ratio_table_variant = std::numeric_limits<double>::infinity();
      s.ratio_thm3 = std::numeric_limits<double>::infinity();
    } else {
      s.ratio_table_variant =
          static_cast<double>(r.Nstar_table_variant) * per_outer / s.practical_evals;
      s.ratio_thm3 = static_cast<double>(r.Nstar_thm3) * per_outer / s.practical_evals;
    }
    report.rows.push_back(s);
  }
  return report;
}

inline std::string render_savings(const SavingsReport& report) {
  std::ostringstream os;
  os << "savings: theoretical evals N*(p+1) vs practical evals N + sum_p\n";
  for (const SavingsRow& s : report.rows) {
    os << "  gamma=" << detail::fmt_g(s.gamma) << " strategy=" << strategy_name(s.strategy)
       << " seed=" << s.seed;
    if (!std::isfinite(s.ratio_table_variant)) {
      os << "  ratio=inf (started at the optimum)\n";
      continue;
    }
    const auto order = static_cast<long long>(std::floor(std::log10(s.ratio_table_variant)));
    os << "  ratio_table=" << detail::fmt_g(s.ratio_table_variant) << " (~10^" << order << ")"
       << "  ratio_thm3=" << detail::fmt_g(s.ratio_thm3) << "\n";
  }
  return os.str();
}

}  // namespace plsaddle
