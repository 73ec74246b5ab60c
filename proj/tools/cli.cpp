#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "proxframe/errors.hpp"
#include "proxframe/frame_shrinkage.hpp"
#include "proxframe/matrix_io.hpp"
#include "proxframe/operator_core.hpp"
#include "proxframe/prox_ops.hpp"
#include "proxframe/sampling.hpp"
#include "proxframe/solvers.hpp"

namespace proxframe::cli {
namespace {

using nlohmann::json;

constexpr double kIdentityTol = 1e-10;
constexpr double kFirmTol = 1e-12;
constexpr double kMoreauTol = 1e-6;
constexpr double kProxIdentityTol = 1e-6;
constexpr double kWeakerTol = 1e-9;

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || v < 1) throw Error(ErrorKind::InvalidInput, "bad " + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidInput, "bad " + what + ": '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

Vector parse_vector(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty()) throw Error(ErrorKind::InvalidInput, "empty vector");
  Vector v(static_cast<Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Index>(i)) = parse_real(parts[i], "vector entry");
  return v;
}

bool is_example35(const Matrix& m, const ProxMap& prox) {
  return m.rows() == 2 && m.cols() == 1 && m == example_operator_matrix() &&
         prox.name == "soft_shrink" && prox.lambda == 1.0;
}

/// Grid lo:hi:step; points are lo + k·step rounded to 12 decimals.
std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw Error(ErrorKind::InvalidInput, "grid must be lo:hi:step");
  const double lo = parse_real(parts[0], "grid start");
  const double hi = parse_real(parts[1], "grid end");
  const double step = parse_real(parts[2], "grid step");
  if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::InvalidInput, "grid needs step > 0 and lo <= hi");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw Error(ErrorKind::InvalidInput, "grid too large");
  std::vector<double> xs;
  xs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    xs.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12 + 0.0);
  }
  return xs;
}

ProxMap load_prox(const RunConfig& cfg, bool prox_given) {
  if (!prox_given && !cfg.operator_spec.empty()) {
    std::ifstream in(cfg.operator_spec);
    if (in && cfg.operator_spec.find(".csv") == std::string::npos) {
      json j;
      try {
        in >> j;
      } catch (const json::exception&) {
        return parse_prox(cfg.prox_spec);  // load_matrix reports the parse error
      }
      if (j.is_object() && j.contains("prox")) {
        const auto& p = j.at("prox");
        if (!p.is_object() || !p.contains("name") || !p.at("name").is_string()) {
          throw Error(ErrorKind::InvalidInput, "prox must be {\"name\": str, \"lambda\": float}");
        }
        std::string spec = p.at("name").get<std::string>();
        if (p.contains("lambda")) {
          if (!p.at("lambda").is_number()) throw Error(ErrorKind::InvalidInput, "lambda must be a number");
          spec += ":" + format_double(p.at("lambda").get<double>());
        }
        return parse_prox(spec);
      }
    }
  }
  return parse_prox(cfg.prox_spec);
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

int cmd_verify(const RunConfig& cfg, bool prox_given, std::ostream& out) {
  const Matrix m = resolve_operator(cfg.operator_spec);
  const ProxMap prox = load_prox(cfg, prox_given);
  const OperatorPtr op = build_operator(m);
  const FrameShrinkage fs(op, prox);
  const double prox_tol = cfg.tol.value_or(kProxIdentityTol);

  std::vector<VerifyReport> reports;
  reports.push_back(verify_operator_identities(*op, kIdentityTol, cfg.seed));
  reports.push_back(verify_firm_nonexpansive(prox, op->rows(), cfg.trials, kFirmTol, cfg.seed));
  if (prox.potential) {
    reports.push_back(verify_moreau_characterization(prox, prox.potential, op->rows(), cfg.trials,
                                                     kMoreauTol, cfg.seed));
  }
  reports.push_back(verify_t_firm_nonexpansive(fs, cfg.trials, kFirmTol, cfg.seed));
  if (prox.function && prox.scaled) {
    const InducedRegularizer reg(fs);
    reports.push_back(verify_prox_identity(fs, reg, cfg.trials, prox_tol, cfg.seed));
    reports.push_back(weaker_regularizer_check(reg, cfg.trials, kWeakerTol, cfg.seed));
  }

  bool all = true;
  for (const auto& r : reports) {
    emit(out, to_json(r));
    all = all && r.pass;
  }
  return all ? kOk : kVerificationFailed;
}

int cmd_regularizer(const RunConfig& cfg, bool prox_given, std::ostream& out) {
  const std::vector<double> grid = parse_grid(cfg.grid);
  const Matrix m = resolve_operator(cfg.operator_spec);
  const ProxMap prox = load_prox(cfg, prox_given);
  const FrameShrinkage fs(build_operator(m), prox);
  const InducedRegularizer reg(fs);
  const bool closed = is_example35(m, prox);
  const Vector direction = Vector::Ones(fs.dim()) / std::sqrt(static_cast<double>(fs.dim()));
  const double tol = cfg.tol.value_or(kRegularizerTol);

  const bool csv = cfg.format == "csv";
  if (csv) out << (closed ? "x,f_numeric,f_closed_form,branch\n" : "x,f_numeric\n");
  for (double x : grid) {
    const double f = induced_regularizer(reg, x * direction, tol);
    std::string branch;
    if (closed) {
      branch = std::abs(std::abs(x) - 0.4) <= 1e-12 ? "breakpoint"
               : std::abs(x) < 0.4                  ? "quadratic"
                                                    : "linear";
    }
    if (csv) {
      out << format_double(x) << ',' << format_double(f);
      if (closed) out << ',' << format_double(example_regularizer_closed_form(x)) << ',' << branch;
      out << '\n';
    } else {
      json row{{"x", x}, {"f_numeric", f}};
      if (closed) {
        row["f_closed_form"] = example_regularizer_closed_form(x);
        row["branch"] = branch;
      }
      emit(out, row);
    }
  }
  return kOk;
}

int cmd_example(const RunConfig& cfg, std::ostream& out) {
  const ProxMap soft = parse_prox(cfg.prox_spec);
  if (soft.name != "soft_shrink") throw Error(ErrorKind::InvalidInput, "example needs a soft prox");
  const double lambda = soft.lambda;
  const bool csv = cfg.format == "csv";

  if (csv) out << "# soft shrinkage, lambda=" << format_double(lambda) << "\nx,soft_shrink,huber,potential\n";
  for (int k = -12; k <= 12; ++k) {
    const double x = 0.25 * k;
    const Vector v = Vector::Constant(1, x);
    const double s = soft_shrink(v, lambda)(0);
    const double h = huber_envelope(v, lambda);
    const double p = shrink_potential(v, lambda);
    if (csv) {
      out << format_double(x) << ',' << format_double(s) << ',' << format_double(h) << ','
          << format_double(p) << '\n';
    } else {
      emit(out, {{"table", "soft_shrinkage"}, {"lambda", lambda}, {"x", x}, {"soft_shrink", s},
                 {"huber", h}, {"potential", p}});
    }
  }

  const FrameShrinkage fs(build_operator(example_operator_matrix()), soft_shrink_map(1.0));
  const InducedRegularizer reg(fs);
  if (csv) out << "# T=(1,2)^T, lambda=1\ny,frame_prox,f_numeric,f_closed_form\n";
  for (int k = -8; k <= 8; ++k) {
    const double y = 0.25 * k;
    const Vector v = Vector::Constant(1, y);
    const double fp = frame_prox(fs, v)(0);
    const double f = induced_regularizer(reg, v);
    const double fc = example_regularizer_closed_form(y);
    if (csv) {
      out << format_double(y) << ',' << format_double(fp) << ',' << format_double(f) << ','
          << format_double(fc) << '\n';
    } else {
      emit(out, {{"table", "example35"}, {"y", y}, {"frame_prox", fp}, {"f_numeric", f},
                 {"f_closed_form", fc}});
    }
  }
  return kOk;
}

struct LoadedProblem {
  Matrix op;
  Vector x;
  std::optional<double> lambda;
};

LoadedProblem load_problem(const RunConfig& cfg) {
  LoadedProblem p;
  if (!cfg.problem_path.empty()) {
    std::ifstream in(cfg.problem_path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + cfg.problem_path + "'");
    json j;
    try {
      in >> j;
      p.op = matrix_from_json(j.at("operator"));
      const auto xs = j.at("x").get<std::vector<double>>();
      p.x = Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size()));
      if (j.contains("lambda")) p.lambda = j.at("lambda").get<double>();
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidInput, std::string("problem file: ") + e.what());
    }
  } else {
    p.op = resolve_operator(cfg.operator_spec);
    if (cfg.x_values.empty()) throw Error(ErrorKind::InvalidInput, "solve needs --x or --problem");
    p.x = parse_vector(cfg.x_values);
  }
  if (p.op.cols() != p.x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "x must have one entry per operator column");
  }
  return p;
}

int cmd_solve(const RunConfig& cfg, bool prox_given, std::ostream& out) {
  const LoadedProblem p = load_problem(cfg);
  ProxMap prox = load_prox(cfg, prox_given);
  if (p.lambda && !prox_given) prox = soft_shrink_map(*p.lambda);

  SolveReport report;
  if (cfg.method == "analysis" || cfg.method == "synthesis") {
    if (prox.name != "soft_shrink") throw Error(ErrorKind::InvalidInput, cfg.method + " needs a soft prox");
    const AnalysisProblem problem{p.x, p.op, prox.lambda};
    if (cfg.method == "analysis") {
      report = solve_analysis_dual(problem, cfg.tol.value_or(1e-12));
    } else {
      report.minimizer = synthesis_solution(p.x, p.op, prox.lambda);
      report.objective = analysis_objective(problem, report.minimizer);
      report.converged = true;
    }
  } else if (cfg.method == "tprox" || cfg.method == "frame") {
    const FrameShrinkage fs(build_operator(p.op), prox);
    const InducedRegularizer reg(fs);
    if (cfg.method == "tprox") {
      SolverOptions options;
      if (cfg.tol) options.tol = *cfg.tol;
      const TMetric& metric = fs.metric();
      report = numeric_prox(reg.as_term(), p.x, &metric, options);
    } else {
      report.minimizer = frame_prox(fs, p.x);
      report.objective = 0.5 * fs.metric().squared_norm(p.x - report.minimizer) +
                         induced_regularizer(reg, report.minimizer);
      report.converged = true;
    }
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown method '" + cfg.method + "'");
  }
  emit(out, to_json(report));
  return report.converged ? kOk : kVerificationFailed;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  const ProxMap prox = parse_prox(cfg.prox_spec);
  const std::size_t reps = std::max<std::size_t>(1, std::min<std::size_t>(cfg.trials, 1000));
  const std::pair<Index, Index> sizes[] = {{20, 10}, {100, 50}, {400, 200}};

  for (const auto& [n, d] : sizes) {
    auto rng = trial_engine(cfg.seed, static_cast<std::uint64_t>(n));
    const Matrix m = random_conditioned(n, d, 10.0, rng);
    const Vector x = gaussian_vector(d, rng);

    const auto time = [&](const std::string& name, std::size_t count, const std::function<void()>& fn) {
      const auto start = clock::now();
      for (std::size_t i = 0; i < count; ++i) fn();
      const std::chrono::duration<double> elapsed = clock::now() - start;
      emit(out, {{"name", name}, {"n", n}, {"d", d}, {"reps", count},
                 {"seconds_per_call", elapsed.count() / static_cast<double>(count)}});
    };

    OperatorPtr op;
    time("build_operator", 1, [&] { op = build_operator(m); });
    const FrameShrinkage fs(op, prox);
    time("frame_prox", reps, [&] { (void)frame_prox(fs, x); });
    if (prox.function && prox.scaled) {
      const InducedRegularizer reg(fs);
      time("induced_regularizer", std::min<std::size_t>(reps, 10),
           [&] { (void)evaluate_regularizer(reg, x); });
      const TMetric& metric = fs.metric();
      time("numeric_prox", std::min<std::size_t>(reps, 10),
           [&] { (void)numeric_prox(reg.as_term(), x, &metric); });
    }
    if (prox.name == "soft_shrink") {
      const AnalysisProblem problem{x, m, prox.lambda};
      time("solve_analysis_dual", std::min<std::size_t>(reps, 10),
           [&] { (void)solve_analysis_dual(problem, 1e-10, 100000); });
    }
  }
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--operator", cfg.operator_spec,
                  "example35 | identity:d | random:nxd:seed | path to .csv/.json");
  sub->add_option("--prox", cfg.prox_spec, "soft:LAMBDA | ridge:LAMBDA | identity | nonneg");
  sub->add_option("--tol", cfg.tol, "tolerance override")->check(CLI::PositiveNumber);
  sub->add_option("--trials", cfg.trials, "sampled trials per check")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--out", cfg.out_path, "write output to this file");
  sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

Matrix resolve_operator(const std::string& spec) {
  if (spec == "example35") return example_operator_matrix();
  if (spec.rfind("identity:", 0) == 0) {
    const auto d = static_cast<Index>(parse_count(spec.substr(9), "identity dimension"));
    return Matrix::Identity(d, d);
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto parts = split(spec.substr(7), ':');
    if (parts.size() != 2) throw Error(ErrorKind::InvalidInput, "expected random:nxd:seed");
    const auto dims = split(parts[0], 'x');
    if (dims.size() != 2) throw Error(ErrorKind::InvalidInput, "expected random:nxd:seed");
    const auto n = static_cast<Index>(parse_count(dims[0], "rows"));
    const auto d = static_cast<Index>(parse_count(dims[1], "cols"));
    std::uint64_t seed = 0;
    try {
      std::size_t pos = 0;
      seed = std::stoull(parts[1], &pos);
      if (pos != parts[1].size()) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad seed in '" + spec + "'");
    }
    auto rng = trial_engine(seed, 0);
    Matrix m(n, d);
    for (Index j = 0; j < d; ++j) m.col(j) = gaussian_vector(n, rng);
    return m;
  }
  return load_matrix(spec);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame shrinkage as a proximity operator: verification and evaluation", "proxframe"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* verify = app.add_subcommand("verify", "run the property verification suite");
  auto* example = app.add_subcommand("example", "print the soft-shrinkage and (1,2)ᵀ tables");
  auto* regularizer = app.add_subcommand("regularizer", "evaluate the induced regularizer on a grid");
  auto* solve = app.add_subcommand("solve", "solve one problem instance");
  auto* bench = app.add_subcommand("bench", "time the main operations");
  for (auto* sub : {verify, example, regularizer, solve, bench}) add_common(sub, cfg);
  regularizer->add_option("--grid", cfg.grid, "lo:hi:step");
  solve->add_option("--method", cfg.method, "analysis | synthesis | tprox | frame");
  solve->add_option("--x", cfg.x_values, "comma-separated data vector");
  solve->add_option("--problem", cfg.problem_path,
                    "JSON {\"operator\": matrix, \"x\": [...], \"lambda\": float}");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot write '" << cfg.out_path << "'\n";
      return kUsageError;
    }
    sink = &file;
  }

  auto* active = app.get_subcommands().front();
  cfg.command = active->get_name();
  const bool prox_given = active->count("--prox") > 0;
  try {
    if (cfg.command == "verify") return cmd_verify(cfg, prox_given, *sink);
    if (cfg.command == "example") return cmd_example(cfg, *sink);
    if (cfg.command == "regularizer") return cmd_regularizer(cfg, prox_given, *sink);
    if (cfg.command == "solve") return cmd_solve(cfg, prox_given, *sink);
    return cmd_bench(cfg, *sink);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::NotConverged ? kVerificationFailed : kUsageError;
  }
}

}  // namespace proxframe::cli
