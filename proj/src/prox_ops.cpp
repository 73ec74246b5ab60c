#include "proxframe/prox_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "proxframe/errors.hpp"
#include "proxframe/sampling.hpp"

namespace proxframe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lambda(double lambda) {
  if (!(lambda > 0.0)) {
    std::ostringstream msg;
    msg << "lambda must be positive, got " << lambda;
    throw Error(ErrorKind::NonPositiveLambda, msg.str());
  }
}

double shrink_scalar(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// min_y ½(v − y)² + λ|y|; λ times the classical Huber function, so the
// gradient is v − S_λ(v) for every λ.
double huber_scalar(double v, double lambda) {
  if (v > lambda) return lambda * (v - 0.5 * lambda);
  if (v < -lambda) return lambda * (-v - 0.5 * lambda);
  return 0.5 * v * v;
}

double potential_scalar(double v, double lambda) {
  if (v > lambda) return 0.5 * (v - lambda) * (v - lambda);
  if (v < -lambda) return 0.5 * (v + lambda) * (v + lambda);
  return 0.0;
}

bool near_breakpoint(double v, double h, const std::vector<double>& breakpoints) {
  return std::any_of(breakpoints.begin(), breakpoints.end(),
                     [&](double b) { return std::abs(v - b) < 10.0 * h; });
}

}  // namespace

ProxableFunction prox_function(const ProxMap& map) {
  if (!map.function || !map.scaled) {
    throw Error(ErrorKind::InvalidInput,
                "prox '" + map.name + "' has no closed-form function/scaled prox");
  }
  return {map.name, map.function, map.scaled};
}

Vector soft_shrink(const Vector& x, double lambda) {
  require_lambda(lambda);
  return x.unaryExpr([lambda](double v) { return shrink_scalar(v, lambda); });
}

double huber_envelope(const Vector& x, double lambda) {
  require_lambda(lambda);
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += huber_scalar(x(i), lambda);
  return sum;
}

double shrink_potential(const Vector& x, double lambda) {
  require_lambda(lambda);
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += potential_scalar(x(i), lambda);
  return sum;
}

Vector prox_residual(const ProxMap& map, const Vector& x) {
  if (map.residual) return map.residual(x);
  return map.eval(x) - x;
}

ProxMap soft_shrink_map(double lambda) {
  require_lambda(lambda);
  ProxMap m;
  m.name = "soft_shrink";
  m.lambda = lambda;
  m.eval = [lambda](const Vector& x) { return soft_shrink(x, lambda); };
  m.scaled = [lambda](const Vector& v, double tau) { return soft_shrink(v, tau * lambda); };
  m.function = [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); };
  m.envelope = [lambda](const Vector& x) { return huber_envelope(x, lambda); };
  m.residual = [lambda](const Vector& x) -> Vector { return -x.cwiseMax(-lambda).cwiseMin(lambda); };
  m.potential = [lambda](const Vector& x) { return shrink_potential(x, lambda); };
  m.breakpoints = {-lambda, lambda};
  return m;
}

ProxMap identity_map() {
  ProxMap m;
  m.name = "identity";
  m.lambda = 1.0;
  m.eval = [](const Vector& x) { return x; };
  m.scaled = [](const Vector& v, double) { return v; };
  m.function = [](const Vector&) { return 0.0; };
  m.envelope = [](const Vector&) { return 0.0; };
  m.potential = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  m.residual = [](const Vector& x) -> Vector { return Vector::Zero(x.size()); };
  return m;
}

ProxMap ridge_map(double lambda) {
  require_lambda(lambda);
  ProxMap m;
  m.name = "ridge";
  m.lambda = lambda;
  m.eval = [lambda](const Vector& x) -> Vector { return x / (1.0 + lambda); };
  m.scaled = [lambda](const Vector& v, double tau) -> Vector { return v / (1.0 + tau * lambda); };
  m.function = [lambda](const Vector& x) { return 0.5 * lambda * x.squaredNorm(); };
  m.envelope = [lambda](const Vector& x) {
    return lambda / (2.0 * (1.0 + lambda)) * x.squaredNorm();
  };
  m.potential = [lambda](const Vector& x) { return x.squaredNorm() / (2.0 * (1.0 + lambda)); };
  m.residual = [lambda](const Vector& x) -> Vector { return -lambda / (1.0 + lambda) * x; };
  return m;
}

ProxMap nonnegative_map() {
  ProxMap m;
  m.name = "nonneg";
  m.lambda = 1.0;
  m.eval = [](const Vector& x) -> Vector { return x.cwiseMax(0.0); };
  m.scaled = [](const Vector& v, double) -> Vector { return v.cwiseMax(0.0); };
  m.function = [](const Vector& x) { return (x.array() >= 0.0).all() ? 0.0 : kInf; };
  m.envelope = [](const Vector& x) { return 0.5 * x.cwiseMin(0.0).squaredNorm(); };
  m.potential = [](const Vector& x) { return 0.5 * x.cwiseMax(0.0).squaredNorm(); };
  m.residual = [](const Vector& x) -> Vector { return (-x).cwiseMax(0.0); };
  m.breakpoints = {0.0};
  return m;
}

ProxMap parse_prox(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::optional<double> lambda;
  if (colon != std::string::npos) {
    const std::string arg = spec.substr(colon + 1);
    char* end = nullptr;
    const double v = std::strtod(arg.c_str(), &end);
    if (arg.empty() || end != arg.c_str() + arg.size()) {
      throw Error(ErrorKind::InvalidInput, "malformed lambda in prox spec '" + spec + "'");
    }
    lambda = v;
  }
  if (name == "soft" || name == "soft_shrink") {
    return soft_shrink_map(lambda.value_or(1.0));
  }
  if (name == "ridge") return ridge_map(lambda.value_or(1.0));
  if (name == "identity" || name == "zero") return identity_map();
  if (name == "nonneg") return nonnegative_map();
  throw Error(ErrorKind::InvalidInput, "unknown prox '" + name + "'");
}

SolveReport numeric_prox(const ConvexTerm& g, const Vector& x, const TMetric* metric,
                         const SolverOptions& options) {
  const Index d = x.size();
  if (metric && metric->dim() != d) {
    throw Error(ErrorKind::DimensionMismatch, "metric and x disagree in dimension");
  }
  const Matrix k_map = g.inner_map.size() == 0 ? Matrix::Identity(d, d) : g.inner_map;
  if (k_map.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "inner map columns must match x");
  }
  const Index m = k_map.rows();
  const Matrix b_map = g.slack_basis.cols() == 0 ? Matrix(m, 0) : g.slack_basis;
  if (b_map.rows() != m) {
    throw Error(ErrorKind::DimensionMismatch, "slack basis rows must match inner map rows");
  }
  const Index k = b_map.cols();

  const Matrix gram = metric ? Matrix(metric->op().matrix().transpose() * metric->op().matrix())
                             : Matrix(Matrix::Identity(d, d));
  double rho = 1.0;
  if (options.penalty) {
    rho = *options.penalty;
  } else if (metric && g.inner_map.size() == 0) {
    const Vector& s = metric->op().singular_values();
    rho = s(0) * s(s.size() - 1);
  }

  Matrix q(d + k, d + k);
  q.topLeftCorner(d, d) = gram + rho * k_map.transpose() * k_map;
  q.topRightCorner(d, k) = rho * k_map.transpose() * b_map;
  q.bottomLeftCorner(k, d) = q.topRightCorner(d, k).transpose();
  q.bottomRightCorner(k, k) = Matrix::Identity(k, k) + rho * b_map.transpose() * b_map;
  const Eigen::LLT<Matrix> factor(q);
  const Vector gram_x = gram * x;

  Vector y = x;
  Vector w = Vector::Zero(k);
  Vector v = k_map * y;
  Vector u = Vector::Zero(m);
  Vector rhs(d + k);

  SolveReport report;
  report.tolerance = options.tol;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    const Vector target = v - u;
    rhs.head(d) = gram_x + rho * (k_map.transpose() * target);
    rhs.tail(k) = rho * (b_map.transpose() * target);
    const Vector sol = factor.solve(rhs);
    const double change = std::sqrt((sol.head(d) - y).squaredNorm() + (sol.tail(k) - w).squaredNorm());
    y = sol.head(d);
    w = sol.tail(k);

    const Vector coupled = k_map * y + b_map * w;
    v = g.outer.prox(coupled + u, 1.0 / rho);
    const Vector gap = coupled - v;
    u += gap;

    report.iterations = it;
    report.residual = std::max(change, gap.norm());
    if (change <= options.tol && gap.norm() <= options.tol) {
      report.converged = true;
      break;
    }
  }

  const Vector diff = x - y;
  report.minimizer = y;
  report.objective = 0.5 * diff.dot(gram * diff) + 0.5 * w.squaredNorm() +
                     g.outer.value(k_map * y + b_map * w);
  return report;
}

SolveReport numeric_prox(const ProxableFunction& g, const Vector& x, const TMetric* metric,
                         const SolverOptions& options) {
  return numeric_prox(ConvexTerm{g, Matrix(), Matrix()}, x, metric, options);
}

VerifyReport verify_firm_nonexpansive(const ProxMap& map, Index dim, std::size_t trials,
                                      double tol, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  const double worst = parallel_max(trials, [&](std::size_t i) {
    auto rng = trial_engine(seed, i);
    const Vector x = multiscale_gaussian(dim, rng);
    const Vector y = multiscale_gaussian(dim, rng);
    const Vector px = map.eval(x);
    const Vector py = map.eval(y);
    // ‖a‖² − ⟨b, a⟩ = ⟨a, a − b⟩ with a − b built from the residuals P(·) − (·),
    // which cancel exactly where P acts as a translation.
    const Vector a = px - py;
    return a.dot(prox_residual(map, x) - prox_residual(map, y));
  });
  return make_report("firm_nonexpansive:" + map.name, trials, worst, tol);
}

double fd_step(double xi) { return 1e-6 * std::max(1.0, std::abs(xi)); }

Vector finite_difference_gradient(const ScalarField& fn, const Vector& x) {
  Vector grad(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = fd_step(x(i));
    probe(i) = x(i) + h;
    const double up = fn(probe);
    probe(i) = x(i) - h;
    const double down = fn(probe);
    probe(i) = x(i);
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

VerifyReport verify_moreau_characterization(const ProxMap& map, const ScalarField& potential,
                                            Index dim, std::size_t trials, double tol,
                                            std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  const double worst = parallel_max(trials, [&](std::size_t i) {
    auto rng = trial_engine(seed, i);
    const Vector x = multiscale_gaussian(dim, rng);
    const Vector y = multiscale_gaussian(dim, rng);
    const Vector px = map.eval(x);

    // (a) nonexpansive
    const double dist = (x - y).norm();
    double violation = ((px - map.eval(y)).norm() - dist) / std::max(1.0, dist);

    // (b) gradient of the potential
    const Vector fd = finite_difference_gradient(potential, x);
    for (Index j = 0; j < dim; ++j) {
      if (near_breakpoint(x(j), fd_step(x(j)), map.breakpoints)) continue;
      violation = std::max(violation, std::abs(fd(j) - px(j)) / std::max(1.0, std::abs(px(j))));
    }

    // (c) midpoint convexity
    const double fx = potential(x);
    const double fy = potential(y);
    const double mid = potential(0.5 * (x + y));
    violation = std::max(violation,
                         (mid - 0.5 * (fx + fy)) / std::max(1.0, std::abs(fx) + std::abs(fy)));
    return violation;
  });
  return make_report("moreau_characterization:" + map.name, trials, worst, tol);
}

}  // namespace proxframe
