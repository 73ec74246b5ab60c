#include "proxframe/solvers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "proxframe/errors.hpp"

namespace proxframe {
namespace {

void check_problem(const AnalysisProblem& p) {
  if (!(p.lambda > 0.0)) {
    std::ostringstream msg;
    msg << "lambda must be positive, got " << p.lambda;
    throw Error(ErrorKind::NonPositiveLambda, msg.str());
  }
  if (p.op.cols() != p.x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "operator columns must match x");
  }
}

}  // namespace

double analysis_objective(const AnalysisProblem& problem, const Vector& y) {
  return 0.5 * (problem.x - y).squaredNorm() + problem.lambda * (problem.op * y).lpNorm<1>();
}

SolveReport solve_analysis_dual(const AnalysisProblem& problem, double tol,
                                std::size_t max_iter) {
  check_problem(problem);
  const Matrix& t = problem.op;
  const Vector& x = problem.x;
  const double lambda = problem.lambda;

  SolveReport report;
  report.tolerance = tol;
  const double smax = t.size() == 0 ? 0.0 : Eigen::BDCSVD<Matrix>(t).singularValues()(0);
  if (smax == 0.0) {
    report.minimizer = x;
    report.objective = 0.0;
    report.converged = true;
    return report;
  }
  const double step = 1.0 / (smax * smax);

  Vector p = Vector::Zero(t.rows());
  Vector y = x;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    p = (p + step * (t * y)).cwiseMax(-lambda).cwiseMin(lambda);
    y = x - t.transpose() * p;
    // P(y) − D(p) reduces to Σ λ|c_i| − p_i c_i with c = Ty; every term is
    // non-negative, so no cancellation between the two objectives.
    const Vector c = t * y;
    report.iterations = it;
    report.residual = (lambda * c.cwiseAbs() - p.cwiseProduct(c)).sum();
    report.objective = 0.5 * (x - y).squaredNorm() + lambda * c.lpNorm<1>();
    if (report.residual <= tol) {
      report.converged = true;
      break;
    }
  }
  report.minimizer = y;
  return report;
}

Vector synthesis_solution(const Vector& x, const Matrix& op, double lambda) {
  if (op.cols() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "operator columns must match x");
  }
  const Index n = op.rows();
  const double defect = (op * op.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect <= 1e-10)) {
    std::ostringstream msg;
    msg << "‖TTᵀ − I‖_max = " << defect << " exceeds 1e-10";
    throw Error(ErrorKind::NotParsevalRow, msg.str());
  }
  const Vector coeffs = op * x;
  return x - op.transpose() * coeffs + op.transpose() * soft_shrink(coeffs, lambda);
}

SolveReport forward_backward_t_metric(const SmoothTerm& h, const FrameShrinkage& fs,
                                      const Vector& x0, double step, double tol,
                                      std::size_t max_iter) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidInput, "step must be positive");
  if (!h.gradient) throw Error(ErrorKind::InvalidInput, "smooth term needs a gradient");
  if (x0.size() != fs.dim()) throw Error(ErrorKind::DimensionMismatch, "x0 has wrong dimension");
  const TMetric& metric = fs.metric();

  SolveReport report;
  report.tolerance = tol;
  Vector x = x0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const Vector next = fs.apply(x - step * metric.gradient(h.gradient(x)));
    const double change = metric.norm(next - x);
    x = next;
    report.iterations = it;
    report.residual = change;
    if (change <= tol) {
      report.converged = true;
      break;
    }
  }
  report.minimizer = x;
  report.objective = std::numeric_limits<double>::quiet_NaN();
  if (h.value && fs.inner_prox().function && fs.inner_prox().scaled) {
    const InducedRegularizer reg(fs);
    report.objective = step * h.value(x) + evaluate_regularizer(reg, x).value;
  }
  return report;
}

}  // namespace proxframe
