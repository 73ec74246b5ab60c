#pragma once

#include <cstddef>
#include <functional>

#include "proxframe/frame_shrinkage.hpp"
#include "proxframe/reports.hpp"
#include "proxframe/types.hpp"

namespace proxframe {

/// min_y ½‖x − y‖² + λ‖Ty‖₁ for a general n×d matrix T.
struct AnalysisProblem {
  Vector x;
  Matrix op;
  double lambda = 1.0;
};

double analysis_objective(const AnalysisProblem& problem, const Vector& y);

/// Projected gradient on the dual min_{‖p‖∞ <= λ} ½‖x − Tᵀp‖² with step
/// 1/σ_max², primal recovery y = x − Tᵀp. Stops once the duality gap is
/// <= tol; `residual` holds the final gap.
SolveReport solve_analysis_dual(const AnalysisProblem& problem, double tol = 1e-12,
                                std::size_t max_iter = 1000000);

/// (I − TᵀT)x + Tᵀ S_λ(Tx) for T with orthonormal rows.
/// Throws Error(NotParsevalRow) when ‖TTᵀ − I‖_max > 1e-10.
Vector synthesis_solution(const Vector& x, const Matrix& op, double lambda);

struct SmoothTerm {
  std::function<double(const Vector&)> value;  // optional, used for the reported objective
  std::function<Vector(const Vector&)> gradient;  // Euclidean gradient
};

/// x_{k+1} = frame_prox(x_k − step·(TᵀT)⁻¹∇h(x_k)); forward-backward in the
/// T metric for step·h + f. Stops when ‖x_{k+1} − x_k‖_T <= tol. When
/// h.value is set the reported objective is step·h + f at the last iterate.
SolveReport forward_backward_t_metric(const SmoothTerm& h, const FrameShrinkage& fs,
                                      const Vector& x0, double step, double tol = 1e-10,
                                      std::size_t max_iter = 100000);

}  // namespace proxframe
