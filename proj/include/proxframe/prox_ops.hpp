#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "proxframe/operator_core.hpp"
#include "proxframe/reports.hpp"
#include "proxframe/types.hpp"

namespace proxframe {

using VectorMap = std::function<Vector(const Vector&)>;
using ScalarField = std::function<double(const Vector&)>;
/// (v, τ) -> prox_{τ g}(v)
using ScaledProx = std::function<Vector(const Vector&, double)>;

/// A proximity operator on R^m with whatever closed forms are known for it.
/// λ is already folded into g, so `eval` is prox_g and `scaled` is prox_{τg}.
struct ProxMap {
  std::string name;
  double lambda = 1.0;
  VectorMap eval;
  ScaledProx scaled;       // optional
  ScalarField function;    // g, may return +inf; optional
  ScalarField envelope;    // Moreau envelope M_g; optional
  ScalarField potential;   // convex Φ with eval = ∇Φ; optional
  VectorMap residual;      // eval(x) − x in closed form; optional
  /// Scalar points where the componentwise potential is not C².
  std::vector<double> breakpoints;
};

/// eval(x) − x, from the closed form when the map has one.
Vector prox_residual(const ProxMap& map, const Vector& x);

/// A convex function given by its value and the prox of its multiples.
struct ProxableFunction {
  std::string name;
  ScalarField value;
  ScaledProx prox;
};

/// Throws Error(InvalidInput) if the map lacks `function` or `scaled`.
ProxableFunction prox_function(const ProxMap& map);

// Soft shrinkage and friends. All throw Error(NonPositiveLambda) for λ <= 0
// (including NaN).
Vector soft_shrink(const Vector& x, double lambda);
double huber_envelope(const Vector& x, double lambda);
double shrink_potential(const Vector& x, double lambda);

// Catalog.
ProxMap soft_shrink_map(double lambda);  // g = λ‖·‖₁
ProxMap identity_map();                  // g = 0
ProxMap ridge_map(double lambda);        // g = (λ/2)‖·‖²
ProxMap nonnegative_map();               // g = ι_{x >= 0}

/// Parses "soft:λ", "soft_shrink:λ", "ridge:λ", "identity", "nonneg".
/// Throws Error(InvalidInput) or Error(NonPositiveLambda).
ProxMap parse_prox(const std::string& spec);

/// Convex term minimized by numeric_prox:
///   g(y) = inf_w { ½‖w‖² + h(K y + B w) }.
/// An empty `inner_map` means K = I; a `slack_basis` with zero columns
/// drops w, leaving g = h∘K.
struct ConvexTerm {
  ProxableFunction outer;
  Matrix inner_map;
  Matrix slack_basis;
};

struct SolverOptions {
  double tol = 1e-9;
  std::size_t max_iter = 100000;
  /// ADMM penalty; nullopt picks a default from the metric's spectrum.
  std::optional<double> penalty;
};

/// Numerical prox: argmin_y ½‖x−y‖²_M + g(y), M = T when `metric` is given,
/// else Euclidean. The metric term is treated as ½‖Tx−Ty‖² and the problem
/// is split (ADMM, i.e. Douglas–Rachford on the dual) so that only the
/// closed-form prox of h and one cached linear solve are needed. Stops when
/// the change in (y, w) and the splitting residual are both <= tol; reports
/// converged = false after max_iter.
SolveReport numeric_prox(const ConvexTerm& g, const Vector& x, const TMetric* metric,
                         const SolverOptions& options = {});

/// Shorthand for g = h with no coupling.
SolveReport numeric_prox(const ProxableFunction& g, const Vector& x, const TMetric* metric,
                         const SolverOptions& options = {});

/// Samples pairs with multiscale Gaussians and measures
/// ‖Px−Py‖² − ⟨x−y, Px−Py⟩.
VerifyReport verify_firm_nonexpansive(const ProxMap& map, Index dim, std::size_t trials,
                                      double tol, std::uint64_t seed = 0);

/// Moreau's characterization, sampled: (a) nonexpansive, (b) map = ∇potential
/// by central differences (relative error), (c) potential midpoint-convex.
/// Components within 10h of a breakpoint of `map` skip check (b).
VerifyReport verify_moreau_characterization(const ProxMap& map, const ScalarField& potential,
                                            Index dim, std::size_t trials, double tol,
                                            std::uint64_t seed = 0);

/// Central-difference gradient with step 1e-6·max(1, |x_i|).
Vector finite_difference_gradient(const ScalarField& fn, const Vector& x);

double fd_step(double xi);

}  // namespace proxframe
