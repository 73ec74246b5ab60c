#pragma once

#include <cstddef>
#include <cstdint>

#include "proxframe/operator_core.hpp"
#include "proxframe/prox_ops.hpp"
#include "proxframe/reports.hpp"

namespace proxframe {

inline constexpr double kRegularizerTol = 1e-10;

/// The composite T† ∘ Prox ∘ T. It is the prox, in the T metric, of the
/// induced regularizer below.
class FrameShrinkage {
 public:
  FrameShrinkage(OperatorPtr op, ProxMap inner_prox);

  const AnalysisOperator& op() const { return metric_.op(); }
  const ProxMap& inner_prox() const { return inner_; }
  const TMetric& metric() const { return metric_; }
  Index dim() const { return metric_.dim(); }

  /// T†(Prox(Tx)); Error(DimensionMismatch) unless x has d entries.
  Vector apply(const Vector& x) const;
  /// apply(x) − x, formed as T†(Prox(Tx) − Tx).
  Vector residual(const Vector& x) const;

 private:
  TMetric metric_;
  ProxMap inner_;
};

Vector frame_prox(const FrameShrinkage& fs, const Vector& x);

/// f(x) = inf_{z ∈ N(Tᵀ)} { ½‖z‖² + g(Tx + z) }, g being the inner prox's
/// function.
class InducedRegularizer {
 public:
  /// Throws Error(InvalidInput) if the inner prox has no function/scaled prox.
  explicit InducedRegularizer(FrameShrinkage shrinkage);

  const FrameShrinkage& shrinkage() const { return shrinkage_; }
  const ProxableFunction& g() const { return g_; }

  /// g(Tx); the upper bound for f.
  double outer_value(const Vector& x) const;

  /// f as a term for numeric_prox: h = g, K = T, B = null basis.
  ConvexTerm as_term() const;

 private:
  FrameShrinkage shrinkage_;
  ProxableFunction g_;
};

struct RegularizerValue {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Evaluates f(x). Square T short-circuits to g(Tx). Otherwise runs
/// Douglas–Rachford on u = Tx + z, alternating the exact prox of
/// ½‖u − Tx‖² + g(u) with projection onto Tx + N(Tᵀ), stopping when the two
/// half-steps agree to `tol`.
RegularizerValue evaluate_regularizer(const InducedRegularizer& reg, const Vector& x,
                                      double tol = kRegularizerTol,
                                      std::size_t max_iter = 100000);

/// Same, throwing Error(NotConverged) if the splitting did not converge.
double induced_regularizer(const InducedRegularizer& reg, const Vector& x,
                           double tol = kRegularizerTol);

/// Closed form for T = (1, 2)ᵀ, g = ‖·‖₁:
///   5/2|y| + 5/8 y²   for |y| <= 2/5,
///   3|y| − 1/10        otherwise.
double example_regularizer_closed_form(double y);

/// The 2×1 operator (1, 2)ᵀ.
Matrix example_operator_matrix();

/// Compares frame_prox(x) with numeric_prox of f in the T metric on random
/// x. Violation is max(‖y₁ − y₂‖_T, objective(y₁) − objective(y₂)).
VerifyReport verify_prox_identity(const FrameShrinkage& fs, const InducedRegularizer& reg,
                                  std::size_t trials, double tol, std::uint64_t seed = 0,
                                  double sample_scale = 3.0);

/// ‖Fx−Fy‖²_T − ⟨x−y, Fx−Fy⟩_T over sampled pairs.
VerifyReport verify_t_firm_nonexpansive(const FrameShrinkage& fs, std::size_t trials, double tol,
                                        std::uint64_t seed = 0);

/// Same inequality in the Euclidean metric; for demonstration only, since
/// it can fail for anisotropic T.
VerifyReport euclidean_firm_nonexpansive(const FrameShrinkage& fs, std::size_t trials,
                                         double tol, std::uint64_t seed = 0);

/// f(x) − g(Tx) over sampled x; passes when <= tol.
VerifyReport weaker_regularizer_check(const InducedRegularizer& reg, std::size_t trials,
                                      double tol = 1e-9, std::uint64_t seed = 0);

}  // namespace proxframe
