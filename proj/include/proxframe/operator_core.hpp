#pragma once

#include <cstdint>
#include <memory>

#include "proxframe/reports.hpp"
#include "proxframe/types.hpp"

namespace proxframe {

inline constexpr double kDefaultRankTol = 1e-10;

struct FrameBounds {
  double lower = 0.0;  // A = σ_min²
  double upper = 0.0;  // B = σ_max²
};

/// Injective n×d analysis operator T (n >= d, full column rank) together
/// with everything derived from its singular value decomposition. Immutable
/// once built; safe to share between threads.
class AnalysisOperator {
 public:
  /// Throws Error(RankDeficient) if σ_min <= rank_tol·σ_max and
  /// Error(InvalidInput) for n < d, empty or non-finite input.
  static AnalysisOperator build(const Matrix& matrix, double rank_tol = kDefaultRankTol);

  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

  const Matrix& matrix() const { return matrix_; }
  /// T† = (TᵀT)⁻¹Tᵀ, d×n.
  const Matrix& pinv() const { return pinv_; }
  /// P_R(T) = T T†, n×n.
  const Matrix& range_projection() const { return range_proj_; }
  /// Orthonormal basis of N(Tᵀ), n×(n−d); zero columns when T is square.
  const Matrix& null_basis() const { return null_basis_; }
  const Vector& singular_values() const { return singular_values_; }
  FrameBounds frame_bounds() const;

  double norm() const { return singular_values_(0); }                            // ‖T‖
  double pinv_norm() const { return 1.0 / singular_values_(cols() - 1); }        // ‖T†‖
  bool is_square() const { return rows() == cols(); }

  Vector apply(const Vector& x) const;           // T x
  Vector adjoint(const Vector& c) const;         // Tᵀ c
  Vector pseudo_inverse(const Vector& c) const;  // T† c
  /// (TᵀT)⁻¹ g from the cached right singular vectors.
  Vector solve_gram(const Vector& g) const;

 private:
  AnalysisOperator() = default;

  Matrix matrix_;
  Matrix pinv_;
  Matrix range_proj_;
  Matrix null_basis_;
  Matrix right_vectors_;
  Vector singular_values_;
};

using OperatorPtr = std::shared_ptr<const AnalysisOperator>;

OperatorPtr build_operator(const Matrix& matrix, double rank_tol = kDefaultRankTol);

/// Signal space re-normed by ‖x‖_T = ‖Tx‖.
class TMetric {
 public:
  explicit TMetric(OperatorPtr op);

  const AnalysisOperator& op() const { return *op_; }
  const OperatorPtr& op_ptr() const { return op_; }
  Index dim() const { return op_->cols(); }

  double inner(const Vector& x, const Vector& y) const;
  double norm(const Vector& x) const;
  double squared_norm(const Vector& x) const;

  /// Converts a Euclidean gradient to the gradient in this metric:
  /// (TᵀT)⁻¹ ∇Φ(x).
  Vector gradient(const Vector& euclidean_grad) const;

 private:
  OperatorPtr op_;
};

/// Checks T†T = I, (TT†)² = TT†, (TT†)ᵀ = TT†, T† = T†(TT†) in max-entry
/// norm, and the frame inequalities A‖x‖² <= ‖Tx‖² <= B‖x‖² on 100 random
/// unit vectors. The violation is the largest deviation seen.
VerifyReport verify_operator_identities(const AnalysisOperator& op, double tol,
                                        std::uint64_t seed = 0);

}  // namespace proxframe
