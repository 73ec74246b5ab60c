#include "proxframe/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proxframe/errors.hpp"
#include "proxframe/sampling.hpp"

namespace proxframe {
namespace {

void require_dim(Index got, Index want, const char* what) {
  if (got != want) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << want << ", got " << got;
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

AnalysisOperator AnalysisOperator::build(const Matrix& matrix, double rank_tol) {
  const Index n = matrix.rows();
  const Index d = matrix.cols();
  if (d < 1 || n < d) {
    std::ostringstream msg;
    msg << "analysis operator must be n×d with n >= d >= 1, got " << n << "×" << d;
    throw Error(ErrorKind::InvalidInput, msg.str());
  }
  if (!matrix.allFinite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
  if (!(rank_tol >= 0.0)) throw Error(ErrorKind::InvalidInput, "rank_tol must be non-negative");

  Eigen::BDCSVD<Matrix> svd(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(d - 1);
  if (!(smin > rank_tol * smax) || smin == 0.0) {
    std::ostringstream msg;
    msg << "σ_min = " << smin << " <= " << rank_tol << "·σ_max (σ_max = " << smax
        << "); operator is not injective";
    throw Error(ErrorKind::RankDeficient, msg.str());
  }

  AnalysisOperator op;
  op.matrix_ = matrix;
  op.singular_values_ = s;
  op.right_vectors_ = svd.matrixV();
  const Matrix u_range = svd.matrixU().leftCols(d);
  op.pinv_ = op.right_vectors_ * s.cwiseInverse().asDiagonal() * u_range.transpose();
  op.range_proj_ = u_range * u_range.transpose();
  op.null_basis_ = svd.matrixU().rightCols(n - d);
  return op;
}

FrameBounds AnalysisOperator::frame_bounds() const {
  const double smax = singular_values_(0);
  const double smin = singular_values_(cols() - 1);
  return {smin * smin, smax * smax};
}

Vector AnalysisOperator::apply(const Vector& x) const {
  require_dim(x.size(), cols(), "T x");
  return matrix_ * x;
}

Vector AnalysisOperator::adjoint(const Vector& c) const {
  require_dim(c.size(), rows(), "Tᵀ c");
  return matrix_.transpose() * c;
}

Vector AnalysisOperator::pseudo_inverse(const Vector& c) const {
  require_dim(c.size(), rows(), "T† c");
  return pinv_ * c;
}

Vector AnalysisOperator::solve_gram(const Vector& g) const {
  require_dim(g.size(), cols(), "(TᵀT)⁻¹ g");
  const Vector inv_sq = singular_values_.array().square().inverse();
  return right_vectors_ * (inv_sq.asDiagonal() * (right_vectors_.transpose() * g));
}

OperatorPtr build_operator(const Matrix& matrix, double rank_tol) {
  return std::make_shared<const AnalysisOperator>(AnalysisOperator::build(matrix, rank_tol));
}

TMetric::TMetric(OperatorPtr op) : op_(std::move(op)) {
  if (!op_) throw Error(ErrorKind::InvalidInput, "null operator");
}

double TMetric::inner(const Vector& x, const Vector& y) const {
  return op_->apply(x).dot(op_->apply(y));
}

double TMetric::norm(const Vector& x) const { return op_->apply(x).norm(); }

double TMetric::squared_norm(const Vector& x) const { return op_->apply(x).squaredNorm(); }

Vector TMetric::gradient(const Vector& euclidean_grad) const {
  return op_->solve_gram(euclidean_grad);
}

VerifyReport verify_operator_identities(const AnalysisOperator& op, double tol,
                                        std::uint64_t seed) {
  constexpr std::size_t kFrameSamples = 100;
  const Index d = op.cols();
  const Matrix& t = op.matrix();
  const Matrix& pinv = op.pinv();
  const Matrix proj = t * pinv;

  double worst = 0.0;
  worst = std::max(worst, max_abs(pinv * t - Matrix::Identity(d, d)));
  worst = std::max(worst, max_abs(proj * proj - proj));
  worst = std::max(worst, max_abs(proj - proj.transpose()));
  worst = std::max(worst, max_abs(pinv - pinv * proj));

  const auto [lower, upper] = op.frame_bounds();
  for (std::size_t k = 0; k < kFrameSamples; ++k) {
    auto rng = trial_engine(seed, k);
    const Vector x = random_unit_vector(d, rng);
    const double energy = (t * x).squaredNorm();
    const double sq = x.squaredNorm();
    worst = std::max(worst, lower * sq - energy);
    worst = std::max(worst, energy - upper * sq);
  }
  return make_report("operator_identities", kFrameSamples, worst, tol);
}

}  // namespace proxframe
