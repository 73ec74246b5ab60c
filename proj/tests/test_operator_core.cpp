#include <doctest.h>

#include <cmath>
#include <sstream>

#include "proxframe/errors.hpp"
#include "proxframe/matrix_io.hpp"
#include "proxframe/operator_core.hpp"
#include "proxframe/sampling.hpp"

using namespace proxframe;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected proxframe::Error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("build_operator on the (1,2) column") {
  const auto op = AnalysisOperator::build(column({1.0, 2.0}));
  CHECK(op.pinv()(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(op.pinv()(0, 1) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(op.frame_bounds().lower == doctest::Approx(5.0));
  CHECK(op.frame_bounds().upper == doctest::Approx(5.0));
  REQUIRE(op.null_basis().cols() == 1);
  const Vector dir = vec({-2.0, 1.0}) / std::sqrt(5.0);
  CHECK(std::abs(op.null_basis().col(0).dot(dir)) == doctest::Approx(1.0));
  // brute force: T†T = 1
  CHECK((op.pinv() * op.matrix())(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("build_operator identity and padded identity") {
  const auto id = AnalysisOperator::build(Matrix::Identity(3, 3));
  CHECK(id.pinv().isApprox(Matrix::Identity(3, 3)));
  CHECK(id.frame_bounds().lower == 1.0);
  CHECK(id.frame_bounds().upper == 1.0);
  CHECK(id.null_basis().cols() == 0);
  CHECK(id.is_square());

  Matrix padded = Matrix::Zero(3, 2);
  padded(0, 0) = 1.0;
  padded(1, 1) = 1.0;
  const auto op = AnalysisOperator::build(padded);
  Matrix expected = Matrix::Zero(2, 3);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  CHECK((op.pinv() - expected).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(op.null_basis().cols() == 1);
  CHECK(std::abs(op.null_basis()(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("build_operator rejects bad input") {
  Matrix rank_one(2, 2);
  rank_one << 1, 2, 2, 4;
  CHECK(kind_of([&] { AnalysisOperator::build(rank_one); }) == ErrorKind::RankDeficient);
  CHECK(kind_of([&] { AnalysisOperator::build(Matrix::Zero(3, 2)); }) == ErrorKind::RankDeficient);
  CHECK(kind_of([&] { AnalysisOperator::build(Matrix::Ones(2, 3)); }) == ErrorKind::InvalidInput);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::nan("");
  CHECK(kind_of([&] { AnalysisOperator::build(bad); }) == ErrorKind::InvalidInput);

  // σ_min/σ_max = 1e-12 is below the default tolerance but fine for a looser one.
  Matrix tiny = Matrix::Identity(2, 2);
  tiny(1, 1) = 1e-12;
  CHECK(kind_of([&] { AnalysisOperator::build(tiny); }) == ErrorKind::RankDeficient);
  CHECK_NOTHROW(AnalysisOperator::build(tiny, 1e-14));
}

TEST_CASE("t_inner") {
  const TMetric example(build_operator(column({1.0, 2.0})));
  CHECK(example.inner(vec({1.0}), vec({1.0})) == doctest::Approx(5.0));
  CHECK(example.inner(vec({0.0}), vec({3.0})) == 0.0);
  const TMetric id(build_operator(Matrix::Identity(2, 2)));
  CHECK(id.inner(vec({1.0, 2.0}), vec({3.0, 4.0})) == doctest::Approx(11.0));
  CHECK(kind_of([&] { id.inner(vec({1.0}), vec({1.0, 2.0})); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("t_gradient") {
  const TMetric example(build_operator(column({1.0, 2.0})));
  CHECK(example.gradient(vec({5.0}))(0) == doctest::Approx(1.0));

  const TMetric id(build_operator(Matrix::Identity(3, 3)));
  const Vector v = vec({1.0, -2.0, 3.5});
  CHECK((id.gradient(v) - v).norm() < 1e-15);

  Matrix diag = Matrix::Zero(3, 2);
  diag(0, 0) = 2.0;
  diag(1, 1) = 1.0;
  const TMetric weighted(build_operator(diag));
  const Vector g = weighted.gradient(vec({4.0, 3.0}));
  CHECK(g(0) == doctest::Approx(1.0));
  CHECK(g(1) == doctest::Approx(3.0));
  CHECK(kind_of([&] { weighted.gradient(vec({1.0})); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("verify_operator_identities") {
  auto rng = trial_engine(7, 0);
  Matrix gauss(6, 3);
  for (Index j = 0; j < 3; ++j) gauss.col(j) = gaussian_vector(6, rng);
  const auto r = verify_operator_identities(AnalysisOperator::build(gauss), 1e-10);
  CHECK(r.pass);
  CHECK(r.trials == 100);

  const auto id = verify_operator_identities(AnalysisOperator::build(Matrix::Identity(4, 4)), 1e-10);
  CHECK(id.pass);
  CHECK(id.max_violation == 0.0);

  // Tight frame of one vector: ‖Tx‖² = 5x².
  const auto example = AnalysisOperator::build(column({1.0, 2.0}));
  for (double x : {-3.0, -0.25, 0.5, 7.0}) {
    CHECK(example.apply(vec({x})).squaredNorm() == 5.0 * x * x);
  }
}

TEST_CASE("operator properties on random operators") {
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    auto rng = trial_engine(11, trial);
    std::uniform_int_distribution<int> dim(1, 8);
    const Index d = dim(rng);
    const Index n = d + dim(rng) - 1;
    std::uniform_real_distribution<double> log_cond(0.0, 3.0);
    const Matrix m = random_conditioned(n, d, std::pow(10.0, log_cond(rng)), rng) * 3.0;
    const auto op = build_operator(m);
    const TMetric metric(op);

    // norm equivalence
    for (int k = 0; k < 10; ++k) {
      const Vector x = gaussian_vector(d, rng);
      const double tn = metric.norm(x);
      CHECK(tn / op->norm() <= x.norm() * (1 + 1e-12));
      CHECK(x.norm() <= op->pinv_norm() * tn * (1 + 1e-12));

      // defining identity of the T-gradient: ⟨∇_T, h⟩_T = ⟨∇, h⟩
      const Vector grad = gaussian_vector(d, rng);
      const Vector h = gaussian_vector(d, rng);
      CHECK(metric.inner(metric.gradient(grad), h) ==
            doctest::Approx(grad.dot(h)).epsilon(1e-9).scale(grad.norm() * h.norm()));
    }

    // frame bounds attained on the extreme right singular vectors
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinV);
    const Vector top = svd.matrixV().col(0);
    const Vector bottom = svd.matrixV().col(d - 1);
    CHECK(metric.squared_norm(top) == doctest::Approx(op->frame_bounds().upper).epsilon(1e-12));
    CHECK(metric.squared_norm(bottom) == doctest::Approx(op->frame_bounds().lower).epsilon(1e-9));

    // null basis
    const Matrix& b = op->null_basis();
    CHECK(b.cols() == n - d);
    if (b.cols() > 0) {
      CHECK((b.transpose() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((m.transpose() * b).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((op->range_projection() * b).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(verify_operator_identities(*op, 1e-10, trial).pass);
  }
}

TEST_CASE("matrix I/O round-trips bit-exactly") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto rng = trial_engine(3, trial);
    std::uniform_int_distribution<int> dim(1, 6);
    Matrix m(dim(rng), dim(rng));
    for (Index j = 0; j < m.cols(); ++j) m.col(j) = multiscale_gaussian(m.rows(), rng) * 1e3;
    m(0, 0) = 1.0 / 3.0;

    std::stringstream csv;
    write_csv_matrix(csv, m);
    const Matrix from_csv = read_csv_matrix(csv);
    CHECK(from_csv == m);

    const Matrix from_json = matrix_from_json(nlohmann::json::parse(matrix_to_json(m)));
    CHECK(from_json == m);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("matrix I/O rejects malformed input") {
  const auto fails = [](const std::string& text) {
    std::stringstream in(text);
    return kind_of([&] { read_csv_matrix(in); }) == ErrorKind::InvalidInput;
  };
  CHECK(fails(""));
  CHECK(fails("1,2\n3\n"));
  CHECK(fails("1,x\n"));
  CHECK(fails("1,2,\n"));

  const auto json_fails = [](const std::string& text) {
    return kind_of([&] { matrix_from_json(nlohmann::json::parse(text)); }) == ErrorKind::InvalidInput;
  };
  CHECK(json_fails(R"({"rows": 2, "cols": 1, "data": [1]})"));
  CHECK(json_fails(R"({"rows": 1, "cols": 1, "data": ["a"]})"));
  CHECK(json_fails(R"({"cols": 1, "data": [1]})"));

  std::stringstream ok("1, 2\n 3,4\n\n");
  const Matrix m = read_csv_matrix(ok);
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == 3.0);
}
