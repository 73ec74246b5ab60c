#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "proxframe/errors.hpp"
#include "proxframe/prox_ops.hpp"
#include "proxframe/sampling.hpp"

using namespace proxframe;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Vector scalar(double x) { return Vector::Constant(1, x); }

// ½(x − y)² + λ|y| minimized over a fine grid and refined by golden section.
double envelope_by_search(double x, double lambda) {
  const auto obj = [&](double y) { return 0.5 * (x - y) * (x - y) + lambda * std::abs(y); };
  return obj(proxframe::testing::refined_argmin(obj, -std::abs(x) - 1, std::abs(x) + 1, 1e-3));
}

}  // namespace

TEST_CASE("soft_shrink") {
  const Vector s = soft_shrink(vec({2.0, 0.5, -3.0}), 1.0);
  CHECK(s(0) == 1.0);
  CHECK(s(1) == 0.0);
  CHECK(s(2) == -2.0);
  CHECK(soft_shrink(Vector::Zero(4), 0.3).norm() == 0.0);
  for (double lambda : {0.1, 1.0, 7.5}) {
    CHECK(soft_shrink(vec({lambda, -lambda}), lambda).norm() == 0.0);
  }
  CHECK_THROWS_AS(soft_shrink(scalar(1.0), 0.0), Error);
  CHECK_THROWS_AS(soft_shrink(scalar(1.0), -1.0), Error);
  CHECK_THROWS_AS(soft_shrink(scalar(1.0), std::nan("")), Error);
  try {
    soft_shrink(scalar(1.0), 0.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveLambda);
  }
}

TEST_CASE("huber_envelope") {
  CHECK(huber_envelope(scalar(2.0), 1.0) == 1.5);
  CHECK(huber_envelope(scalar(0.5), 1.0) == 0.125);
  CHECK(huber_envelope(vec({2.0, 0.5}), 1.0) == doctest::Approx(1.625).epsilon(1e-15));
  CHECK(envelope_by_search(2.0, 1.0) + envelope_by_search(0.5, 1.0) ==
        doctest::Approx(1.625).epsilon(1e-10));
  CHECK_THROWS_AS(huber_envelope(scalar(1.0), 0.0), Error);

  // value function of the prox problem, for several λ
  for (double lambda : {0.1, 1.0, 4.0}) {
    for (double x : {-9.0, -1.3, -0.05, 0.0, 0.7, 3.2, 12.0}) {
      CHECK(huber_envelope(scalar(x), lambda) ==
            doctest::Approx(envelope_by_search(x, lambda)).epsilon(1e-9));
    }
  }
}

TEST_CASE("shrink_potential") {
  CHECK(shrink_potential(scalar(2.0), 1.0) == 0.5);
  CHECK(shrink_potential(scalar(0.7), 1.0) == 0.0);
  const ScalarField phi = [](const Vector& v) { return shrink_potential(v, 1.0); };
  CHECK(finite_difference_gradient(phi, scalar(3.0))(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(shrink_potential(scalar(1.0), -2.0), Error);
}

TEST_CASE("scalar identities of soft shrinkage") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (int k = -400; k <= 400; ++k) {
      const double x = 0.05 * k * std::max(1.0, lambda / 4);
      const Vector v = scalar(x);
      const double s = soft_shrink(v, lambda)(0);
      const double m = huber_envelope(v, lambda);
      const double phi = shrink_potential(v, lambda);
      // prox attains the envelope
      CHECK(0.5 * (x - s) * (x - s) + lambda * std::abs(s) ==
            doctest::Approx(m).epsilon(1e-14).scale(1.0));
      // ½x² = φ + M
      CHECK(std::abs(0.5 * x * x - phi - m) <= 1e-12);
      // ∇M = x − S_λx away from ±λ
      const double h = fd_step(x);
      if (std::abs(std::abs(x) - lambda) < 10 * h) continue;
      const ScalarField env = [lambda](const Vector& y) { return huber_envelope(y, lambda); };
      const double fd = finite_difference_gradient(env, v)(0);
      CHECK(std::abs(fd - (x - s)) <= 1e-6 * std::max(1.0, std::abs(x - s)));
    }
  }
}

TEST_CASE("numeric_prox in the Euclidean metric") {
  const ProxableFunction l1 = prox_function(soft_shrink_map(1.0));
  SolverOptions options;
  options.tol = 1e-10;
  const SolveReport r = numeric_prox(l1, scalar(2.0), nullptr, options);
  CHECK(r.converged);
  CHECK(r.minimizer(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.objective == doctest::Approx(1.5));

  const ProxableFunction zero = prox_function(identity_map());
  const Vector x = vec({0.3, -4.0, 2.0});
  CHECK((numeric_prox(zero, x, nullptr).minimizer - x).norm() < 1e-9);

  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto rng = trial_engine(21, trial);
    const Vector v = multiscale_gaussian(6, rng);
    const double lambda = trial % 2 ? 0.5 : 2.0;
    const SolveReport rep = numeric_prox(prox_function(soft_shrink_map(lambda)), v, nullptr);
    REQUIRE(rep.converged);
    CHECK((rep.minimizer - soft_shrink(v, lambda)).cwiseAbs().maxCoeff() <= 10 * 1e-9);
  }
}

TEST_CASE("numeric_prox honours max_iter and dimension checks") {
  SolverOptions options;
  options.max_iter = 1;
  options.tol = 1e-15;
  const SolveReport r =
      numeric_prox(prox_function(soft_shrink_map(1.0)), vec({3.0, -2.0}), nullptr, options);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);

  ConvexTerm bad{prox_function(identity_map()), Matrix::Identity(3, 3), Matrix()};
  CHECK_THROWS_AS(numeric_prox(bad, vec({1.0, 2.0}), nullptr), Error);
}

TEST_CASE("closed-form residuals agree with eval minus identity") {
  auto rng = trial_engine(21, 0);
  for (const ProxMap& m : {soft_shrink_map(0.3), soft_shrink_map(10.0), ridge_map(2.0),
                           nonnegative_map(), identity_map()}) {
    REQUIRE(m.residual);
    for (int k = 0; k < 200; ++k) {
      const Vector x = multiscale_gaussian(4, rng);
      const Vector expected = m.eval(x) - x;
      CHECK((prox_residual(m, x) - expected).cwiseAbs().maxCoeff() <=
            1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff()));
    }
  }
  CHECK(prox_residual(soft_shrink_map(1.0), vec({5.0, -0.5}))(0) == -1.0);
  CHECK(prox_residual(soft_shrink_map(1.0), vec({5.0, -0.5}))(1) == 0.5);
}

TEST_CASE("verify_firm_nonexpansive") {
  const auto soft = verify_firm_nonexpansive(soft_shrink_map(1.0), 5, 10000, 1e-12, 1);
  CHECK(soft.pass);
  CHECK(soft.max_violation <= 0.0);
  CHECK(soft.trials == 10000);

  const auto id = verify_firm_nonexpansive(identity_map(), 5, 1000, 1e-12);
  CHECK(id.pass);
  CHECK(id.max_violation == 0.0);

  ProxMap doubled = identity_map();
  doubled.name = "double";
  doubled.eval = [](const Vector& v) -> Vector { return 2.0 * v; };
  doubled.residual = nullptr;
  CHECK_FALSE(verify_firm_nonexpansive(doubled, 5, 100, 1e-12).pass);

  for (const ProxMap& m : {soft_shrink_map(0.1), soft_shrink_map(10.0), ridge_map(3.0),
                           nonnegative_map(), identity_map()}) {
    const auto r = verify_firm_nonexpansive(m, 7, 2000, 1e-12, 5);
    CHECK_MESSAGE(r.pass, m.name);
  }
}

TEST_CASE("verify_moreau_characterization") {
  const ProxMap soft = soft_shrink_map(1.0);
  CHECK(verify_moreau_characterization(soft, soft.potential, 3, 2000, 1e-6).pass);

  const ProxMap id = identity_map();
  CHECK(verify_moreau_characterization(id, [](const Vector& v) { return 0.5 * v.squaredNorm(); },
                                       3, 500, 1e-6)
            .pass);

  const auto wrong = verify_moreau_characterization(
      soft, [](const Vector& v) { return v.lpNorm<1>(); }, 3, 500, 1e-6);
  CHECK_FALSE(wrong.pass);

  for (const ProxMap& m : {ridge_map(0.5), nonnegative_map(), soft_shrink_map(0.1)}) {
    CHECK_MESSAGE(verify_moreau_characterization(m, m.potential, 4, 1000, 1e-6, 9).pass, m.name);
  }
}

TEST_CASE("catalog envelopes are consistent with their potentials") {
  for (const ProxMap& m : {ridge_map(0.5), nonnegative_map(), identity_map(), soft_shrink_map(2.0)}) {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      auto rng = trial_engine(4, trial);
      const Vector x = multiscale_gaussian(4, rng);
      CHECK(0.5 * x.squaredNorm() ==
            doctest::Approx(m.potential(x) + m.envelope(x)).epsilon(1e-13).scale(1.0));
      const Vector p = m.eval(x);
      CHECK(0.5 * (x - p).squaredNorm() + m.function(p) ==
            doctest::Approx(m.envelope(x)).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("parse_prox") {
  CHECK(parse_prox("soft:0.5").lambda == 0.5);
  CHECK(parse_prox("soft_shrink:2").name == "soft_shrink");
  CHECK(parse_prox("soft").lambda == 1.0);
  CHECK(parse_prox("ridge:3").name == "ridge");
  CHECK(parse_prox("identity").name == "identity");
  CHECK(parse_prox("nonneg").name == "nonneg");
  CHECK_THROWS_AS(parse_prox("soft:abc"), Error);
  CHECK_THROWS_AS(parse_prox("soft:-1"), Error);
  CHECK_THROWS_AS(parse_prox("hard:1"), Error);
}
