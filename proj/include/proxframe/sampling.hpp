#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

#include "proxframe/types.hpp"

namespace proxframe {

/// Counter-based seeding: the engine for trial `index` depends only on
/// (seed, index), so results do not depend on how trials are scheduled.
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t index);

Vector gaussian_vector(Index dim, std::mt19937_64& rng);

/// Gaussian vector multiplied by one of {0.1, 1, 10}, chosen uniformly.
Vector multiscale_gaussian(Index dim, std::mt19937_64& rng);

Vector random_unit_vector(Index dim, std::mt19937_64& rng);

/// Random n×d matrix with orthonormal columns (n >= d), via QR of a Gaussian.
Matrix random_orthonormal(Index n, Index d, std::mt19937_64& rng);

/// Random n×d matrix U diag(s) Vᵀ with singular values log-spaced from 1
/// down to 1/condition.
Matrix random_conditioned(Index n, Index d, double condition, std::mt19937_64& rng);

/// Worker count: PROXFRAME_THREADS if set and positive, else hardware
/// concurrency (at least 1).
unsigned worker_count();

/// max over i in [0, count) of fn(i), evaluated on up to `threads` workers
/// (0 = worker_count()). NaN results count as +inf.
double parallel_max(std::size_t count, const std::function<double(std::size_t)>& fn,
                    unsigned threads = 0);

}  // namespace proxframe
