#include "proxframe/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace proxframe {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x5851f42d4c957f2dULL)));
}

Vector gaussian_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

Vector multiscale_gaussian(Index dim, std::mt19937_64& rng) {
  static constexpr double kScales[] = {0.1, 1.0, 10.0};
  std::uniform_int_distribution<int> pick(0, 2);
  const double scale = kScales[pick(rng)];
  return scale * gaussian_vector(dim, rng);
}

Vector random_unit_vector(Index dim, std::mt19937_64& rng) {
  Vector v = gaussian_vector(dim, rng);
  while (v.norm() == 0.0) v = gaussian_vector(dim, rng);
  return v / v.norm();
}

Matrix random_orthonormal(Index n, Index d, std::mt19937_64& rng) {
  Matrix g(n, n);
  for (Index j = 0; j < n; ++j) g.col(j) = gaussian_vector(n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column signs so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q.leftCols(d);
}

Matrix random_conditioned(Index n, Index d, double condition, std::mt19937_64& rng) {
  const Matrix u = random_orthonormal(n, d, rng);
  const Matrix v = random_orthonormal(d, d, rng);
  Vector s(d);
  for (Index i = 0; i < d; ++i) {
    const double t = d == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(d - 1);
    s(i) = std::pow(condition, -t);
  }
  return u * s.asDiagonal() * v.transpose();
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PROXFRAME_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) return static_cast<unsigned>(cap);
  }
  return hw;
}

double parallel_max(std::size_t count, const std::function<double(std::size_t)>& fn,
                    unsigned threads) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto guarded = [&fn](std::size_t i) {
    const double v = fn(i);
    return std::isnan(v) ? kInf : v;
  };
  if (threads == 0) threads = worker_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  double result = -kInf;
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) result = std::max(result, guarded(i));
    return result;
  }

  std::vector<double> partial(threads, -kInf);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) {
          partial[t] = std::max(partial[t], guarded(i));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (double p : partial) result = std::max(result, p);
  return result;
}

}  // namespace proxframe
