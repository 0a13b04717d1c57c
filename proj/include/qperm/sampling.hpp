#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "qperm/algebra.hpp"

namespace qperm {

/// Deterministic generator for one sample. Streams are keyed by
/// (seed, index) so results do not depend on scheduling.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller.
  double normal();
  Scalar complex_normal();
  /// Uniform integer in [0, n).
  int below(int n);

 private:
  std::mt19937_64 engine_;
};

/// a -> tau(v^* a v) / tau(v^* v).
State vector_state(const AlgebraElement& v);

/// Convex combination of 1 to 3 vector states at random vectors. With a
/// projection q the vectors are drawn from the range of q, so the result
/// gives q full mass.
State random_state(const AlgebraPtr& algebra, Rng& rng,
                   const AlgebraElement* q = nullptr);

/// Worker count: QPERM_THREADS if set, else the hardware concurrency.
int thread_count();

/// Runs f(0..n-1) on up to thread_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace qperm
