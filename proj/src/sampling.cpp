#include "qperm/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace qperm {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Scalar Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

int Rng::below(int n) {
  return static_cast<int>(uniform() * n) % n;
}

State vector_state(const AlgebraElement& v) {
  const StarAlgebra& alg = *v.algebra();
  const int n = alg.dim();
  const Vec gv = alg.gram() * v.coeffs();
  const double norm2 = v.coeffs().dot(gv).real();
  if (!(norm2 > 0)) throw NumericalError("vector state of a zero vector");
  Vec duals(n);
  for (int i = 0; i < n; ++i)
    duals[i] = gv.dot(alg.left_basis(i) * v.coeffs()) / norm2;
  return State::trusted(v.algebra(), duals);
}

State random_state(const AlgebraPtr& algebra, Rng& rng, const AlgebraElement* q) {
  const int n = algebra->dim();
  const int parts = 1 + rng.below(3);
  std::vector<double> weights(parts);
  double total = 0;
  for (auto& w : weights) total += (w = 0.05 + rng.uniform());
  Vec duals = Vec::Zero(n);
  for (int k = 0; k < parts; ++k) {
    for (int attempt = 0;; ++attempt) {
      Vec w(n);
      for (int i = 0; i < n; ++i) w[i] = rng.complex_normal();
      AlgebraElement v(algebra, w);
      if (q) v = *q * v;
      if (gram_norm(v) > 1e-6) {
        duals += (weights[k] / total) * vector_state(v).duals();
        break;
      }
      if (attempt > 20) throw NumericalError("cannot sample inside a zero projection");
    }
  }
  return State::trusted(algebra, duals);
}

int thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("QPERM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qperm
