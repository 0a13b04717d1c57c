#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qperm/dynamics.hpp"
#include "qperm/experiments.hpp"

using namespace qperm;

TEST_CASE("convolution bounds at the corners") {
  CHECK(convolution_bounds(0, 0) == std::pair<double, double>{0, 0});
  CHECK(convolution_bounds(0, 1) == std::pair<double, double>{1, 1});
  CHECK(convolution_bounds(1, 0) == std::pair<double, double>{1, 1});
  CHECK(convolution_bounds(1, 1) == std::pair<double, double>{0, 1});
  CHECK_THROWS_AS(convolution_bounds(-0.1, 0.5), InvalidModel);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const auto [lo, hi] = convolution_bounds(i / 20.0, j / 20.0);
      CHECK(lo <= hi + 1e-15);
      CHECK(lo >= -1e-15);
      CHECK(hi <= 1 + 1e-15);
    }
}

TEST_CASE("phase regions at named points") {
  CHECK(phase_region({0.25, 0.9}).region == Region::QI);
  CHECK(phase_region({0.5, 0.5}).region == Region::BoundaryW);
  const RegionLabel one = phase_region({1, 1});
  CHECK(one.region == Region::QW);
  CHECK(one.qhalfw);
  CHECK(phase_region({0, 0}).region == Region::Degenerate);
  CHECK_THROWS_AS(PhasePoint(1.2, 0.1), InvalidModel);
  // On the boundary curve beta = alpha / (4 alpha - 1).
  for (double a : {0.35, 0.4, 0.6, 0.8, 1.0})
    CHECK(phase_region({a, a / (4 * a - 1)}).region == Region::BoundaryW);
}

TEST_CASE("phase region flags are nested, symmetric and monotone") {
  const int n = 41;
  auto at = [&](int i, int j) { return phase_region({i / double(n - 1), j / double(n - 1)}); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == 0 && j == 0) continue;
      const RegionLabel r = at(i, j);
      const RegionLabel s = at(j, i);
      CHECK(r.region == s.region);
      CHECK(r.q2i == s.q2i);
      CHECK(r.qhalfw == s.qhalfw);
      if (r.q3i) CHECK(r.q2i);
      if (r.q2i) CHECK(r.region == Region::QI);
      if (r.qhalfw) CHECK(r.region == Region::QW);
    }
  // Decreasing either coordinate never leaves Q_I or Q_2I.
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const RegionLabel r = at(i, j);
      const RegionLabel left = at(i - 1, j), down = at(i, j - 1);
      if (r.region == Region::QI) {
        CHECK(left.region == Region::QI);
        CHECK(down.region == Region::QI);
      }
      if (r.q2i) {
        CHECK(left.q2i);
        CHECK(down.q2i);
      }
    }
}

TEST_CASE("strict three-increasing threshold leaves the unit interval") {
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; j += 10) {
      if (i == 0 && j == 0) continue;
      const RegionLabel r = phase_region({i / 100.0, j / 100.0});
      CHECK_FALSE(r.q3i);
      CHECK(r.q3i_out_of_domain);
    }
}

TEST_CASE("phase diagram CSV shape") {
  const std::string csv = phase_diagram_csv(101);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "alpha,beta,region,q2i,q3i,qhalfw,lower,upper");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 101 * 101);
  CHECK(phase_diagram_csv(101) == csv);
}

TEST_CASE("empirical bounds") {
  for (const char* name : {"kp", "dual-s4"}) {
    const auto g = builtin_group(name);
    const auto cv = classical_version(g);
    const BoundsReport rep = verify_bounds_empirically(g, cv, 200, 42);
    CHECK(rep.ok());
    CHECK(rep.rule_cases > 0);
  }
  const auto s4 = builtin_group("s4");
  const BoundsReport rep = verify_bounds_empirically(s4, classical_version(s4), 100, 1);
  CHECK(rep.ok());
  for (const auto& s : rep.samples) {
    CHECK(std::abs(s.alpha) < 1e-9);
    CHECK(std::abs(s.beta) < 1e-9);
    CHECK(std::abs(s.omega) < 1e-9);
  }
}

TEST_CASE("empirical bounds are independent of the worker count") {
  const auto g = builtin_group("kp");
  const auto cv = classical_version(g);
  setenv("QPERM_THREADS", "1", 1);
  const BoundsReport one = verify_bounds_empirically(g, cv, 64, 5);
  setenv("QPERM_THREADS", "4", 1);
  const BoundsReport four = verify_bounds_empirically(g, cv, 64, 5);
  unsetenv("QPERM_THREADS");
  REQUIRE(one.samples.size() == four.samples.size());
  for (size_t k = 0; k < one.samples.size(); ++k) CHECK(one.samples[k].omega == four.samples[k].omega);
}

TEST_CASE("idempotent gap check") {
  const auto kp = builtin_group("kp");
  const auto cv = classical_version(kp);
  CHECK(idempotent_gap_check(kp.haar(), cv));
  CHECK(idempotent_gap_check(kp.counit(), cv));
  const auto d4 = builtin_group("dual-s4");
  const auto& gamma = *d4.dual_of();
  const auto c4 = gamma.generated({gamma.index_of({1, 2, 3, 0})});
  const State psi = dual_subgroup_idempotent(d4, c4);
  const auto cv4 = classical_version(d4);
  CHECK(quantum_fraction(psi, cv4) == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(idempotent_gap_check(psi, cv4));
  // A non-idempotent state with a small quantum part fails.
  const State mix = State::trusted(d4.algebra(), 0.9 * d4.counit().duals() + 0.1 * d4.haar().duals());
  CHECK_FALSE(idempotent_gap_check(mix, cv4));
}

TEST_CASE("trajectories start at the seed") {
  const auto g = builtin_group("kp");
  const auto cv = classical_version(g);
  Rng rng(1, 1);
  const State seed = random_state(g.algebra(), rng);
  const Trajectory t = compute_trajectory(g, seed, 10, &cv);
  REQUIRE(t.states.size() == 11);
  CHECK(sup_distance(t.states[0], seed) == 0);
  CHECK(sup_distance(t.states[2], convolve(g, seed, convolve(g, seed, seed))) < 1e-13);
  CHECK(std::isnan(t.observables[0].distance_to_limit));
}

TEST_CASE("periods of coset-uniform measures in S4") {
  const auto perms = symmetric_group(4);
  const auto g = classical_group(perms);
  const std::vector<Permutation> klein = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  for (const auto& rep : perms) {
    Vec v = Vec::Zero(24);
    for (const auto& n : klein) v[oracle::find(perms, oracle::mul(n, rep))] = 0.25;
    // Order of the coset in S4 / V4, by brute force.
    int order = 1;
    Permutation p = rep;
    while (oracle::find(klein, p) < 0) {
      p = oracle::mul(p, rep);
      ++order;
    }
    const auto period = detect_period(g, State::trusted(g.algebra(), v));
    REQUIRE(period);
    CHECK(*period == order);
  }
  const auto t = oracle::find(perms, {1, 0, 2, 3});
  Vec v = Vec::Zero(24);
  for (const auto& n : klein) v[oracle::find(perms, oracle::mul(n, perms[t]))] = 0.25;
  CHECK(detect_period(g, State::trusted(g.algebra(), v)) == 2);
  CHECK(detect_period(g, g.haar()) == 1);
}

TEST_CASE("quantum fraction alternates along powers of the matrix-block vector state") {
  const auto alpha = kp_alternation(12);
  REQUIRE(alpha.size() == 12);
  for (size_t k = 0; k < alpha.size(); ++k) CHECK(std::abs(alpha[k] - (k % 2 == 0 ? 1.0 : 0.0)) < 1e-12);
  const auto g = builtin_group("kp");
  CHECK(detect_period(g, State::trusted(g.algebra(), Vec::Unit(8, 4))) == 2);
}

TEST_CASE("finite quantum formulas") {
  const auto kp = builtin_group("kp");
  const auto f = finite_quantum_formulas(kp, classical_version(kp));
  CHECK(f.alpha_haar == doctest::Approx(0.5));
  CHECK(f.consistent);
  CHECK(f.bound_2nfact == 48);
  const auto d4 = builtin_group("dual-s4");
  CHECK(finite_quantum_formulas(d4, classical_version(d4)).alpha_haar == doctest::Approx(11.0 / 12));
  const auto s3 = builtin_group("s3");
  CHECK(finite_quantum_formulas(s3, classical_version(s3)).alpha_haar == doctest::Approx(0.0));
}

TEST_CASE("convergence to the Haar state") {
  SUBCASE("point masses do not converge") {
    const auto g = builtin_group("s3");
    const State ev = State::trusted(g.algebra(), Vec::Unit(6, 1));
    CHECK_FALSE(convergence_to_haar(g, ev, 30, 1e-8).converged);
  }
  SUBCASE("faithful mixed state on Kac-Paljutkin") {
    const auto g = builtin_group("kp");
    Rng rng(2, 0);
    const State phi = State::trusted(
        g.algebra(), 0.5 * random_state(g.algebra(), rng).duals() +
                         0.5 * State::normalized_trace(g.algebra()).duals());
    CHECK(convergence_to_haar(g, phi, 200, 1e-8).converged);
  }
  SUBCASE("non-strict states on a dual are not reported as converging") {
    const auto g = builtin_group("dual-s4");
    const auto r = convergence_to_haar(g, g.counit(), 20, 1e-8);
    CHECK_FALSE(r.converged);
    REQUIRE(r.strict);
    CHECK_FALSE(*r.strict);
  }
}
