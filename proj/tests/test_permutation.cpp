#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qperm/group_io.hpp"
#include "qperm/permutation.hpp"

using namespace qperm;

namespace {

State point_mass(const CompactQuantumGroup& g, int i) {
  return State::trusted(g.algebra(), Vec::Unit(g.dim(), i));
}

State sign_state(const CompactQuantumGroup& g) {
  const auto& perms = *g.dual_of()->permutations();
  Vec v(g.dim());
  for (int x = 0; x < g.dim(); ++x) v[x] = oracle::sign(perms[x]);
  return State::trusted(g.algebra(), v);
}

}  // namespace

TEST_CASE("Birkhoff slices") {
  const auto s3 = builtin_group("s3");
  CHECK((birkhoff_slice(s3, s3.counit()).matrix - RealMat::Identity(3, 3)).norm() < 1e-15);
  CHECK((birkhoff_slice(s3, s3.haar()).matrix - RealMat::Constant(3, 3, 1.0 / 3)).norm() < 1e-14);

  for (const char* name : {"kp", "dual-s4", "s4", "dual-d6"}) {
    const auto g = builtin_group(name);
    for (int k = 0; k < 50; ++k) {
      Rng rng(3, k);
      const State a = random_state(g.algebra(), rng), b = random_state(g.algebra(), rng);
      const RealMat pa = birkhoff_slice(g, a).matrix, pb = birkhoff_slice(g, b).matrix;
      CHECK(birkhoff_slice(g, a).doubly_stochastic(1e-9));
      CHECK((birkhoff_slice(g, convolve(g, a, b)).matrix - pa * pb).cwiseAbs().maxCoeff() < 1e-8);
      const LinearFunctional mix(g.algebra(), 0.3 * a.duals() + 0.7 * b.duals());
      CHECK((birkhoff_slice(g, mix).matrix - (0.3 * pa + 0.7 * pb)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("characters") {
  const auto perms = symmetric_group(3);
  const auto s3 = classical_group(perms);
  for (size_t s = 0; s < perms.size(); ++s) {
    const auto sigma = is_character(s3, point_mass(s3, s));
    REQUIRE(sigma);
    CHECK(*sigma == perms[s]);
  }
  CHECK_FALSE(is_character(s3, s3.haar()));
  const auto d4 = builtin_group("dual-s4");
  const auto sigma = is_character(d4, sign_state(d4));
  REQUIRE(sigma);
  CHECK(*sigma == Permutation{1, 0, 2, 3, 4});
}

TEST_CASE("classical versions") {
  SUBCASE("function algebra of S4") {
    const auto g = builtin_group("s4");
    const auto cv = classical_version(g);
    CHECK(cv.permutations == symmetric_group(4));
    CHECK(cv.p_Q.coeffs().norm() < 1e-9);
  }
  SUBCASE("Kac-Paljutkin") {
    const auto cv = classical_version(builtin_group("kp"));
    CHECK(cv.permutations.size() == 4);
    CHECK(oracle::closure(cv.permutations).size() == 4);
  }
  SUBCASE("dual of S4") {
    const auto cv = classical_version(builtin_group("dual-s4"));
    REQUIRE(cv.permutations.size() == 2);
    CHECK(cv.permutations[0] == identity_permutation(5));
    CHECK(cv.permutations[1] == Permutation{1, 0, 2, 3, 4});
  }
}

TEST_CASE("character supports are orthogonal central projections and p_C is group-like") {
  for (const char* name : {"kp", "dual-s4", "dual-d6", "s3", "z4", "dual-s3"}) {
    CAPTURE(name);
    const auto g = builtin_group(name);
    const auto cv = classical_version(g);
    for (size_t a = 0; a < cv.supports.size(); ++a) {
      CHECK(is_central(cv.supports[a]));
      for (size_t b = a + 1; b < cv.supports.size(); ++b)
        CHECK(multiply(cv.supports[a], cv.supports[b]).coeffs().norm() < 1e-9);
      // Meet-based support equals the support of the character.
      CHECK(regular_rank(support_projection(cv.characters[a])) == regular_rank(cv.supports[a]));
    }
    CHECK(is_group_like(g, cv.p_C));
    const auto ab = classical_group(cv.permutations);
    const State psi_cl = haar_idempotent(quotient_morphism(g, ab, ab.magic()));
    CHECK(regular_rank(support_projection(psi_cl)) == regular_rank(cv.p_C));
  }
}

TEST_CASE("states absorbed by the classical idempotent are random") {
  for (const char* name : {"kp", "dual-s4"}) {
    const auto g = builtin_group(name);
    const auto cv = classical_version(g);
    const auto ab = classical_group(cv.permutations);
    const State psi_cl = haar_idempotent(quotient_morphism(g, ab, ab.magic()));
    int members = 0;
    for (int k = 0; k < 40; ++k) {
      Rng rng(13, k);
      const State phi = k % 2 ? random_state(g.algebra(), rng, &cv.p_C) : random_state(g.algebra(), rng);
      if (!quasi_subgroup_member(g, psi_cl, phi)) continue;
      ++members;
      CHECK(quantum_fraction(phi, cv) < 1e-9);
    }
    CHECK(members >= 20);
  }
}

TEST_CASE("quantum fractions") {
  const auto kp = builtin_group("kp");
  const auto cv = classical_version(kp);
  CHECK(std::abs(quantum_fraction(kp.haar(), cv) - 0.5) < 1e-9);
  for (const auto& c : cv.characters) CHECK(quantum_fraction(c, cv) < 1e-12);
  const auto d4 = builtin_group("dual-s4");
  CHECK(std::abs(quantum_fraction(d4.haar(), classical_version(d4)) - 11.0 / 12) < 1e-9);
}

TEST_CASE("random-quantum decomposition reconstructs the state") {
  for (const char* name : {"kp", "dual-s4"}) {
    const auto g = builtin_group(name);
    const auto cv = classical_version(g);
    for (int k = 0; k < 10; ++k) {
      Rng rng(77, k);
      const State phi = random_state(g.algebra(), rng);
      const Decomposition d = decompose(phi, cv);
      REQUIRE(d.classical);
      REQUIRE(d.quantum);
      const Vec rebuilt = (1 - d.alpha) * d.classical->duals() + d.alpha * d.quantum->duals();
      CHECK((rebuilt - phi.duals()).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(quantum_fraction(*d.classical, cv) < 1e-9);
      CHECK(quantum_fraction(*d.quantum, cv) == doctest::Approx(1.0));
    }
  }
  const auto s3 = builtin_group("s3");
  const Decomposition d = decompose(s3.haar(), classical_version(s3));
  CHECK(d.classical);
  CHECK_FALSE(d.quantum);
}

TEST_CASE("canonical partitions") {
  CHECK(canonical_partition({{3, 1}, {0, 2}}, 4) == Partition{{0, 2}, {1, 3}});
  CHECK_THROWS_AS(canonical_partition({{0, 1}}, 3), InvalidModel);
  CHECK_THROWS_AS(canonical_partition({{0, 1}, {1, 2}}, 3), InvalidModel);
}

TEST_CASE("stabiliser idempotents") {
  SUBCASE("one block gives the Haar state") {
    const auto g = builtin_group("kp");
    CHECK(sup_distance(stabiliser_idempotent(g, {{0, 1, 2, 3}}).idempotent, g.haar()) < 1e-9);
  }
  SUBCASE("a fixed point on Kac-Paljutkin gives the conditioned Haar state") {
    const auto g = builtin_group("kp");
    for (int j = 0; j < 4; ++j) {
      Partition p{{j}};
      std::vector<int> rest;
      for (int i = 0; i < 4; ++i)
        if (i != j) rest.push_back(i);
      p.push_back(rest);
      const auto r = stabiliser_idempotent(g, canonical_partition(p, 4));
      CHECK(r.converged);
      CHECK(sup_distance(r.idempotent, condition(g.haar(), g.u(j, j))) < 1e-8);
    }
  }
  SUBCASE("three blocks on a dihedral dual force the counit") {
    for (int m : {3, 5, 6}) {
      const auto g = builtin_group("dual-d" + std::to_string(m));
      const Partition p = canonical_partition({{0}, {2}, {1, 3}}, 4);
      CHECK(sup_distance(stabiliser_idempotent(g, p).idempotent, g.counit()) < 1e-8);
      Rng rng(1, m);
      CHECK_FALSE(stabiliser_membership(g, random_state(g.algebra(), rng), p));
      CHECK(stabiliser_membership(g, g.counit(), p));
    }
  }
  SUBCASE("stabiliser idempotents charge every diagonal entry and absorb members") {
    for (const char* name : {"kp", "dual-s4", "s4"}) {
      const auto g = builtin_group(name);
      const Partition p = canonical_partition(
          g.N() == 4 ? Partition{{0, 1}, {2, 3}} : Partition{{0, 1}, {2, 3, 4}}, g.N());
      const auto r = stabiliser_idempotent(g, p);
      for (int j = 0; j < g.N(); ++j) CHECK(r.idempotent(g.u(j, j)).real() > 1e-9);
      for (int k = 0; k < 10; ++k) {
        Rng rng(200, k);
        const State phi = random_state(g.algebra(), rng, &r.block_projection);
        REQUIRE(stabiliser_membership(g, phi, p));
        CHECK(quasi_subgroup_member(g, r.idempotent, phi));
      }
    }
  }
}

TEST_CASE("centrality") {
  const auto s4 = builtin_group("s4");
  CHECK(is_central(AlgebraElement::one(s4.algebra())));
  for (int j = 0; j < 4; ++j) CHECK(is_central(s4.u(j, j)));
  CHECK_FALSE(is_central(builtin_group("dual-s4").u(0, 0)));
}

TEST_CASE("fixed-point spectra") {
  SUBCASE("classical S3") {
    const auto g = builtin_group("s3");
    const FixSpectrum fs = fix_spectrum(g);
    for (double l : fs.eigenvalues) CHECK((std::abs(l) < 1e-9 || std::abs(l - 1) < 1e-9 || std::abs(l - 3) < 1e-9));
    for (int k = 0; k < 10; ++k) {
      Rng rng(9, k);
      CHECK(has_integer_fixed_points(fs, random_state(g.algebra(), rng)));
    }
    const auto dist = fs.distribution(g.counit());
    for (auto [l, w] : dist) CHECK(w == doctest::Approx(std::abs(l - 3) < 1e-9 ? 1.0 : 0.0));
  }
  SUBCASE("dual of S4 against the regular representation") {
    const auto g = builtin_group("dual-s4");
    const FixSpectrum fs = fix_spectrum(g);
    const auto perms = symmetric_group(4);
    const Mat fix = oracle::regular_matrix(
        perms, {{identity_permutation(4), 2.0}, {{1, 0, 2, 3}, 1.0}, {{0, 2, 3, 1}, 1.0}, {{0, 3, 1, 2}, 1.0}});
    std::set<long long> expected, got;
    for (double l : oracle::hermitian_eigenvalues(fix)) expected.insert(std::llround(l * 1e6));
    for (double l : fs.eigenvalues) got.insert(std::llround(l * 1e6));
    CHECK(expected == got);
    CHECK(fs.find((5 + std::sqrt(17.0)) / 2, 1e-9) >= 0);
    CHECK(fs.find((5 - std::sqrt(17.0)) / 2, 1e-9) >= 0);
    CHECK_FALSE(has_integer_fixed_points(fs, g.haar()));
    double total = 0;
    Rng rng(10, 0);
    for (auto [l, w] : fs.distribution(random_state(g.algebra(), rng))) {
      CHECK(l >= -1e-9);
      CHECK(l <= g.N() + 1e-9);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0));
    const auto dist = fs.distribution(g.counit());
    for (auto [l, w] : dist) CHECK(w == doctest::Approx(std::abs(l - 5) < 1e-9 ? 1.0 : 0.0));
  }
}
