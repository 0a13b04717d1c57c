#include <doctest.h>

#include "oracles.hpp"
#include "qperm/group_io.hpp"
#include "qperm/idempotent.hpp"
#include "qperm/permutation.hpp"

using namespace qperm;

namespace {

State point_mass(const CompactQuantumGroup& g, int i) {
  return State::trusted(g.algebra(), Vec::Unit(g.dim(), i));
}

double sup_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

const std::vector<std::string> kShipped = {"s3", "s4", "z4", "kp", "dual-s3",
                                           "dual-s4", "dual-d6", "dual-z3"};

}  // namespace

TEST_CASE("shipped groups validate") {
  for (const auto& name : kShipped) {
    CAPTURE(name);
    const auto rep = validate(builtin_group(name));
    CHECK(rep.ok());
  }
}

TEST_CASE("classical S3 validates with tiny residuals") {
  for (const auto& c : validate(builtin_group("s3")).checks) {
    CAPTURE(c.name);
    if (c.name != "trace.faithful") CHECK(c.residual < 1e-12);
  }
}

TEST_CASE("a non-projection magic entry fails the magic check") {
  const auto g = group_from_json(nlohmann::json::parse(
      R"({"kind":"builtin","builtin":"s3","perturb":[{"target":"magic","index":[0,0],"value":0.01}]})"));
  const auto rep = validate(g);
  CHECK_FALSE(rep.ok());
  const auto f = rep.failures();
  CHECK(std::find(f.begin(), f.end(), "magic.projections") != f.end());
}

TEST_CASE("classical convolution matches the brute-force group table") {
  for (int n : {3, 4}) {
    const auto perms = symmetric_group(n);
    const auto g = classical_group(perms);
    for (size_t a = 0; a < perms.size(); ++a)
      for (size_t b = 0; b < perms.size(); ++b) {
        const Vec c = convolve(g, point_mass(g, a), point_mass(g, b)).duals();
        const Vec expected = oracle::measure_convolution(perms, Vec::Unit(g.dim(), a),
                                                         Vec::Unit(g.dim(), b));
        CHECK(sup_diff(c, expected) < 1e-14);
      }
    Rng rng(5, n);
    const State mu = random_state(g.algebra(), rng), nu = random_state(g.algebra(), rng);
    CHECK(sup_diff(convolve(g, mu, nu).duals(),
                   oracle::measure_convolution(perms, mu.duals(), nu.duals())) < 1e-13);
  }
}

TEST_CASE("convolution on group duals is pointwise multiplication") {
  const auto g = builtin_group("dual-s4");
  Rng rng(8, 0);
  for (int k = 0; k < 10; ++k) {
    const State phi = random_state(g.algebra(), rng), rho = random_state(g.algebra(), rng);
    CHECK(sup_diff(convolve(g, phi, rho).duals(), phi.duals().cwiseProduct(rho.duals())) < 1e-12);
  }
}

TEST_CASE("Haar state absorbs random states") {
  for (const auto& name : kShipped) {
    CAPTURE(name);
    const auto g = builtin_group(name);
    for (int k = 0; k < 20; ++k) {
      Rng rng(21, k);
      const State phi = random_state(g.algebra(), rng);
      CHECK(sup_distance(convolve(g, g.haar(), phi), g.haar()) < 1e-10);
      CHECK(sup_distance(convolve(g, phi, g.haar()), g.haar()) < 1e-10);
    }
  }
}

TEST_CASE("Haar state values") {
  SUBCASE("uniform on S3") {
    const auto g = builtin_group("s3");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(g.haar()(g.u(i, j)).real() == doctest::Approx(1.0 / 3));
  }
  SUBCASE("delta at the identity on a dual") {
    const auto g = builtin_group("dual-s4");
    const int e = g.dual_of()->identity();
    CHECK(sup_diff(g.haar().duals(), Vec::Unit(g.dim(), e)) < 1e-12);
  }
  SUBCASE("Kac-Paljutkin Haar state is the normalized trace") {
    const auto g = builtin_group("kp");
    CHECK(sup_distance(g.haar(), State::normalized_trace(g.algebra())) < 1e-12);
    CHECK(sup_distance(haar_state(g), g.haar()) < 1e-7);
    CHECK(haar_solution_dimension(g) == 1);
  }
}

TEST_CASE("counit is the convolution identity and the Kac-Paljutkin counit is f1") {
  for (const auto& name : kShipped) {
    const auto g = builtin_group(name);
    Rng rng(2, 2);
    const State phi = random_state(g.algebra(), rng);
    CHECK(sup_distance(convolve(g, g.counit(), phi), phi) < 1e-12);
    CHECK(sup_distance(convolve(g, phi, g.counit()), phi) < 1e-12);
  }
  const auto kp = builtin_group("kp");
  CHECK(kp.counit().duals() == Vec::Unit(8, 0));
}

TEST_CASE("convolution is associative and reverses under the antipode") {
  for (const auto& name : {"kp", "dual-s4", "s4"}) {
    const auto g = builtin_group(name);
    for (int k = 0; k < 50; ++k) {
      Rng rng(31, k);
      const State a = random_state(g.algebra(), rng), b = random_state(g.algebra(), rng),
                  c = random_state(g.algebra(), rng);
      CHECK(sup_distance(convolve(g, convolve(g, a, b), c), convolve(g, a, convolve(g, b, c))) <
            1e-12);
      if (k < 10)
        CHECK(sup_distance(reverse(g, convolve(g, a, b)), convolve(g, reverse(g, b), reverse(g, a))) <
              1e-12);
    }
  }
}

TEST_CASE("reverse of point masses and of the Haar state") {
  const auto perms = symmetric_group(4);
  const auto g = classical_group(perms);
  for (size_t a = 0; a < perms.size(); ++a) {
    const int ia = oracle::find(perms, oracle::inv(perms[a]));
    CHECK(sup_diff(reverse(g, point_mass(g, a)).duals(), Vec::Unit(g.dim(), ia)) < 1e-15);
  }
  for (const auto& name : kShipped) {
    const auto h = builtin_group(name);
    CHECK(sup_distance(reverse(h, h.haar()), h.haar()) < 1e-12);
  }
  const auto d = builtin_group("dual-s4");
  Rng rng(4, 4);
  const State phi = random_state(d.algebra(), rng);
  const Vec r = reverse(d, phi).duals();
  for (int x = 0; x < d.dim(); ++x) CHECK(std::abs(r[x] - phi.duals()[d.dual_of()->inverse(x)]) < 1e-14);
}

TEST_CASE("diagonal magic entries are group-like in every shipped group") {
  for (const auto& name : kShipped) {
    const auto g = builtin_group(name);
    for (int j = 0; j < g.N(); ++j) CHECK(is_group_like(g, Projection(g.u(j, j))));
  }
}

TEST_CASE("constructor shapes") {
  CHECK(builtin_group("s3").dim() == 6);
  CHECK(builtin_group("s3").N() == 3);
  CHECK(builtin_group("z4").dim() == 4);
  const auto trivial = classical_group({identity_permutation(3)});
  CHECK(trivial.dim() == 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(trivial.u(i, j).coeffs()[0] - double(i == j)) < 1e-15);
  const auto d4 = builtin_group("dual-s4");
  CHECK(d4.N() == 5);
  CHECK(d4.dim() == 24);
  const auto dm = builtin_group("dual-d7");
  CHECK(dm.N() == 4);
  CHECK(dm.dim() == 14);
  CHECK(validate(dm).ok());
  const auto kp = builtin_group("kp");
  CHECK(kp.dim() == 8);
  CHECK(kp.N() == 4);
}

TEST_CASE("Fourier block of the dual of Z2") {
  const auto g = builtin_group("dual-z2");
  Vec plus(2), minus(2);
  plus << 0.5, 0.5;
  minus << 0.5, -0.5;
  CHECK(sup_diff(g.u(0, 0).coeffs(), plus) < 1e-15);
  CHECK(sup_diff(g.u(1, 1).coeffs(), plus) < 1e-15);
  CHECK(sup_diff(g.u(0, 1).coeffs(), minus) < 1e-15);
  CHECK(sup_diff(g.u(1, 0).coeffs(), minus) < 1e-15);
}

TEST_CASE("square of the matrix-block vector state is random on Kac-Paljutkin") {
  const auto g = builtin_group("kp");
  const State e11 = State::trusted(g.algebra(), Vec::Unit(8, 4));
  const auto cv = classical_version(g);
  CHECK(quantum_fraction(convolve(g, e11, e11), cv) < 1e-12);
  CHECK(quantum_fraction(e11, cv) == doctest::Approx(1.0));
}

TEST_CASE("quotient morphisms") {
  SUBCASE("onto the trivial group gives the counit") {
    const auto s3 = builtin_group("s3");
    const auto e = classical_group({identity_permutation(3)});
    const auto pi = quotient_morphism(s3, e, e.magic());
    CHECK(sup_distance(haar_idempotent(pi), s3.counit()) < 1e-12);
  }
  SUBCASE("identity gives the Haar state") {
    const auto kp = builtin_group("kp");
    const auto pi = quotient_morphism(kp, kp, kp.magic());
    CHECK(sup_distance(haar_idempotent(pi), kp.haar()) < 1e-12);
  }
  SUBCASE("abelianization of Kac-Paljutkin") {
    const auto kp = builtin_group("kp");
    const auto cv = classical_version(kp);
    const auto ab = classical_group(cv.permutations);
    const auto pi = quotient_morphism(kp, ab, ab.magic());
    CHECK(pi.intertwining_residual < 1e-12);
    const State psi = haar_idempotent(pi);
    CHECK(is_idempotent(kp, psi, 1e-12));
    CHECK(regular_rank(support_projection(psi)) == regular_rank(cv.p_C));
  }
}

TEST_CASE("magic words span the algebra") {
  for (const auto& name : kShipped) {
    const auto g = builtin_group(name);
    CHECK(magic_word_rank(g) == g.dim());
  }
}
