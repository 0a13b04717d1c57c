// Constructors for the shipped quantum permutation groups.

#include <cmath>
#include <numbers>

#include "qperm/cqg.hpp"

namespace qperm {

namespace {

MagicGrid empty_grid(const AlgebraPtr& alg, int n) {
  return MagicGrid(n, std::vector<AlgebraElement>(n, AlgebraElement::zero(alg)));
}

}  // namespace

CompactQuantumGroup classical_group(const std::vector<Permutation>& perms,
                                    double tolerance) {
  FiniteGroup grp = FiniteGroup::from_permutations(perms);
  const int n = grp.size();
  const int deg = static_cast<int>(perms.front().size());

  AlgebraData data;
  for (int a = 0; a < n; ++a) {
    data.labels.push_back("δ" + cycle_string(perms[a]));
    data.products.emplace_back(a, a * n + a, 1.0);
  }
  data.involution = Mat::Identity(n, n);
  data.unit = Vec::Ones(n);
  data.trace = Vec::Constant(n, 1.0 / n);
  data.tolerance = tolerance;
  AlgebraPtr alg = StarAlgebra::create(std::move(data));

  HopfData hopf;
  hopf.algebra = alg;
  std::vector<Eigen::Triplet<Scalar>> trips;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) trips.emplace_back(a * n + b, grp.mul(a, b), 1.0);
  hopf.delta = SparseMat(static_cast<Eigen::Index>(n) * n, n);
  hopf.delta.setFromTriplets(trips.begin(), trips.end());
  hopf.counit = Vec::Unit(n, grp.identity());
  hopf.antipode = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) hopf.antipode(grp.inverse(a), a) = 1.0;
  hopf.magic = empty_grid(alg, deg);
  for (int i = 0; i < deg; ++i)
    for (int j = 0; j < deg; ++j) {
      Vec v = Vec::Zero(n);
      for (int a = 0; a < n; ++a)
        if (perms[a][j] == i) v[a] = 1.0;
      hopf.magic[i][j] = AlgebraElement(alg, v);
    }
  hopf.name = "C(G), |G| = " + std::to_string(n);
  hopf.function_algebra_of = std::move(grp);
  return CompactQuantumGroup(std::move(hopf));
}

CompactQuantumGroup dual_group(const FiniteGroup& gamma,
                               const std::vector<std::pair<int, int>>& gens,
                               double tolerance) {
  const int n = gamma.size();
  if (gens.empty()) throw InvalidModel("dual group needs at least one generator");
  std::vector<int> gen_elems;
  for (auto [g, d] : gens) {
    if (g < 0 || g >= n) throw InvalidModel("generator index out of range");
    if (d < 1 || gamma.order_of(g) != d)
      throw InvalidModel("generator " + gamma.label(g) + " does not have order " +
                         std::to_string(d));
    gen_elems.push_back(g);
  }
  if (static_cast<int>(gamma.generated(gen_elems).size()) != n)
    throw InvalidModel("generators do not generate the group");

  AlgebraData data;
  for (int a = 0; a < n; ++a) {
    data.labels.push_back("λ" + gamma.label(a));
    for (int b = 0; b < n; ++b) data.products.emplace_back(gamma.mul(a, b), a * n + b, 1.0);
  }
  data.involution = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) data.involution(gamma.inverse(a), a) = 1.0;
  data.unit = Vec::Unit(n, gamma.identity());
  data.trace = Vec::Unit(n, gamma.identity());
  data.tolerance = tolerance;
  AlgebraPtr alg = StarAlgebra::create(std::move(data));

  HopfData hopf;
  hopf.algebra = alg;
  std::vector<Eigen::Triplet<Scalar>> trips;
  for (int a = 0; a < n; ++a) trips.emplace_back(a * n + a, a, 1.0);
  hopf.delta = SparseMat(static_cast<Eigen::Index>(n) * n, n);
  hopf.delta.setFromTriplets(trips.begin(), trips.end());
  hopf.counit = Vec::Ones(n);
  hopf.antipode = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) hopf.antipode(gamma.inverse(a), a) = 1.0;

  int big_n = 0;
  for (auto [g, d] : gens) big_n += d;
  hopf.magic = empty_grid(alg, big_n);
  int offset = 0;
  for (auto [g, d] : gens) {
    // Unitary DFT conjugate of diag(1, l, l^2, ...): entry (j, k) is
    // (1/d) sum_m w^{(j-k)m} l^m.
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        Vec v = Vec::Zero(n);
        for (int m = 0; m < d; ++m) {
          const double angle = 2.0 * std::numbers::pi * (((j - k) * m % d + d) % d) / d;
          v[gamma.power(g, m)] += std::polar(1.0 / d, angle);
        }
        hopf.magic[offset + j][offset + k] = AlgebraElement(alg, v);
      }
    offset += d;
  }
  hopf.name = "dual of a group of order " + std::to_string(n);
  hopf.dual_of = gamma;
  return CompactQuantumGroup(std::move(hopf));
}

CompactQuantumGroup kac_paljutkin(double tolerance) {
  // Basis: four one-dimensional summands f1..f4, then the matrix units of
  // M_2 in row-major order.
  enum { F1, F2, F3, F4, E11, E12, E21, E22 };
  const int n = 8;
  AlgebraData data;
  data.labels = {"f1", "f2", "f3", "f4", "E11", "E12", "E21", "E22"};
  for (int a = F1; a <= F4; ++a) data.products.emplace_back(a, a * n + a, 1.0);
  const int mu[2][2] = {{E11, E12}, {E21, E22}};
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t)
        data.products.emplace_back(mu[r][t], mu[r][s] * n + mu[s][t], 1.0);
  data.involution = Mat::Identity(n, n);
  data.involution(E12, E12) = data.involution(E21, E21) = 0.0;
  data.involution(E21, E12) = data.involution(E12, E21) = 1.0;
  data.unit = Vec::Zero(n);
  for (int a : {F1, F2, F3, F4, E11, E22}) data.unit[a] = 1.0;
  data.trace = Vec::Zero(n);
  for (int a : {F1, F2, F3, F4}) data.trace[a] = 1.0 / 8;
  data.trace[E11] = data.trace[E22] = 1.0 / 4;
  data.tolerance = tolerance;
  AlgebraPtr alg = StarAlgebra::create(std::move(data));

  const Scalar i{0.0, 1.0};
  const Scalar h = 0.5;
  const Scalar ih = 0.5 * i;
  // Delta(e_k) = sum of c e_a (x) e_b.
  struct Term {
    int k, a, b;
    Scalar c;
  };
  const std::vector<Term> terms = {
      {F1, F1, F1, 1.}, {F1, F2, F2, 1.}, {F1, F3, F3, 1.}, {F1, F4, F4, 1.},
      {F1, E11, E11, h}, {F1, E12, E12, ih}, {F1, E21, E21, -ih}, {F1, E22, E22, h},

      {F2, F1, F2, 1.}, {F2, F2, F1, 1.}, {F2, F3, F4, 1.}, {F2, F4, F3, 1.},
      {F2, E11, E22, h}, {F2, E12, E21, -ih}, {F2, E21, E12, ih}, {F2, E22, E11, h},

      {F3, F1, F3, 1.}, {F3, F2, F4, 1.}, {F3, F3, F1, 1.}, {F3, F4, F2, 1.},
      {F3, E11, E22, h}, {F3, E12, E21, ih}, {F3, E21, E12, -ih}, {F3, E22, E11, h},

      {F4, F1, F4, 1.}, {F4, F2, F3, 1.}, {F4, F3, F2, 1.}, {F4, F4, F1, 1.},
      {F4, E11, E11, h}, {F4, E12, E12, -ih}, {F4, E21, E21, ih}, {F4, E22, E22, h},

      {E11, F1, E11, 1.}, {E11, F2, E22, 1.}, {E11, F3, E22, 1.}, {E11, F4, E11, 1.},
      {E11, E11, F1, 1.}, {E11, E11, F4, 1.}, {E11, E22, F2, 1.}, {E11, E22, F3, 1.},

      {E12, F1, E12, 1.}, {E12, F2, E21, 1.}, {E12, F3, E21, -1.}, {E12, F4, E12, -1.},
      {E12, E12, F1, 1.}, {E12, E12, F4, -1.}, {E12, E21, F2, -1.}, {E12, E21, F3, 1.},

      {E21, F1, E21, 1.}, {E21, F2, E12, 1.}, {E21, F3, E12, -1.}, {E21, F4, E21, -1.},
      {E21, E12, F2, -1.}, {E21, E12, F3, 1.}, {E21, E21, F1, 1.}, {E21, E21, F4, -1.},

      {E22, F1, E22, 1.}, {E22, F2, E11, 1.}, {E22, F3, E11, 1.}, {E22, F4, E22, 1.},
      {E22, E11, F2, 1.}, {E22, E11, F3, 1.}, {E22, E22, F1, 1.}, {E22, E22, F4, 1.},
  };
  HopfData hopf;
  hopf.algebra = alg;
  std::vector<Eigen::Triplet<Scalar>> trips;
  for (const auto& t : terms) trips.emplace_back(t.a * n + t.b, t.k, t.c);
  hopf.delta = SparseMat(n * n, n);
  hopf.delta.setFromTriplets(trips.begin(), trips.end());
  hopf.counit = Vec::Unit(n, F1);
  hopf.antipode = Mat::Identity(n, n);
  hopf.antipode(E12, E12) = hopf.antipode(E21, E21) = 0.0;
  hopf.antipode(E21, E12) = -i;  // S(E12) = -i E21
  hopf.antipode(E12, E21) = i;   // S(E21) = i E12

  auto el = [&](std::initializer_list<std::pair<int, Scalar>> parts) {
    Vec v = Vec::Zero(n);
    for (auto [a, c] : parts) v[a] += c;
    return AlgebraElement(alg, v);
  };
  const AlgebraElement f12 = el({{F1, 1.}, {F2, 1.}});
  const AlgebraElement f34 = el({{F3, 1.}, {F4, 1.}});
  const AlgebraElement f13 = el({{F1, 1.}, {F3, 1.}});
  const AlgebraElement f24 = el({{F2, 1.}, {F4, 1.}});
  // Rank-one projections in M_2 onto (1, 1), (1, -1), (1, -i), (1, i).
  const AlgebraElement p = el({{E11, h}, {E12, h}, {E21, h}, {E22, h}});
  const AlgebraElement q = el({{E11, h}, {E12, -h}, {E21, -h}, {E22, h}});
  const AlgebraElement pp = el({{E11, h}, {E12, ih}, {E21, -ih}, {E22, h}});
  const AlgebraElement qp = el({{E11, h}, {E12, -ih}, {E21, ih}, {E22, h}});
  hopf.magic = {{f12, f34, p, q},
                {f34, f12, q, p},
                {pp, qp, f13, f24},
                {qp, pp, f24, f13}};
  hopf.name = "Kac-Paljutkin";
  hopf.kac_paljutkin = true;
  return CompactQuantumGroup(std::move(hopf));
}

}  // namespace qperm
