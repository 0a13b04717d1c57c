#include "qperm/idempotent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qperm/sampling.hpp"

namespace qperm {

namespace {

double sup(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double resolve(double tol, const CompactQuantumGroup& g) {
  return tol < 0 ? g.algebra()->iterative_tolerance() : tol;
}

double absorption_residual(const CompactQuantumGroup& g, const LinearFunctional& limit,
                           const LinearFunctional& phi) {
  return std::max(sup(convolve(g, phi, limit).duals() - limit.duals()),
                  sup(convolve(g, limit, phi).duals() - limit.duals()));
}

}  // namespace

CesaroResult cesaro_idempotent(const CompactQuantumGroup& g, const State& seed,
                               std::int64_t max_n, double tol) {
  const double t = resolve(tol, g);
  const AlgebraPtr& alg = g.algebra();
  // Squaring doubles rounding errors along directions fixed by the limit, so
  // the number of squarings is kept small and every iterate is renormalized
  // to unit mass.
  auto unital = [&](const Vec& d) {
    return LinearFunctional(alg, d / (d.transpose() * alg->unit()).value());
  };

  // Stage 1: dyadic Cesaro means M_{2n} = (M_n + M_n * phi^n) / 2 up to a
  // short horizon.
  constexpr std::int64_t kHorizon = 1024;
  LinearFunctional mean = seed;
  LinearFunctional power = seed;
  std::int64_t n = 1;
  double diff = INFINITY;
  while (n < kHorizon && n <= max_n / 2) {
    const LinearFunctional next =
        unital((mean.duals() + convolve(g, mean, power).duals()) / 2.0);
    diff = sup(next.duals() - mean.duals());
    mean = next;
    n *= 2;
    if (diff < t / 16) break;
    power = unital(convolve(g, power, power).duals());
  }

  // Stage 2: M^{*2^j} is again an average of powers of the seed. Every
  // spectral component of M other than the limit has modulus below one, so
  // the squares converge quadratically to the same idempotent.
  while (diff >= t / 16 && n <= max_n / 2) {
    const LinearFunctional next = unital(convolve(g, mean, mean).duals());
    diff = sup(next.duals() - mean.duals());
    mean = next;
    n *= 2;
  }
  const bool settled = diff < t / 16;
  State limit = State::trusted(alg, mean.duals());
  const double residual = absorption_residual(g, limit, seed);
  return {limit, n, residual, settled && residual <= 10 * t};
}

CesaroResult generated_idempotent(const CompactQuantumGroup& g,
                                  const std::vector<State>& states,
                                  std::int64_t max_n, double tol, std::uint64_t seed) {
  if (states.empty()) throw Error("generated_idempotent needs at least one state");
  const double t = resolve(tol, g);

  std::vector<State> idems;
  bool ok = true;
  std::int64_t steps = 0;
  for (const auto& s : states) {
    CesaroResult r = cesaro_idempotent(g, s, max_n, t);
    ok = ok && r.converged;
    steps += r.iterations;
    idems.push_back(r.limit);
  }

  auto fold = [&](const std::vector<size_t>& order) {
    State acc = idems[order[0]];
    for (size_t k = 1; k < order.size(); ++k) {
      CesaroResult r = cesaro_idempotent(g, convolve(g, acc, idems[order[k]]), max_n, t);
      ok = ok && r.converged;
      steps += r.iterations;
      acc = r.limit;
    }
    return acc;
  };

  std::vector<size_t> order(states.size());
  std::iota(order.begin(), order.end(), 0);
  const State limit = fold(order);

  Rng rng(seed, 0);
  for (size_t k = order.size(); k > 1; --k)
    std::swap(order[k - 1], order[rng.below(static_cast<int>(k))]);
  const State other = fold(order);
  if (sup_distance(limit, other) > 10 * t) ok = false;

  double residual = 0;
  for (const auto& s : states) residual = std::max(residual, absorption_residual(g, limit, s));
  if (residual > 10 * t) ok = false;
  return {limit, steps, residual, ok};
}

double idempotency_defect(const CompactQuantumGroup& g, const LinearFunctional& phi) {
  return sup(convolve(g, phi, phi).duals() - phi.duals());
}

bool is_idempotent(const CompactQuantumGroup& g, const LinearFunctional& phi, double tol) {
  return idempotency_defect(g, phi) <= resolve(tol, g);
}

bool quasi_subgroup_member(const CompactQuantumGroup& g, const State& psi,
                           const State& phi, double tol) {
  if (!is_idempotent(g, psi, tol)) throw NumericalError("absorbing state is not idempotent");
  return absorption_residual(g, psi, phi) <= tol;
}

double group_like_defect(const CompactQuantumGroup& g, const AlgebraElement& p) {
  const StarAlgebra& alg = *g.algebra();
  if (p.algebra().get() != g.algebra().get()) throw AlgebraMismatch();
  const Mat dp = g.coproduct(p.coeffs());
  const Mat lhs = dp * alg.right_matrix(p.coeffs()).transpose();
  const Mat rhs = p.coeffs() * p.coeffs().transpose();
  return tensor_gram_norm(alg, lhs - rhs);
}

bool is_group_like(const CompactQuantumGroup& g, const Projection& p, double tol) {
  const double t = tol < 0 ? g.algebra()->tolerance() : tol;
  return group_like_defect(g, p) <= t;
}

State condition(const State& phi, const AlgebraElement& q, double tol) {
  const StarAlgebra& alg = *phi.algebra();
  if (q.algebra().get() != phi.algebra().get()) throw AlgebraMismatch();
  const double t = tol < 0 ? alg.tolerance() : tol;
  const double mass = phi(q).real();
  if (!(mass > t))
    throw ConditioningError("conditioning on a projection of mass " + std::to_string(mass));
  const Mat sandwich = alg.left_matrix(q.coeffs()) * alg.right_matrix(q.coeffs());
  return State::trusted(phi.algebra(), sandwich.transpose() * phi.duals() / mass);
}

Mat null_space(const LinearFunctional& phi, double tol) {
  const Mat m = phi.algebra()->positivity_matrix(phi.duals());
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
  const RealVec& w = es.eigenvalues();
  const double thr = tol * std::max(1.0, w.cwiseAbs().maxCoeff());
  int count = 0;
  while (count < w.size() && w[count] <= thr) ++count;
  return es.eigenvectors().leftCols(count);
}

IdempotentClass classify_idempotent(const CompactQuantumGroup& g, const State& phi,
                                    double tol) {
  if (!is_idempotent(g, phi, tol)) throw NumericalError("state is not idempotent");
  const StarAlgebra& alg = *g.algebra();
  const Mat ns = null_space(phi, tol);
  const Mat m = alg.positivity_matrix(phi.duals());
  // N_phi is always a left ideal; only right multiplication can leave it.
  IdempotentClass out{IdempotentKind::Haar, static_cast<int>(ns.cols()), {}};
  for (int i = 0; i < alg.dim(); ++i) {
    bool leaves = false;
    for (int k = 0; k < ns.cols() && !leaves; ++k) {
      const Vec x = alg.right_basis(i) * ns.col(k);
      const double val = std::abs(x.dot(m * x));
      leaves = val > 10 * tol * std::max(1.0, x.squaredNorm());
    }
    if (leaves) out.witnesses.push_back(i);
  }
  if (!out.witnesses.empty()) out.kind = IdempotentKind::NonHaar;
  return out;
}

State dual_subgroup_idempotent(const CompactQuantumGroup& g, const std::vector<int>& subgroup) {
  const auto& gamma = g.dual_of();
  if (!gamma) throw InvalidModel("subgroup idempotents need a dual group");
  if (!gamma->is_subgroup(subgroup)) throw InvalidModel("indices do not form a subgroup");
  Vec duals = Vec::Zero(g.dim());
  for (int x : subgroup) duals[x] = 1.0;
  State psi(LinearFunctional(g.algebra(), duals));
  if (!is_idempotent(g, psi)) throw NumericalError("subgroup indicator is not idempotent");
  return psi;
}

CollapseProbeReport collapse_stability_probe(const CompactQuantumGroup& g, const State& psi,
                                             int n_samples, std::uint64_t seed) {
  const double tol = kIterativeTol;
  if (!is_idempotent(g, psi, tol)) throw NumericalError("probe needs an idempotent state");
  const AlgebraPtr& alg = g.algebra();
  const Projection supp = support_projection(psi, 1e-6);

  std::vector<State> members{psi};
  for (int s = 0; s < n_samples; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    const State phi = random_state(alg, rng);
    if (phi(supp).real() <= tol) continue;
    State c = condition(phi, supp);
    if (quasi_subgroup_member(g, psi, c, tol)) members.push_back(std::move(c));
  }

  CollapseProbeReport rep;
  rep.members_tested = static_cast<int>(members.size());
  const int big_n = g.N();
  for (int i = 0; i < big_n; ++i)
    for (int j = 0; j < big_n; ++j) {
      if (psi(g.u(i, j)).real() <= tol) continue;
      for (size_t m = 0; m < members.size(); ++m) {
        if (members[m](g.u(i, j)).real() <= tol) continue;
        const State c = condition(members[m], g.u(i, j));
        ++rep.conditionings_tested;
        const double defect = absorption_residual(g, psi, c);
        if (defect > tol)
          rep.violations.push_back({i, j, static_cast<int>(m), defect});
      }
    }
  return rep;
}

}  // namespace qperm
