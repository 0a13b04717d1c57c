#include "qperm/permutation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qperm/sampling.hpp"

namespace qperm {

namespace {

// Orthonormal basis of the range of a Hermitian PSD accumulator.
Mat range_of(const Mat& acc) {
  Eigen::SelfAdjointEigenSolver<Mat> es((acc + acc.adjoint()) / 2.0);
  const RealVec& w = es.eigenvalues();
  const double thr = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
  int start = 0;
  while (start < w.size() && w[start] <= thr) ++start;
  return es.eigenvectors().rightCols(w.size() - start);
}

Mat kernel_of(const Mat& acc) {
  Eigen::SelfAdjointEigenSolver<Mat> es((acc + acc.adjoint()) / 2.0);
  const RealVec& w = es.eigenvalues();
  const double thr = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
  int count = 0;
  while (count < w.size() && w[count] <= thr) ++count;
  return es.eigenvectors().leftCols(count);
}

// Basis of the two-sided ideal generated by all commutators.
Mat commutator_ideal(const StarAlgebra& alg) {
  const int n = alg.dim();
  Mat acc = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec v = Vec(alg.products().col(static_cast<Eigen::Index>(i) * n + j)) -
                    Vec(alg.products().col(static_cast<Eigen::Index>(j) * n + i));
      if (v.cwiseAbs().maxCoeff() > 0) acc.noalias() += v * v.adjoint();
    }
  Mat q = range_of(acc);
  while (q.cols() > 0 && q.cols() < n) {
    Mat grow = q * q.adjoint();
    for (int a = 0; a < n; ++a) {
      const Mat l = alg.left_basis(a) * q;
      const Mat r = alg.right_basis(a) * q;
      grow.noalias() += l * l.adjoint();
      grow.noalias() += r * r.adjoint();
    }
    Mat next = range_of(grow);
    if (next.cols() == q.cols()) break;
    q = std::move(next);
  }
  return q;
}

// Minimal central projections of the abelian quotient, one per character.
std::vector<Vec> character_projections(const AlgebraPtr& ptr) {
  const StarAlgebra& alg = *ptr;
  const int n = alg.dim();
  const Mat ideal = commutator_ideal(alg);
  Mat w;
  if (ideal.cols() == 0) {
    w = Mat::Identity(n, n);
  } else {
    const Mat k = alg.gram() * ideal;
    w = kernel_of(k * k.adjoint());
  }
  const int m = static_cast<int>(w.cols());
  if (m == 0) return {};

  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(0x5eed, static_cast<std::uint64_t>(attempt));
    Vec x = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
      const Vec ei = Vec::Unit(n, i);
      const Vec es = alg.star(ei);
      x += rng.normal() * (ei + es) / 2.0;
      x += rng.normal() * (ei - es) / Scalar(0.0, 2.0);
    }
    const Mat restricted = w.adjoint() * alg.left_matrix(x) * w;
    Eigen::ComplexEigenSolver<Mat> ces(restricted);
    const Vec vals = ces.eigenvalues();
    bool distinct = true;
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    for (int a = 0; a < m && distinct; ++a)
      for (int b = a + 1; b < m && distinct; ++b)
        distinct = std::abs(vals[a] - vals[b]) > 1e-6 * scale;
    if (!distinct) continue;

    std::vector<Vec> out;
    bool ok = true;
    for (int c = 0; c < m && ok; ++c) {
      const Vec v = w * ces.eigenvectors().col(c);
      Eigen::Index idx;
      v.cwiseAbs().maxCoeff(&idx);
      const Vec v2 = alg.mul(v, v);
      const Scalar s = v2[idx] / v[idx];
      if (std::abs(s) < 1e-12) {
        ok = false;
        break;
      }
      const Vec z = v / s;
      ok = projection_defect(AlgebraElement(ptr, z)) < 1e-8;
      out.push_back(z);
    }
    if (ok) return out;
  }
  throw NumericalError("could not separate the characters of the algebra");
}

}  // namespace

bool BirkhoffSlice::doubly_stochastic(double tol) const {
  const int n = static_cast<int>(matrix.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(matrix.row(i).sum() - 1.0) > tol) return false;
    if (std::abs(matrix.col(i).sum() - 1.0) > tol) return false;
  }
  return matrix.minCoeff() >= -tol && matrix.maxCoeff() <= 1.0 + tol;
}

BirkhoffSlice birkhoff_slice(const CompactQuantumGroup& g, const LinearFunctional& phi) {
  const int n = g.N();
  BirkhoffSlice s{RealMat(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.matrix(i, j) = phi(g.u(i, j)).real();
  return s;
}

std::optional<Permutation> is_character(const CompactQuantumGroup& g,
                                        const LinearFunctional& phi, double tol) {
  const double t = tol < 0 ? g.algebra()->iterative_tolerance() : tol;
  const BirkhoffSlice s = birkhoff_slice(g, phi);
  const int n = g.N();
  Permutation sigma(n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = s.matrix(i, j);
      if (std::abs(x - 1.0) <= t) {
        if (sigma[j] >= 0) return std::nullopt;
        sigma[j] = i;
      } else if (std::abs(x) > t) {
        return std::nullopt;
      }
    }
  if (!is_permutation(sigma)) return std::nullopt;
  const Vec& d = phi.duals();
  const Mat pairs = phi.algebra()->pairing_matrix(d);
  const double defect = (pairs - d * d.transpose()).cwiseAbs().maxCoeff();
  if (defect > t)
    throw InvalidModel("permutation slice without multiplicativity (defect " +
                       std::to_string(defect) + ")");
  return sigma;
}

ClassicalVersion classical_version(const CompactQuantumGroup& g) {
  const AlgebraPtr& alg = g.algebra();
  const int big_n = g.N();
  const Mat pair_tau = alg->pairing_matrix(alg->trace());

  struct Found {
    Permutation sigma;
    State chi;
  };
  std::vector<Found> found;
  for (const Vec& z : character_projections(alg)) {
    const Scalar mass = (alg->trace().transpose() * z).value();
    State chi(LinearFunctional(alg, pair_tau * z / mass));
    auto sigma = is_character(g, chi);
    if (!sigma) throw InvalidModel("algebra character without a permutation slice");
    found.push_back({*sigma, chi});
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.sigma < b.sigma; });

  ClassicalVersion cv{{}, {}, {}, {}, Projection::zero(alg), Projection::one(alg), 0.0};
  AlgebraElement pc = AlgebraElement::zero(alg);
  for (const auto& f : found) {
    std::vector<Projection> entries;
    for (int j = 0; j < big_n; ++j) entries.emplace_back(g.u(f.sigma[j], j));
    const MeetResult m = meet(entries);
    const Projection supp = support_projection(f.chi);
    const int supp_rank = regular_rank(supp);
    if (!m.converged || m.rank != supp_rank ||
        gram_norm(m.projection - supp) > alg->iterative_tolerance())
      throw NumericalError("meet and support projection disagree for " +
                           cycle_string(f.sigma));
    cv.permutations.push_back(f.sigma);
    cv.characters.push_back(f.chi);
    cv.supports.push_back(m.projection);
    cv.ranks.push_back(m.rank);
    pc = pc + m.projection;
  }
  cv.p_C = Projection(pc);
  cv.p_Q = cv.p_C.complement();
  cv.group_like_defect = group_like_defect(g, cv.p_C);
  if (cv.group_like_defect > alg->tolerance())
    throw NumericalError("classical part is not group-like");
  return cv;
}

double quantum_fraction(const LinearFunctional& phi, const ClassicalVersion& cv) {
  return phi(cv.p_Q).real();
}

Decomposition decompose(const State& phi, const ClassicalVersion& cv, double tol) {
  const double t = tol < 0 ? phi.algebra()->tolerance() : tol;
  Decomposition d{quantum_fraction(phi, cv), std::nullopt, std::nullopt};
  if (1.0 - d.alpha > t) d.classical = condition(phi, cv.p_C, t);
  if (d.alpha > t) d.quantum = condition(phi, cv.p_Q, t);
  return d;
}

Partition canonical_partition(Partition p, int n) {
  std::vector<int> seen(n, 0);
  for (auto& block : p) {
    if (block.empty()) throw InvalidModel("partition has an empty block");
    std::sort(block.begin(), block.end());
    for (int x : block) {
      if (x < 0 || x >= n || seen[x]) throw InvalidModel("blocks do not partition the points");
      seen[x] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw InvalidModel("blocks do not cover every point");
  std::sort(p.begin(), p.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return p;
}

namespace {

std::vector<int> block_ids(const Partition& p, int n) {
  std::vector<int> id(n, -1);
  for (size_t b = 0; b < p.size(); ++b)
    for (int x : p[b]) id[x] = static_cast<int>(b);
  return id;
}

}  // namespace

bool stabiliser_membership(const CompactQuantumGroup& g, const State& phi,
                           const Partition& p, double tol) {
  const int n = g.N();
  const std::vector<int> id = block_ids(canonical_partition(p, n), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (id[i] != id[j] && phi(g.u(i, j)).real() > tol) return false;
  return true;
}

StabiliserIdempotent stabiliser_idempotent(const CompactQuantumGroup& g, const Partition& p) {
  const int n = g.N();
  const Partition cp = canonical_partition(p, n);
  const std::vector<int> id = block_ids(cp, n);
  const AlgebraPtr& alg = g.algebra();
  std::vector<Projection> rows;
  for (int j = 0; j < n; ++j) {
    AlgebraElement r = AlgebraElement::zero(alg);
    for (int i = 0; i < n; ++i)
      if (id[i] == id[j]) r = r + g.u(i, j);
    rows.emplace_back(r);
  }
  const MeetResult m = meet(rows);
  const State& h = g.haar();
  if (h(m.projection).real() > alg->tolerance()) {
    const CesaroResult r = cesaro_idempotent(g, condition(h, m.projection));
    return {r.limit, m.projection, r.converged && m.converged};
  }
  // Without a usable block seed, generate from the counit and sampled members.
  std::vector<State> seeds{g.counit()};
  for (int s = 0; s < 100; ++s) {
    Rng rng(0xb10c, static_cast<std::uint64_t>(s));
    const State phi = random_state(alg, rng, &m.projection);
    if (stabiliser_membership(g, phi, cp)) seeds.push_back(phi);
  }
  const CesaroResult r = generated_idempotent(g, seeds);
  return {r.limit, m.projection, r.converged && m.converged};
}

bool is_central(const AlgebraElement& a, double tol) {
  const AlgebraPtr& alg = a.algebra();
  const double t = tol < 0 ? alg->tolerance() : tol;
  for (int i = 0; i < alg->dim(); ++i) {
    const AlgebraElement e = AlgebraElement::basis(alg, i);
    if (gram_norm(e * a - a * e) > t) return false;
  }
  return true;
}

std::vector<std::pair<double, double>> FixSpectrum::distribution(
    const LinearFunctional& phi) const {
  std::vector<std::pair<double, double>> out;
  for (size_t k = 0; k < eigenvalues.size(); ++k)
    out.emplace_back(eigenvalues[k], phi(projections[k]).real());
  return out;
}

int FixSpectrum::find(double x, double width) const {
  for (size_t k = 0; k < eigenvalues.size(); ++k)
    if (std::abs(eigenvalues[k] - x) <= width) return static_cast<int>(k);
  return -1;
}

FixSpectrum fix_spectrum(const CompactQuantumGroup& g) {
  const AlgebraPtr& alg = g.algebra();
  AlgebraElement fix = AlgebraElement::zero(alg);
  for (int j = 0; j < g.N(); ++j) fix = fix + g.u(j, j);
  FixSpectrum fs{fix, {}, {}};
  for (auto& c : spectral_decomposition(fix)) {
    fs.eigenvalues.push_back(c.eigenvalue);
    fs.projections.push_back(c.projection);
  }
  return fs;
}

std::vector<std::pair<double, double>> fixed_point_distribution(const FixSpectrum& fs,
                                                                const LinearFunctional& phi) {
  return fs.distribution(phi);
}

bool has_integer_fixed_points(const FixSpectrum& fs, const LinearFunctional& phi,
                              double tol) {
  double mass = 0;
  for (auto [lambda, w] : fs.distribution(phi))
    if (std::abs(lambda - std::round(lambda)) <= 1e-6) mass += w;
  return mass >= 1.0 - tol;
}

}  // namespace qperm
