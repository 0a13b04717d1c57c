#include "qperm/cqg.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "qperm/idempotent.hpp"

namespace qperm {

namespace {

using Entry = std::tuple<int, int, Scalar>;

// Nonzero entries (a, b, c) of each Delta(e_k).
std::vector<std::vector<Entry>> coproduct_entries(const CompactQuantumGroup& g) {
  const int n = g.dim();
  std::vector<std::vector<Entry>> out(n);
  const SparseMat& d = g.delta();
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMat::InnerIterator it(d, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      out[k].emplace_back(r / n, r % n, it.value());
    }
  return out;
}

double map_max_abs(const std::unordered_map<long long, Scalar>& m) {
  double r = 0;
  for (const auto& [key, v] : m) r = std::max(r, std::abs(v));
  return r;
}

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

struct WordBasis {
  std::vector<std::vector<std::pair<int, int>>> words;
  Mat coeffs;  // dim x rank, raw word values
};

WordBasis word_basis(const CompactQuantumGroup& g) {
  const AlgebraPtr& alg = g.algebra();
  const int n = alg->dim();
  const int big_n = g.N();
  WordBasis wb;
  Mat q(n, 0);
  std::vector<Vec> raw;
  auto try_add = [&](const Vec& v, std::vector<std::pair<int, int>> word) {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass) r -= q * (q.adjoint() * r);
    const double scale = std::max(1.0, v.norm());
    if (r.norm() <= 1e-8 * scale) return false;
    q.conservativeResize(n, q.cols() + 1);
    q.col(q.cols() - 1) = r / r.norm();
    raw.push_back(v);
    wb.words.push_back(std::move(word));
    return true;
  };
  try_add(alg->unit(), {});
  std::vector<size_t> frontier{0};
  while (!frontier.empty() && q.cols() < n) {
    std::vector<size_t> next;
    for (size_t w : frontier)
      for (int i = 0; i < big_n; ++i)
        for (int j = 0; j < big_n; ++j) {
          if (q.cols() >= n) break;
          const Vec v = alg->mul(raw[w], g.u(i, j).coeffs());
          auto word = wb.words[w];
          word.emplace_back(i, j);
          if (try_add(v, std::move(word))) next.push_back(raw.size() - 1);
        }
    frontier = std::move(next);
  }
  wb.coeffs = Mat(n, static_cast<Eigen::Index>(raw.size()));
  for (size_t c = 0; c < raw.size(); ++c) wb.coeffs.col(c) = raw[c];
  return wb;
}

// Null space of the two-sided invariance system.
Mat haar_null_space(const CompactQuantumGroup& g) {
  const int n = g.dim();
  const Vec& unit = g.algebra()->unit();
  const auto entries = coproduct_entries(g);
  std::vector<Eigen::Triplet<Scalar>> trips;
  Eigen::Index row = 0;
  // Left invariance: sum_a X^k_ab h_a - unit_b h_k = 0 for all (k, b);
  // right invariance: sum_b X^k_ab h_b - unit_a h_k = 0 for all (k, a).
  for (int k = 0; k < n; ++k) {
    const Eigen::Index left0 = row;
    const Eigen::Index right0 = row + n;
    for (const auto& [a, b, c] : entries[k]) {
      trips.emplace_back(left0 + b, a, c);
      trips.emplace_back(right0 + a, b, c);
    }
    for (int b = 0; b < n; ++b) {
      if (unit[b] == Scalar(0)) continue;
      trips.emplace_back(left0 + b, k, -unit[b]);
      trips.emplace_back(right0 + b, k, -unit[b]);
    }
    row += 2 * n;
  }
  SparseMat a(row, n);
  a.setFromTriplets(trips.begin(), trips.end());
  const Mat normal = Mat(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Mat> es((normal + normal.adjoint()) / 2.0);
  const RealVec& w = es.eigenvalues();
  const double thr = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
  int count = 0;
  while (count < n && w[count] <= thr) ++count;
  return es.eigenvectors().leftCols(count);
}

}  // namespace

CompactQuantumGroup::CompactQuantumGroup(HopfData data, std::optional<Vec> haar)
    : algebra_(std::move(data.algebra)),
      delta_(std::move(data.delta)),
      antipode_(std::move(data.antipode)),
      magic_(std::move(data.magic)),
      name_(std::move(data.name)),
      dual_of_(std::move(data.dual_of)),
      classical_of_(std::move(data.function_algebra_of)),
      kac_paljutkin_(data.kac_paljutkin) {
  if (!algebra_) throw InvalidModel("quantum group without algebra");
  const int n = algebra_->dim();
  if (delta_.rows() != static_cast<Eigen::Index>(n) * n || delta_.cols() != n)
    throw InvalidModel("comultiplication has wrong shape");
  if (data.counit.size() != n) throw InvalidModel("counit has wrong length");
  if (antipode_.rows() != n || antipode_.cols() != n)
    throw InvalidModel("antipode has wrong shape");
  if (magic_.empty()) throw InvalidModel("magic unitary is empty");
  for (const auto& row : magic_) {
    if (row.size() != magic_.size())
      throw InvalidModel("magic unitary is not square");
    for (const auto& e : row)
      if (e.algebra().get() != algebra_.get())
        throw InvalidModel("magic entry lives in another algebra");
  }
  delta_.makeCompressed();
  counit_ = State::trusted(algebra_, std::move(data.counit));
  if (haar) {
    if (haar->size() != n) throw InvalidModel("Haar state has wrong length");
    haar_ = State::trusted(algebra_, std::move(*haar));
  } else {
    try {
      haar_ = haar_state(*this);
    } catch (const Error&) {
      // Left empty; validate() reports the failure.
    }
  }
}

const State& CompactQuantumGroup::haar() const {
  if (!haar_) throw InvalidModel("Haar state is not available for " + name_);
  return *haar_;
}

Mat CompactQuantumGroup::coproduct(const Vec& a) const {
  const int n = dim();
  Mat out = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (a[k] == Scalar(0)) continue;
    for (SparseMat::InnerIterator it(delta_, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      out(r / n, r % n) += a[k] * it.value();
    }
  }
  return out;
}

AlgebraElement CompactQuantumGroup::apply_antipode(const AlgebraElement& a) const {
  if (a.algebra().get() != algebra_.get()) throw AlgebraMismatch();
  return {algebra_, antipode_ * a.coeffs()};
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed) out.push_back(c.name);
  return out;
}

ValidationReport validate(const CompactQuantumGroup& g) {
  const StarAlgebra& alg = *g.algebra();
  const int n = alg.dim();
  const double tol = alg.tolerance();
  ValidationReport rep;
  auto add = [&](std::string name, double residual) {
    rep.checks.push_back({std::move(name), residual, tol, residual <= tol});
  };

  const auto ax = alg.check_axioms();
  add("algebra.associativity", ax.associativity);
  add("algebra.involution", std::max(ax.involution_antimultiplicative,
                                     ax.involution_involutive));
  add("algebra.unit", ax.unit);
  add("trace.tracial", ax.trace_tracial);
  rep.checks.push_back({"trace.faithful", alg.gram_min_eigenvalue(), tol,
                        alg.gram_min_eigenvalue() > tol});

  const auto entries = coproduct_entries(g);
  const Mat& s = g.antipode();
  const Vec& eps = g.counit().duals();

  // Coassociativity on each basis element, via sparse triple tensors.
  double coassoc = 0;
  for (int k = 0; k < n; ++k) {
    std::unordered_map<long long, Scalar> diff;
    auto key = [n](long long x, long long y, long long z) {
      return (x * n + y) * n + z;
    };
    for (const auto& [a, b, c] : entries[k]) {
      for (const auto& [a1, a2, c1] : entries[a]) diff[key(a1, a2, b)] += c * c1;
      for (const auto& [b1, b2, c2] : entries[b]) diff[key(a, b1, b2)] -= c * c2;
    }
    coassoc = std::max(coassoc, map_max_abs(diff));
  }
  add("delta.coassociative", coassoc);

  add("delta.unital", max_abs(g.coproduct(alg.unit()) -
                              alg.unit() * alg.unit().transpose()));

  // Multiplicativity: Delta(e_i e_j) = Delta(e_i) Delta(e_j).
  double mult = 0;
  const SparseMat& prod = alg.products();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::unordered_map<long long, Scalar> diff;
      const Eigen::Index ij = static_cast<Eigen::Index>(i) * n + j;
      for (SparseMat::InnerIterator it(prod, ij); it; ++it)
        for (const auto& [a, b, c] : entries[it.row()])
          diff[static_cast<long long>(a) * n + b] += it.value() * c;
      for (const auto& [a, b, c] : entries[i])
        for (const auto& [x, y, d] : entries[j]) {
          const Eigen::Index ax2 = static_cast<Eigen::Index>(a) * n + x;
          const Eigen::Index by = static_cast<Eigen::Index>(b) * n + y;
          for (SparseMat::InnerIterator p1(prod, ax2); p1; ++p1)
            for (SparseMat::InnerIterator p2(prod, by); p2; ++p2)
              diff[static_cast<long long>(p1.row()) * n + p2.row()] -=
                  c * d * p1.value() * p2.value();
        }
      mult = std::max(mult, map_max_abs(diff));
    }
  add("delta.multiplicative", mult);

  // Delta(e_i^*) = (* (x) *) Delta(e_i).
  double star = 0;
  const SparseMat js = alg.involution().sparseView();
  for (int i = 0; i < n; ++i) {
    const Mat x = g.coproduct(Vec::Unit(n, i));
    const Mat lhs = g.coproduct(alg.involution().col(i));
    const Mat rhs = js * x.conjugate() * SparseMat(js.transpose());
    star = std::max(star, max_abs(lhs - rhs));
  }
  add("delta.star", star);

  // Counit: a unital *-character.
  const Mat te = alg.pairing_matrix(eps);
  double chi = std::max(max_abs(te - eps * eps.transpose()),
                        std::abs((eps.transpose() * alg.unit()).value() - 1.0));
  chi = std::max(chi, max_abs(Vec(alg.involution().transpose() * eps -
                                  eps.conjugate())));
  add("counit.character", chi);

  double counit_law = 0;
  for (int k = 0; k < n; ++k) {
    Vec left = Vec::Zero(n), right = Vec::Zero(n);
    for (const auto& [a, b, c] : entries[k]) {
      left[b] += eps[a] * c;
      right[a] += eps[b] * c;
    }
    left[k] -= 1.0;
    right[k] -= 1.0;
    counit_law = std::max({counit_law, max_abs(left), max_abs(right)});
  }
  add("counit.law", counit_law);

  double anti = 0;
  for (int k = 0; k < n; ++k) {
    Vec left = -eps[k] * alg.unit();
    Vec right = left;
    for (const auto& [a, b, c] : entries[k]) {
      left += c * (alg.right_basis(b) * s.col(a));
      right += c * (alg.left_basis(a) * s.col(b));
    }
    anti = std::max({anti, max_abs(left), max_abs(right)});
  }
  add("antipode.law", anti);
  add("antipode.involutive", max_abs(Mat(s * s - Mat::Identity(n, n))));

  // Magic unitary.
  const int big_n = g.N();
  const AlgebraPtr& ap = g.algebra();
  double proj = 0, rows = 0, cols = 0, mco = 0, mant = 0;
  for (int i = 0; i < big_n; ++i) {
    AlgebraElement rsum = AlgebraElement::zero(ap), csum = AlgebraElement::zero(ap);
    for (int j = 0; j < big_n; ++j) {
      proj = std::max(proj, projection_defect(g.u(i, j)));
      rsum = rsum + g.u(i, j);
      csum = csum + g.u(j, i);
      Mat expected = Mat::Zero(n, n);
      for (int k = 0; k < big_n; ++k)
        expected += g.u(i, k).coeffs() * g.u(k, j).coeffs().transpose();
      mco = std::max(mco, tensor_gram_norm(alg, g.coproduct(g.u(i, j).coeffs()) -
                                                    expected));
      mant = std::max(mant, gram_norm(g.apply_antipode(g.u(i, j)) - g.u(j, i)));
    }
    rows = std::max(rows, gram_norm(rsum - AlgebraElement::one(ap)));
    cols = std::max(cols, gram_norm(csum - AlgebraElement::one(ap)));
  }
  add("magic.projections", proj);
  add("magic.row_sums", rows);
  add("magic.column_sums", cols);
  add("magic.coproduct", mco);
  add("magic.antipode", mant);
  const int rank = magic_word_rank(g);
  rep.checks.push_back({"magic.generates", static_cast<double>(n - rank), 0.0,
                        rank == n});

  if (!g.has_haar()) {
    rep.checks.push_back({"haar.unique", 1.0, 0.0, false});
  } else {
    const Vec& h = g.haar().duals();
    double inv = 0;
    for (int k = 0; k < n; ++k) {
      Vec left = -h[k] * alg.unit();
      Vec right = left;
      for (const auto& [a, b, c] : entries[k]) {
        left[b] += h[a] * c;
        right[a] += h[b] * c;
      }
      inv = std::max({inv, max_abs(left), max_abs(right)});
    }
    add("haar.invariance", inv);
    const bool positive = is_positive_functional(g.haar(), tol);
    const double unital =
        std::abs((h.transpose() * alg.unit()).value() - 1.0);
    rep.checks.push_back({"haar.state", unital, tol, positive && unital <= tol});
  }
  return rep;
}

LinearFunctional convolve(const CompactQuantumGroup& g, const LinearFunctional& phi,
                          const LinearFunctional& rho) {
  if (phi.algebra().get() != g.algebra().get() ||
      rho.algebra().get() != g.algebra().get())
    throw AlgebraMismatch();
  const int n = g.dim();
  const Vec& p = phi.duals();
  const Vec& r = rho.duals();
  const SparseMat& d = g.delta();
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (SparseMat::InnerIterator it(d, k); it; ++it) {
      const int row = static_cast<int>(it.row());
      out[k] += p[row / n] * r[row % n] * it.value();
    }
  return {g.algebra(), out};
}

State convolve(const CompactQuantumGroup& g, const State& phi, const State& rho) {
  LinearFunctional out = convolve(g, static_cast<const LinearFunctional&>(phi),
                                  static_cast<const LinearFunctional&>(rho));
#ifndef NDEBUG
  return State(out);
#else
  return State::trusted(g.algebra(), out.duals());
#endif
}

State reverse(const CompactQuantumGroup& g, const State& phi) {
  if (phi.algebra().get() != g.algebra().get()) throw AlgebraMismatch();
  return State::trusted(g.algebra(), g.antipode().transpose() * phi.duals());
}

int haar_solution_dimension(const CompactQuantumGroup& g) {
  return static_cast<int>(haar_null_space(g).cols());
}

State haar_state(const CompactQuantumGroup& g) {
  const Mat null = haar_null_space(g);
  if (null.cols() != 1)
    throw InvalidModel("invariance system has a " + std::to_string(null.cols()) +
                       "-dimensional solution space");
  const AlgebraPtr& alg = g.algebra();
  const Vec v = null.col(0);
  const Scalar total = (v.transpose() * alg->unit()).value();
  if (std::abs(total) < alg->tolerance())
    throw InvalidModel("invariant functional vanishes on the unit");
  const State h(LinearFunctional(alg, v / total));

  const State tau = State::normalized_trace(alg);
  const State seed = State::trusted(alg, (tau.duals() + g.counit().duals()) / 2.0);
  const CesaroResult ces = cesaro_idempotent(g, seed);
  if (!ces.converged || sup_distance(ces.limit, h) > kIterativeTol)
    throw NumericalError("Haar solve disagrees with the Cesaro cross-check");
  return h;
}

int magic_word_rank(const CompactQuantumGroup& g) {
  return static_cast<int>(word_basis(g).coeffs.cols());
}

QuantumGroupMorphism quotient_morphism(const CompactQuantumGroup& g,
                                       const CompactQuantumGroup& h,
                                       const MagicGrid& images) {
  const int big_n = g.N();
  if (static_cast<int>(images.size()) != big_n)
    throw InvalidModel("image grid has wrong size");
  for (const auto& row : images) {
    if (static_cast<int>(row.size()) != big_n)
      throw InvalidModel("image grid has wrong size");
    for (const auto& e : row)
      if (e.algebra().get() != h.algebra().get()) throw AlgebraMismatch();
  }
  const StarAlgebra& ga = *g.algebra();
  const StarAlgebra& ha = *h.algebra();
  const int n = ga.dim();
  const int m = ha.dim();

  const WordBasis wb = word_basis(g);
  if (wb.coeffs.cols() != n)
    throw InvalidModel("magic entries do not generate the source algebra");
  Mat himg(m, n);
  for (int c = 0; c < n; ++c) {
    Vec v = ha.unit();
    for (auto [i, j] : wb.words[c]) v = ha.mul(v, images[i][j].coeffs());
    himg.col(c) = v;
  }
  const Mat pi = wb.coeffs.transpose().partialPivLu().solve(himg.transpose()).transpose();

  QuantumGroupMorphism out{&g, &h, pi, 0, 0, 0};
  double hom = max_abs(Vec(pi * ga.unit() - ha.unit()));
  for (int i = 0; i < n; ++i) {
    const Vec pi_i = pi.col(i);
    hom = std::max(hom, max_abs(Vec(pi * ga.involution().col(i) - ha.star(pi_i))));
    for (int j = 0; j < n; ++j) {
      const Vec lhs = pi * Vec(ga.products().col(static_cast<Eigen::Index>(i) * n + j));
      hom = std::max(hom, max_abs(Vec(lhs - ha.mul(pi_i, pi.col(j)))));
    }
  }
  out.homomorphism_residual = hom;
  double inter = 0;
  for (int k = 0; k < n; ++k) {
    const Mat lhs = h.coproduct(pi.col(k));
    const Mat rhs = pi * g.coproduct(Vec::Unit(n, k)) * pi.transpose();
    inter = std::max(inter, max_abs(Mat(lhs - rhs)));
  }
  out.intertwining_residual = inter;
  double mag = 0;
  for (int i = 0; i < big_n; ++i)
    for (int j = 0; j < big_n; ++j)
      mag = std::max(mag, max_abs(Vec(pi * g.u(i, j).coeffs() - images[i][j].coeffs())));
  out.magic_residual = mag;

  const double tol = std::max(ga.tolerance(), ha.tolerance());
  if (hom > tol) throw InvalidModel("generator images violate the relations");
  if (inter > tol) throw InvalidModel("map does not intertwine the coproducts");
  if (mag > tol) throw InvalidModel("map does not send u to the declared images");
  Eigen::FullPivLU<Mat> lu(pi);
  lu.setThreshold(1e-10);
  if (lu.rank() != m) throw InvalidModel("map is not surjective");
  return out;
}

State haar_idempotent(const QuantumGroupMorphism& pi) {
  const Vec duals = pi.map.transpose() * pi.target->haar().duals();
  State psi(LinearFunctional(pi.source->algebra(), duals));
  if (!is_idempotent(*pi.source, psi))
    throw NumericalError("pulled-back Haar state is not idempotent");
  return psi;
}

}  // namespace qperm
