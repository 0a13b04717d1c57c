#include "qperm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qperm {

namespace {

double sparse_max_abs(const SparseMat& m) {
  double r = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it)
      r = std::max(r, std::abs(it.value()));
  return r;
}

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a.get() != b.get()) throw AlgebraMismatch();
}

// Sum of sparse matrices scaled by the entries of a coefficient vector.
Mat combine(const std::vector<SparseMat>& mats, const Vec& coeffs) {
  const int n = static_cast<int>(coeffs.size());
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (coeffs[i] == Scalar(0)) continue;
    for (int k = 0; k < mats[i].outerSize(); ++k)
      for (SparseMat::InnerIterator it(mats[i], k); it; ++it)
        out(it.row(), it.col()) += coeffs[i] * it.value();
  }
  return out;
}

}  // namespace

AlgebraPtr StarAlgebra::create(AlgebraData data) {
  const int n = static_cast<int>(data.labels.size());
  if (n == 0) throw InvalidModel("algebra must have positive dimension");
  if (data.involution.rows() != n || data.involution.cols() != n)
    throw InvalidModel("involution matrix has wrong shape");
  if (data.unit.size() != n || data.trace.size() != n)
    throw InvalidModel("unit or trace has wrong length");
  for (const auto& t : data.products) {
    if (t.row() < 0 || t.row() >= n || t.col() < 0 ||
        t.col() >= static_cast<Eigen::Index>(n) * n)
      throw InvalidModel("structure constant index out of range");
  }
  if (!(data.tolerance >= 0) || !(data.iterative_tolerance >= 0))
    throw InvalidModel("tolerances must be nonnegative");

  std::shared_ptr<StarAlgebra> alg(new StarAlgebra());
  alg->dim_ = n;
  alg->labels_ = std::move(data.labels);
  alg->products_ = SparseMat(n, static_cast<Eigen::Index>(n) * n);
  alg->products_.setFromTriplets(data.products.begin(), data.products.end());
  alg->products_.prune(Scalar(0));
  alg->involution_ = std::move(data.involution);
  alg->unit_ = std::move(data.unit);
  alg->trace_ = std::move(data.trace);
  alg->tol_ = data.tolerance;
  alg->iter_tol_ = data.iterative_tolerance;
  alg->build();
  return alg;
}

AlgebraPtr StarAlgebra::from_structure_constants(
    std::vector<std::string> labels, const std::vector<Mat>& c, Mat involution,
    Vec unit, Vec trace, double tolerance) {
  const int n = static_cast<int>(labels.size());
  if (static_cast<int>(c.size()) != n)
    throw InvalidModel("structure constants have wrong shape");
  AlgebraData data;
  for (int i = 0; i < n; ++i) {
    if (c[i].rows() != n || c[i].cols() != n)
      throw InvalidModel("structure constants have wrong shape");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (c[i](j, k) != Scalar(0))
          data.products.emplace_back(k, i * n + j, c[i](j, k));
  }
  data.labels = std::move(labels);
  data.involution = std::move(involution);
  data.unit = std::move(unit);
  data.trace = std::move(trace);
  data.tolerance = tolerance;
  return create(std::move(data));
}

void StarAlgebra::build() {
  const int n = dim_;
  std::vector<std::vector<Eigen::Triplet<Scalar>>> lt(n), rt(n);
  for (int col = 0; col < products_.outerSize(); ++col) {
    const int i = col / n;
    const int j = col % n;
    for (SparseMat::InnerIterator it(products_, col); it; ++it) {
      const int k = static_cast<int>(it.row());
      lt[i].emplace_back(k, j, it.value());
      rt[j].emplace_back(k, i, it.value());
    }
  }
  left_.assign(n, SparseMat(n, n));
  right_.assign(n, SparseMat(n, n));
  for (int i = 0; i < n; ++i) {
    left_[i].setFromTriplets(lt[i].begin(), lt[i].end());
    right_[i].setFromTriplets(rt[i].begin(), rt[i].end());
  }

  gram_ = involution_.transpose() * pairing_matrix(trace_);
  Mat herm = (gram_ + gram_.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  gram_min_eig_ = es.eigenvalues().minCoeff();
  faithful_ = gram_min_eig_ > tol_;
  if (faithful_) {
    const RealVec w = es.eigenvalues();
    const Mat& v = es.eigenvectors();
    gram_sqrt_ = v * w.cwiseSqrt().cast<Scalar>().asDiagonal() * v.adjoint();
    gram_inv_sqrt_ =
        v * w.cwiseSqrt().cwiseInverse().cast<Scalar>().asDiagonal() *
        v.adjoint();
  }
}

const Mat& StarAlgebra::gram_sqrt() const {
  if (!faithful_) throw InvalidModel("trace is not faithful");
  return gram_sqrt_;
}

const Mat& StarAlgebra::gram_inv_sqrt() const {
  if (!faithful_) throw InvalidModel("trace is not faithful");
  return gram_inv_sqrt_;
}

Vec StarAlgebra::mul(const Vec& a, const Vec& b) const {
  Vec r = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i)
    if (a[i] != Scalar(0)) r += a[i] * (left_[i] * b);
  return r;
}

Vec StarAlgebra::star(const Vec& a) const {
  return involution_ * a.conjugate();
}

Mat StarAlgebra::left_matrix(const Vec& a) const { return combine(left_, a); }

Mat StarAlgebra::right_matrix(const Vec& b) const {
  return combine(right_, b);
}

Mat StarAlgebra::pairing_matrix(const Vec& phi) const {
  const Vec v = products_.transpose() * phi;
  Mat t(dim_, dim_);
  for (int m = 0; m < dim_; ++m)
    for (int j = 0; j < dim_; ++j) t(m, j) = v[m * dim_ + j];
  return t;
}

Mat StarAlgebra::positivity_matrix(const Vec& phi) const {
  return involution_.transpose() * pairing_matrix(phi);
}

StarAlgebra::AxiomResiduals StarAlgebra::check_axioms() const {
  AxiomResiduals r;
  const int n = dim_;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index col = static_cast<Eigen::Index>(i) * n + j;
      SparseMat combo(n, n);
      for (SparseMat::InnerIterator it(products_, col); it; ++it)
        combo += it.value() * left_[it.row()];
      SparseMat prod = left_[i] * left_[j];
      r.associativity = std::max(r.associativity, sparse_max_abs(prod - combo));

      const Vec eij = products_.col(col);
      const Vec lhs = star(eij);
      const Vec rhs = mul(involution_.col(j), involution_.col(i));
      r.involution_antimultiplicative = std::max(
          r.involution_antimultiplicative, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  r.involution_involutive = max_abs(involution_ * involution_.conjugate() -
                                    Mat::Identity(n, n));
  r.unit = std::max(max_abs(left_matrix(unit_) - Mat::Identity(n, n)),
                    max_abs(right_matrix(unit_) - Mat::Identity(n, n)));
  const Mat t = pairing_matrix(trace_);
  r.trace_tracial = max_abs(t - t.transpose());
  r.gram_hermitian = max_abs(gram_ - gram_.adjoint());
  return r;
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, Vec coeffs)
    : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
  if (!algebra_) throw Error("element without algebra");
  if (coeffs_.size() != algebra_->dim())
    throw Error("coefficient vector length does not match algebra");
}

AlgebraElement AlgebraElement::zero(const AlgebraPtr& algebra) {
  return {algebra, Vec::Zero(algebra->dim())};
}

AlgebraElement AlgebraElement::one(const AlgebraPtr& algebra) {
  return {algebra, algebra->unit()};
}

AlgebraElement AlgebraElement::basis(const AlgebraPtr& algebra, int i) {
  Vec v = Vec::Zero(algebra->dim());
  v[i] = 1;
  return {algebra, v};
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.algebra(), b.algebra());
  return {a.algebra(), a.coeffs() + b.coeffs()};
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.algebra(), b.algebra());
  return {a.algebra(), a.coeffs() - b.coeffs()};
}

AlgebraElement operator*(Scalar s, const AlgebraElement& a) {
  return {a.algebra(), s * a.coeffs()};
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return multiply(a, b);
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a.algebra(), b.algebra());
  return {a.algebra(), a.algebra()->mul(a.coeffs(), b.coeffs())};
}

AlgebraElement adjoint(const AlgebraElement& a) {
  return {a.algebra(), a.algebra()->star(a.coeffs())};
}

double gram_norm(const AlgebraElement& a) {
  const Scalar q = a.coeffs().dot(a.algebra()->gram() * a.coeffs());
  return std::sqrt(std::max(0.0, q.real()));
}

bool is_self_adjoint(const AlgebraElement& a, double tol) {
  return gram_norm(a - adjoint(a)) <= tol * std::max(1.0, gram_norm(a));
}

int regular_rank(const AlgebraElement& p) {
  const Mat l = p.algebra()->left_matrix(p.coeffs());
  return static_cast<int>(std::lround(l.trace().real()));
}

double projection_defect(const AlgebraElement& p) {
  return std::max(gram_norm(p * p - p), gram_norm(adjoint(p) - p));
}

Projection::Projection(const AlgebraElement& p, double tol)
    : AlgebraElement(p) {
  const double t = tol < 0 ? algebra()->tolerance() : tol;
  const double d = projection_defect(p);
  if (!(d <= t))
    throw NumericalError("element is not a projection (defect " +
                         std::to_string(d) + ")");
}

Projection Projection::zero(const AlgebraPtr& algebra) {
  return Projection(AlgebraElement::zero(algebra));
}

Projection Projection::one(const AlgebraPtr& algebra) {
  return Projection(AlgebraElement::one(algebra));
}

Projection Projection::complement() const {
  return Projection(AlgebraElement::one(algebra()) - *this);
}

LinearFunctional::LinearFunctional(AlgebraPtr algebra, Vec duals)
    : algebra_(std::move(algebra)), duals_(std::move(duals)) {
  if (!algebra_) throw Error("functional without algebra");
  if (duals_.size() != algebra_->dim())
    throw Error("dual vector length does not match algebra");
}

Scalar LinearFunctional::operator()(const AlgebraElement& a) const {
  require_same(algebra_, a.algebra());
  return (duals_.transpose() * a.coeffs()).value();
}

bool is_positive_functional(const LinearFunctional& phi, double tol) {
  const StarAlgebra& alg = *phi.algebra();
  const double t = tol < 0 ? alg.tolerance() : tol;
  const Mat m = alg.positivity_matrix(phi.duals());
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) > t * scale) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0,
                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -t * scale;
}

State::State(const LinearFunctional& phi, double tol) : LinearFunctional(phi) {
  const double t = tol < 0 ? algebra()->iterative_tolerance() : tol;
  const Scalar total = (*this)(AlgebraElement::one(algebra()));
  if (std::abs(total - 1.0) > t)
    throw NumericalError("functional is not unital");
  if (!is_positive_functional(phi, t))
    throw NumericalError("functional is not positive");
}

State::State(const LinearFunctional& phi, Unchecked) : LinearFunctional(phi) {}

State State::trusted(const AlgebraPtr& algebra, Vec duals) {
  return State(LinearFunctional(algebra, std::move(duals)), Unchecked{});
}

State State::normalized_trace(const AlgebraPtr& algebra) {
  const Scalar total = (algebra->trace().transpose() * algebra->unit()).value();
  return State(LinearFunctional(algebra, algebra->trace() / total));
}

double sup_distance(const LinearFunctional& a, const LinearFunctional& b) {
  require_same(a.algebra(), b.algebra());
  return (a.duals() - b.duals()).cwiseAbs().maxCoeff();
}

std::vector<Mat> regular_representation(const StarAlgebra& algebra) {
  if (!algebra.faithful())
    throw InvalidModel("regular representation needs a faithful trace");
  std::vector<Mat> out;
  out.reserve(algebra.dim());
  for (int i = 0; i < algebra.dim(); ++i) out.emplace_back(algebra.left_basis(i));
  return out;
}

bool Interval::contains(double x, double slack) const {
  const bool above = lo_closed ? x >= lo - slack : x > lo;
  const bool below = hi_closed ? x <= hi + slack : x < hi;
  return above && below;
}

namespace {

struct Eigensystem {
  RealVec values;
  Mat vectors;
  // Cluster boundaries: cluster c spans [starts[c], starts[c+1]).
  std::vector<int> starts;
};

Eigensystem hermitian_spectrum(const AlgebraElement& f) {
  const StarAlgebra& alg = *f.algebra();
  if (!is_self_adjoint(f, alg.tolerance()))
    throw NumericalError("spectral calculus needs a self-adjoint element");
  Mat m = alg.gram_sqrt() * alg.left_matrix(f.coeffs()) * alg.gram_inv_sqrt();
  m = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigensystem sys{es.eigenvalues(), es.eigenvectors(), {}};
  const int n = static_cast<int>(sys.values.size());
  sys.starts.push_back(0);
  for (int i = 1; i < n; ++i) {
    const double gap = sys.values[i] - sys.values[i - 1];
    if (gap > kClusterTol * std::max(1.0, std::abs(sys.values[i])))
      sys.starts.push_back(i);
  }
  sys.starts.push_back(n);
  return sys;
}

Projection back_map(const AlgebraPtr& alg, const Mat& p_orth) {
  const Mat pl = alg->gram_inv_sqrt() * p_orth * alg->gram_sqrt();
  const Vec coeffs = pl * alg->unit();
  const double residual = max_abs(alg->left_matrix(coeffs) - pl);
  if (residual > alg->tolerance())
    throw NumericalError("spectral projection does not lie in the algebra "
                         "(residual " + std::to_string(residual) + ")");
  return Projection(AlgebraElement(alg, coeffs));
}

Mat cluster_projector(const Eigensystem& sys, int c) {
  const int a = sys.starts[c];
  const int b = sys.starts[c + 1];
  const Mat v = sys.vectors.middleCols(a, b - a);
  return v * v.adjoint();
}

double cluster_value(const Eigensystem& sys, int c) {
  const int a = sys.starts[c];
  const int b = sys.starts[c + 1];
  return sys.values.segment(a, b - a).mean();
}

}  // namespace

std::vector<SpectralComponent> spectral_decomposition(const AlgebraElement& f) {
  const Eigensystem sys = hermitian_spectrum(f);
  std::vector<SpectralComponent> out;
  for (size_t c = 0; c + 1 < sys.starts.size(); ++c) {
    const int ci = static_cast<int>(c);
    out.push_back({cluster_value(sys, ci), sys.starts[c + 1] - sys.starts[c],
                   back_map(f.algebra(), cluster_projector(sys, ci))});
  }
  return out;
}

Projection spectral_projection(const AlgebraElement& f,
                               const std::vector<Interval>& intervals) {
  const Eigensystem sys = hermitian_spectrum(f);
  const int n = f.dim();
  // Eigenvalues that sit on a closed endpoint may land just outside it.
  const double slack = f.algebra()->tolerance() * std::max(1.0, sys.values.cwiseAbs().maxCoeff());
  Mat p = Mat::Zero(n, n);
  for (size_t c = 0; c + 1 < sys.starts.size(); ++c) {
    const double value = cluster_value(sys, static_cast<int>(c));
    const bool hit = std::any_of(intervals.begin(), intervals.end(),
                                 [&](const Interval& e) { return e.contains(value, slack); });
    if (hit) p += cluster_projector(sys, static_cast<int>(c));
  }
  return back_map(f.algebra(), p);
}

MeetResult meet(const std::vector<Projection>& ps, int max_iter, double tol) {
  if (ps.empty()) throw Error("meet of an empty family");
  const AlgebraPtr& alg = ps.front().algebra();
  for (const auto& p : ps) require_same(alg, p.algebra());
  const double t = tol < 0 ? alg->iterative_tolerance() : tol;

  AlgebraElement x = ps.front();
  for (size_t i = 1; i < ps.size(); ++i) x = x * ps[i];

  bool converged = false;
  int iterations = 0;
  while (iterations < max_iter) {
    AlgebraElement next = x * x;
    ++iterations;
    const double diff = gram_norm(next - x);
    x = std::move(next);
    if (diff < t) {
      converged = true;
      break;
    }
  }

  AlgebraElement avg = AlgebraElement::zero(alg);
  for (const auto& p : ps) avg = avg + p;
  avg = Scalar(1.0 / static_cast<double>(ps.size())) * avg;
  Projection fallback = spectral_projection(
      avg, {Interval::closed(1.0 - kClusterTol, std::numeric_limits<double>::infinity())});
  const int fallback_rank = regular_rank(fallback);
  if (!converged) return {fallback, false, iterations, fallback_rank};

  const AlgebraElement sym = Scalar(0.5) * (x + adjoint(x));
  Projection r = spectral_projection(
      sym, {Interval::closed(0.5, std::numeric_limits<double>::infinity())});
  const int rank = regular_rank(r);
  if (rank != fallback_rank)
    throw NumericalError("meet: alternating product and spectral fallback "
                         "disagree in rank (" + std::to_string(rank) + " vs " +
                         std::to_string(fallback_rank) + ")");
  return {r, true, iterations, rank};
}

AlgebraElement density(const LinearFunctional& phi) {
  const AlgebraPtr& alg = phi.algebra();
  if (!alg->faithful()) throw InvalidModel("density needs a faithful trace");
  const Mat t = alg->pairing_matrix(alg->trace());
  const Vec d = t.transpose().partialPivLu().solve(phi.duals());
  const AlgebraElement de(alg, d);
  return Scalar(0.5) * (de + adjoint(de));
}

Projection support_projection(const State& phi, double threshold) {
  const AlgebraPtr& alg = phi.algebra();
  const double thr = threshold < 0 ? alg->tolerance() : threshold;
  Projection p = spectral_projection(
      density(phi),
      {Interval{thr, std::numeric_limits<double>::infinity(), false, true}});
  const double mass = phi(p).real();
  if (std::abs(mass - 1.0) > alg->iterative_tolerance())
    throw NumericalError("support projection does not carry the full mass");
  return p;
}

AlgebraPtr tensor(const StarAlgebra& a, const StarAlgebra& b) {
  const int na = a.dim();
  const int nb = b.dim();
  const int n = na * nb;
  AlgebraData data;
  data.labels.reserve(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      data.labels.push_back(a.label(i) + "⊗" + b.label(j));
  const SparseMat& pa = a.products();
  const SparseMat& pb = b.products();
  for (int ca = 0; ca < pa.outerSize(); ++ca) {
    const int i = ca / na;
    const int k = ca % na;
    for (int cb = 0; cb < pb.outerSize(); ++cb) {
      const int j = cb / nb;
      const int l = cb % nb;
      const Eigen::Index col =
          static_cast<Eigen::Index>(i * nb + j) * n + (k * nb + l);
      for (SparseMat::InnerIterator ia(pa, ca); ia; ++ia)
        for (SparseMat::InnerIterator ib(pb, cb); ib; ++ib)
          data.products.emplace_back(ia.row() * nb + ib.row(), col,
                                     ia.value() * ib.value());
    }
  }
  data.involution = Mat(n, n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      data.involution.block(i * nb, j * nb, nb, nb) =
          a.involution()(i, j) * b.involution();
  data.unit = Vec(n);
  data.trace = Vec(n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      data.unit[i * nb + j] = a.unit()[i] * b.unit()[j];
      data.trace[i * nb + j] = a.trace()[i] * b.trace()[j];
    }
  data.tolerance = std::max(a.tolerance(), b.tolerance());
  data.iterative_tolerance =
      std::max(a.iterative_tolerance(), b.iterative_tolerance());
  return StarAlgebra::create(std::move(data));
}

LinearFunctional tensor_functional(const AlgebraPtr& ab,
                                   const LinearFunctional& phi,
                                   const LinearFunctional& rho) {
  const int na = phi.dim();
  const int nb = rho.dim();
  if (ab->dim() != na * nb) throw AlgebraMismatch();
  Vec v(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) v[i * nb + j] = phi.duals()[i] * rho.duals()[j];
  return {ab, v};
}

LinearFunctional tensor_functional(const LinearFunctional& phi,
                                   const LinearFunctional& rho) {
  return tensor_functional(tensor(*phi.algebra(), *rho.algebra()), phi, rho);
}

Mat tensor_multiply(const StarAlgebra& alg, const Mat& x, const Mat& y) {
  const int n = alg.dim();
  std::vector<std::pair<int, int>> xs, ys;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (x(a, b) != Scalar(0)) xs.emplace_back(a, b);
      if (y(a, b) != Scalar(0)) ys.emplace_back(a, b);
    }
  Mat z = Mat::Zero(n, n);
  const SparseMat& prod = alg.products();
  if (xs.size() * ys.size() <= static_cast<size_t>(n) * n) {
    for (auto [a, b] : xs)
      for (auto [c, d] : ys) {
        const Scalar w = x(a, b) * y(c, d);
        const Eigen::Index ac = static_cast<Eigen::Index>(a) * n + c;
        const Eigen::Index bd = static_cast<Eigen::Index>(b) * n + d;
        for (SparseMat::InnerIterator ik(prod, ac); ik; ++ik)
          for (SparseMat::InnerIterator il(prod, bd); il; ++il)
            z(ik.row(), il.row()) += w * ik.value() * il.value();
      }
    return z;
  }
  std::vector<int> seen(n, 0);
  std::vector<Mat> ly(n);
  for (auto [a, b] : xs) {
    if (!seen[a]) {
      ly[a] = alg.left_basis(a) * y;
      seen[a] = 1;
    }
    z += x(a, b) * (ly[a] * alg.left_basis(b).transpose());
  }
  return z;
}

double tensor_gram_norm(const StarAlgebra& alg, const Mat& z) {
  const Mat& g = alg.gram();
  const Mat m = z.adjoint() * g * z;
  const Scalar s = m.cwiseProduct(g).sum();
  return std::sqrt(std::max(0.0, s.real()));
}

}  // namespace qperm
