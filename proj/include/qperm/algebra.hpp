#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qperm/types.hpp"

namespace qperm {

/// Raw presentation of a finite-dimensional *-algebra.
///
/// `products` holds the structure constants as triplets (k, i*dim + j, c)
/// meaning e_i e_j contains c e_k. Column i of `involution` holds the
/// coefficients of e_i^*; the involution acts on a general element as
/// a^* = involution * conj(a).
struct AlgebraData {
  std::vector<std::string> labels;
  std::vector<Eigen::Triplet<Scalar>> products;
  Mat involution;
  Vec unit;
  Vec trace;
  double tolerance = kAlgebraTol;
  double iterative_tolerance = kIterativeTol;
};

class StarAlgebra;
using AlgebraPtr = std::shared_ptr<const StarAlgebra>;

class StarAlgebra {
 public:
  /// Builds the algebra and its Gram data. Axioms are not enforced here;
  /// see check_axioms(). Throws InvalidModel on shape errors only.
  static AlgebraPtr create(AlgebraData data);

  /// Dense presentation: c[i](j, k) is the coefficient of e_k in e_i e_j.
  static AlgebraPtr from_structure_constants(
      std::vector<std::string> labels, const std::vector<Mat>& c,
      Mat involution, Vec unit, Vec trace, double tolerance = kAlgebraTol);

  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }
  double tolerance() const { return tol_; }
  double iterative_tolerance() const { return iter_tol_; }

  /// dim x dim^2 matrix; column i*dim + j holds the coefficients of e_i e_j.
  const SparseMat& products() const { return products_; }
  const Mat& involution() const { return involution_; }
  const Vec& unit() const { return unit_; }
  const Vec& trace() const { return trace_; }

  /// G_ij = tau(e_i^* e_j).
  const Mat& gram() const { return gram_; }
  bool faithful() const { return faithful_; }
  double gram_min_eigenvalue() const { return gram_min_eig_; }
  /// G^{1/2} and G^{-1/2}; throw InvalidModel if the trace is not faithful.
  const Mat& gram_sqrt() const;
  const Mat& gram_inv_sqrt() const;

  /// Sparse left multiplication by e_i: L_i x = e_i x.
  const SparseMat& left_basis(int i) const { return left_[i]; }
  /// Sparse right multiplication by e_j: R_j x = x e_j.
  const SparseMat& right_basis(int j) const { return right_[j]; }

  Vec mul(const Vec& a, const Vec& b) const;
  Vec star(const Vec& a) const;
  Mat left_matrix(const Vec& a) const;
  Mat right_matrix(const Vec& b) const;
  /// [phi(e_i^* e_j)]_{ij}; Hermitian PSD iff phi is positive.
  Mat positivity_matrix(const Vec& phi) const;
  /// T_kj = tau(e_k e_j) evaluated for an arbitrary functional.
  Mat pairing_matrix(const Vec& phi) const;

  /// Max residuals of the algebra axioms.
  struct AxiomResiduals {
    double associativity = 0;
    double involution_antimultiplicative = 0;
    double involution_involutive = 0;
    double unit = 0;
    double trace_tracial = 0;
    double gram_hermitian = 0;
  };
  AxiomResiduals check_axioms() const;

 private:
  StarAlgebra() = default;
  void build();

  int dim_ = 0;
  std::vector<std::string> labels_;
  SparseMat products_;
  Mat involution_;
  Vec unit_;
  Vec trace_;
  double tol_ = kAlgebraTol;
  double iter_tol_ = kIterativeTol;
  std::vector<SparseMat> left_;
  std::vector<SparseMat> right_;
  Mat gram_;
  Mat gram_sqrt_;
  Mat gram_inv_sqrt_;
  double gram_min_eig_ = 0;
  bool faithful_ = false;
};

class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, Vec coeffs);

  static AlgebraElement zero(const AlgebraPtr& algebra);
  static AlgebraElement one(const AlgebraPtr& algebra);
  static AlgebraElement basis(const AlgebraPtr& algebra, int i);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Vec& coeffs() const { return coeffs_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }

 private:
  AlgebraPtr algebra_;
  Vec coeffs_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Scalar s, const AlgebraElement& a);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement adjoint(const AlgebraElement& a);
/// sqrt(tau(a^* a)).
double gram_norm(const AlgebraElement& a);
bool is_self_adjoint(const AlgebraElement& a, double tol);
/// Rank of the image of a projection in the regular representation.
int regular_rank(const AlgebraElement& p);

/// A self-adjoint idempotent, checked in the Gram norm on construction.
class Projection : public AlgebraElement {
 public:
  /// Throws NumericalError if p is not a projection within tol
  /// (tol < 0 selects the algebra tolerance).
  explicit Projection(const AlgebraElement& p, double tol = -1);

  static Projection zero(const AlgebraPtr& algebra);
  static Projection one(const AlgebraPtr& algebra);
  /// 1 - p.
  Projection complement() const;
};

double projection_defect(const AlgebraElement& p);

class LinearFunctional {
 public:
  LinearFunctional(AlgebraPtr algebra, Vec duals);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Vec& duals() const { return duals_; }
  int dim() const { return static_cast<int>(duals_.size()); }
  Scalar operator()(const AlgebraElement& a) const;

 private:
  AlgebraPtr algebra_;
  Vec duals_;
};

bool is_positive_functional(const LinearFunctional& phi, double tol = -1);

/// Positive unital functional.
class State : public LinearFunctional {
 public:
  /// Checks unitality and positivity (tol < 0 selects the iterative tolerance).
  explicit State(const LinearFunctional& phi, double tol = -1);

  /// Wraps a functional known to be a state by construction, unchecked.
  static State trusted(const AlgebraPtr& algebra, Vec duals);
  /// The faithful trace, normalized.
  static State normalized_trace(const AlgebraPtr& algebra);

 private:
  struct Unchecked {};
  State(const LinearFunctional& phi, Unchecked);
};

/// sup over basis of |phi(e_i) - psi(e_i)|.
double sup_distance(const LinearFunctional& a, const LinearFunctional& b);

/// Regular representation L_i as dense matrices.
std::vector<Mat> regular_representation(const StarAlgebra& algebra);

struct Interval {
  double lo;
  double hi;
  bool lo_closed = true;
  bool hi_closed = true;

  /// Closed endpoints admit values up to `slack` outside the interval.
  bool contains(double x, double slack = 0) const;
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval around(double x, double width) {
    return {x - width, x + width, true, true};
  }
};

struct SpectralComponent {
  double eigenvalue;
  int multiplicity;
  Projection projection;
};

/// All eigenvalue clusters of a self-adjoint element with their projections.
std::vector<SpectralComponent> spectral_decomposition(const AlgebraElement& f);

Projection spectral_projection(const AlgebraElement& f,
                               const std::vector<Interval>& intervals);

struct MeetResult {
  Projection projection;
  bool converged;
  int iterations;
  int rank;
};

/// Largest projection below every input, by repeated squaring of the
/// ordered product with a spectral fallback on the average.
MeetResult meet(const std::vector<Projection>& ps, int max_iter = 200,
                double tol = -1);

/// Density d with phi = tau(d .), Hermitized.
AlgebraElement density(const LinearFunctional& phi);

/// Smallest projection p with phi(p) = 1. Eigenvalues of the density at or
/// below `threshold` are treated as zero (threshold < 0: algebra tolerance).
Projection support_projection(const State& phi, double threshold = -1);

AlgebraPtr tensor(const StarAlgebra& a, const StarAlgebra& b);
/// phi (x) rho on the given tensor algebra.
LinearFunctional tensor_functional(const AlgebraPtr& ab,
                                   const LinearFunctional& phi,
                                   const LinearFunctional& rho);
LinearFunctional tensor_functional(const LinearFunctional& phi,
                                   const LinearFunctional& rho);

/// Elements of A (x) A stored as dim x dim coefficient matrices X with
/// X(a, b) the coefficient of e_a (x) e_b.
Mat tensor_multiply(const StarAlgebra& algebra, const Mat& x, const Mat& y);
double tensor_gram_norm(const StarAlgebra& algebra, const Mat& z);

}  // namespace qperm
