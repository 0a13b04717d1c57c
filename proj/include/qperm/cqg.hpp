#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qperm/algebra.hpp"
#include "qperm/finite_group.hpp"

namespace qperm {

using MagicGrid = std::vector<std::vector<AlgebraElement>>;

/// Raw Hopf data on a star algebra.
struct HopfData {
  AlgebraPtr algebra;
  /// dim^2 x dim; column k holds Delta(e_k) with row a*dim + b for e_a (x) e_b.
  SparseMat delta;
  Vec counit;
  /// Column j holds S(e_j).
  Mat antipode;
  MagicGrid magic;
  std::string name;
  std::optional<FiniteGroup> dual_of;
  std::optional<FiniteGroup> function_algebra_of;
  bool kac_paljutkin = false;
};

class CompactQuantumGroup {
 public:
  /// Stores the data and computes the Haar state by linear solve unless one
  /// is supplied. Axioms are checked by validate(), not here.
  explicit CompactQuantumGroup(HopfData data,
                               std::optional<Vec> haar = std::nullopt);

  const AlgebraPtr& algebra() const { return algebra_; }
  int dim() const { return algebra_->dim(); }
  int N() const { return static_cast<int>(magic_.size()); }
  const std::string& name() const { return name_; }
  const SparseMat& delta() const { return delta_; }
  const State& counit() const { return *counit_; }
  const Mat& antipode() const { return antipode_; }
  /// Throws InvalidModel when the invariance system had no unique solution.
  const State& haar() const;
  bool has_haar() const { return haar_.has_value(); }
  const MagicGrid& magic() const { return magic_; }
  const AlgebraElement& u(int i, int j) const { return magic_[i][j]; }

  /// Delta(a) as a dim x dim coefficient matrix.
  Mat coproduct(const Vec& a) const;
  AlgebraElement apply_antipode(const AlgebraElement& a) const;

  /// Underlying discrete group for duals of finite groups.
  const std::optional<FiniteGroup>& dual_of() const { return dual_of_; }
  /// Underlying permutation group for function algebras.
  const std::optional<FiniteGroup>& function_algebra_of() const {
    return classical_of_;
  }
  bool is_kac_paljutkin() const { return kac_paljutkin_; }

 private:
  AlgebraPtr algebra_;
  SparseMat delta_;
  std::optional<State> counit_;
  Mat antipode_;
  std::optional<State> haar_;
  MagicGrid magic_;
  std::string name_;
  std::optional<FiniteGroup> dual_of_;
  std::optional<FiniteGroup> classical_of_;
  bool kac_paljutkin_ = false;
};

/// One axiom with its worst residual. For the faithfulness check the
/// residual is the smallest Gram eigenvalue and must exceed the tolerance.
struct ValidationCheck {
  std::string name;
  double residual;
  double tolerance;
  bool passed;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const;
  /// Names of failing checks.
  std::vector<std::string> failures() const;
};

ValidationReport validate(const CompactQuantumGroup& g);

/// (phi (x) rho) o Delta. Throws AlgebraMismatch if either operand lives
/// on another algebra.
LinearFunctional convolve(const CompactQuantumGroup& g,
                          const LinearFunctional& phi,
                          const LinearFunctional& rho);
State convolve(const CompactQuantumGroup& g, const State& phi, const State& rho);

/// phi o S.
State reverse(const CompactQuantumGroup& g, const State& phi);

/// Haar state from the two-sided invariance equations, cross-checked
/// against the Cesaro limit of a faithful seed.
State haar_state(const CompactQuantumGroup& g);

/// Dimension of the solution space of the invariance system (1 for valid data).
int haar_solution_dimension(const CompactQuantumGroup& g);

/// Span closure of words in the magic entries; returns the rank reached.
int magic_word_rank(const CompactQuantumGroup& g);

/// Function algebra on a permutation group (images zero-based).
CompactQuantumGroup classical_group(const std::vector<Permutation>& perms,
                                    double tolerance = kAlgebraTol);

/// Group algebra of a finite group with one Fourier block per generator.
/// `gens` lists (element index, declared order).
CompactQuantumGroup dual_group(const FiniteGroup& gamma,
                               const std::vector<std::pair<int, int>>& gens,
                               double tolerance = kAlgebraTol);

/// The eight-dimensional Kac-Paljutkin quantum group inside S_4^+.
CompactQuantumGroup kac_paljutkin(double tolerance = kAlgebraTol);

/// Surjective Hopf *-homomorphism between quantum permutation groups.
struct QuantumGroupMorphism {
  const CompactQuantumGroup* source;
  const CompactQuantumGroup* target;
  /// target.dim x source.dim.
  Mat map;
  double homomorphism_residual;
  double intertwining_residual;
  double magic_residual;
};

/// Builds pi with pi(u^G_ij) = images[i][j] by evaluating words in the magic
/// entries. Throws InvalidModel if relations are violated or pi is not onto.
/// Both groups must outlive the returned morphism.
QuantumGroupMorphism quotient_morphism(const CompactQuantumGroup& g,
                                       const CompactQuantumGroup& h,
                                       const MagicGrid& images);

/// h_target o pi as a state on the source.
State haar_idempotent(const QuantumGroupMorphism& pi);

}  // namespace qperm
