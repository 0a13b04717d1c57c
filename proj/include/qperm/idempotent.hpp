#pragma once

#include <cstdint>
#include <vector>

#include "qperm/cqg.hpp"

namespace qperm {

/// Cesaro means are refined by doubling, so max_n is a number of terms.
inline constexpr std::int64_t kDefaultCesaroTerms = std::int64_t{1} << 40;

struct CesaroResult {
  State limit;
  /// Number of terms in the final mean.
  std::int64_t iterations;
  /// max(|seed * limit - limit|, |limit * seed - limit|) over basis values.
  double residual;
  bool converged;
};

/// Limit of (1/n)(phi + phi^2 + ... + phi^n) under convolution.
CesaroResult cesaro_idempotent(const CompactQuantumGroup& g, const State& seed,
                               std::int64_t max_n = kDefaultCesaroTerms,
                               double tol = -1);

/// Idempotent absorbing every input. Each input is first replaced by its
/// Cesaro idempotent; these are then folded in input order, taking the
/// Cesaro limit of acc * psi_i at each step. A second pass over a shuffled
/// order must agree, otherwise converged is false.
CesaroResult generated_idempotent(const CompactQuantumGroup& g,
                                  const std::vector<State>& states,
                                  std::int64_t max_n = kDefaultCesaroTerms,
                                  double tol = -1, std::uint64_t seed = 7);

double idempotency_defect(const CompactQuantumGroup& g, const LinearFunctional& phi);
bool is_idempotent(const CompactQuantumGroup& g, const LinearFunctional& phi,
                   double tol = -1);

/// psi * phi = psi = phi * psi. Throws NumericalError if psi is not idempotent.
bool quasi_subgroup_member(const CompactQuantumGroup& g, const State& psi,
                           const State& phi, double tol = kIterativeTol);

/// Gram norm of Delta(p)(1 (x) p) - p (x) p.
double group_like_defect(const CompactQuantumGroup& g, const AlgebraElement& p);
bool is_group_like(const CompactQuantumGroup& g, const Projection& p,
                   double tol = -1);

/// f -> phi(q f q) / phi(q). Throws ConditioningError when phi(q) <= tol.
State condition(const State& phi, const AlgebraElement& q, double tol = -1);

/// Columns span N_phi = {f : phi(f^* f) = 0}.
Mat null_space(const LinearFunctional& phi, double tol = kIterativeTol);

enum class IdempotentKind { Haar, NonHaar };

struct IdempotentClass {
  IdempotentKind kind;
  int null_space_dim;
  /// Basis indices i such that N_phi e_i leaves N_phi.
  std::vector<int> witnesses;
};

IdempotentClass classify_idempotent(const CompactQuantumGroup& g, const State& phi,
                                    double tol = kIterativeTol);

/// lambda_gamma -> 1 if gamma in the subgroup else 0, on a dual group.
State dual_subgroup_idempotent(const CompactQuantumGroup& g,
                               const std::vector<int>& subgroup);

struct CollapseViolation {
  int i;
  int j;
  /// Index into the tested members; 0 is psi itself.
  int member;
  double defect;
};

struct CollapseProbeReport {
  int members_tested = 0;
  int conditionings_tested = 0;
  std::vector<CollapseViolation> violations;
};

/// Conditions members of S_psi on magic entries and reports those leaving S_psi.
CollapseProbeReport collapse_stability_probe(const CompactQuantumGroup& g,
                                             const State& psi, int n_samples = 100,
                                             std::uint64_t seed = 11);

}  // namespace qperm
