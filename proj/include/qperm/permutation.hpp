#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qperm/cqg.hpp"
#include "qperm/idempotent.hpp"

namespace qperm {

/// Doubly stochastic matrix (phi(u_ij)).
struct BirkhoffSlice {
  RealMat matrix;
  bool doubly_stochastic(double tol) const;
};

BirkhoffSlice birkhoff_slice(const CompactQuantumGroup& g, const LinearFunctional& phi);

/// The permutation sigma when the slice is a permutation matrix. Throws
/// InvalidModel if the slice is a permutation but phi is not multiplicative.
std::optional<Permutation> is_character(const CompactQuantumGroup& g,
                                        const LinearFunctional& phi, double tol = -1);

struct ClassicalVersion {
  /// Sorted lexicographically; characters and supports follow this order.
  std::vector<Permutation> permutations;
  std::vector<State> characters;
  std::vector<Projection> supports;
  std::vector<int> ranks;
  Projection p_C;
  Projection p_Q;
  double group_like_defect;
};

/// Characters via the commutator-ideal quotient, matched to permutations,
/// with supports computed as meets and cross-checked against support
/// projections. Throws NumericalError on any disagreement.
ClassicalVersion classical_version(const CompactQuantumGroup& g);

/// phi(p_Q).
double quantum_fraction(const LinearFunctional& phi, const ClassicalVersion& cv);

struct Decomposition {
  double alpha;
  std::optional<State> classical;
  std::optional<State> quantum;
};

/// phi = (1 - alpha) phi_C + alpha phi_Q; a component is omitted when its
/// weight is within tolerance of zero.
Decomposition decompose(const State& phi, const ClassicalVersion& cv, double tol = -1);

using Partition = std::vector<std::vector<int>>;

/// Blocks sorted internally and ordered by their minimum element. Throws
/// InvalidModel unless the blocks partition {0..n-1}.
Partition canonical_partition(Partition p, int n);

bool stabiliser_membership(const CompactQuantumGroup& g, const State& phi,
                           const Partition& p, double tol = kIterativeTol);

struct StabiliserIdempotent {
  State idempotent;
  /// Meet of the block row sums r_j.
  Projection block_projection;
  bool converged;
};

StabiliserIdempotent stabiliser_idempotent(const CompactQuantumGroup& g, const Partition& p);

bool is_central(const AlgebraElement& a, double tol = -1);

struct FixSpectrum {
  AlgebraElement element;
  std::vector<double> eigenvalues;
  std::vector<Projection> projections;

  /// (eigenvalue, phi(projection)) pairs.
  std::vector<std::pair<double, double>> distribution(const LinearFunctional& phi) const;
  /// Index of the eigenvalue within `width` of x, or -1.
  int find(double x, double width = 1e-6) const;
};

FixSpectrum fix_spectrum(const CompactQuantumGroup& g);
std::vector<std::pair<double, double>> fixed_point_distribution(const FixSpectrum& fs,
                                                                const LinearFunctional& phi);
/// All mass sits on eigenvalues within 1e-6 of an integer.
bool has_integer_fixed_points(const FixSpectrum& fs, const LinearFunctional& phi,
                              double tol = kIterativeTol);

}  // namespace qperm
