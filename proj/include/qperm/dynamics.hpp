#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qperm/permutation.hpp"

namespace qperm {

/// Quantum fractions of a pair of states.
struct PhasePoint {
  double alpha;
  double beta;
  /// Throws InvalidModel outside [0, 1]^2.
  PhasePoint(double alpha, double beta);
};

enum class Region { QI, BoundaryW, QW, Degenerate };

struct RegionLabel {
  Region region;
  bool q2i = false;
  bool q3i = false;
  bool qhalfw = false;
  /// The strict 3-increasing threshold left [0, 1] for this point.
  bool q3i_out_of_domain = false;
};

std::string region_name(Region r);

/// (alpha + beta - 2 alpha beta, alpha + beta - alpha beta).
std::pair<double, double> convolution_bounds(double alpha, double beta);

/// Boundary ties within 1e-12 of alpha + beta = 4 alpha beta.
RegionLabel phase_region(const PhasePoint& p);

/// CSV with header alpha,beta,region,q2i,q3i,qhalfw,lower,upper over a
/// uniform n x n grid of [0, 1]^2.
std::string phase_diagram_csv(int n = 101);

struct BoundsSample {
  double alpha;
  double beta;
  double omega;
  double lower;
  double upper;
};

struct BoundsViolation {
  std::string rule;
  int sample;
  BoundsSample values;
  Vec phi;
  Vec rho;
};

struct BoundsReport {
  std::vector<BoundsSample> samples;
  std::vector<BoundsViolation> violations;
  /// Samples with alpha or beta at 0 or 1, where the qualitative rules apply.
  int rule_cases = 0;
  /// Samples whose convolution was random.
  int random_outcomes = 0;
  bool ok() const { return violations.empty(); }
};

/// Samples state pairs (random, truly quantum and unrestricted) and checks the
/// convolution bounds plus the qualitative random/truly-quantum rules.
BoundsReport verify_bounds_empirically(const CompactQuantumGroup& g, const ClassicalVersion& cv,
                                       int n_samples, std::uint64_t seed,
                                       double tol = 1e-8);

/// True iff the quantum fraction of psi is at most tol or at least 1/2 - tol.
bool idempotent_gap_check(const State& psi, const ClassicalVersion& cv,
                          double tol = kIterativeTol);

struct TrajectoryRecord {
  /// NaN when no classical version was supplied.
  double alpha;
  std::vector<std::pair<double, double>> fixed_points;
  /// NaN when no limit was supplied.
  double distance_to_limit;
};

struct Trajectory {
  /// states[k] = seed^{*(k+1)}, so states[0] is the seed.
  std::vector<State> states;
  std::vector<TrajectoryRecord> observables;
};

Trajectory compute_trajectory(const CompactQuantumGroup& g, const State& seed, int k_max,
                              const ClassicalVersion* cv = nullptr,
                              const FixSpectrum* fs = nullptr,
                              const LinearFunctional* limit = nullptr);

/// Smallest d with |phi^{k+d} - phi^k| < tol over the last 3d steps of a
/// trajectory of length k_max + 1; nullopt if none has d <= k_max / 4.
std::optional<int> detect_period(const CompactQuantumGroup& g, const State& seed,
                                 int k_max = 48, double tol = 1e-9);

struct FiniteQuantumFormulas {
  /// 1 - |classical version| / dim.
  double alpha_haar;
  /// Quantum fraction of the Haar state, computed directly.
  double alpha_measured;
  /// 2 N!, reported for context.
  double bound_2nfact;
  bool consistent;
};

FiniteQuantumFormulas finite_quantum_formulas(const CompactQuantumGroup& g,
                                              const ClassicalVersion& cv,
                                              double tol = kAlgebraTol);

struct HaarConvergence {
  std::vector<double> distances;
  /// On duals of groups: sup over gamma != e of |phi(lambda_gamma)|.
  std::optional<double> max_off_identity;
  std::optional<bool> strict;
  bool converged;
  State terminal;
};

/// Tracks |phi^{*k} - h| for k = 1..k_max. On duals of groups convergence
/// is only reported when the seed is strict.
HaarConvergence convergence_to_haar(const CompactQuantumGroup& g, const State& seed,
                                    int k_max, double tol);

}  // namespace qperm
