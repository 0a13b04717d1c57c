#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qperm/dynamics.hpp"
#include "qperm/group_io.hpp"

namespace qperm {

/// JSON text with every double printed to 17 significant digits.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

nlohmann::json to_json(const LinearFunctional& phi);

// ---------------------------------------------------------------------------
// Idempotent census

struct CensusEntry {
  std::string source;
  State idempotent;
  bool converged;
  double alpha;
  bool gap_ok;
  IdempotentKind kind;
  /// sup |psi o S - psi|.
  double antipode_defect;
  int distinct_id;
};

struct DistinctIdempotent {
  State psi;
  std::string first_source;
  int multiplicity;
  IdempotentKind kind;
  double alpha;
  double support_defect;
  bool group_like_support;
  std::optional<CollapseProbeReport> probe;
};

struct SubgroupCheck {
  std::vector<int> elements;
  std::vector<std::string> labels;
  bool normal;
  IdempotentKind kind;
  double alpha;
  bool agrees;
};

struct Census {
  std::vector<CensusEntry> entries;
  std::vector<DistinctIdempotent> distinct;
  /// Filled on duals of groups: one line per subgroup.
  std::vector<SubgroupCheck> subgroups;
  int cesaro_limits = 0;
  int gap_violations = 0;
  int unconverged = 0;
};

struct CensusOptions {
  int n_random = 64;
  std::uint64_t seed = 2024;
  /// Samples per collapse probe; 0 disables probing.
  int probe_samples = 24;
};

/// Cesaro limits from a seed bank (vector states at basis elements plus
/// random states restricted to magic entries, their meets and the classical
/// part), each classified and gap-checked. On duals of groups every subgroup
/// indicator is classified against a brute-force normality test.
Census idempotent_census(const CompactQuantumGroup& g, const ClassicalVersion& cv,
                         const CensusOptions& opt = {});

// ---------------------------------------------------------------------------
// Point stabilisers

struct StabiliserLine {
  int point;
  bool diagonal_central;
  double haar_mass;
  double alpha;
  bool converged;
  IdempotentKind kind;
  /// Haar exactly when the diagonal entry is central.
  bool consistent;
};

std::vector<StabiliserLine> point_stabilisers(const CompactQuantumGroup& g,
                                              const ClassicalVersion& cv);

// ---------------------------------------------------------------------------
// Dual of S_4 walkthrough

struct WalkthroughResult {
  std::vector<double> spectrum;
  std::vector<int> multiplicities;
  double lambda_plus;
  double lambda_minus;
  /// sup |phi^{*k} - h| for k = 1..k_max.
  std::vector<double> distances;
  double max_off_identity;
  bool strict;
  double terminal_distance;
  /// Mass the limit puts at lambda_plus, and h(p_{lambda_plus}) computed directly.
  double terminal_weight_plus;
  double haar_weight_plus;
  bool limit_has_integer_fixed_points;
  std::vector<std::pair<double, double>> seed_distribution;
};

WalkthroughResult s4hat_walkthrough(int k_max = 200);

// ---------------------------------------------------------------------------
// Coset periodicity in S_4 and the Kac-Paljutkin alternation

struct CosetPeriod {
  Permutation representative;
  int element_order;
  int coset_order;
  std::optional<int> period;
};

/// One line per element g of S_4: the uniform measure on V g with V the
/// Klein four-group.
std::vector<CosetPeriod> klein_coset_periods(int k_max = 48);

/// Quantum fractions of E11^{*k}, k = 1..k_max, on the Kac-Paljutkin group.
std::vector<double> kp_alternation(int k_max = 12);

// ---------------------------------------------------------------------------
// Dihedral sweep

struct DihedralLine {
  int m;
  double meet_mass;
  double expected;
  int meet_rank;
};

std::vector<DihedralLine> dihedral_sweep(int m_min = 3, int m_max = 12);

// ---------------------------------------------------------------------------
// CLI plumbing

struct ExperimentSpec {
  std::string name;
  std::string group;
  nlohmann::json parameters = nlohmann::json::object();
  /// Relative paths resolve against base_dir.
  std::vector<std::string> outputs;
  std::string base_dir = ".";
};

std::vector<std::string> experiment_names();

/// Throws InputError on schema problems or an unknown experiment.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc, const std::string& base_dir);

struct ExperimentResult {
  nlohmann::json document;
  /// CSV body for experiments that emit tabular data.
  std::optional<std::string> csv;
  bool passed;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Writes the result to the outputs listed in the experiment spec (.json gets the document, .csv the
/// table); with no outputs, <name>.json (and <name>.csv) in base_dir.
std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentResult& r);

struct Report {
  nlohmann::json summary;
  std::string table;
  bool all_passed;
};

/// Aggregates every experiment document in dir and writes dir/summary.json.
/// Throws InputError if dir holds no experiment documents.
Report build_report(const std::string& dir);

}  // namespace qperm
