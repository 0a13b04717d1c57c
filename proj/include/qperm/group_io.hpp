#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qperm/cqg.hpp"

namespace qperm {

/// Malformed or unknown input (CLI exit code 2).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Registered names: s1..s5, z<n>, kp, dual-s3, dual-s4, dual-s5,
/// dual-d<m> (m >= 3), dual-z<n> (n >= 2).
CompactQuantumGroup builtin_group(const std::string& name);
std::vector<std::string> builtin_examples();
bool is_builtin_name(const std::string& name);

/// Group-definition document; see README for the schema. Throws InputError.
CompactQuantumGroup group_from_json(const nlohmann::json& doc);

/// A builtin name, or a path to a JSON group definition.
CompactQuantumGroup load_group(const std::string& ref);

/// The raw data of a quantum group, for rebuilding (e.g. after perturbation).
HopfData hopf_data(const CompactQuantumGroup& g);

/// Generators for the dual of S_n: a transposition and an n-cycle (n-1 cycle
/// on the last points for n = 4), as (element index, order).
std::vector<std::pair<int, int>> symmetric_dual_generators(const FiniteGroup& sn);

}  // namespace qperm
