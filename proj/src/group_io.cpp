#include "qperm/group_io.hpp"

#include <fstream>
#include <regex>

#include "qperm/finite_group.hpp"

namespace qperm {

using nlohmann::json;

namespace {

CompactQuantumGroup renamed(const CompactQuantumGroup& g, const std::string& name) {
  HopfData d = hopf_data(g);
  d.name = name;
  return CompactQuantumGroup(std::move(d), g.has_haar() ? std::optional<Vec>(g.haar().duals())
                                                        : std::nullopt);
}

FiniteGroup cyclic(int n) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "e" : a == 1 ? "g" : "g" + std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return FiniteGroup::from_table(std::move(table), std::move(labels));
}

std::vector<Permutation> cyclic_permutations(int n) {
  Permutation shift(n);
  for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
  return permutation_closure({shift}, n);
}

int parse_count(const std::string& digits, int lo, int hi, const std::string& name) {
  int v = 0;
  try {
    v = std::stoi(digits);
  } catch (const std::exception&) {
    throw InputError("bad builtin name " + name);
  }
  if (v < lo || v > hi)
    throw InputError("builtin " + name + " needs a parameter in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
  return v;
}

Permutation parse_permutation(const json& j) {
  if (!j.is_array()) throw InputError("permutation must be an array of images");
  Permutation p;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError("permutation images must be integers");
    p.push_back(x.get<int>() - 1);
  }
  if (!is_permutation(p)) throw InputError("not a permutation of 1..N");
  return p;
}

AlgebraData algebra_data(const StarAlgebra& alg) {
  AlgebraData d;
  d.labels = alg.labels();
  const SparseMat& prod = alg.products();
  for (int c = 0; c < prod.outerSize(); ++c)
    for (SparseMat::InnerIterator it(prod, c); it; ++it)
      d.products.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  d.involution = alg.involution();
  d.unit = alg.unit();
  d.trace = alg.trace();
  d.tolerance = alg.tolerance();
  d.iterative_tolerance = alg.iterative_tolerance();
  return d;
}

int index_at(const json& idx, size_t k, int bound, const char* what) {
  if (!idx.is_array() || idx.size() <= k || !idx[k].is_number_integer())
    throw InputError(std::string("perturbation index missing for ") + what);
  const int v = idx[k].get<int>();
  if (v < 0 || v >= bound) throw InputError(std::string("perturbation index out of range for ") + what);
  return v;
}

// Perturbations exist so corrupted models can be fed to the validator.
CompactQuantumGroup apply_perturbations(const CompactQuantumGroup& g, const json& list) {
  if (!list.is_array()) throw InputError("perturb must be an array");
  HopfData d = hopf_data(g);
  const int n = g.dim();
  const int big_n = g.N();
  for (const auto& p : list) {
    const std::string target = p.value("target", "");
    const json idx = p.value("index", json::array());
    const double value = p.value("value", 1e-3);
    if (target == "magic") {
      const int i = index_at(idx, 0, big_n, "magic");
      const int j = index_at(idx, 1, big_n, "magic");
      const int k = p.contains("basis") ? index_at(json::array({p["basis"]}), 0, n, "magic")
                                        : 0;
      Vec c = d.magic[i][j].coeffs();
      c[k] += value;
      d.magic[i][j] = AlgebraElement(d.algebra, c);
    } else if (target == "delta") {
      const int r = index_at(idx, 0, n * n, "delta");
      const int c = index_at(idx, 1, n, "delta");
      d.delta.coeffRef(r, c) += value;
    } else if (target == "counit") {
      d.counit[index_at(idx, 0, n, "counit")] += value;
    } else if (target == "antipode") {
      d.antipode(index_at(idx, 0, n, "antipode"), index_at(idx, 1, n, "antipode")) += value;
    } else if (target == "product") {
      const int i = index_at(idx, 0, n, "product");
      const int j = index_at(idx, 1, n, "product");
      const int k = index_at(idx, 2, n, "product");
      AlgebraData ad = algebra_data(*d.algebra);
      ad.products.emplace_back(k, i * n + j, value);
      AlgebraPtr alg = StarAlgebra::create(std::move(ad));
      for (auto& row : d.magic)
        for (auto& e : row) e = AlgebraElement(alg, e.coeffs());
      d.algebra = alg;
    } else {
      throw InputError("unknown perturbation target '" + target + "'");
    }
  }
  d.name += " (perturbed)";
  return CompactQuantumGroup(std::move(d));
}

CompactQuantumGroup build(const json& doc) {
  if (!doc.is_object()) throw InputError("group definition must be a JSON object");
  const std::string kind = doc.value("kind", "");
  const double tol = doc.value("tolerance", kAlgebraTol);
  if (!(tol > 0)) throw InputError("tolerance must be positive");

  if (kind == "builtin") {
    if (!doc.contains("builtin") || !doc["builtin"].is_string())
      throw InputError("builtin kind needs a 'builtin' name");
    return builtin_group(doc["builtin"].get<std::string>());
  }
  if (kind == "kac_paljutkin") return kac_paljutkin(tol);
  if (kind == "classical") {
    if (!doc.contains("permutations") || !doc["permutations"].is_array() ||
        doc["permutations"].empty())
      throw InputError("classical kind needs a non-empty 'permutations' array");
    std::vector<Permutation> perms;
    for (const auto& p : doc["permutations"]) perms.push_back(parse_permutation(p));
    for (const auto& p : perms)
      if (p.size() != perms.front().size()) throw InputError("permutations differ in degree");
    if (doc.value("closure", false))
      perms = permutation_closure(perms, static_cast<int>(perms.front().size()));
    return classical_group(perms, tol);
  }
  if (kind == "dual") {
    std::optional<FiniteGroup> gamma;
    if (doc.contains("group_table")) {
      std::vector<std::vector<int>> table;
      try {
        table = doc["group_table"].get<std::vector<std::vector<int>>>();
      } catch (const json::exception&) {
        throw InputError("group_table must be a square array of integers");
      }
      std::vector<std::string> labels;
      if (doc.contains("labels")) labels = doc["labels"].get<std::vector<std::string>>();
      gamma = FiniteGroup::from_table(std::move(table), std::move(labels));
    } else if (doc.contains("permutations")) {
      std::vector<Permutation> perms;
      for (const auto& p : doc["permutations"]) perms.push_back(parse_permutation(p));
      if (doc.value("closure", false))
        perms = permutation_closure(perms, static_cast<int>(perms.front().size()));
      gamma = FiniteGroup::from_permutations(std::move(perms));
    } else {
      throw InputError("dual kind needs 'group_table' or 'permutations'");
    }
    if (!doc.contains("generators") || !doc["generators"].is_array())
      throw InputError("dual kind needs a 'generators' array");
    std::vector<std::pair<int, int>> gens;
    for (const auto& gen : doc["generators"]) {
      if (!gen.contains("element") || !gen.contains("order"))
        throw InputError("each generator needs 'element' and 'order'");
      gens.emplace_back(gen["element"].get<int>(), gen["order"].get<int>());
    }
    return dual_group(*gamma, gens, tol);
  }
  throw InputError("unknown group kind '" + kind + "'");
}

}  // namespace

std::vector<std::pair<int, int>> symmetric_dual_generators(const FiniteGroup& sn) {
  if (!sn.permutations()) throw InvalidModel("symmetric group without permutations");
  const int n = static_cast<int>(sn.permutations()->front().size());
  if (n < 2) throw InvalidModel("dual of S_1 has no generators");
  Permutation t = identity_permutation(n);
  std::swap(t[0], t[1]);
  // S_4 uses (234) so that the blocks have sizes 2 and 3; otherwise an n-cycle.
  const int start = n == 4 ? 1 : 0;
  Permutation c = identity_permutation(n);
  for (int i = start; i < n; ++i) c[i] = i + 1 < n ? i + 1 : start;
  std::vector<std::pair<int, int>> gens{{sn.index_of(t), 2}};
  if (n > 2) gens.emplace_back(sn.index_of(c), n - start);
  return gens;
}

bool is_builtin_name(const std::string& name) {
  static const std::regex re("s[1-6]|z[0-9]+|kp|dual-s[2-5]|dual-d[0-9]+|dual-z[0-9]+");
  return std::regex_match(name, re);
}

std::vector<std::string> builtin_examples() {
  return {"s3", "s4", "z4", "kp", "dual-s3", "dual-s4", "dual-s5", "dual-d6", "dual-z3"};
}

CompactQuantumGroup builtin_group(const std::string& name) {
  if (!is_builtin_name(name)) throw InputError("unknown builtin group '" + name + "'");
  if (name == "kp") return kac_paljutkin();
  if (name[0] == 's') {
    const int n = parse_count(name.substr(1), 1, 6, name);
    return renamed(classical_group(symmetric_group(n)), "S" + std::to_string(n));
  }
  if (name[0] == 'z') {
    const int n = parse_count(name.substr(1), 1, 12, name);
    return renamed(classical_group(cyclic_permutations(n)), "Z" + std::to_string(n));
  }
  const std::string rest = name.substr(5);
  if (rest[0] == 's') {
    const int n = parse_count(rest.substr(1), 2, 5, name);
    const FiniteGroup sn = FiniteGroup::symmetric(n);
    return renamed(dual_group(sn, symmetric_dual_generators(sn)),
                   "dual of S" + std::to_string(n));
  }
  if (rest[0] == 'd') {
    const int m = parse_count(rest.substr(1), 3, 64, name);
    const FiniteGroup dm = FiniteGroup::dihedral(m);
    const int a = m;               // s
    const int b = dm.mul(m, 1);    // s r
    return renamed(dual_group(dm, {{a, 2}, {b, 2}}), "dual of D" + std::to_string(m));
  }
  const int n = parse_count(rest.substr(1), 2, 24, name);
  return renamed(dual_group(cyclic(n), {{1, n}}), "dual of Z" + std::to_string(n));
}

CompactQuantumGroup group_from_json(const json& doc) {
  try {
    CompactQuantumGroup g = build(doc);
    if (doc.contains("name") && doc["name"].is_string())
      g = renamed(g, doc["name"].get<std::string>());
    if (doc.contains("perturb")) return apply_perturbations(g, doc["perturb"]);
    return g;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed group definition: ") + e.what());
  } catch (const InvalidModel& e) {
    throw InputError(e.what());
  }
}

CompactQuantumGroup load_group(const std::string& ref) {
  if (is_builtin_name(ref)) return builtin_group(ref);
  std::ifstream in(ref);
  if (!in) throw InputError("cannot open group definition '" + ref + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse '" + ref + "': " + e.what());
  }
  return group_from_json(doc);
}

HopfData hopf_data(const CompactQuantumGroup& g) {
  HopfData d;
  d.algebra = g.algebra();
  d.delta = g.delta();
  d.counit = g.counit().duals();
  d.antipode = g.antipode();
  d.magic = g.magic();
  d.name = g.name();
  d.dual_of = g.dual_of();
  d.function_algebra_of = g.function_algebra_of();
  d.kac_paljutkin = g.is_kac_paljutkin();
  return d;
}

}  // namespace qperm
