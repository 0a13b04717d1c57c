#include "qperm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qperm/sampling.hpp"

namespace qperm {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool is_scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void emit(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
      out += '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += "\n" + pad;
        emit(x, out, indent, depth + 1);
        first = false;
      }
      if (!flat) out += "\n" + close_pad;
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        out += "\n" + pad + json(it.key()).dump() + ": ";
        emit(it.value(), out, indent, depth + 1);
        first = false;
      }
      out += "\n" + close_pad + '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& doc, int indent) {
  std::string out;
  emit(doc, out, indent, 0);
  out += '\n';
  return out;
}

json to_json(const LinearFunctional& phi) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < phi.dim(); ++i) {
    re.push_back(phi.duals()[i].real());
    im.push_back(phi.duals()[i].imag());
  }
  return {{"re", re}, {"im", im}};
}

// ---------------------------------------------------------------------------
// Census

namespace {

std::string kind_name(IdempotentKind k) { return k == IdempotentKind::Haar ? "Haar" : "NonHaar"; }

std::string entry_label(int i, int j) {
  return "u" + std::to_string(i + 1) + std::to_string(j + 1);
}

State character_mixture(const ClassicalVersion& cv, Rng& rng) {
  const int k = static_cast<int>(cv.characters.size());
  const int parts = 1 + rng.below(std::min(3, k));
  Vec duals = Vec::Zero(cv.characters.front().dim());
  double total = 0;
  std::vector<std::pair<int, double>> picks;
  for (int p = 0; p < parts; ++p) {
    const double w = 0.05 + rng.uniform();
    picks.emplace_back(rng.below(k), w);
    total += w;
  }
  for (auto [c, w] : picks) duals += (w / total) * cv.characters[c].duals();
  return State::trusted(cv.characters.front().algebra(), duals);
}

}  // namespace

Census idempotent_census(const CompactQuantumGroup& g, const ClassicalVersion& cv,
                         const CensusOptions& opt) {
  const AlgebraPtr& alg = g.algebra();
  const int n = alg->dim();
  const int big_n = g.N();
  const double tol = kIterativeTol;

  struct Seed {
    std::string source;
    State state;
  };
  std::vector<Seed> seeds;
  for (int i = 0; i < n; ++i) {
    const AlgebraElement e = AlgebraElement::basis(alg, i);
    if (gram_norm(e) > 1e-12) seeds.push_back({"basis:" + alg->label(i), vector_state(e)});
  }
  for (int k = 0; k < opt.n_random; ++k) {
    Rng rng(opt.seed, static_cast<std::uint64_t>(k));
    const int kind = k % 4;
    if (kind == 1 || kind == 2) {
      const int i = rng.below(big_n), j = rng.below(big_n);
      Projection q(g.u(i, j));
      std::string src = "random:" + entry_label(i, j);
      if (kind == 2) {
        const int a = rng.below(big_n), b = rng.below(big_n);
        const MeetResult m = meet({q, Projection(g.u(a, b))});
        if (m.rank > 0) {
          q = m.projection;
          src += "^" + entry_label(a, b);
        }
      }
      if (regular_rank(q) > 0) {
        seeds.push_back({src, random_state(alg, rng, &q)});
        continue;
      }
    }
    if (kind == 3 && !cv.characters.empty()) {
      seeds.push_back({"random:characters", character_mixture(cv, rng)});
      continue;
    }
    seeds.push_back({"random", random_state(alg, rng)});
  }

  std::vector<std::optional<CesaroResult>> limits(seeds.size());
  parallel_for(seeds.size(), [&](size_t k) { limits[k] = cesaro_idempotent(g, seeds[k].state); });

  Census c;
  auto classify_or = [&](const State& psi) {
    try {
      return classify_idempotent(g, psi).kind;
    } catch (const NumericalError&) {
      return IdempotentKind::NonHaar;
    }
  };
  auto add_distinct = [&](const State& psi, const std::string& src, IdempotentKind kind,
                          double alpha) {
    for (size_t d = 0; d < c.distinct.size(); ++d)
      if (sup_distance(c.distinct[d].psi, psi) < 1e-6) {
        ++c.distinct[d].multiplicity;
        return static_cast<int>(d);
      }
    c.distinct.push_back({psi, src, 1, kind, alpha, 0.0, false, std::nullopt});
    return static_cast<int>(c.distinct.size()) - 1;
  };

  for (size_t k = 0; k < seeds.size(); ++k) {
    const CesaroResult& r = *limits[k];
    CensusEntry e{seeds[k].source, r.limit, r.converged, 0, false, IdempotentKind::Haar, 0, -1};
    e.alpha = quantum_fraction(r.limit, cv);
    e.gap_ok = idempotent_gap_check(r.limit, cv, tol);
    e.kind = classify_or(r.limit);
    e.antipode_defect = sup_distance(reverse(g, r.limit), r.limit);
    // Unconverged limits are counted but kept out of the support and probe stage.
    if (r.converged) e.distinct_id = add_distinct(r.limit, e.source, e.kind, e.alpha);
    c.gap_violations += !e.gap_ok;
    c.unconverged += !r.converged;
    c.entries.push_back(std::move(e));
  }
  c.cesaro_limits = static_cast<int>(seeds.size());

  if (const auto& gamma = g.dual_of()) {
    for (const auto& sub : gamma->subgroups()) {
      const State psi = dual_subgroup_idempotent(g, sub);
      SubgroupCheck s{sub, {}, gamma->is_normal(sub), classify_or(psi), 0, false};
      for (int x : sub) s.labels.push_back(gamma->label(x));
      s.alpha = quantum_fraction(psi, cv);
      s.agrees = (s.kind == IdempotentKind::Haar) == s.normal;
      c.gap_violations += !idempotent_gap_check(psi, cv, tol);
      std::string src = "subgroup:{";
      for (size_t i = 0; i < s.labels.size(); ++i) src += (i ? "," : "") + s.labels[i];
      add_distinct(psi, src + "}", s.kind, s.alpha);
      c.subgroups.push_back(std::move(s));
    }
  }

  parallel_for(c.distinct.size(), [&](size_t d) {
    DistinctIdempotent& di = c.distinct[d];
    const Projection supp = support_projection(di.psi, 1e-6);
    di.support_defect = group_like_defect(g, supp);
    di.group_like_support = di.support_defect <= tol;
    if (opt.probe_samples > 0)
      di.probe = collapse_stability_probe(g, di.psi, opt.probe_samples, opt.seed + d);
  });
  return c;
}

// ---------------------------------------------------------------------------
// Stabilisers

std::vector<StabiliserLine> point_stabilisers(const CompactQuantumGroup& g,
                                              const ClassicalVersion& cv) {
  const int big_n = g.N();
  std::vector<StabiliserLine> lines(static_cast<size_t>(big_n));
  if (big_n < 2) return {};
  parallel_for(lines.size(), [&](size_t jj) {
    const int j = static_cast<int>(jj);
    Partition p{{j}, {}};
    for (int i = 0; i < big_n; ++i)
      if (i != j) p[1].push_back(i);
    const StabiliserIdempotent st = stabiliser_idempotent(g, p);
    StabiliserLine& l = lines[jj];
    l.point = j;
    l.diagonal_central = is_central(g.u(j, j));
    l.haar_mass = g.haar()(st.block_projection).real();
    l.alpha = quantum_fraction(st.idempotent, cv);
    l.converged = st.converged;
    l.kind = classify_idempotent(g, st.idempotent).kind;
    l.consistent = l.diagonal_central == (l.kind == IdempotentKind::Haar);
  });
  return lines;
}

// ---------------------------------------------------------------------------
// Walkthrough

WalkthroughResult s4hat_walkthrough(int k_max) {
  const CompactQuantumGroup g = builtin_group("dual-s4");
  const FixSpectrum fs = fix_spectrum(g);
  WalkthroughResult w{};
  for (size_t k = 0; k < fs.eigenvalues.size(); ++k) {
    w.spectrum.push_back(fs.eigenvalues[k]);
    w.multiplicities.push_back(regular_rank(fs.projections[k]));
  }
  w.lambda_plus = (5 + std::sqrt(17.0)) / 2;
  w.lambda_minus = (5 - std::sqrt(17.0)) / 2;
  const int i2 = fs.find(2.0), i4 = fs.find(4.0), ip = fs.find(w.lambda_plus);
  if (i2 < 0 || i4 < 0 || ip < 0) throw NumericalError("fix spectrum lacks a required eigenvalue");
  const State phi2 = vector_state(fs.projections[i2]);
  const State phi4 = vector_state(fs.projections[i4]);
  const State seed = State::trusted(g.algebra(), (phi2.duals() + phi4.duals()) / 2.0);
  w.seed_distribution = fs.distribution(seed);

  const HaarConvergence hc = convergence_to_haar(g, seed, k_max, 1e-8);
  w.distances = hc.distances;
  w.max_off_identity = hc.max_off_identity.value_or(0);
  w.strict = hc.strict.value_or(false);
  w.terminal_distance = hc.distances.back();
  w.terminal_weight_plus = hc.terminal(fs.projections[ip]).real();
  w.haar_weight_plus = g.haar()(fs.projections[ip]).real();
  w.limit_has_integer_fixed_points = has_integer_fixed_points(fs, hc.terminal);
  return w;
}

// ---------------------------------------------------------------------------
// Periodicity

std::vector<CosetPeriod> klein_coset_periods(int k_max) {
  const std::vector<Permutation> perms = symmetric_group(4);
  const CompactQuantumGroup g = classical_group(perms);
  const FiniteGroup& grp = *g.function_algebra_of();
  const std::vector<Permutation> klein{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto in_klein = [&](const Permutation& p) {
    return std::find(klein.begin(), klein.end(), p) != klein.end();
  };

  std::vector<CosetPeriod> out(perms.size());
  parallel_for(perms.size(), [&](size_t a) {
    const Permutation& x = perms[a];
    Vec duals = Vec::Zero(g.dim());
    for (const auto& v : klein) duals[grp.index_of(compose(v, x))] += 0.25;
    CosetPeriod& c = out[a];
    c.representative = x;
    c.element_order = order(x);
    Permutation pw = x;
    c.coset_order = 1;
    while (!in_klein(pw)) {
      pw = compose(pw, x);
      ++c.coset_order;
    }
    c.period = detect_period(g, State::trusted(g.algebra(), duals), k_max);
  });
  return out;
}

std::vector<double> kp_alternation(int k_max) {
  const CompactQuantumGroup g = kac_paljutkin();
  const ClassicalVersion cv = classical_version(g);
  const auto& labels = g.algebra()->labels();
  const int e11 = static_cast<int>(std::find(labels.begin(), labels.end(), "E11") - labels.begin());
  const State seed = vector_state(AlgebraElement::basis(g.algebra(), e11));
  const Trajectory t = compute_trajectory(g, seed, k_max - 1, &cv);
  std::vector<double> alphas;
  for (const auto& r : t.observables) alphas.push_back(r.alpha);
  return alphas;
}

// ---------------------------------------------------------------------------
// Dihedral sweep

std::vector<DihedralLine> dihedral_sweep(int m_min, int m_max) {
  if (m_min < 3 || m_max < m_min) throw InputError("dihedral range must satisfy 3 <= m_min <= m_max");
  std::vector<DihedralLine> out(static_cast<size_t>(m_max - m_min + 1));
  parallel_for(out.size(), [&](size_t k) {
    const int m = m_min + static_cast<int>(k);
    const CompactQuantumGroup g = builtin_group("dual-d" + std::to_string(m));
    const MeetResult mr = meet({Projection(g.u(0, 0)), Projection(g.u(2, 2))});
    out[k] = {m, g.haar()(mr.projection).real(), 1.0 / (2 * m), mr.rank};
  });
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

namespace {

class Params {
 public:
  Params(const json& p, std::set<std::string> allowed) : p_(p) {
    if (!p_.is_object()) throw InputError("parameters must be an object");
    for (auto it = p_.begin(); it != p_.end(); ++it)
      if (!allowed.count(it.key())) throw InputError("unknown parameter '" + it.key() + "'");
  }

  int integer(const std::string& key, int def, int lo, int hi) const {
    if (!p_.contains(key)) return def;
    if (!p_[key].is_number_integer()) throw InputError("parameter '" + key + "' must be an integer");
    const auto v = p_[key].get<long long>();
    if (v < lo || v > hi)
      throw InputError("parameter '" + key + "' must lie in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  std::uint64_t seed() const {
    if (!p_.contains("seed")) throw InputError("randomized experiment needs a 'seed' parameter");
    if (!p_["seed"].is_number_unsigned() && !p_["seed"].is_number_integer())
      throw InputError("seed must be a non-negative integer");
    if (p_["seed"].is_number_integer() && p_["seed"].get<long long>() < 0)
      throw InputError("seed must be a non-negative integer");
    return p_["seed"].get<std::uint64_t>();
  }

  const json& raw(const std::string& key) const { return p_.at(key); }
  bool has(const std::string& key) const { return p_.contains(key); }

 private:
  json p_;
};

class Checks {
 public:
  void value(const std::string& name, double v, double expected, double tol) {
    const bool ok = std::abs(v - expected) <= tol;
    list_.push_back({{"name", name}, {"value", v}, {"expected", expected},
                     {"tolerance", tol}, {"passed", ok}});
    passed_ = passed_ && ok;
  }
  void flag(const std::string& name, bool ok, const std::string& detail = "") {
    json j{{"name", name}, {"passed", ok}};
    if (!detail.empty()) j["detail"] = detail;
    list_.push_back(j);
    passed_ = passed_ && ok;
  }
  const json& list() const { return list_; }
  bool passed() const { return passed_; }

 private:
  json list_ = json::array();
  bool passed_ = true;
};

struct Output {
  json data = json::object();
  json key_numbers = json::object();
  std::optional<std::string> csv;
};

using Runner = void (*)(const ExperimentSpec&, const Params&, Checks&, Output&);

std::string group_ref(const ExperimentSpec& s, const std::string& def) {
  return s.group.empty() ? def : s.group;
}

json duals_real(const LinearFunctional& phi) {
  json a = json::array();
  for (int i = 0; i < phi.dim(); ++i) a.push_back(phi.duals()[i].real());
  return a;
}

void run_haar(const ExperimentSpec& s, const Params& p, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "kp"));
  const int samples = p.integer("samples", 20, 1, 10000);
  const std::uint64_t seed = p.has("seed") ? p.seed() : 1;
  const State& h = g.haar();
  double residual = 0;
  for (int k = 0; k < samples; ++k) {
    Rng rng(seed, static_cast<std::uint64_t>(k));
    const State phi = random_state(g.algebra(), rng);
    residual = std::max({residual, sup_distance(convolve(g, h, phi), h),
                         sup_distance(convolve(g, phi, h), h)});
  }
  const ClassicalVersion cv = classical_version(g);
  const FiniteQuantumFormulas f = finite_quantum_formulas(g, cv);
  ck.value("haar.invariance", residual, 0, g.algebra()->tolerance());
  ck.value("haar.reverse", sup_distance(reverse(g, h), h), 0, g.algebra()->tolerance());
  ck.value("alpha_haar.formula", f.alpha_measured, f.alpha_haar, 1e-9);
  out.data["labels"] = g.algebra()->labels();
  out.data["haar"] = duals_real(h);
  out.data["classical_version_size"] = cv.permutations.size();
  out.data["bound_2Nfact"] = f.bound_2nfact;
  out.key_numbers["alpha_haar"] = f.alpha_measured;
  out.key_numbers["alpha_haar_formula"] = f.alpha_haar;
}

void run_classical_version(const ExperimentSpec& s, const Params&, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "kp"));
  const ClassicalVersion cv = classical_version(g);
  json perms = json::array();
  for (size_t k = 0; k < cv.permutations.size(); ++k) {
    const Projection supp = support_projection(cv.characters[k]);
    const int sr = regular_rank(supp);
    perms.push_back({{"permutation", cycle_string(cv.permutations[k])},
                     {"meet_rank", cv.ranks[k]},
                     {"support_rank", sr}});
    ck.flag("support_rank." + cycle_string(cv.permutations[k]), sr == cv.ranks[k]);
  }
  ck.value("p_C.group_like", cv.group_like_defect, 0, g.algebra()->tolerance());
  for (int j = 0; j < g.N(); ++j)
    ck.value("u" + std::to_string(j + 1) + std::to_string(j + 1) + ".group_like",
             group_like_defect(g, g.u(j, j)), 0, g.algebra()->tolerance());
  out.data["characters"] = perms;
  out.key_numbers["classical_version_size"] = cv.permutations.size();
  out.key_numbers["alpha_haar"] = quantum_fraction(g.haar(), cv);
}

void run_stabiliser(const ExperimentSpec& s, const Params& p, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "dual-s4"));
  const ClassicalVersion cv = classical_version(g);
  if (p.has("partition")) {
    Partition part;
    try {
      part = p.raw("partition").get<Partition>();
    } catch (const json::exception&) {
      throw InputError("partition must be an array of blocks of point numbers");
    }
    for (auto& b : part)
      for (auto& x : b) --x;
    try {
      part = canonical_partition(part, g.N());
    } catch (const InvalidModel& e) {
      throw InputError(e.what());
    }
    const StabiliserIdempotent st = stabiliser_idempotent(g, part);
    ck.flag("partition.converged", st.converged);
    ck.value("partition.idempotent", idempotency_defect(g, st.idempotent), 0, kIterativeTol);
    ck.flag("partition.counit_member", stabiliser_membership(g, g.counit(), part));
    ck.flag("partition.gap", idempotent_gap_check(st.idempotent, cv));
    out.data["partition"] = {{"idempotent", duals_real(st.idempotent)},
                             {"block_rank", regular_rank(st.block_projection)},
                             {"kind", kind_name(classify_idempotent(g, st.idempotent).kind)},
                             {"alpha", quantum_fraction(st.idempotent, cv)}};
  }
  json lines = json::array();
  for (const auto& l : point_stabilisers(g, cv)) {
    const std::string tag = "point" + std::to_string(l.point + 1);
    ck.flag(tag + ".converged", l.converged);
    ck.flag(tag + ".central_iff_haar", l.consistent);
    ck.flag(tag + ".gap", l.alpha <= kIterativeTol || l.alpha >= 0.5 - kIterativeTol);
    lines.push_back({{"point", l.point + 1},
                     {"diagonal_central", l.diagonal_central},
                     {"haar_mass", l.haar_mass},
                     {"alpha", l.alpha},
                     {"kind", kind_name(l.kind)}});
  }
  out.data["points"] = lines;
}

void run_census(const ExperimentSpec& s, const Params& p, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "kp"));
  const ClassicalVersion cv = classical_version(g);
  CensusOptions opt;
  opt.seed = p.seed();
  opt.n_random = p.integer("n_random", 64, 0, 100000);
  opt.probe_samples = p.integer("probe_samples", 24, 0, 10000);
  const Census c = idempotent_census(g, cv, opt);

  ck.flag("cesaro.converged", c.unconverged == 0, std::to_string(c.unconverged) + " unconverged");
  ck.flag("gap", c.gap_violations == 0, std::to_string(c.gap_violations) + " violations");
  double s_defect = 0;
  for (const auto& e : c.entries) s_defect = std::max(s_defect, e.antipode_defect);
  ck.value("antipode_invariance", s_defect, 0, kIterativeTol);
  int disagreements = 0;
  for (const auto& sg : c.subgroups) disagreements += !sg.agrees;
  if (!c.subgroups.empty())
    ck.flag("subgroups.haar_iff_normal", disagreements == 0,
            std::to_string(disagreements) + " of " + std::to_string(c.subgroups.size()));
  if (opt.probe_samples > 0) {
    int bad = 0;
    for (const auto& d : c.distinct) {
      if (!d.probe) continue;
      const bool violated = !d.probe->violations.empty();
      if (d.kind == IdempotentKind::Haar && violated) ++bad;
      if (d.kind == IdempotentKind::NonHaar && d.group_like_support && !violated) ++bad;
    }
    ck.flag("collapse.dichotomy", bad == 0, std::to_string(bad) + " exceptions");
  }

  json entries = json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"source", e.source},
                       {"alpha", e.alpha},
                       {"kind", kind_name(e.kind)},
                       {"converged", e.converged},
                       {"distinct", e.distinct_id}});
  json distinct = json::array();
  json alphas = json::array();
  for (const auto& d : c.distinct) {
    json j{{"source", d.first_source},
           {"multiplicity", d.multiplicity},
           {"kind", kind_name(d.kind)},
           {"alpha", d.alpha},
           {"support_group_like_defect", d.support_defect},
           {"idempotent", duals_real(d.psi)}};
    if (d.probe)
      j["collapse"] = {{"members", d.probe->members_tested},
                       {"conditionings", d.probe->conditionings_tested},
                       {"violations", d.probe->violations.size()}};
    distinct.push_back(j);
    alphas.push_back(d.alpha);
  }
  json subgroups = json::array();
  for (const auto& sg : c.subgroups)
    subgroups.push_back({{"elements", sg.labels},
                         {"normal", sg.normal},
                         {"kind", kind_name(sg.kind)},
                         {"alpha", sg.alpha}});
  out.data["entries"] = entries;
  out.data["distinct"] = distinct;
  if (!c.subgroups.empty()) out.data["subgroups"] = subgroups;
  out.key_numbers["cesaro_limits"] = c.cesaro_limits;
  out.key_numbers["distinct_idempotents"] = c.distinct.size();
  out.key_numbers["distinct_alphas"] = alphas;
}

void run_phase_diagram(const ExperimentSpec&, const Params& p, Checks& ck, Output& out) {
  const int n = p.integer("n", 101, 2, 2001);
  out.csv = phase_diagram_csv(n);
  ck.flag("example.quarter", phase_region(PhasePoint(0.25, 0.9)).region == Region::QI);
  ck.flag("example.half", phase_region(PhasePoint(0.5, 0.5)).region == Region::BoundaryW);
  const RegionLabel one = phase_region(PhasePoint(1, 1));
  ck.flag("example.one", one.region == Region::QW && one.qhalfw);
  std::map<std::string, int> counts;
  bool nested = true, ordered = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = static_cast<double>(i) / (n - 1), b = static_cast<double>(j) / (n - 1);
      const RegionLabel r = phase_region(PhasePoint(a, b));
      ++counts[region_name(r.region)];
      if (r.q2i) ++counts["q2i"];
      if (r.q3i) ++counts["q3i"];
      if (r.qhalfw) ++counts["qhalfw"];
      nested = nested && (!r.q3i || r.q2i) && (!r.q2i || r.region == Region::QI) &&
               (!r.qhalfw || r.region == Region::QW);
      const auto [lo, hi] = convolution_bounds(a, b);
      ordered = ordered && lo <= hi && lo >= 0 && hi <= 1;
    }
  ck.flag("flags.nested", nested);
  ck.flag("bounds.ordered", ordered);
  out.data["counts"] = counts;
}

void run_bounds(const ExperimentSpec& s, const Params& p, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "kp"));
  const ClassicalVersion cv = classical_version(g);
  const int n = p.integer("n_samples", 500, 1, 1000000);
  const BoundsReport rep = verify_bounds_empirically(g, cv, n, p.seed());
  ck.flag("violations", rep.ok(), std::to_string(rep.violations.size()) + " violations");
  std::ostringstream csv;
  csv << "alpha,beta,omega,lower,upper\n";
  for (const auto& x : rep.samples)
    csv << format_double(x.alpha) << ',' << format_double(x.beta) << ','
        << format_double(x.omega) << ',' << format_double(x.lower) << ','
        << format_double(x.upper) << '\n';
  out.csv = csv.str();
  json wit = json::array();
  for (const auto& v : rep.violations) {
    LinearFunctional phi(g.algebra(), v.phi), rho(g.algebra(), v.rho);
    wit.push_back({{"rule", v.rule}, {"sample", v.sample}, {"alpha", v.values.alpha},
                   {"beta", v.values.beta}, {"omega", v.values.omega},
                   {"phi", to_json(phi)}, {"rho", to_json(rho)}});
  }
  out.data["violations"] = wit;
  out.key_numbers["samples"] = rep.samples.size();
  out.key_numbers["rule_cases"] = rep.rule_cases;
  out.key_numbers["random_outcomes"] = rep.random_outcomes;
}

void run_periodicity(const ExperimentSpec&, const Params& p, Checks& ck, Output& out) {
  const int k_max = p.integer("k_max", 48, 8, 4096);
  const auto lines = klein_coset_periods(k_max);
  int coset_ok = 0, minimal = 0, minimal_ok = 0;
  json rows = json::array();
  for (const auto& c : lines) {
    const int period = c.period.value_or(-1);
    coset_ok += period == c.coset_order;
    if (c.element_order == c.coset_order) {
      ++minimal;
      minimal_ok += period == c.element_order;
    }
    rows.push_back({{"representative", cycle_string(c.representative)},
                    {"element_order", c.element_order},
                    {"coset_order", c.coset_order},
                    {"period", c.period ? json(period) : json(nullptr)}});
  }
  ck.flag("coset_order", coset_ok == static_cast<int>(lines.size()));
  ck.flag("minimal_representatives", minimal_ok == minimal);
  const auto alphas = kp_alternation(p.integer("alternation_steps", 12, 2, 1000));
  bool alternates = true;
  for (size_t k = 0; k < alphas.size(); ++k)
    alternates = alternates && std::abs(alphas[k] - (k % 2 == 0 ? 1.0 : 0.0)) <= 1e-9;
  ck.flag("kp.alternation", alternates);
  out.data["cosets"] = rows;
  out.data["kp_alpha"] = alphas;
}

void run_fix_spectrum(const ExperimentSpec& s, const Params&, Checks& ck, Output& out) {
  const CompactQuantumGroup g = load_group(group_ref(s, "dual-s4"));
  const FixSpectrum fs = fix_spectrum(g);
  json comps = json::array();
  for (size_t k = 0; k < fs.eigenvalues.size(); ++k)
    comps.push_back({{"eigenvalue", fs.eigenvalues[k]},
                     {"multiplicity", regular_rank(fs.projections[k])},
                     {"haar_weight", g.haar()(fs.projections[k]).real()},
                     {"counit_weight", g.counit()(fs.projections[k]).real()}});
  ck.flag("counit.integer", has_integer_fixed_points(fs, g.counit()));
  const int top = fs.find(static_cast<double>(g.N()));
  ck.flag("counit.all_fixed", top >= 0 && std::abs(g.counit()(fs.projections[top]).real() - 1) <=
                                              g.algebra()->tolerance());
  double mass = 0;
  for (auto [l, w] : fs.distribution(g.haar())) mass += w;
  ck.value("haar.mass", mass, 1.0, g.algebra()->tolerance());
  out.data["spectrum"] = comps;
  out.key_numbers["haar_integer_fixed_points"] = has_integer_fixed_points(fs, g.haar());
}

void run_walkthrough(const ExperimentSpec&, const Params& p, Checks& ck, Output& out) {
  const WalkthroughResult w = s4hat_walkthrough(p.integer("k_max", 200, 1, 100000));
  auto nearest = [&](double x) {
    double best = INFINITY;
    for (double e : w.spectrum) best = std::min(best, std::abs(e - x));
    return best;
  };
  ck.value("spectrum.lambda_plus", nearest(w.lambda_plus), 0, 1e-9);
  ck.value("spectrum.lambda_minus", nearest(w.lambda_minus), 0, 1e-9);
  ck.flag("seed.strict", w.strict);
  ck.value("limit.distance", w.terminal_distance, 0, 1e-8);
  ck.flag("limit.not_integer", !w.limit_has_integer_fixed_points);
  ck.flag("limit.weight_plus_positive", w.terminal_weight_plus > 0);
  ck.value("limit.weight_plus", w.terminal_weight_plus, w.haar_weight_plus, 1e-9);
  json spec = json::array();
  for (size_t k = 0; k < w.spectrum.size(); ++k)
    spec.push_back({{"eigenvalue", w.spectrum[k]}, {"multiplicity", w.multiplicities[k]}});
  json dist = json::array();
  for (auto [l, m] : w.seed_distribution) dist.push_back({l, m});
  out.data["spectrum"] = spec;
  out.data["seed_distribution"] = dist;
  out.data["max_off_identity"] = w.max_off_identity;
  out.data["distance_to_haar"] = w.distances;
  out.key_numbers["lambda_plus"] = w.lambda_plus;
  out.key_numbers["haar_weight_plus"] = w.haar_weight_plus;
  out.key_numbers["terminal_distance"] = w.terminal_distance;
}

void run_dihedral(const ExperimentSpec&, const Params& p, Checks& ck, Output& out) {
  const int lo = p.integer("m_min", 3, 3, 64);
  const int hi = p.integer("m_max", 12, 3, 64);
  json rows = json::array();
  for (const auto& l : dihedral_sweep(lo, hi)) {
    ck.value("m" + std::to_string(l.m), l.meet_mass, l.expected, 1e-8);
    rows.push_back({{"m", l.m}, {"meet_mass", l.meet_mass}, {"expected", l.expected},
                    {"meet_rank", l.meet_rank}});
  }
  out.data["sweep"] = rows;
}

struct Registered {
  const char* name;
  Runner run;
  std::set<std::string> params;
};

const std::vector<Registered>& registry() {
  static const std::vector<Registered> r{
      {"haar", run_haar, {"samples", "seed"}},
      {"classical-version", run_classical_version, {}},
      {"stabiliser", run_stabiliser, {"partition"}},
      {"idempotent-census", run_census, {"seed", "n_random", "probe_samples"}},
      {"phase-diagram", run_phase_diagram, {"n"}},
      {"bounds-empirical", run_bounds, {"seed", "n_samples"}},
      {"periodicity", run_periodicity, {"k_max", "alternation_steps"}},
      {"fix-spectrum", run_fix_spectrum, {}},
      {"s4hat-walkthrough", run_walkthrough, {"k_max"}},
      {"dihedral-sweep", run_dihedral, {"m_min", "m_max"}},
  };
  return r;
}

const Registered& lookup(const std::string& name) {
  for (const auto& r : registry())
    if (name == r.name) return r;
  throw InputError("unknown experiment '" + name + "'");
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& r : registry()) out.emplace_back(r.name);
  return out;
}

ExperimentSpec parse_experiment_spec(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw InputError("experiment spec must be a JSON object");
  ExperimentSpec s;
  s.base_dir = base_dir;
  if (!doc.contains("name") || !doc["name"].is_string())
    throw InputError("experiment spec needs a 'name'");
  s.name = doc["name"].get<std::string>();
  lookup(s.name);
  if (doc.contains("group")) {
    if (!doc["group"].is_string()) throw InputError("'group' must be a builtin name or a path");
    s.group = doc["group"].get<std::string>();
    if (!s.group.empty() && !is_builtin_name(s.group) && fs::path(s.group).is_relative())
      s.group = (fs::path(base_dir) / s.group).string();
  }
  if (doc.contains("parameters")) s.parameters = doc["parameters"];
  if (doc.contains("outputs")) {
    if (!doc["outputs"].is_array()) throw InputError("'outputs' must be an array of paths");
    for (const auto& o : doc["outputs"]) {
      if (!o.is_string()) throw InputError("output paths must be strings");
      s.outputs.push_back(o.get<std::string>());
    }
  }
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "name" && it.key() != "group" && it.key() != "parameters" &&
        it.key() != "outputs")
      throw InputError("unknown spec field '" + it.key() + "'");
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const Registered& reg = lookup(spec.name);
  const Params params(spec.parameters, reg.params);
  Checks checks;
  Output out;
  reg.run(spec, params, checks, out);
  ExperimentResult r;
  r.passed = checks.passed();
  r.csv = out.csv;
  std::string group = spec.group;
  if (group.empty()) group = "default";
  r.document = {{"experiment", spec.name}, {"group", group}, {"parameters", spec.parameters},
                {"passed", r.passed}, {"checks", checks.list()},
                {"key_numbers", out.key_numbers}, {"data", out.data}};
  return r;
}

std::vector<std::string> write_outputs(const ExperimentSpec& spec, const ExperimentResult& r) {
  std::vector<std::string> paths;
  for (const auto& o : spec.outputs) {
    fs::path p(o);
    if (p.is_relative()) p = fs::path(spec.base_dir) / p;
    paths.push_back(p.string());
  }
  if (paths.empty()) {
    paths.push_back((fs::path(spec.base_dir) / (spec.name + ".json")).string());
    if (r.csv) paths.push_back((fs::path(spec.base_dir) / (spec.name + ".csv")).string());
  }
  for (const auto& path : paths) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    if (p.extension() == ".csv") {
      if (!r.csv) throw InputError("experiment " + spec.name + " produces no CSV");
      f << *r.csv;
    } else {
      f << dump_json(r.document);
    }
  }
  return paths;
}

Report build_report(const std::string& dir) {
  if (!fs::is_directory(dir)) throw InputError("no such directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json" &&
        e.path().filename() != "summary.json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());

  Report rep{json::object(), "", true};
  json rows = json::array();
  std::ostringstream table;
  char line[256];
  std::snprintf(line, sizeof line, "%-20s %-28s %-6s %s\n", "experiment", "group", "status",
                "checks");
  table << line;
  for (const auto& f : files) {
    json doc;
    try {
      std::ifstream in(f);
      doc = json::parse(in);
    } catch (const json::exception&) {
      continue;
    }
    if (!doc.is_object() || !doc.contains("experiment")) continue;
    const bool passed = doc.value("passed", false);
    int total = 0, failed = 0;
    json failures = json::array();
    for (const auto& c : doc.value("checks", json::array())) {
      ++total;
      if (!c.value("passed", false)) {
        ++failed;
        failures.push_back(c.value("name", "?"));
      }
    }
    rep.all_passed = rep.all_passed && passed;
    rows.push_back({{"file", f.filename().string()},
                    {"experiment", doc["experiment"]},
                    {"group", doc.value("group", "")},
                    {"passed", passed},
                    {"checks", total},
                    {"failed_checks", failures},
                    {"key_numbers", doc.value("key_numbers", json::object())}});
    std::snprintf(line, sizeof line, "%-20s %-28s %-6s %d/%d\n",
                  doc["experiment"].get<std::string>().c_str(),
                  doc.value("group", "").c_str(), passed ? "PASS" : "FAIL", total - failed,
                  total);
    table << line;
    const json keys = doc.value("key_numbers", json::object());
    for (auto it = keys.begin(); it != keys.end(); ++it)
      if (it.value().is_number())
        table << "    " << it.key() << " = " << format_double(it.value().get<double>()) << '\n';
  }
  if (rows.empty()) throw InputError("no experiment results in " + dir);
  rep.summary = {{"experiments", rows}, {"all_passed", rep.all_passed}};
  rep.table = table.str();
  std::ofstream out(fs::path(dir) / "summary.json", std::ios::binary);
  out << dump_json(rep.summary);
  return rep;
}

}  // namespace qperm
