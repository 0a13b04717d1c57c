#include "qperm/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qperm/sampling.hpp"

namespace qperm {

namespace {

constexpr double kBoundaryTol = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double sup(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

PhasePoint::PhasePoint(double a, double b) : alpha(a), beta(b) {
  if (!in_unit(a) || !in_unit(b)) throw InvalidModel("phase point outside the unit square");
}

std::string region_name(Region r) {
  switch (r) {
    case Region::QI:
      return "Q_I";
    case Region::BoundaryW:
      return "Boundary_W";
    case Region::QW:
      return "Q_W";
    case Region::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

std::pair<double, double> convolution_bounds(double a, double b) {
  if (!in_unit(a) || !in_unit(b)) throw InvalidModel("quantum fractions must lie in [0, 1]");
  return {a + b - 2 * a * b, a + b - a * b};
}

RegionLabel phase_region(const PhasePoint& p) {
  const double a = p.alpha;
  const double b = p.beta;
  RegionLabel out{Region::Degenerate};
  if (a == 0.0 && b == 0.0) return out;

  // beta < alpha / (4 alpha - 1), cleared of the denominator; this form is
  // symmetric and covers alpha <= 1/4 where the quotient is not a bound.
  const double gap = a + b - 4 * a * b;
  if (std::abs(gap) <= kBoundaryTol)
    out.region = Region::BoundaryW;
  else
    out.region = gap > 0 ? Region::QI : Region::QW;

  // beta < (2 alpha - 1) / (2 alpha - 2), likewise cleared.
  out.q2i = out.region == Region::QI && a + b - a * b < 0.5;

  auto threshold3 = [](double x) -> std::optional<double> {
    if (std::abs(1 - 2 * x) < 1e-15) return std::nullopt;
    const double t = 1 - std::sqrt(2.0) / (1 - 2 * x);
    if (!in_unit(t)) return std::nullopt;
    return t;
  };
  const auto ta = threshold3(a);
  const auto tb = threshold3(b);
  out.q3i_out_of_domain = !ta && !tb;
  out.q3i = out.q2i && ((ta && b < *ta) || (tb && a < *tb));

  const double half = 1 - 1 / std::sqrt(2.0);
  out.qhalfw = out.region == Region::QW && a * b > half;
  return out;
}

std::string phase_diagram_csv(int n) {
  if (n < 2) throw InvalidModel("phase grid needs at least two points per axis");
  std::ostringstream os;
  os << "alpha,beta,region,q2i,q3i,qhalfw,lower,upper\n";
  char buf[160];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = static_cast<double>(i) / (n - 1);
      const double b = static_cast<double>(j) / (n - 1);
      const RegionLabel r = phase_region(PhasePoint(a, b));
      const auto [lo, hi] = convolution_bounds(a, b);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%d,%d,%d,%.17g,%.17g\n", a, b,
                    region_name(r.region).c_str(), r.q2i, r.q3i, r.qhalfw, lo, hi);
      os << buf;
    }
  return os.str();
}

BoundsReport verify_bounds_empirically(const CompactQuantumGroup& g, const ClassicalVersion& cv,
                                       int n_samples, std::uint64_t seed, double tol) {
  const AlgebraPtr& alg = g.algebra();
  const bool has_c = cv.p_C.coeffs().cwiseAbs().maxCoeff() > 0;
  const bool has_q = cv.p_Q.coeffs().cwiseAbs().maxCoeff() > 0 &&
                     regular_rank(cv.p_Q) > 0;

  struct Outcome {
    BoundsSample s;
    std::vector<std::string> broken;
    Vec phi;
    Vec rho;
  };
  std::vector<Outcome> outcomes(static_cast<size_t>(n_samples));

  parallel_for(outcomes.size(), [&](size_t k) {
    Rng rng(seed, k);
    auto draw = [&]() {
      const int kind = rng.below(3);
      if (kind == 0 && has_c) return random_state(alg, rng, &cv.p_C);
      if (kind == 1 && has_q) return random_state(alg, rng, &cv.p_Q);
      return random_state(alg, rng);
    };
    const State phi = draw();
    const State rho = draw();
    const double a = std::clamp(quantum_fraction(phi, cv), 0.0, 1.0);
    const double b = std::clamp(quantum_fraction(rho, cv), 0.0, 1.0);
    const double w = quantum_fraction(convolve(g, phi, rho), cv);
    const auto [lo, hi] = convolution_bounds(a, b);
    Outcome& o = outcomes[k];
    o.s = {a, b, w, lo, hi};
    if (w < lo - tol) o.broken.push_back("lower-bound");
    if (w > hi + tol) o.broken.push_back("upper-bound");
    const bool a0 = a <= tol, a1 = a >= 1 - tol, b0 = b <= tol, b1 = b >= 1 - tol;
    if (w <= tol && !((a0 && b0) || (a1 && b1))) o.broken.push_back("random-outcome");
    if (a0 && b0 && w > tol) o.broken.push_back("random-random");
    if (((a1 && b0) || (a0 && b1)) && w < 1 - tol) o.broken.push_back("quantum-random");
    if (!o.broken.empty()) {
      o.phi = phi.duals();
      o.rho = rho.duals();
    }
  });

  BoundsReport rep;
  for (size_t k = 0; k < outcomes.size(); ++k) {
    const Outcome& o = outcomes[k];
    rep.samples.push_back(o.s);
    const bool edge = o.s.alpha <= tol || o.s.alpha >= 1 - tol || o.s.beta <= tol ||
                      o.s.beta >= 1 - tol;
    rep.rule_cases += edge;
    rep.random_outcomes += o.s.omega <= tol;
    for (const auto& rule : o.broken)
      rep.violations.push_back({rule, static_cast<int>(k), o.s, o.phi, o.rho});
  }
  return rep;
}

bool idempotent_gap_check(const State& psi, const ClassicalVersion& cv, double tol) {
  const double a = quantum_fraction(psi, cv);
  return a <= tol || a >= 0.5 - tol;
}

Trajectory compute_trajectory(const CompactQuantumGroup& g, const State& seed, int k_max,
                              const ClassicalVersion* cv, const FixSpectrum* fs,
                              const LinearFunctional* limit) {
  if (k_max < 0) throw InvalidModel("trajectory length must be non-negative");
  Trajectory t;
  t.states.reserve(static_cast<size_t>(k_max) + 1);
  t.states.push_back(seed);
  for (int k = 0; k < k_max; ++k) t.states.push_back(convolve(g, t.states.back(), seed));
  for (const auto& s : t.states) {
    TrajectoryRecord r{kNaN, {}, kNaN};
    if (cv) r.alpha = quantum_fraction(s, *cv);
    if (fs) r.fixed_points = fs->distribution(s);
    if (limit) r.distance_to_limit = sup_distance(s, *limit);
    t.observables.push_back(std::move(r));
  }
  return t;
}

std::optional<int> detect_period(const CompactQuantumGroup& g, const State& seed, int k_max,
                                 double tol) {
  const Trajectory t = compute_trajectory(g, seed, k_max);
  const int last = k_max;  // index of the final state
  for (int d = 1; 4 * d <= k_max; ++d) {
    bool ok = true;
    for (int k = last - d; k > last - 4 * d && ok; --k)
      ok = sup(t.states[k + d].duals() - t.states[k].duals()) < tol;
    if (ok) return d;
  }
  return std::nullopt;
}

FiniteQuantumFormulas finite_quantum_formulas(const CompactQuantumGroup& g,
                                              const ClassicalVersion& cv, double tol) {
  FiniteQuantumFormulas f{};
  f.alpha_haar = 1.0 - static_cast<double>(cv.permutations.size()) / g.dim();
  f.alpha_measured = quantum_fraction(g.haar(), cv);
  double fact = 1;
  for (int k = 2; k <= g.N(); ++k) fact *= k;
  f.bound_2nfact = 2 * fact;
  f.consistent = std::abs(f.alpha_haar - f.alpha_measured) <= tol;
  return f;
}

HaarConvergence convergence_to_haar(const CompactQuantumGroup& g, const State& seed,
                                    int k_max, double tol) {
  HaarConvergence out{{}, std::nullopt, std::nullopt, false, seed};
  const State& h = g.haar();
  if (const auto& gamma = g.dual_of()) {
    double m = 0;
    for (int x = 0; x < gamma->size(); ++x)
      if (x != gamma->identity()) m = std::max(m, std::abs(seed.duals()[x]));
    out.max_off_identity = m;
    out.strict = m < 1 - 1e-9;
  }
  State power = seed;
  out.distances.push_back(sup_distance(power, h));
  for (int k = 1; k < k_max; ++k) {
    power = convolve(g, power, seed);
    out.distances.push_back(sup_distance(power, h));
  }
  out.terminal = power;
  out.converged = out.distances.back() < tol && out.strict.value_or(true);
  return out;
}

}  // namespace qperm
