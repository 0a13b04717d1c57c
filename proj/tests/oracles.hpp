#pragma once

// Brute-force reference computations used only by the tests. They work from
// permutations and raw matrices, never from the library's derived data.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qperm/finite_group.hpp"
#include "qperm/sampling.hpp"

namespace oracle {

using qperm::Permutation;

inline Permutation mul(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

inline Permutation inv(const Permutation& a) {
  Permutation c(a.size());
  for (size_t x = 0; x < a.size(); ++x) c[a[x]] = static_cast<int>(x);
  return c;
}

inline int find(const std::vector<Permutation>& perms, const Permutation& p) {
  auto it = std::find(perms.begin(), perms.end(), p);
  return it == perms.end() ? -1 : static_cast<int>(it - perms.begin());
}

/// (mu * nu)(g) = sum over a b = g of mu(a) nu(b).
inline Eigen::VectorXcd measure_convolution(const std::vector<Permutation>& perms,
                                            const Eigen::VectorXcd& mu,
                                            const Eigen::VectorXcd& nu) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(mu.size());
  for (size_t a = 0; a < perms.size(); ++a)
    for (size_t b = 0; b < perms.size(); ++b)
      out[find(perms, mul(perms[a], perms[b]))] += mu[a] * nu[b];
  return out;
}

inline bool is_normal(const std::vector<Permutation>& group,
                      const std::vector<Permutation>& sub) {
  for (const auto& g : group)
    for (const auto& h : sub)
      if (find(sub, mul(mul(g, h), inv(g))) < 0) return false;
  return true;
}

inline int sign(const Permutation& p) {
  int s = 1;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) s = -s;
  return s;
}

/// Left-regular matrix of sum_k c_k g_k on the group algebra.
inline Eigen::MatrixXcd regular_matrix(const std::vector<Permutation>& perms,
                                       const std::vector<std::pair<Permutation, double>>& terms) {
  const int n = static_cast<int>(perms.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [g, c] : terms)
    for (int x = 0; x < n; ++x) m(find(perms, mul(g, perms[x])), x) += c;
  return m;
}

/// Dimension of the intersection of the ranges of the given projections
/// (as matrices), via the kernel of the stacked complements.
inline int range_intersection_dim(const std::vector<Eigen::MatrixXcd>& ps) {
  const int n = static_cast<int>(ps.front().rows());
  Eigen::MatrixXcd stacked(n * static_cast<int>(ps.size()), n);
  for (size_t k = 0; k < ps.size(); ++k)
    stacked.middleRows(static_cast<int>(k) * n, n) = Eigen::MatrixXcd::Identity(n, n) - ps[k];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  const auto& s = svd.singularValues();
  int zero = n - static_cast<int>(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s[i] < 1e-8) ++zero;
  return zero;
}

/// Sorted eigenvalues of a Hermitian matrix.
inline std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m + m.adjoint()) / 2.0);
  const auto& w = es.eigenvalues();
  return {w.data(), w.data() + w.size()};
}

/// Subgroup generated by a set of permutations, by breadth-first closure.
inline std::vector<Permutation> closure(const std::vector<Permutation>& gens) {
  std::vector<Permutation> out;
  Permutation e(gens.front().size());
  for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<int>(i);
  out.push_back(e);
  for (size_t k = 0; k < out.size(); ++k)
    for (const auto& g : gens) {
      const Permutation p = mul(out[k], g);
      if (find(out, p) < 0) out.push_back(p);
    }
  return out;
}

}  // namespace oracle
