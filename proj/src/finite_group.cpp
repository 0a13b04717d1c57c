#include "qperm/finite_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "qperm/types.hpp"

namespace qperm {

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InvalidModel("permutation degree mismatch");
  Permutation r(a.size());
  for (size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (size_t x = 0; x < p.size(); ++x) r[p[x]] = static_cast<int>(x);
  return r;
}

int order(const Permutation& p) {
  const Permutation e = identity_permutation(static_cast<int>(p.size()));
  Permutation q = p;
  int k = 1;
  while (q != e) {
    q = compose(p, q);
    ++k;
  }
  return k;
}

bool is_permutation(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (int x : p) {
    if (x < 0 || x >= static_cast<int>(p.size()) || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

std::string cycle_string(const Permutation& p) {
  std::string out;
  std::vector<char> seen(p.size(), 0);
  for (size_t s = 0; s < p.size(); ++s) {
    if (seen[s] || p[s] == static_cast<int>(s)) continue;
    out += "(";
    size_t x = s;
    bool first = true;
    while (!seen[x]) {
      seen[x] = 1;
      if (!first) out += " ";
      out += std::to_string(x + 1);
      first = false;
      x = static_cast<size_t>(p[x]);
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

std::vector<Permutation> permutation_closure(const std::vector<Permutation>& gens,
                                             int n) {
  std::set<Permutation> seen{identity_permutation(n)};
  std::vector<Permutation> frontier{identity_permutation(n)};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Permutation q = compose(g, p);
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<Permutation> symmetric_group(int n) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<int>> table,
                                    std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InvalidModel("group table is empty");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n)
      throw InvalidModel("group table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw InvalidModel("group table entry out of range");
  }
  FiniteGroup g;
  g.identity_ = -1;
  for (int e = 0; e < n && g.identity_ < 0; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = table[e][a] == a && table[a][e] == a;
    if (ok) g.identity_ = e;
  }
  if (g.identity_ < 0) throw InvalidModel("group table has no identity");
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (table[a][b] == g.identity_ && table[b][a] == g.identity_) {
        g.inverse_[a] = b;
        break;
      }
  for (int a = 0; a < n; ++a)
    if (g.inverse_[a] < 0)
      throw InvalidModel("group element " + std::to_string(a) + " has no inverse");
  if (labels.empty()) {
    for (int a = 0; a < n; ++a) labels.push_back("g" + std::to_string(a));
  } else if (static_cast<int>(labels.size()) != n) {
    throw InvalidModel("group labels have wrong length");
  }
  g.table_ = std::move(table);
  g.labels_ = std::move(labels);
  return g;
}

FiniteGroup FiniteGroup::from_permutations(std::vector<Permutation> perms) {
  if (perms.empty()) throw InvalidModel("empty permutation group");
  const size_t deg = perms.front().size();
  std::map<Permutation, int> index;
  for (size_t i = 0; i < perms.size(); ++i) {
    if (perms[i].size() != deg || !is_permutation(perms[i]))
      throw InvalidModel("invalid permutation in group");
    if (!index.emplace(perms[i], static_cast<int>(i)).second)
      throw InvalidModel("duplicate permutation in group");
  }
  if (!index.count(identity_permutation(static_cast<int>(deg))))
    throw InvalidModel("permutation group lacks the identity");
  const int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto it = index.find(compose(perms[a], perms[b]));
      if (it == index.end())
        throw InvalidModel("permutation set is not closed under composition");
      table[a][b] = it->second;
    }
  std::vector<std::string> labels;
  for (const auto& p : perms) labels.push_back(cycle_string(p));
  FiniteGroup g = from_table(std::move(table), std::move(labels));
  g.perms_ = std::move(perms);
  return g;
}

FiniteGroup FiniteGroup::dihedral(int m) {
  if (m < 1) throw InvalidModel("dihedral parameter must be positive");
  const int n = 2 * m;
  // r^k s^e * r^l s^f = r^(k + (-1)^e l) s^(e+f)
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels(n);
  for (int a = 0; a < n; ++a) {
    const int k = a % m, e = a / m;
    labels[a] = (k == 0 && e == 0) ? "e"
                                   : (k ? "r" + (k > 1 ? std::to_string(k) : "")
                                        : "") + (e ? "s" : "");
    for (int b = 0; b < n; ++b) {
      const int l = b % m, f = b / m;
      const int kk = ((k + (e ? -l : l)) % m + m) % m;
      table[a][b] = kk + m * ((e + f) % 2);
    }
  }
  return from_table(std::move(table), std::move(labels));
}

FiniteGroup FiniteGroup::symmetric(int n) {
  return from_permutations(symmetric_group(n));
}

int FiniteGroup::order_of(int a) const {
  int x = a, k = 1;
  while (x != identity_) {
    x = mul(a, x);
    ++k;
  }
  return k;
}

int FiniteGroup::power(int a, int k) const {
  int x = identity_;
  for (int i = 0; i < k; ++i) x = mul(x, a);
  return x;
}

int FiniteGroup::index_of(const Permutation& p) const {
  if (!perms_) throw Error("group was not built from permutations");
  auto it = std::find(perms_->begin(), perms_->end(), p);
  if (it == perms_->end()) return -1;
  return static_cast<int>(it - perms_->begin());
}

std::vector<int> FiniteGroup::generated(const std::vector<int>& gens) const {
  std::vector<char> in(size(), 0);
  std::vector<int> out{identity_};
  in[identity_] = 1;
  for (size_t i = 0; i < out.size(); ++i)
    for (int g : gens) {
      const int x = mul(out[i], g);
      if (!in[x]) {
        in[x] = 1;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

bool FiniteGroup::is_subgroup(const std::vector<int>& elements) const {
  if (elements.empty()) return false;
  std::vector<char> in(size(), 0);
  for (int x : elements) {
    if (x < 0 || x >= size()) return false;
    in[x] = 1;
  }
  if (!in[identity_]) return false;
  for (int a : elements) {
    if (!in[inverse(a)]) return false;
    for (int b : elements)
      if (!in[mul(a, b)]) return false;
  }
  return true;
}

bool FiniteGroup::is_normal(const std::vector<int>& subgroup) const {
  std::vector<char> in(size(), 0);
  for (int x : subgroup) in[x] = 1;
  for (int g = 0; g < size(); ++g)
    for (int h : subgroup)
      if (!in[mul(mul(g, h), inverse(g))]) return false;
  return true;
}

std::vector<std::vector<int>> FiniteGroup::subgroups() const {
  std::set<std::vector<int>> found;
  for (int a = 0; a < size(); ++a)
    for (int b = a; b < size(); ++b) found.insert(generated({a, b}));
  // Joins of pairs catch subgroups that need more than two generators.
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::vector<int>> current(found.begin(), found.end());
    for (size_t i = 0; i < current.size(); ++i)
      for (size_t j = i + 1; j < current.size(); ++j) {
        std::vector<int> gens = current[i];
        gens.insert(gens.end(), current[j].begin(), current[j].end());
        if (found.insert(generated(gens)).second) grew = true;
      }
  }
  std::vector<std::vector<int>> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() < y.size();
  });
  return out;
}

}  // namespace qperm
