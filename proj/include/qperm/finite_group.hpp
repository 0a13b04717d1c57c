#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qperm {

/// Images of 0..n-1, zero-based.
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
/// (a * b)(x) = a(b(x)).
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
int order(const Permutation& p);
bool is_permutation(const Permutation& p);
/// Cycle notation with 1-based points, "e" for the identity.
std::string cycle_string(const Permutation& p);
/// Closure of a generating set under composition, sorted lexicographically.
std::vector<Permutation> permutation_closure(const std::vector<Permutation>& gens,
                                             int n);
std::vector<Permutation> symmetric_group(int n);

/// Abstract finite group given by its multiplication table.
class FiniteGroup {
 public:
  /// table[a][b] is the index of a*b. Checks shape, identity and inverses;
  /// associativity is left to the quantum-group validator.
  static FiniteGroup from_table(std::vector<std::vector<int>> table,
                                std::vector<std::string> labels = {});
  /// Throws InvalidModel if the set is not closed or lacks the identity.
  static FiniteGroup from_permutations(std::vector<Permutation> perms);
  /// Dihedral group of order 2m: index k + m*e stands for r^k s^e.
  static FiniteGroup dihedral(int m);
  static FiniteGroup symmetric(int n);

  int size() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int identity() const { return identity_; }
  int inverse(int a) const { return inverse_[a]; }
  int order_of(int a) const;
  int power(int a, int k) const;
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int a) const { return labels_[a]; }
  /// Underlying permutations when built from them.
  const std::optional<std::vector<Permutation>>& permutations() const {
    return perms_;
  }
  int index_of(const Permutation& p) const;

  /// Sorted element indices of the subgroup generated by `gens`.
  std::vector<int> generated(const std::vector<int>& gens) const;
  bool is_subgroup(const std::vector<int>& elements) const;
  bool is_normal(const std::vector<int>& subgroup) const;
  /// All subgroups, each a sorted index list, ordered by size then content.
  std::vector<std::vector<int>> subgroups() const;

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::optional<std::vector<Permutation>> perms_;
};

}  // namespace qperm
