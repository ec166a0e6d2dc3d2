#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace sghb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", an integer, or a finite decimal such as "0.25".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

/// A d-tuple of positive levels.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> levels);
  MultiIndex(std::initializer_list<int> levels);

  int dim() const { return static_cast<int>(levels_.size()); }
  int operator[](int i) const { return levels_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& levels() const { return levels_; }

  int l1() const;
  int linf() const;

  /// Componentwise order: every level of *this is <= the one of `other`.
  bool leq(const MultiIndex& other) const;

  /// Copy with component i replaced.
  MultiIndex with(int i, int level) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Lexicographic; only used for set containers.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    return a.levels_ <=> b.levels_;
  }

 private:
  std::vector<int> levels_;
};

std::string to_string(const MultiIndex& beta);

/// Deterministic block order used everywhere: (|beta|_1, lexicographic).
struct BlockOrder {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.l1() != b.l1()) return a.l1() < b.l1();
    return a < b;
  }
};

bool is_monotone(std::span<const MultiIndex> indices);

/// A finite downward-closed set of multi-indices of common dimension, stored
/// in BlockOrder. Only obtainable through the factories below, so every
/// instance is monotone.
class MonotoneIndexSet {
 public:
  MonotoneIndexSet() = default;

  int dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<MultiIndex>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  bool contains(const MultiIndex& beta) const;
  /// Position of beta in BlockOrder, or -1.
  std::ptrdiff_t find(const MultiIndex& beta) const;

  /// k_Lambda, the largest |beta|_inf.
  int max_level() const;

  friend bool operator==(const MonotoneIndexSet&, const MonotoneIndexSet&) = default;

  friend MonotoneIndexSet monotone_closure(std::span<const MultiIndex> indices);
  friend MonotoneIndexSet make_full_grid(const MultiIndex& beta);
  friend MonotoneIndexSet make_standard_sparse(int k, int d);
  friend MonotoneIndexSet make_energy_optimized(int k, int d, const Rational& a);

 private:
  MonotoneIndexSet(int dim, std::vector<MultiIndex> sorted_members)
      : dim_(dim), members_(std::move(sorted_members)) {}

  int dim_ = 0;
  std::vector<MultiIndex> members_;
};

/// Smallest downward-closed superset. Throws ConfigError on dimension mismatch.
MonotoneIndexSet monotone_closure(std::span<const MultiIndex> indices);

/// {beta' : beta' <= beta}, the anisotropic full grid V_beta.
MonotoneIndexSet make_full_grid(const MultiIndex& beta);
/// Isotropic full grid V_k = make_full_grid((k,...,k)).
MonotoneIndexSet make_isotropic_full_grid(int k, int d);
/// {beta : |beta|_1 <= k + d - 1}.
MonotoneIndexSet make_standard_sparse(int k, int d);
/// {beta : |beta|_1 - a|beta|_inf <= (1-a)k + d - 1}, a < 1.
MonotoneIndexSet make_energy_optimized(int k, int d, const Rational& a);

/// Level slices Lambda_k = {beta : |beta|_inf = k}, k = 1..k_max.
struct LevelPartition {
  int k_max = 0;
  std::map<int, std::vector<MultiIndex>> slices;
};

/// Works for arbitrary (also non-monotone) index lists; empty input throws.
LevelPartition level_partition(std::span<const MultiIndex> indices);
inline LevelPartition level_partition(const MonotoneIndexSet& set) {
  return level_partition(std::span<const MultiIndex>(set.members()));
}

/// Elements with no strictly larger element in `slice`, in BlockOrder.
std::vector<MultiIndex> maximal_elements(std::span<const MultiIndex> slice);

struct BoundsReport {
  BigInt n_lambda;
  BigInt n_tilde;
  BigInt n_tilde_prime;
  int k_lambda = 0;
  std::map<int, std::vector<MultiIndex>> maximal_sets;
};

/// n_Lambda = max_k |Lambda_k|,
/// n~_Lambda = sum_k sum_{beta in Lambda_{k,0}} 2^{|beta|_1 - |beta|_inf},
/// n~'_Lambda = max_beta 2^{|beta|_1 - |beta|_inf}; all exact.
BoundsReport bounds_quantities(std::span<const MultiIndex> indices);
inline BoundsReport bounds_quantities(const MonotoneIndexSet& set) {
  return bounds_quantities(std::span<const MultiIndex>(set.members()));
}

/// floor(((1-a)k + d - 1)/(d - a)): the largest r with V_r inside S_k^a.
int r0(int k, int d, const Rational& a);

struct GapExample {
  std::vector<MultiIndex> literal;  ///< the generating set, not monotone in general
  MonotoneIndexSet closure;
  BoundsReport literal_bounds;
  BoundsReport closure_bounds;
};

/// Closure of {(2k, beta') : |beta'|_1 < k + d - 1}, the set exhibiting the
/// largest gap between n~ and n~'.
GapExample gap_example(int k, int d);

/// Reads one multi-index per line ('#' comments, blank lines skipped). A
/// non-monotone set is closed and a warning goes to `diagnostics`.
MonotoneIndexSet read_index_file(std::istream& in, std::ostream& diagnostics);

}  // namespace sghb
