#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "sghb/basis.hpp"
#include "sghb/index_sets.hpp"

namespace sghb {

/// The enumerated hierarchical basis of S_Lambda.
///
/// Functions are stored block-major: blocks in BlockOrder, offsets
/// lexicographic inside a block. Every function owns exactly one sparse-grid
/// point (its node), so nodal and hierarchical vectors share this indexing.
class SparseGridSpace {
 public:
  explicit SparseGridSpace(MonotoneIndexSet set);

  int d() const { return set_.dim(); }
  std::size_t dim() const { return dim_; }
  const MonotoneIndexSet& index_set() const { return set_; }
  std::size_t num_blocks() const { return set_.size(); }
  const MultiIndex& block(std::size_t b) const { return set_.members()[b]; }
  std::size_t block_start(std::size_t b) const { return block_start_[b]; }
  std::size_t block_size(std::size_t b) const { return block_start_[b + 1] - block_start_[b]; }

  /// Block id of a global function index.
  std::size_t block_of(std::size_t global) const { return static_cast<std::size_t>(block_id_[global]); }
  BasisFunction function(std::size_t global) const;
  std::vector<std::int64_t> offsets_of(std::size_t global) const;

  /// Global index of the function with given block and offsets, or -1.
  std::ptrdiff_t index_of(const MultiIndex& beta, const std::vector<std::int64_t>& offsets) const;
  /// Global index of the function whose node is p, or -1.
  std::ptrdiff_t index_of_node(const NodalPoint& p) const;

  /// Hierarchical parents along dimension j: the functions whose nodes are
  /// the left/right neighbours of each node at its own level spacing.
  /// Boundary neighbours map to dim() (a zero sentinel slot).
  struct Parents {
    std::vector<std::int32_t> left;
    std::vector<std::int32_t> right;
    /// Indices grouped by level along j, ascending; group g is
    /// order[group_start[g] .. group_start[g+1]).
    std::vector<std::int32_t> order;
    std::vector<std::size_t> group_start;
  };
  const Parents& parents(int j) const { return parents_[static_cast<std::size_t>(j)]; }

 private:
  void build_parents();

  MonotoneIndexSet set_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> block_start_;
  std::vector<std::int32_t> block_id_;
  std::vector<Parents> parents_;
};

using SpacePtr = std::shared_ptr<const SparseGridSpace>;

SpacePtr make_space(MonotoneIndexSet set);

}  // namespace sghb
