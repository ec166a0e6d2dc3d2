#include "sghb/space.hpp"

#include <algorithm>
#include <limits>

#include "sghb/errors.hpp"

namespace sghb {

SparseGridSpace::SparseGridSpace(MonotoneIndexSet set) : set_(std::move(set)) {
  if (set_.empty()) throw ConfigError("sparse grid space over an empty index set");
  block_start_.reserve(set_.size() + 1);
  block_start_.push_back(0);
  for (const auto& beta : set_) {
    if (beta.l1() - beta.dim() > 40) throw ConfigError("block " + to_string(beta) + " is too large");
    block_start_.push_back(block_start_.back() + sghb::block_size(beta));
  }
  dim_ = block_start_.back();
  if (dim_ >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw ConfigError("sparse grid space too large");
  }
  block_id_.resize(dim_);
  for (std::size_t b = 0; b < set_.size(); ++b) {
    std::fill(block_id_.begin() + static_cast<std::ptrdiff_t>(block_start_[b]),
              block_id_.begin() + static_cast<std::ptrdiff_t>(block_start_[b + 1]), static_cast<std::int32_t>(b));
  }
  build_parents();
}

std::vector<std::int64_t> SparseGridSpace::offsets_of(std::size_t global) const {
  const auto& beta = block(block_of(global));
  std::size_t local = global - block_start_[block_of(global)];
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(d()));
  for (int j = d() - 1; j >= 0; --j) {
    const std::size_t n = std::size_t{1} << (beta[j] - 1);
    offsets[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(local % n);
    local /= n;
  }
  return offsets;
}

BasisFunction SparseGridSpace::function(std::size_t global) const {
  return {block(block_of(global)), offsets_of(global)};
}

std::ptrdiff_t SparseGridSpace::index_of(const MultiIndex& beta, const std::vector<std::int64_t>& offsets) const {
  const auto b = set_.find(beta);
  if (b < 0 || offsets.size() != static_cast<std::size_t>(d())) return -1;
  std::size_t local = 0;
  for (int j = 0; j < d(); ++j) {
    const auto n = std::int64_t{1} << (beta[j] - 1);
    const auto o = offsets[static_cast<std::size_t>(j)];
    if (o < 0 || o >= n) return -1;
    local = local * static_cast<std::size_t>(n) + static_cast<std::size_t>(o);
  }
  return static_cast<std::ptrdiff_t>(block_start_[static_cast<std::size_t>(b)] + local);
}

std::ptrdiff_t SparseGridSpace::index_of_node(const NodalPoint& p) const {
  if (p.coords.size() != static_cast<std::size_t>(d())) return -1;
  std::vector<int> levels;
  std::vector<std::int64_t> offsets;
  for (const auto& c : p.coords) {
    const auto r = c.reduced();
    if (r.numerator <= 0 || r.level < 1 || r.numerator >= (std::int64_t{1} << r.level)) return -1;
    levels.push_back(r.level);
    offsets.push_back((r.numerator - 1) / 2);
  }
  return index_of(MultiIndex(std::move(levels)), offsets);
}

void SparseGridSpace::build_parents() {
  const auto n = static_cast<std::int32_t>(dim_);
  parents_.resize(static_cast<std::size_t>(d()));
  for (int j = 0; j < d(); ++j) {
    auto& par = parents_[static_cast<std::size_t>(j)];
    par.left.assign(dim_, n);
    par.right.assign(dim_, n);
    for (std::size_t g = 0; g < dim_; ++g) {
      const auto& beta = block(block_of(g));
      auto offsets = offsets_of(g);
      const int level = beta[j];
      const std::int64_t node = 2 * offsets[static_cast<std::size_t>(j)] + 1;
      auto lookup = [&](std::int64_t numerator) -> std::int32_t {
        const auto r = DyadicCoord{numerator, level}.reduced();
        if (r.numerator == 0 || r.numerator == (std::int64_t{1} << r.level)) return n;
        auto o = offsets;
        o[static_cast<std::size_t>(j)] = (r.numerator - 1) / 2;
        const auto idx = index_of(beta.with(j, r.level), o);
        if (idx < 0) throw ConfigError("hierarchical parent missing: index set is not monotone");
        return static_cast<std::int32_t>(idx);
      };
      if (level > 1) {
        par.left[g] = lookup(node - 1);
        par.right[g] = lookup(node + 1);
      }
    }
    const int max_level = set_.max_level();
    std::vector<std::vector<std::int32_t>> by_level(static_cast<std::size_t>(max_level) + 1);
    for (std::size_t g = 0; g < dim_; ++g) by_level[static_cast<std::size_t>(block(block_of(g))[j])].push_back(static_cast<std::int32_t>(g));
    par.group_start.push_back(0);
    for (int l = 1; l <= max_level; ++l) {
      const auto& grp = by_level[static_cast<std::size_t>(l)];
      if (grp.empty()) continue;
      par.order.insert(par.order.end(), grp.begin(), grp.end());
      par.group_start.push_back(par.order.size());
    }
  }
}

SpacePtr make_space(MonotoneIndexSet set) { return std::make_shared<const SparseGridSpace>(std::move(set)); }

}  // namespace sghb
