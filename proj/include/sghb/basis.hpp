#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sghb/index_sets.hpp"

namespace sghb {

/// Exact dyadic number numerator * 2^-level.
struct DyadicCoord {
  std::int64_t numerator = 0;
  int level = 0;

  double value() const;
  /// Same number with an odd numerator (or 0/0 for zero).
  DyadicCoord reduced() const;
  friend bool operator==(const DyadicCoord& a, const DyadicCoord& b) {
    const auto ra = a.reduced();
    const auto rb = b.reduced();
    return ra.numerator == rb.numerator && ra.level == rb.level;
  }
};

struct NodalPoint {
  std::vector<DyadicCoord> coords;

  std::vector<double> values() const;
  friend bool operator==(const NodalPoint&, const NodalPoint&) = default;
};

/// Univariate hierarchical hat phi(2^level t - (2 offset + 1)).
struct Hat1D {
  int level = 1;
  std::int64_t offset = 0;
};

/// The unit hat (1 - |t|)_+.
inline double hat(double t) {
  const double a = t < 0 ? -t : t;
  return a < 1.0 ? 1.0 - a : 0.0;
}

double evaluate(const Hat1D& h, double t);

/// Tensor-product Faber-Schauder function of block `block`; offsets[j] lies in
/// [0, 2^(block[j]-1)).
struct BasisFunction {
  MultiIndex block;
  std::vector<std::int64_t> offsets;

  int dim() const { return block.dim(); }
  Hat1D factor(int j) const {
    return {block[j], offsets[static_cast<std::size_t>(j)]};
  }
  NodalPoint node() const;
  friend bool operator==(const BasisFunction&, const BasisFunction&) = default;
};

/// Number of functions in block beta, 2^(|beta|_1 - d).
std::size_t block_size(const MultiIndex& beta);

/// All functions of block beta, offsets in lexicographic order.
std::vector<BasisFunction> enumerate_block(const MultiIndex& beta);

double evaluate(const BasisFunction& f, std::span<const double> x);

/// Interior points of the tensor grid T_beta, lexicographic order.
std::vector<NodalPoint> nodal_points(const MultiIndex& beta);

// Closed-form norms; identical for every function of a block.
double l2_norm_sq(const MultiIndex& beta);
double h1_norm_sq(const MultiIndex& beta);
inline double l2_norm_sq(const BasisFunction& f) { return l2_norm_sq(f.block); }
inline double h1_norm_sq(const BasisFunction& f) { return h1_norm_sq(f.block); }

/// L2 norm squared of sum_alpha c_alpha phi_alpha over one block.
double block_l2_norm_sq(const MultiIndex& beta, std::span<const double> coeffs);

}  // namespace sghb
