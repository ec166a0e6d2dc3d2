#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sghb/assembly.hpp"
#include "sghb/index_sets.hpp"
#include "sghb/transform.hpp"

namespace sghb {

enum class WitnessKind { psi_beta, sbar, sbar_slice };
enum class BoundDirection { lower_on_lambda_max, upper_on_lambda_min };
std::string_view to_string(WitnessKind k);
std::string_view to_string(BoundDirection b);

/// Norms of an explicit test function. Its Rayleigh quotient h1/hb lies in
/// [lambda_min, lambda_max] of every space that contains it.
struct WitnessReport {
  WitnessKind kind = WitnessKind::psi_beta;
  double hb_sq = 0.0;
  double h1_sq = 0.0;
  double l2_sq = 0.0;
  double rayleigh = 0.0;
  BoundDirection bound_direction = BoundDirection::lower_on_lambda_max;
};

/// HB coefficients of the tensor hat psi_beta centred at (1/2,...,1/2) with
/// half-widths 2^-beta_i, on the full-grid space over closure{beta}. A block
/// beta' <= beta with r levels above 1 holds 2^r coefficients (-1/2)^r.
HBVector psi_hb_coeffs(const MultiIndex& beta);

struct PsiNormReport {
  MultiIndex beta;
  WitnessReport witness;
  /// 3^-d sum_{beta' <= beta} 2^(2|beta'|_inf - |beta'|_1), a lower bound for hb_sq.
  double block_sum_bound = 0.0;
  /// 2^|beta|_inf 3^-d 2^(1-d), the explicit-constant form of the same bound.
  double explicit_bound = 0.0;
  bool block_sum_bound_holds = false;
  bool explicit_bound_holds = false;
  /// hb_sq / 2^|beta|_inf.
  double growth_constant = 0.0;
};

/// Exact norms of psi_beta: hb_sq blockwise in closed form, h1_sq and l2_sq
/// from the separable 1D hierarchical mass/stiffness integrals.
PsiNormReport psi_norm_report(const MultiIndex& beta);

/// All-ones coefficients on every listed block (the lacunary sum s-bar), on
/// the space over the monotone closure of `blocks`.
HBVector sbar_coeffs(std::span<const MultiIndex> blocks);
/// Same, embedded in an existing space that contains every listed block.
HBVector sbar_coeffs(const SpacePtr& space, std::span<const MultiIndex> blocks);

struct SbarReport {
  WitnessReport witness;
  /// 3^-d sum_beta 2^(2|beta|_inf): the exact HB norm of s-bar.
  double hb_closed_form = 0.0;
  /// 4^-d |Lambda|^2: a lower bound for the L2 norm.
  double l2_lower_bound = 0.0;
};

SbarReport sbar_report(std::span<const MultiIndex> blocks, const AssemblyOptions& opts = {});

/// s-bar over the largest slice {beta in Lambda_k : beta_i = k} of a largest
/// level slice Lambda_k; certifies lambda_max >= rayleigh.
struct UpperWitness {
  WitnessReport witness;
  int level = 0;      ///< k with |Lambda_k| = n_Lambda (smallest such k)
  int direction = 0;  ///< i, 0-based (smallest on ties)
  std::vector<MultiIndex> slice;
  BigInt n_lambda;
  /// 3^d / (d 4^d) n_Lambda
  double explicit_bound = 0.0;
  bool explicit_bound_holds = false;
};

UpperWitness witness_upper(const MonotoneIndexSet& set, const AssemblyOptions& opts = {});

/// Minimum Rayleigh quotient of psi_beta over candidate beta; certifies
/// lambda_min <= rayleigh.
struct LowerWitness {
  WitnessReport witness;
  MultiIndex beta;
  double hb_over_h1 = 0.0;
  BigInt n_tilde_prime;
  /// hb_over_h1 / n~'_Lambda
  double measured_constant = 0.0;
  std::size_t candidates = 0;
};

/// Scans the maximal elements of each level slice, or all of Lambda when
/// `scan_all` is set.
LowerWitness witness_lower(const MonotoneIndexSet& set, bool scan_all = false);

}  // namespace sghb
