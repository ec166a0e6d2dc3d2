#include "sghb/extremal.hpp"

#include <cmath>
#include <set>

#include "sghb/errors.hpp"

namespace sghb {

std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::psi_beta: return "psi_beta";
    case WitnessKind::sbar: return "sbar";
    case WitnessKind::sbar_slice: return "sbar_slice";
  }
  return "";
}

std::string_view to_string(BoundDirection b) {
  return b == BoundDirection::lower_on_lambda_max ? "lower_on_lambda_max" : "upper_on_lambda_min";
}

namespace {

// Univariate HB expansion of the hat of half-width 2^-m centred at 1/2:
// phi_1 - 1/2 sum_{l=2}^m (left and right neighbours of 1/2 on level l).
std::vector<std::pair<Hat1D, double>> psi_1d(int m) {
  std::vector<std::pair<Hat1D, double>> terms{{Hat1D{1, 0}, 1.0}};
  for (int l = 2; l <= m; ++l) {
    const std::int64_t half = std::int64_t{1} << (l - 2);
    terms.push_back({Hat1D{l, half - 1}, -0.5});
    terms.push_back({Hat1D{l, half}, -0.5});
  }
  return terms;
}

}  // namespace

HBVector psi_hb_coeffs(const MultiIndex& beta) {
  auto space = make_space(make_full_grid(beta));
  HBVector c(space);
  const int d = beta.dim();
  for (const auto& block : space->index_set()) {
    int r = 0;
    for (int i = 0; i < d; ++i) r += block[i] > 1;
    const double value = std::pow(-0.5, r);
    // 2^r functions: offsets {2^(m-2)-1, 2^(m-2)} where the level m > 1, else 0.
    for (int mask = 0; mask < (1 << d); ++mask) {
      std::vector<std::int64_t> offsets(static_cast<std::size_t>(d));
      bool valid = true;
      for (int i = 0; i < d; ++i) {
        const bool right = (mask >> i) & 1;
        if (block[i] == 1) {
          if (right) valid = false;
          continue;
        }
        const std::int64_t half = std::int64_t{1} << (block[i] - 2);
        offsets[static_cast<std::size_t>(i)] = right ? half : half - 1;
      }
      if (!valid) continue;
      c.values[static_cast<std::size_t>(space->index_of(block, offsets))] = value;
    }
  }
  return c;
}

PsiNormReport psi_norm_report(const MultiIndex& beta) {
  const int d = beta.dim();
  PsiNormReport rep;
  rep.beta = beta;
  // Separable norms: psi_beta is a tensor product of univariate expansions.
  std::vector<double> m1(static_cast<std::size_t>(d)), k1(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto terms = psi_1d(beta[i]);
    double m = 0.0, k = 0.0;
    for (const auto& [a, ca] : terms) {
      for (const auto& [b, cb] : terms) {
        m += ca * cb * mass_1d(a, b);
        k += ca * cb * stiffness_1d(a, b);
      }
    }
    m1[static_cast<std::size_t>(i)] = m;
    k1[static_cast<std::size_t>(i)] = k;
  }
  double l2 = 1.0;
  for (double m : m1) l2 *= m;
  double h1 = 0.0;
  for (int i = 0; i < d; ++i) {
    double term = k1[static_cast<std::size_t>(i)];
    for (int j = 0; j < d; ++j) {
      if (j != i) term *= m1[static_cast<std::size_t>(j)];
    }
    h1 += term;
  }
  double hb = 0.0;
  double block_sum = 0.0;
  for (const auto& block : make_full_grid(beta)) {
    int r = 0;
    for (int i = 0; i < d; ++i) r += block[i] > 1;
    // ||s_beta'||^2 = (2/3)^d 2^-|beta'|_1 2^r 4^-r
    hb += std::ldexp(1.0, 2 * block.linf()) * l2_norm_sq(block) * std::ldexp(1.0, -r);
    block_sum += std::ldexp(1.0, 2 * block.linf() - block.l1());
  }
  rep.witness.kind = WitnessKind::psi_beta;
  rep.witness.bound_direction = BoundDirection::upper_on_lambda_min;
  rep.witness.hb_sq = hb;
  rep.witness.h1_sq = h1;
  rep.witness.l2_sq = l2;
  rep.witness.rayleigh = h1 / hb;
  rep.block_sum_bound = block_sum / std::pow(3.0, d);
  rep.explicit_bound = std::ldexp(1.0, beta.linf() + 1 - d) / std::pow(3.0, d);
  rep.block_sum_bound_holds = hb >= rep.block_sum_bound * (1.0 - 1e-14);
  rep.explicit_bound_holds = hb >= rep.explicit_bound * (1.0 - 1e-14);
  rep.growth_constant = hb / std::ldexp(1.0, beta.linf());
  return rep;
}

HBVector sbar_coeffs(const SpacePtr& space, std::span<const MultiIndex> blocks) {
  HBVector c(space);
  for (const auto& beta : blocks) {
    const auto b = space->index_set().find(beta);
    if (b < 0) throw ConfigError("block " + to_string(beta) + " is not part of the space");
    const auto ub = static_cast<std::size_t>(b);
    std::fill_n(c.values.begin() + static_cast<std::ptrdiff_t>(space->block_start(ub)), space->block_size(ub), 1.0);
  }
  return c;
}

HBVector sbar_coeffs(std::span<const MultiIndex> blocks) {
  return sbar_coeffs(make_space(monotone_closure(blocks)), blocks);
}

SbarReport sbar_report(std::span<const MultiIndex> blocks, const AssemblyOptions& opts) {
  if (blocks.empty()) throw ConfigError("s-bar over an empty index list");
  const auto c = sbar_coeffs(blocks);
  const auto sys = assemble_system(c.space, opts);
  const auto n = norms(c, sys);
  const int d = blocks.front().dim();
  SbarReport rep;
  rep.witness.kind = WitnessKind::sbar;
  rep.witness.bound_direction = BoundDirection::lower_on_lambda_max;
  rep.witness.hb_sq = n.hb_sq;
  rep.witness.h1_sq = n.h1_sq;
  rep.witness.l2_sq = n.l2_sq;
  rep.witness.rayleigh = n.h1_sq / n.hb_sq;
  std::set<MultiIndex> unique(blocks.begin(), blocks.end());
  double s = 0.0;
  for (const auto& beta : unique) s += std::ldexp(1.0, 2 * beta.linf());
  rep.hb_closed_form = s / std::pow(3.0, d);
  const auto card = static_cast<double>(unique.size());
  rep.l2_lower_bound = card * card / std::pow(4.0, d);
  return rep;
}

UpperWitness witness_upper(const MonotoneIndexSet& set, const AssemblyOptions& opts) {
  if (set.empty()) throw ConfigError("witness over an empty index set");
  const auto part = level_partition(set);
  const int d = set.dim();
  UpperWitness w;
  std::size_t largest = 0;
  for (const auto& [k, slice] : part.slices) {
    if (slice.size() > largest) {
      largest = slice.size();
      w.level = k;
    }
  }
  w.n_lambda = BigInt(largest);
  const auto& slice = part.slices.at(w.level);
  std::size_t best = 0;
  for (int i = 0; i < d; ++i) {
    std::vector<MultiIndex> sub;
    for (const auto& beta : slice) {
      if (beta[i] == w.level) sub.push_back(beta);
    }
    if (sub.size() > best) {
      best = sub.size();
      w.direction = i;
      w.slice = std::move(sub);
    }
  }
  const auto rep = sbar_report(w.slice, opts);
  w.witness = rep.witness;
  w.witness.kind = WitnessKind::sbar_slice;
  w.explicit_bound = std::pow(3.0, d) / (d * std::pow(4.0, d)) * static_cast<double>(largest);
  w.explicit_bound_holds = w.witness.rayleigh >= w.explicit_bound;
  return w;
}

LowerWitness witness_lower(const MonotoneIndexSet& set, bool scan_all) {
  if (set.empty()) throw ConfigError("witness over an empty index set");
  std::vector<MultiIndex> candidates;
  if (scan_all) {
    candidates = set.members();
  } else {
    for (const auto& [k, slice] : level_partition(set).slices) {
      auto maximal = maximal_elements(slice);
      candidates.insert(candidates.end(), maximal.begin(), maximal.end());
    }
  }
  LowerWitness w;
  w.candidates = candidates.size();
  bool first = true;
  for (const auto& beta : candidates) {
    const auto rep = psi_norm_report(beta);
    if (first || rep.witness.rayleigh < w.witness.rayleigh) {
      w.witness = rep.witness;
      w.beta = beta;
      first = false;
    }
  }
  w.hb_over_h1 = w.witness.hb_sq / w.witness.h1_sq;
  w.n_tilde_prime = bounds_quantities(set).n_tilde_prime;
  w.measured_constant = w.hb_over_h1 / w.n_tilde_prime.convert_to<double>();
  return w;
}

}  // namespace sghb
