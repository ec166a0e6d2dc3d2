#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sghb/space.hpp"

namespace sghb {

/// Hierarchical-basis coefficients (hierarchical surpluses) on a space.
struct HBVector {
  SpacePtr space;
  std::vector<double> values;

  HBVector() = default;
  explicit HBVector(SpacePtr s);  // zero vector
  HBVector(SpacePtr s, std::vector<double> v);
  std::size_t size() const { return values.size(); }
};

/// Function values at the sparse-grid points, indexed like HBVector.
struct NodalVector {
  SpacePtr space;
  std::vector<double> values;

  NodalVector() = default;
  explicit NodalVector(SpacePtr s);
  NodalVector(SpacePtr s, std::vector<double> v);
  std::size_t size() const { return values.size(); }
};

/// Nodal values -> HB coefficients via one univariate surplus sweep per
/// dimension. Exact on every monotone index set (the sweep in dimension j
/// only needs the parents along j, which downward closure guarantees).
HBVector hierarchize(const NodalVector& v);
/// Same, sweeping the dimensions in the given order.
HBVector hierarchize(const NodalVector& v, std::span<const int> dim_order);

NodalVector dehierarchize(const HBVector& c);

/// sum_alpha c_alpha phi_alpha(x).
double evaluate_function(const HBVector& c, std::span<const double> x);

/// d-linear interpolant of c on the full grid T_target, as HB coefficients on
/// the full-grid space over closure{target}.
HBVector interpolate(const HBVector& c, const MultiIndex& target);

/// Samples f at every sparse-grid point.
NodalVector sample(const SpacePtr& space, const std::function<double(std::span<const double>)>& f);

}  // namespace sghb
