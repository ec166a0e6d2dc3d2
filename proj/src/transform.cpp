#include "sghb/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sghb/errors.hpp"
#include "sghb/kernels.hpp"

namespace sghb {

namespace {

void check_length(const SpacePtr& s, std::size_t n) {
  if (!s) throw ConfigError("vector without a space");
  if (n != s->dim()) {
    throw ConfigError("vector length " + std::to_string(n) + " does not match space dimension " +
                      std::to_string(s->dim()));
  }
}

}  // namespace

HBVector::HBVector(SpacePtr s) : space(std::move(s)) {
  check_length(space, space ? space->dim() : 0);
  values.assign(space->dim(), 0.0);
}

HBVector::HBVector(SpacePtr s, std::vector<double> v) : space(std::move(s)), values(std::move(v)) {
  check_length(space, values.size());
}

NodalVector::NodalVector(SpacePtr s) : space(std::move(s)) {
  check_length(space, space ? space->dim() : 0);
  values.assign(space->dim(), 0.0);
}

NodalVector::NodalVector(SpacePtr s, std::vector<double> v) : space(std::move(s)), values(std::move(v)) {
  check_length(space, values.size());
}

HBVector hierarchize(const NodalVector& v) {
  std::vector<int> order(static_cast<std::size_t>(v.space->d()));
  std::iota(order.begin(), order.end(), 0);
  return hierarchize(v, order);
}

HBVector hierarchize(const NodalVector& v, std::span<const int> dim_order) {
  const auto& space = *v.space;
  const std::size_t n = space.dim();
  // One trailing zero slot stands in for boundary parents.
  std::vector<double> cur(n + 1, 0.0);
  std::vector<double> next(n + 1, 0.0);
  std::copy(v.values.begin(), v.values.end(), cur.begin());
  const auto& k = kernels::active();
  for (int j : dim_order) {
    if (j < 0 || j >= space.d()) throw ConfigError("invalid sweep dimension " + std::to_string(j));
    const auto& par = space.parents(j);
    k.stencil(cur.data(), par.left.data(), par.right.data(), next.data(), n, -1.0);
    std::swap(cur, next);
  }
  cur.resize(n);
  return HBVector(v.space, std::move(cur));
}

NodalVector dehierarchize(const HBVector& c) {
  const auto& space = *c.space;
  const std::size_t n = space.dim();
  std::vector<double> buf(n + 1, 0.0);
  std::copy(c.values.begin(), c.values.end(), buf.begin());
  const auto& k = kernels::active();
  for (int j = space.d() - 1; j >= 0; --j) {
    const auto& par = space.parents(j);
    // Coarse levels first: parents along j are final before their children.
    for (std::size_t g = 0; g + 1 < par.group_start.size(); ++g) {
      const auto b = par.group_start[g];
      k.stencil_indexed(par.order.data() + b, par.group_start[g + 1] - b, buf.data(), par.left.data(),
                        par.right.data(), buf.data(), +1.0);
    }
  }
  buf.resize(n);
  return NodalVector(c.space, std::move(buf));
}

double evaluate_function(const HBVector& c, std::span<const double> x) {
  const auto& space = *c.space;
  const int d = space.d();
  if (static_cast<int>(x.size()) != d) throw ConfigError("evaluation point has wrong dimension");
  double total = 0.0;
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(d));
  for (std::size_t b = 0; b < space.num_blocks(); ++b) {
    const auto& beta = space.block(b);
    // Only one function per block can be nonzero at x; at a support boundary
    // both candidates vanish, so either choice gives the right value.
    double v = 1.0;
    std::size_t local = 0;
    for (int j = 0; j < d; ++j) {
      const std::int64_t count = std::int64_t{1} << (beta[j] - 1);
      auto o = static_cast<std::int64_t>(std::floor(std::ldexp(x[static_cast<std::size_t>(j)], beta[j] - 1)));
      o = std::clamp<std::int64_t>(o, 0, count - 1);
      v *= evaluate(Hat1D{beta[j], o}, x[static_cast<std::size_t>(j)]);
      local = local * static_cast<std::size_t>(count) + static_cast<std::size_t>(o);
    }
    if (v != 0.0) total += c.values[space.block_start(b) + local] * v;
  }
  return total;
}

NodalVector sample(const SpacePtr& space, const std::function<double(std::span<const double>)>& f) {
  NodalVector v(space);
  for (std::size_t g = 0; g < space->dim(); ++g) {
    const auto x = space->function(g).node().values();
    v.values[g] = f(x);
  }
  return v;
}

HBVector interpolate(const HBVector& c, const MultiIndex& target) {
  if (target.dim() != c.space->d()) throw ConfigError("interpolation target has wrong dimension");
  auto full = make_space(make_full_grid(target));
  return hierarchize(sample(full, [&](std::span<const double> x) { return evaluate_function(c, x); }));
}

}  // namespace sghb
