#include "sghb/solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "sghb/kernels.hpp"

namespace sghb {

SolveResult pcg(const GalerkinSystem& system, std::span<const double> b, double tol, int max_iterations) {
  const std::size_t n = system.dim();
  if (b.size() != n) throw ConfigError("pcg: right-hand side has wrong length");
  const auto& k = kernels::active();
  SolveResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  std::vector<double> inv_d(n);
  for (std::size_t i = 0; i < n; ++i) inv_d[i] = 1.0 / system.scaling[i];

  k.hadamard(inv_d.data(), r.data(), z.data(), n);
  double rz = k.dot(r.data(), z.data(), n);
  if (rz == 0.0) {
    res.stats.converged = true;
    return res;
  }
  const double rz0 = rz;
  res.stats.residual_history.push_back(1.0);
  p = z;
  int it = 0;
  double rel = 1.0;
  while (rel > tol) {
    if (it >= max_iterations) {
      res.stats.iterations = it;
      res.stats.final_relative_residual = rel;
      throw SolveError("pcg: no convergence after " + std::to_string(it) + " iterations", res.stats);
    }
    system.stiffness.apply(p, q);
    const double pq = k.dot(p.data(), q.data(), n);
    if (!(pq > 0.0)) throw SolveError("pcg: operator is not positive definite", res.stats);
    const double alpha = rz / pq;
    k.axpy(alpha, p.data(), res.x.data(), n);
    k.axpy(-alpha, q.data(), r.data(), n);
    k.hadamard(inv_d.data(), r.data(), z.data(), n);
    const double rz_new = k.dot(r.data(), z.data(), n);
    ++it;
    rel = std::sqrt(std::max(rz_new, 0.0) / rz0);
    res.stats.residual_history.push_back(rel);
    if (rel <= tol) break;
    k.xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
  }
  res.stats.iterations = it;
  res.stats.final_relative_residual = rel;
  res.stats.converged = true;
  return res;
}

std::string_view to_string(ModelRhs f) {
  return f == ModelRhs::constant_one ? "constant_one" : "product_sine";
}

ModelRhs parse_model_rhs(std::string_view text) {
  if (text == "constant_one") return ModelRhs::constant_one;
  if (text == "product_sine") return ModelRhs::product_sine;
  throw ConfigError("unknown right-hand side '" + std::string(text) + "' (expected constant_one or product_sine)");
}

namespace {

// integral of sin(pi t) phi_{l,i}(t): 6-point Gauss on each of the two cells.
double sine_hat_integral(const Hat1D& h) {
  using Gauss = boost::math::quadrature::gauss<double, 6>;
  const double width = std::ldexp(1.0, -h.level);
  const double left = 2.0 * static_cast<double>(h.offset) * width;
  double s = 0.0;
  for (int cell = 0; cell < 2; ++cell) {
    const double a = left + cell * width;
    s += Gauss::integrate([&](double t) { return std::sin(std::numbers::pi * t) * evaluate(h, t); }, a, a + width);
  }
  return s;
}

}  // namespace

std::vector<double> model_rhs(const SparseGridSpace& space, ModelRhs f) {
  std::vector<double> b(space.dim());
  for (std::size_t g = 0; g < space.dim(); ++g) {
    const auto fn = space.function(g);
    if (f == ModelRhs::constant_one) {
      b[g] = std::ldexp(1.0, -fn.block.l1());
      continue;
    }
    double v = 1.0;
    for (int j = 0; j < space.d(); ++j) v *= sine_hat_integral(fn.factor(j));
    b[g] = v;
  }
  return b;
}

}  // namespace sghb
